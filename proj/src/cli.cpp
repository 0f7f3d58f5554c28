#include "lolab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lolab/acceptance.hpp"
#include "lolab/anticoncentration.hpp"
#include "lolab/config.hpp"
#include "lolab/containers.hpp"
#include "lolab/errors.hpp"
#include "lolab/fibres.hpp"
#include "lolab/matrix_lab.hpp"
#include "lolab/parallel.hpp"
#include "lolab/vector_io.hpp"

namespace lolab {

namespace {

struct Options {
  std::uint64_t seed = 42;
  std::string profile = "desk";
  std::string out;
  std::string format;
  unsigned workers = 1;
  std::optional<std::uint64_t> trials;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> p;
  std::string beta;
  std::string vectors;
  std::string traceOut;
  bool exact = false;
  bool mc = false;
  std::vector<int> criteria;
};

// Output of one subcommand: the record plus a CSV rendering of its rows.
struct Result {
  Json record;
  std::string csv;
  std::string plain;  // used when no --format is given and the command has a bare answer
  bool pass = true;
  std::vector<std::string> failures;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--profile", o.profile, "paper | desk | file:<path>");
  sub->add_option("--out", o.out, "write the artifact here instead of stdout");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1U, 256U));
  sub->add_option("--trials", o.trials, "trial or instance count");
  sub->add_option("--n", o.n, "dimension");
  sub->add_option("--p", o.p, "prime modulus");
  sub->add_option("--beta", o.beta, "rational threshold");
  sub->add_option("--vectors", o.vectors, "vector file (p=<prime>; r1 r2 ...)");
}

Json base_config(const std::string& command, const Options& o, const ConstantsProfile& profile) {
  Json c;
  c["command"] = command;
  c["seed"] = json_int(o.seed);
  c["profile"] = profile_to_json(profile);
  if (o.trials) c["trials"] = json_int(*o.trials);
  if (o.n) c["n"] = json_int(static_cast<std::uint64_t>(*o.n));
  if (o.p) c["p"] = json_int(*o.p);
  if (!o.beta.empty()) c["beta"] = json_rational(parse_rational(o.beta));
  if (!o.vectors.empty()) c["vectors"] = o.vectors;
  return c;
}

std::string digest_input(const std::vector<ZpVector>& vs) {
  std::string s;
  for (const auto& v : vs) s += format_vector(v) + "\n";
  return s;
}

// Vectors from --vectors, otherwise `count` generated ones.
std::vector<ZpVector> input_vectors(const Options& o, std::size_t default_n, std::uint64_t default_p,
                                    std::uint64_t default_count, bool structured, const Stream& rng) {
  if (!o.vectors.empty()) return load_vectors(o.vectors);
  const PrimeModulus p(o.p.value_or(default_p));
  const std::size_t n = o.n.value_or(default_n);
  const std::uint64_t count = o.trials.value_or(default_count);
  std::vector<ZpVector> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    Stream r = rng.child("input").child(i);
    if (structured) {
      GapSpec g{r.below(p.value()), {1 + r.below(p.value() - 1)}, {8}};
      out.push_back(gen_gap_vector(g, n, p, r));
    } else {
      std::vector<Residue> e(n);
      for (auto& x : e) x = 1 + r.below(p.value() - 1);
      out.emplace_back(p, std::move(e));
    }
  }
  return out;
}

std::string rational_text(const Rational& r) { return json_rational(r).get<std::string>(); }

Result cmd_rho(const Options& o, const ConstantsProfile& profile) {
  const auto vs = input_vectors(o, 12, 101, 10, false, Stream(o.seed).child("rho"));
  Result res;
  Json rows = Json::array();
  Json checks = Json::object();
  std::ostringstream csv;
  csv << "index,p,n,support,atom,rho,rho_half\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const RhoResult r = rho(vs[i]);
    const RhoResult h = rho_half(vs[i]);
    const bool ok = rho_le(h, r) && r.value() * vs[i].modulus().value() >= 1;
    checks[std::to_string(i)] = ok;
    if (!ok) res.failures.push_back("vector " + std::to_string(i));
    rows.push_back({{"index", json_int(i)}, {"rho", to_json(r)}, {"rhoHalf", to_json(h)}});
    csv << i << ',' << vs[i].modulus().value() << ',' << vs[i].size() << ',' << vs[i].support() << ','
        << r.atom << ',' << rational_text(r.value()) << ',' << rational_text(h.value()) << '\n';
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  res.record = make_record("rho", base_config("rho", o, profile), digest_input(vs), rows, checks, res.pass);
  return res;
}

Result cmd_halasz(const Options& o, const ConstantsProfile& profile) {
  const auto vs = input_vectors(o, 128, 101, 10, false, Stream(o.seed).child("halasz"));
  constexpr double kTol = 1e-12;
  Result res;
  Json rows = Json::array();
  Json checks = Json::object();
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,ell,rho,first,second,intermediate,final,ok\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const ZpVector& v = vs[i];
    if (v.support() < 64) throw PreconditionViolated("vector " + std::to_string(i) + " has support below 64");
    const double r = rho(v).to_double();
    const double first = halasz_first_bound(v);
    bool all = r <= first + kTol;
    for (std::size_t ell = 1; 64 * ell <= v.support(); ++ell) {
      const Rational l(static_cast<unsigned long>(ell));
      const double second = halasz_second_bound(v, l);
      const double mid = halasz_intermediate_bound(v, l);
      const double fin = halasz_bound(v, l);
      const bool ok = r <= first + kTol && first <= second + kTol && second <= mid + kTol && mid <= fin + kTol;
      all = all && ok;
      rows.push_back({{"index", json_int(i)}, {"ell", json_int(ell)}, {"rho", r}, {"first", first},
                      {"second", second}, {"intermediate", mid}, {"final", fin}, {"ok", ok}});
      csv << i << ',' << ell << ',' << r << ',' << first << ',' << second << ',' << mid << ',' << fin << ','
          << (ok ? 1 : 0) << '\n';
    }
    checks[std::to_string(i)] = all;
    if (!all) res.failures.push_back("vector " + std::to_string(i));
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  res.record = make_record("halasz", base_config("halasz", o, profile), digest_input(vs), rows, checks, res.pass);
  return res;
}

Result cmd_container(const Options& o, const ConstantsProfile& profile) {
  const Stream root = Stream(o.seed).child("container");
  const auto vs = input_vectors(o, 512, 101, 10, true, root);
  struct Out {
    std::optional<ContainerCertificate> cert;
    std::string error;
    bool verified = false;
    std::vector<std::string> failed;
  };
  const auto outs = map_indexed<Out>(vs.size(), o.workers, [&](std::size_t i) {
    Out out;
    Stream rng = root.child("build").child(static_cast<std::uint64_t>(i));
    try {
      out.cert = build_container(vs[i], profile, rng);
      const CheckReport rep = verify_certificate(vs[i], *out.cert, profile);
      out.verified = rep.ok();
      out.failed = rep.failures();
    } catch (const RetryExhausted& e) {
      out.error = e.what();
    }
    return out;
  });
  Result res;
  Json rows = Json::array();
  Json checks = Json::object();
  std::ostringstream csv;
  csv << "index,p,n,built,rounds,sizeB,outsideCount,verified\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Out& out = outs[i];
    Json row{{"index", json_int(i)}, {"verified", out.verified}};
    if (out.cert) {
      row["certificate"] = to_json(*out.cert);
    } else {
      row["error"] = out.error;
    }
    rows.push_back(row);
    checks[std::to_string(i)] = out.verified;
    if (!out.verified) {
      std::string why = out.cert ? "failed checks:" : out.error;
      for (const auto& f : out.failed) why += " " + f;
      res.failures.push_back("vector " + std::to_string(i) + ": " + why);
    }
    csv << i << ',' << vs[i].modulus().value() << ',' << vs[i].size() << ',' << (out.cert ? 1 : 0) << ','
        << (out.cert ? out.cert->rounds : 0) << ',' << (out.cert ? out.cert->sizeB : 0) << ','
        << (out.cert ? out.cert->outsideCount : 0) << ',' << (out.verified ? 1 : 0) << '\n';
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  res.record =
      make_record("container", base_config("container", o, profile), digest_input(vs), rows, checks, res.pass);
  return res;
}

Result cmd_fibre(const Options& o, const ConstantsProfile& profile) {
  const Stream root = Stream(o.seed).child("fibre");
  const auto vs = input_vectors(o, 1024, 101, 10, true, root);
  struct Out {
    std::optional<FibreTrace> trace;
    std::string error;
    bool audited = false;
    std::vector<std::string> failed;
  };
  const auto outs = map_indexed<Out>(vs.size(), o.workers, [&](std::size_t i) {
    Out out;
    Stream rng = root.child("run").child(static_cast<std::uint64_t>(i));
    try {
      out.trace = run_fibre(vs[i], profile, rng);
      const CheckReport rep = audit_trace(vs[i], *out.trace, profile);
      out.audited = rep.ok();
      out.failed = rep.failures();
    } catch (const RetryExhausted& e) {
      out.error = e.what();
    }
    return out;
  });
  Result res;
  Json rows = Json::array();
  Json traces = Json::array();
  Json checks = Json::object();
  std::ostringstream csv;
  csv << "index,p,n,kStar,terminalSupport,audited\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Out& out = outs[i];
    Json row{{"index", json_int(i)}, {"audited", out.audited}};
    if (out.trace) {
      row["kStar"] = json_int(static_cast<std::uint64_t>(out.trace->kStar));
      row["key"] = fibre_key(*out.trace);
      traces.push_back(to_json(*out.trace));
    } else {
      row["error"] = out.error;
      traces.push_back(nullptr);
    }
    rows.push_back(row);
    checks[std::to_string(i)] = out.audited;
    if (!out.audited) {
      std::string why = out.trace ? "failed checks:" : out.error;
      for (const auto& f : out.failed) why += " " + f;
      res.failures.push_back("vector " + std::to_string(i) + ": " + why);
    }
    csv << i << ',' << vs[i].modulus().value() << ',' << vs[i].size() << ','
        << (out.trace ? out.trace->kStar : 0) << ',' << (out.trace ? out.trace->terminalSupport : 0) << ','
        << (out.audited ? 1 : 0) << '\n';
  }
  if (!o.traceOut.empty()) {
    std::ofstream f(o.traceOut, std::ios::binary);
    if (!f) throw PreconditionViolated("cannot write " + o.traceOut);
    f << canonical_dump(traces);
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  res.record = make_record("fibre", base_config("fibre", o, profile), digest_input(vs), rows, checks, res.pass);
  return res;
}

Result cmd_singularity(const Options& o, const ConstantsProfile& profile) {
  if (o.exact == o.mc) throw CLI::ValidationError("singularity", "give exactly one of --exact or --mc");
  if (!o.n) throw CLI::ValidationError("singularity", "--n is required");
  const std::size_t n = *o.n;
  Result res;
  Json out;
  Json checks = Json::object();
  std::ostringstream csv;
  if (o.exact) {
    const Rational q = singularity_exact(n);
    out["n"] = json_int(static_cast<std::uint64_t>(n));
    out["probability"] = json_rational(q);
    csv << "n,probability\n" << n << ',' << rational_text(q) << '\n';
    res.plain = rational_text(q) + "\n";
    if (!o.beta.empty()) {
      const PrimeModulus p(o.p.value_or(5));
      const QResult qr = q_exact(n, p, parse_rational(o.beta), {}, true);
      out["qMax"] = {{"p", json_int(p.value())}, {"q", json_rational(qr.q)}, {"w", json_residues(qr.w)}};
    }
    checks["probabilityInUnitInterval"] = q >= 0 && q <= 1;
  } else {
    const std::uint64_t trials = o.trials.value_or(100'000);
    const SingularityEstimate e =
        singularity_mc(n, trials, Stream(o.seed).child("singularity"), o.workers, o.p.value_or(5));
    out = to_json(e);
    csv.precision(17);
    csv << "n,trials,singular,fieldPrime,fieldSingular,estimate,wilsonLo,wilsonHi\n"
        << n << ',' << trials << ',' << e.singularCount << ',' << e.fieldPrime << ',' << e.fieldSingularCount
        << ',' << e.pointEstimate << ',' << e.wilsonLo << ',' << e.wilsonHi << '\n';
    checks["integerSingularImpliesFieldSingular"] = e.singularCount <= e.fieldSingularCount;
  }
  for (const auto& [k, v] : checks.items()) {
    if (!v.get<bool>()) res.failures.push_back(k);
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  Json config = base_config("singularity", o, profile);
  config["mode"] = o.exact ? "exact" : "mc";
  res.record = make_record("singularity", config, "", out, checks, res.pass);
  return res;
}

Result run_criteria(const std::string& command, const Options& o, const ConstantsProfile& profile,
                    const std::set<int>& defaults, const std::set<int>& allowed) {
  SuiteOptions so;
  so.seed = o.seed;
  so.workers = o.workers;
  so.profile = profile;
  so.criteria = defaults;
  if (!o.criteria.empty()) {
    so.criteria.clear();
    for (int c : o.criteria) {
      if (allowed.count(c) == 0) {
        throw CLI::ValidationError("--criteria", "criterion " + std::to_string(c) + " is not available here");
      }
      so.criteria.insert(c);
    }
  }
  const auto results = run_suite(so);
  Result res;
  std::ostringstream csv;
  csv << "criterion,pass\n";
  Json checks = Json::object();
  for (const auto& r : results) {
    csv << r.id << ',' << (r.pass ? 1 : 0) << '\n';
    checks[std::to_string(r.id)] = r.pass;
    if (!r.pass) res.failures.push_back("criterion " + std::to_string(r.id));
    std::cerr << criterion_line(r) << '\n';
  }
  res.pass = res.failures.empty();
  res.csv = csv.str();
  Json config = base_config(command, o, profile);
  Json ids = Json::array();
  for (int c : so.criteria) ids.push_back(c);
  config["criteria"] = ids;
  res.record = make_record(command, config, "", suite_artifact(results, so), checks, res.pass);
  return res;
}

void emit(const Result& r, const Options& o) {
  std::string text;
  if (o.format == "csv") {
    text = r.csv;
  } else if (o.format.empty() && !r.plain.empty()) {
    text = r.plain;
  } else {
    text = canonical_dump(r.record);
  }
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw PreconditionViolated("cannot write " + o.out);
  f << text;
}

void report(const std::string& kind, const std::string& message, const std::vector<std::string>& failures = {}) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  if (!failures.empty()) j["failures"] = failures;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
  CLI::App app{"Littlewood-Offord laboratory"};
  app.require_subcommand(1);
  Options o;
  auto* rho_cmd = app.add_subcommand("rho", "exact rho and rho_1/2 of vectors");
  auto* halasz_cmd = app.add_subcommand("halasz", "audit the Halasz bound chain");
  auto* container_cmd = app.add_subcommand("container", "build and verify container certificates");
  auto* fibre_cmd = app.add_subcommand("fibre", "run and audit fibre traces");
  auto* sing_cmd = app.add_subcommand("singularity", "exact or Monte Carlo singularity probability");
  auto* ident_cmd = app.add_subcommand("identities", "exact identity and inequality suites");
  auto* all_cmd = app.add_subcommand("verify-all", "full acceptance suite");
  for (auto* s : {rho_cmd, halasz_cmd, container_cmd, fibre_cmd, sing_cmd, ident_cmd, all_cmd}) add_common(s, o);
  fibre_cmd->add_option("--trace-out", o.traceOut, "write traces as JSON");
  sing_cmd->add_flag("--exact", o.exact, "exhaustive enumeration (n <= 6)");
  sing_cmd->add_flag("--mc", o.mc, "Monte Carlo estimate");
  ident_cmd->add_option("--criteria", o.criteria, "subset of 2 3 6 7 8")->delimiter(',');
  all_cmd->add_option("--criteria", o.criteria, "subset of 1..9")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", e.what());
    return 2;
  }

  try {
    const ConstantsProfile profile = resolve_profile(o.profile);
    Result r;
    if (rho_cmd->parsed()) {
      r = cmd_rho(o, profile);
    } else if (halasz_cmd->parsed()) {
      r = cmd_halasz(o, profile);
    } else if (container_cmd->parsed()) {
      r = cmd_container(o, profile);
    } else if (fibre_cmd->parsed()) {
      r = cmd_fibre(o, profile);
    } else if (sing_cmd->parsed()) {
      r = cmd_singularity(o, profile);
    } else if (ident_cmd->parsed()) {
      r = run_criteria("identities", o, profile, {2, 3, 6, 7, 8}, {2, 3, 6, 7, 8});
    } else {
      r = run_criteria("verify-all", o, profile, {1, 2, 3, 4, 5, 6, 7, 8, 9}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    }
    emit(r, o);
    if (!r.pass) {
      report("invariant", "one or more checks failed", r.failures);
      return 1;
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    report("usage", e.what());
    return 2;
  } catch (const ParseError& e) {
    report("parse", e.what());
    return 2;
  } catch (const RangeError& e) {
    report("range", e.what());
    return 2;
  } catch (const PreconditionViolated& e) {
    report("precondition", e.what());
    return 2;
  } catch (const GuardExceeded& e) {
    report("guard", e.what());
    return 2;
  } catch (const Error& e) {
    report("invariant", e.what());
    return 1;
  }
}

}  // namespace lolab
