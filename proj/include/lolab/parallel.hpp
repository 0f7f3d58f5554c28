#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lolab {

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on up to
/// `workers` threads. workers <= 1 runs inline. The first exception thrown by
/// any chunk is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lolab


namespace lolab {

/// results[i] = f(i) for i in [0, count), computed on up to `workers` threads.
template <class R, class F>
std::vector<R> map_indexed(std::size_t count, unsigned workers, F f) {
  std::vector<R> out(count);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
  });
  return out;
}

}  // namespace lolab
