#pragma once

namespace lolab {

/// Entry point of the `lolab` tool. Returns 0 when every invoked check
/// passes, 1 on an invariant failure and 2 on a usage or input error.
int cli_dispatch(int argc, char** argv);

}  // namespace lolab
