#pragma once

#include <ostream>

namespace densepack {

/// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 internal error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace densepack
