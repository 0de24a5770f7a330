#pragma once

#include <ostream>

namespace ckt::cli {

// Exit codes: 0 success, 1 a verified claim failed, 2 input or validation
// error, 3 numerical failure, 4 coverage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ckt::cli
