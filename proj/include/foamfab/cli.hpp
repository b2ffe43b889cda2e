#pragma once

#include <iosfwd>

namespace foamfab {

// Entry point behind the foamfab binary, separated for in-process testing.
// Exit codes: 0 success, 1 internal error, 2 user/config error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace foamfab
