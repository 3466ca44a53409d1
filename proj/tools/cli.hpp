#pragma once

#include <iosfwd>

// Exit codes: 0 success or "yes", 1 "no", 2 usage or I/O, 3 invalid input, 4 size limit.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);
