#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corrmate {

/// Runs the command line. Exit codes: 0 success, 1 audit or validation failure, 2 usage error.
int run(int argc, const char* const* argv);
/// Same, with the program name omitted from args and explicit output streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace corrmate
