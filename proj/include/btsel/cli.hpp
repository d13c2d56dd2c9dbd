#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace btsel::cli {

// Runs the btsel command line (args exclude the program name) writing to the
// given streams. Returns the process exit code: 0 success, 1 internal error,
// 2 configuration error, 3 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace btsel::cli
