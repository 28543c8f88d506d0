#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elecsim::cli {

/// Run the command line with `args` (program name excluded). Returns the
/// process exit code: 0 success, 1 input error, 2 runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of a file's bytes, as 16 lowercase hex digits.
std::string file_digest(const std::string& path);

} // namespace elecsim::cli
