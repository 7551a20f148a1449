#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dstk::cli {

// Exit status: 0 holds, 1 fails (a "WITNESS:" line is printed), 2 usage or I/O, 3 undecided.
enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kUndecided = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dstk::cli
