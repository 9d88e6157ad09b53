#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chunkforge::cli {

/// Dispatches one command-line invocation.  argv[0] is the program name.
/// Returns 0 on success, 1 on a usage error (reason plus usage text on
/// err), 2 on a data error (file/line context on err).
int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err);

}  // namespace chunkforge::cli
