#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace povliq::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 1,    // parse, validation or usage error
    kTableMismatch = 2,   // reproduce-table found a cell out of tolerance
    kStatisticalFail = 3, // simulate's distribution test failed
};

// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace povliq::cli
