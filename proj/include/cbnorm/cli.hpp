#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbnorm::cli {

/// Runs one command. args excludes the program name. Returns 0 on success,
/// 1 when a solver fails and 2 on invalid input; errors are printed to `out`
/// as {"error": ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace cbnorm::cli
