#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrambig {

/// Exit status: 0 unambiguous, 1 ambiguous, 2 inconclusive, 3 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrambig
