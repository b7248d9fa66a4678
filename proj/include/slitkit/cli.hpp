#pragma once

#include <string>
#include <vector>

namespace slitkit {

// Command-line front end. Exit codes: 0 success/verified, 1 mismatch, 2 usage,
// 3 resource budget exceeded.
int run_cli(const std::vector<std::string>& args);

} // namespace slitkit
