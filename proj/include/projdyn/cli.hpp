#pragma once

// Single-binary command line: every pipeline with JSON in/out and SVG
// emission. Exit codes: 0 success, 2 input validation error, 3 numeric
// non-resolution with a machine-readable reason.

#include <string>
#include <vector>

namespace projdyn {

int cli_run(const std::vector<std::string>& args);
int cli_run(int argc, char** argv);

}  // namespace projdyn
