#pragma once

// Bundled worked examples, runnable by name from the CLI.

#include <string>
#include <vector>

#include "projdyn/json_io.hpp"

namespace projdyn {

std::vector<std::string> corpus_names();

// Returns the result document (no manifest); svg_out receives a drawing for
// the entries that produce one.
json corpus_run(const std::string& name, std::string* svg_out = nullptr);

// Specs shared with the test suite.
WmuSpec falso_hopf_spec();
SingularSequenceSpec nine_by_nine_spec();
MatX a_eps_matrix(double eps);  // diag(2, 1+eps^2, (1+eps^2)^-1, 1/2)

}  // namespace projdyn
