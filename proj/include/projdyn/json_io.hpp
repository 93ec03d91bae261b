#pragma once

// JSON encoding of scalars, matrices, projective objects, specs, and the
// run manifest. Schema "projdyn/1"; unknown fields are rejected.

#include <string>

#include <json.hpp>

#include "projdyn/counting.hpp"
#include "projdyn/descriptor.hpp"
#include "projdyn/frances.hpp"
#include "projdyn/projective.hpp"
#include "projdyn/triangular.hpp"

namespace projdyn {

using json = nlohmann::ordered_json;

struct BadInputError : std::runtime_error {
  explicit BadInputError(const std::string& what) : std::runtime_error(what) {}
};

void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where);

// float scalar: [re, im] or a bare number
json to_json(const cplx& z);
cplx cplx_from_json(const json& j);

// exact scalar: {"num": [a, b], "den": c, "surd": d, "inum": [e, f]} with
// value ((a + b sqrt d) + (e + f sqrt d) i) / c; inum optional.
json to_json(const SurdComplex& z);
SurdComplex surd_from_json(const json& j);

json to_json(const MatX& m);
MatX matx_from_json(const json& j);
json to_json(const Mat<SurdComplex>& m);
Mat<SurdComplex> mat_exact_from_json(const json& j);

json to_json(const ProjPointX& p);
json to_json(const ProjSubspaceX& s);
json to_json(const LimitSetDescriptor& d);

json to_json(const SingularSequenceSpec& s);
SingularSequenceSpec seq_spec_from_json(const json& j);

WmuSpec wmu_from_json(const json& j);
FuchsianSpec fuchsian_from_json(const json& j);
std::vector<ProjMapX> group_from_json(const json& j);

struct RunManifest {
  std::string command;
  std::string inputs_digest;
  double tol = kDefaultTol;
  std::string mode = "float";
  unsigned long long seed = 0;
  std::string version = "projdyn 1.0.0";
};

json to_json(const RunManifest& m);
std::string fnv1a_digest(const std::string& data);

}  // namespace projdyn
