#include "projdyn/json_io.hpp"

#include <sstream>

namespace projdyn {

void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw BadInputError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) ok = ok || it.key() == k;
    if (!ok) throw BadInputError(where + ": unknown field '" + it.key() + "'");
  }
}

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  if (j.is_object()) return surd_from_json(j).to_complex();
  throw BadInputError("scalar: expected number, [re, im], or exact object");
}

namespace {

long long ll_of(const json& j, const char* where) {
  if (!j.is_number_integer()) throw BadInputError(std::string(where) + ": expected integer");
  return j.get<long long>();
}

}  // namespace

json to_json(const SurdComplex& z) {
  json out;
  auto rat = [](const BigRational& q) {
    return json::array({q.num().to_string(), q.den().to_string()});
  };
  out["re"] = json::array({rat(z.real().rational_part()), rat(z.real().surd_part())});
  out["im"] = json::array({rat(z.imag().rational_part()), rat(z.imag().surd_part())});
  out["surd"] = std::max(z.real().surd_base(), z.imag().surd_base());
  return out;
}

SurdComplex surd_from_json(const json& j) {
  if (j.is_number_integer()) return SurdComplex(j.get<long long>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer())
    return SurdComplex(SurdReal(j[0].get<long long>()), SurdReal(j[1].get<long long>()));
  require_keys(j, {"num", "den", "surd", "inum", "re", "im"}, "exact scalar");
  long long d = j.contains("surd") ? ll_of(j["surd"], "surd") : 0;
  auto rat_of = [](const json& v, const char* where) -> BigRational {
    if (v.is_number_integer()) return BigRational(v.get<long long>());
    if (v.is_string()) return BigRational(BigInt(v.get<std::string>()), BigInt(1));
    if (v.is_array() && v.size() == 2) {
      auto part = [](const json& x) {
        return x.is_string() ? BigInt(x.get<std::string>()) : BigInt(x.get<long long>());
      };
      return BigRational(part(v[0]), part(v[1]));
    }
    throw BadInputError(std::string(where) + ": expected integer, string, or [num, den]");
  };
  if (j.contains("re") || j.contains("im")) {
    auto surd_of = [&](const json& v) -> SurdReal {
      if (!v.is_array() || v.size() != 2) throw BadInputError("exact scalar: re/im = [rat, rat]");
      return SurdReal(rat_of(v[0], "re/im"), rat_of(v[1], "re/im"), d);
    };
    SurdReal re = j.contains("re") ? surd_of(j["re"]) : SurdReal(0);
    SurdReal im = j.contains("im") ? surd_of(j["im"]) : SurdReal(0);
    return SurdComplex(re, im);
  }
  // {"num": [a, b], "den": c, "surd": d [, "inum": [e, f]]} = ((a + b sqrt d) + (e + f sqrt d) i) / c
  if (!j.contains("num")) throw BadInputError("exact scalar: missing num");
  const json& num = j["num"];
  if (!num.is_array() || num.size() != 2) throw BadInputError("exact scalar: num = [a, b]");
  BigRational den = j.contains("den") ? rat_of(j["den"], "den") : BigRational(1);
  SurdReal re(rat_of(num[0], "num") / den, rat_of(num[1], "num") / den, d);
  SurdReal im(0);
  if (j.contains("inum")) {
    const json& inum = j["inum"];
    if (!inum.is_array() || inum.size() != 2) throw BadInputError("exact scalar: inum = [e, f]");
    im = SurdReal(rat_of(inum[0], "inum") / den, rat_of(inum[1], "inum") / den, d);
  }
  return SurdComplex(re, im);
}

json to_json(const MatX& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatX matx_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw BadInputError("matrix: expected array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  MatX m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw BadInputError("matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = cplx_from_json(j[r][c]);
  }
  return m;
}

json to_json(const Mat<SurdComplex>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat<SurdComplex> mat_exact_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw BadInputError("matrix: expected array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat<SurdComplex> m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const json& v = j[r][c];
      if (v.is_number_integer())
        m(r, c) = SurdComplex(v.get<long long>());
      else
        m(r, c) = surd_from_json(v);
    }
  return m;
}

json to_json(const ProjPointX& p) {
  json lift = json::array();
  for (int i = 0; i < p.lift().size(); ++i) lift.push_back(to_json(p.lift()(i)));
  return json{{"lift", std::move(lift)}};
}

json to_json(const ProjSubspaceX& s) {
  json basis = json::array();
  for (int c = 0; c < s.basis().cols(); ++c) {
    json v = json::array();
    for (int i = 0; i < s.basis().rows(); ++i) v.push_back(to_json(s.basis()(i, c)));
    basis.push_back(std::move(v));
  }
  return json{{"basis", std::move(basis)}};
}

json to_json(const LimitSetDescriptor& d) {
  json comps = json::array();
  for (const auto& c : d.components) {
    if (c.point)
      comps.push_back(json{{"point", to_json(*c.point)}});
    else
      comps.push_back(json{{"subspace", to_json(*c.subspace)}});
  }
  json out;
  out["exactness"] =
      d.exactness == LimitSetDescriptor::Exactness::symbolic ? "symbolic" : "sampled";
  out["components"] = std::move(comps);
  out["pretty"] = d.to_string();
  if (!d.cloud.empty()) out["cloud_size"] = d.cloud.size();
  return out;
}

json to_json(const SingularSequenceSpec& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(json::array({e.c, e.b}));
  return json{{"entries", std::move(entries)}};
}

SingularSequenceSpec seq_spec_from_json(const json& j) {
  require_keys(j, {"entries", "schema"}, "sequence spec");
  if (!j.contains("entries")) throw BadInputError("sequence spec: missing entries");
  SingularSequenceSpec s;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 2) throw BadInputError("sequence spec: entry = [c, b]");
    s.entries.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  s.validate();
  return s;
}

WmuSpec wmu_from_json(const json& j) {
  require_keys(j,
               {"w_gens", "mu_gens", "w_gens_exact", "mu_log_gens", "w_discrete",
                "mu_rational_rotation", "mu_irrational_rotation", "schema"},
               "wmu spec");
  WmuSpec spec;
  auto tri = [&](const char* key) {
    if (!j.contains(key)) return TriBool::unknown;
    std::string v = j[key].get<std::string>();
    if (v == "yes" || v == "true") return TriBool::yes;
    if (v == "no" || v == "false") return TriBool::no;
    return TriBool::unknown;
  };
  if (j.contains("w_gens"))
    for (const auto& v : j["w_gens"]) spec.w_gens.push_back(cplx_from_json(v));
  if (j.contains("mu_gens"))
    for (const auto& v : j["mu_gens"]) spec.mu_gens.push_back(cplx_from_json(v));
  if (j.contains("w_gens_exact")) {
    std::vector<SurdComplex> w;
    for (const auto& v : j["w_gens_exact"]) w.push_back(surd_from_json(v));
    spec.w_gens_exact = std::move(w);
    if (spec.w_gens.empty())
      for (const auto& v : *spec.w_gens_exact) spec.w_gens.push_back(v.to_complex());
  }
  if (j.contains("mu_log_gens")) {
    std::vector<SurdComplex> logs;
    for (const auto& v : j["mu_log_gens"]) logs.push_back(surd_from_json(v));
    spec.mu_log_gens = std::move(logs);
    if (spec.mu_gens.empty())
      for (const auto& v : *spec.mu_log_gens) {
        cplx l = v.to_complex();
        spec.mu_gens.push_back(std::exp(cplx(l.real(), 2 * M_PI * l.imag())));
      }
  }
  spec.w_discrete = tri("w_discrete");
  spec.mu_rational_rotation = tri("mu_rational_rotation");
  spec.mu_irrational_rotation = tri("mu_irrational_rotation");
  if (spec.w_gens.empty() || spec.w_gens.size() != spec.mu_gens.size())
    throw BadInputError("wmu spec: need matching w_gens and mu_gens");
  return spec;
}

FuchsianSpec fuchsian_from_json(const json& j) {
  require_keys(j, {"generators", "free_rank_claim", "schema"}, "fuchsian spec");
  if (!j.contains("generators")) throw BadInputError("fuchsian spec: missing generators");
  FuchsianSpec spec;
  for (const auto& g : j["generators"]) {
    MatX m = matx_from_json(g);
    if (m.rows() != 2 || m.cols() != 2) throw BadInputError("fuchsian spec: generators are 2x2");
    Mat2 k;
    k << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    spec.generators.push_back(k);
  }
  if (j.contains("free_rank_claim")) spec.free_rank_claim = j["free_rank_claim"].get<int>();
  spec.validate();
  return spec;
}

std::vector<ProjMapX> group_from_json(const json& j) {
  const json* gens = nullptr;
  if (j.is_array()) {
    gens = &j;
  } else {
    require_keys(j, {"generators", "schema", "mode"}, "group");
    if (!j.contains("generators")) throw BadInputError("group: missing generators");
    gens = &j["generators"];
  }
  std::vector<ProjMapX> out;
  for (const auto& g : *gens) out.emplace_back(matx_from_json(g));
  if (out.empty()) throw BadInputError("group: no generators");
  return out;
}

json to_json(const RunManifest& m) {
  json out;
  out["schema"] = "projdyn/1";
  out["command"] = m.command;
  out["inputs_digest"] = m.inputs_digest;
  out["tol"] = m.tol;
  out["mode"] = m.mode;
  out["seed"] = m.seed;
  out["version"] = m.version;
  return out;
}

std::string fnv1a_digest(const std::string& data) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace projdyn
