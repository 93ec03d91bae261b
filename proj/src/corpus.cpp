#include "projdyn/corpus.hpp"

#include "projdyn/arrangements.hpp"
#include "projdyn/classify.hpp"
#include "projdyn/counting.hpp"
#include "projdyn/frances.hpp"
#include "projdyn/qp_limits.hpp"
#include "projdyn/triangular.hpp"

namespace projdyn {

WmuSpec falso_hopf_spec() {
  WmuSpec spec;
  spec.w_gens_exact = std::vector<SurdComplex>{
      SurdComplex(1), SurdComplex(SurdReal::sqrt_of(2))};
  spec.mu_log_gens = std::vector<SurdComplex>{
      SurdComplex(SurdReal(-1)), SurdComplex(SurdReal::sqrt_of(2))};
  for (const auto& w : *spec.w_gens_exact) spec.w_gens.push_back(w.to_complex());
  for (const auto& l : *spec.mu_log_gens) {
    cplx v = l.to_complex();
    spec.mu_gens.push_back(std::exp(cplx(v.real(), 2 * M_PI * v.imag())));
  }
  return spec;
}

SingularSequenceSpec nine_by_nine_spec() {
  // diag(7^{k+1}, 7^k, 7^{k-1} | 5^k | 3^{k+1}, 3^k | 2^{k+1}, 2^k |
  //      5^-k 3^{-2k-1} 2^{-2k-1})
  SingularSequenceSpec s;
  s.entries = {{7, 7},          {1, 7}, {1.0 / 7, 7}, {1, 5},         {3, 3},
               {1, 3},          {2, 2}, {1, 2},       {1.0 / 6, 1.0 / 180}};
  return s;
}

MatX a_eps_matrix(double eps) {
  MatX m = MatX::Zero(4, 4);
  m(0, 0) = 2;
  m(1, 1) = 1 + eps * eps;
  m(2, 2) = 1.0 / (1 + eps * eps);
  m(3, 3) = 0.5;
  return m;
}

std::vector<std::string> corpus_names() {
  return {"falso-hopf", "nine-blocks", "a-eps-half", "a-eps-zero",
          "wmu-powers", "diag-cases", "schottky4",  "canonical-classes"};
}

namespace {

json run_falso_hopf() {
  Case1Result res = classify_case1(falso_hopf_spec(), 8);
  json out;
  out["case"] = to_string(res.case_tag);
  out["condition_F"] = to_string(res.condition_f);
  out["kulkarni"] = to_json(res.kulkarni);
  out["discrete_from"] = res.discrete_from;
  out["rotations_from"] = res.rational_from;
  return out;
}

json run_nine_blocks(std::string* svg_out) {
  auto bd = blocks_of(nine_by_nine_spec());
  auto [s0, L] = middle_space(bd);
  PolygonDoc doc = polygon_doc(bd, {{1, 2, 3}});
  if (svg_out) *svg_out = polygon_svg(doc);
  json out;
  out["dims"] = bd.dims;
  out["middle_block"] = s0;
  out["middle_space"] = to_json(L);
  json hulls = json::array();
  for (const auto& h : doc.hulls)
    hulls.push_back(json{{"vertices", h.vertices}, {"proj_dim", h.proj_dim}});
  out["hulls"] = std::move(hulls);
  return out;
}

json run_a_eps(double eps) {
  LimitSetDescriptor d = frances_cyclic(ProjMapX(a_eps_matrix(eps)));
  json out;
  out["epsilon"] = eps;
  out["frances"] = to_json(d);
  return out;
}

json run_wmu_powers() {
  // Gamma_{W,mu} generator with mu = 2, w = 1
  MatX g = MatX::Zero(3, 3);
  g(0, 0) = 0.125;
  g(1, 1) = 1;
  g(1, 2) = 1;
  g(2, 2) = 1;
  ProjMapX gm(g);
  json out;
  for (int dir : {+1, -1}) {
    QuasiProjMapX q = qp_limit_of_powers(gm, dir);
    json o;
    o["matrix"] = to_json(q.matrix);
    if (q.kernel) o["kernel"] = to_json(*q.kernel);
    o["image"] = to_json(q.image);
    out[dir > 0 ? "forward" : "backward"] = std::move(o);
  }
  return out;
}

json run_diag_cases() {
  json out = json::array();
  auto run = [&](DiagonalPairSpec spec, const std::string& label) {
    DiagonalResult r = classify_diagonal(spec, 20);
    json o;
    o["label"] = label;
    o["case"] = to_string(r.case_tag);
    o["kulkarni"] = to_json(r.kulkarni);
    o["assuming_independent"] = r.assuming_independent;
    out.push_back(std::move(o));
  };
  DiagonalPairSpec s1{cplx(4, 0), cplx(2, 0)};
  s1.alpha_exact = SurdComplex(4);
  s1.beta_exact = SurdComplex(2);
  run(s1, "(4,2)");
  DiagonalPairSpec s2{cplx(2, 0), cplx(1.0 / 3, 0)};
  s2.alpha_exact = SurdComplex(2);
  s2.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 3)));
  run(s2, "(2,1/3)");
  DiagonalPairSpec s3{cplx(2, 0), cplx(3, 0)};
  s3.alpha_exact = SurdComplex(2);
  s3.beta_exact = SurdComplex(3);
  run(s3, "(2,3)");
  DiagonalPairSpec s4{cplx(0.25, 0), cplx(0.5, 0)};
  s4.alpha_exact = SurdComplex(SurdReal(BigRational::of(1, 4)));
  s4.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 2)));
  run(s4, "(1/4,1/2)");
  DiagonalPairSpec s5{cplx(2, 0), std::polar(1.0, 2 * M_PI * std::sqrt(2.0))};
  s5.beta_arg_hint = RationalityHint{Rationality::Irrational, 0, 1};
  run(s5, "(2,e^{2 pi i sqrt 2})");
  return out;
}

json run_canonical_classes() {
  json out = json::array();
  auto add = [&](const MatX& m, const RationalityHint& hint, const std::string& label) {
    ElementClass cls = classify_element(ProjMapX(m), hint);
    out.push_back(json{{"label", label},
                       {"major", to_string(cls.major)},
                       {"minor", to_string(cls.minor)},
                       {"provisional", cls.provisional_rationality}});
  };
  auto diag = [](cplx a, cplx b, cplx c) {
    MatX m = MatX::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  };
  RationalityHint none{};
  RationalityHint rat{Rationality::Rational, 1, 5};
  RationalityHint irr{Rationality::Irrational, 0, 1};
  add(diag(std::polar(1.0, 0.9), std::polar(1.0, 1.7), std::polar(1.0, -2.6)), none,
      "elliptic regular");
  add(diag(cplx(0, 1), cplx(0, 1), cplx(-1, 0)), none, "complex reflection");
  MatX u = MatX::Zero(3, 3);
  u(0, 0) = u(1, 1) = u(2, 2) = 1;
  u(0, 1) = 1;
  add(u, none, "unipotent");
  auto jordan = [](cplx l, cplx third) {
    MatX m = MatX::Zero(3, 3);
    m(0, 0) = m(1, 1) = l;
    m(0, 1) = 1;
    m(2, 2) = third;
    return m;
  };
  cplx w5 = std::polar(1.0, 2 * M_PI / 5.0);
  add(jordan(w5, std::conj(w5) * std::conj(w5)), rat, "ellipto-parabolic rational");
  cplx wi = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  add(jordan(wi, 1.0 / (wi * wi)), irr, "ellipto-parabolic irrational");
  add(jordan(cplx(2, 0), cplx(0.25, 0)), none, "loxo-parabolic");
  add(diag(cplx(0, 2), cplx(2, 0), cplx(0, -0.25)), rat, "screw rational");
  add(diag(2.0 * wi, cplx(2, 0), 0.25 / wi), irr, "screw irrational");
  add(diag(cplx(2, 0), cplx(2, 0), cplx(0.25, 0)), none, "complex homothety");
  add(diag(cplx(3, 0), cplx(1, 0), cplx(1.0 / 3, 0)), none, "strongly loxodromic");
  return out;
}

}  // namespace

json corpus_run(const std::string& name, std::string* svg_out) {
  if (name == "falso-hopf") return run_falso_hopf();
  if (name == "nine-blocks") return run_nine_blocks(svg_out);
  if (name == "a-eps-half") return run_a_eps(0.5);
  if (name == "a-eps-zero") return run_a_eps(0.0);
  if (name == "wmu-powers") return run_wmu_powers();
  if (name == "diag-cases") return run_diag_cases();
  if (name == "canonical-classes") return run_canonical_classes();
  if (name == "schottky4") {
    FuchsianSpec spec = FuchsianSpec::reference_rank4(6.0);
    cplx z(0.1, 0.05), w(-0.2, 0.15);
    OrbitTable t = orbit_enumerate(spec, z, w, 3);
    auto [s3, b3] = cayley_counts(3);
    json out;
    out["cayley_S3"] = s3;
    out["cayley_B3"] = b3;
    out["rows_at_bound_3"] = t.rows.size();
    out["horizon"] = t.horizon();
    DeltaEstimate d = critical_exponent(t);
    out["delta_limsup"] = d.limsup_estimate;
    out["delta_bisection"] = d.bisection_estimate;
    return out;
  }
  throw BadInputError("corpus: unknown entry '" + name + "'");
}

}  // namespace projdyn
