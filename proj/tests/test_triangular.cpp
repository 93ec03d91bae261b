#include <doctest.h>

#include <random>

#include "projdyn/corpus.hpp"
#include "projdyn/triangular.hpp"

using namespace projdyn;

namespace {

MatX upper(cplx a11, cplx a12, cplx a13, cplx a22, cplx a23, cplx a33) {
  MatX m = MatX::Zero(3, 3);
  m(0, 0) = a11;
  m(0, 1) = a12;
  m(0, 2) = a13;
  m(1, 1) = a22;
  m(1, 2) = a23;
  m(2, 2) = a33;
  return m;
}

MatX diag3(cplx a, cplx b, cplx c) { return upper(a, 0, 0, b, 0, c); }

MatX random_upper(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.3, 2.0);
  std::uniform_real_distribution<double> off(-1.5, 1.5);
  return upper(uni(rng), off(rng), off(rng), uni(rng), off(rng), uni(rng));
}

}  // namespace

TEST_CASE("lambda maps and multiplicativity") {
  auto [a, b, c] = lambda_maps(ProjMapX::identity(3));
  CHECK(std::abs(a - 1.0) < 1e-12);
  CHECK(std::abs(b - 1.0) < 1e-12);
  CHECK(std::abs(c - 1.0) < 1e-12);

  auto [l12, l23, l13] = lambda_maps(ProjMapX(diag3(4, 2, 0.125)));
  CHECK(std::abs(l12 - 2.0) < 1e-9);
  CHECK(std::abs(l23 - 16.0) < 1e-9);
  CHECK(std::abs(l13 - 32.0) < 1e-9);

  auto core = core_element<cplx>(1, 0);
  auto [c12, c23, c13] = lambda_maps(core);
  CHECK(std::abs(c12 - 1.0) < 1e-12);
  CHECK(std::abs(c23 - 1.0) < 1e-12);
  CHECK(std::abs(c13 - 1.0) < 1e-12);

  CHECK_THROWS_AS(lambda_maps(ProjMapX(MatX(MatX::Identity(3, 3).colwise().reverse()))),
                  NotTriangularError);

  std::mt19937 rng(3);
  for (int it = 0; it < 500; ++it) {
    ProjMapX g(random_upper(rng)), h(random_upper(rng));
    auto lg = lambda_maps(g);
    auto lh = lambda_maps(h);
    auto lgh = lambda_maps(g * h);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lgh[k] - lg[k] * lh[k]) < 1e-7 * std::abs(lgh[k]));
  }
}

TEST_CASE("layer assignment") {
  CHECK(layer_of(core_element<cplx>(1, 0)) == LayerTag::Layer1_Core);
  CHECK(layer_of(ProjMapX(upper(1, 2, 3, 1, 1, 1))) == LayerTag::Layer2_AminusCore);
  CHECK(layer_of(ProjMapX(upper(3, 1, 1, 2, 1, 2))) == LayerTag::Layer3_Ker23minusA);
  CHECK(layer_of(ProjMapX(diag3(4, 2, 0.125))) == LayerTag::Layer4_rest);
}

TEST_CASE("f-classes") {
  CHECK(f_class(ProjMapX(diag3(2, 1, 0.5))) == FClass::F1);
  CHECK(f_class(ProjMapX(upper(1, 1, 0, 1, 0, 1))) == FClass::F2);
  CHECK(f_class(ProjMapX(upper(1, 0, 1, 1, 1, 1))) == FClass::F3);
  CHECK(f_class(ProjMapX(upper(1, 1, 1, 1, 1, 1))) == FClass::F4);
}

TEST_CASE("commuting triangular pairs share their F class") {
  // same-class pairs with shared sub-block fixed points commute; mixed
  // classes in {F1, F2, F3} cannot commute
  ProjMapX f1a(diag3(2, 1, 0.5)), f1b(diag3(3, 1, 1.0 / 3));
  CHECK((f1a * f1b).equal(f1b * f1a));
  ProjMapX f2a(upper(1, 1, 0, 1, 0, 1)), f2b(upper(1, 3, 0, 1, 0, 1));
  CHECK((f2a * f2b).equal(f2b * f2a));
  ProjMapX f3a(upper(1, 0, 0, 1, 1, 1)), f3b(upper(1, 0, 0, 1, 5, 1));
  CHECK((f3a * f3b).equal(f3b * f3a));
  for (const auto& [x, y] : std::vector<std::pair<ProjMapX, ProjMapX>>{
           {f1a, f2a}, {f1a, f3a}, {f2a, f3a}}) {
    CHECK(f_class(x) != f_class(y));
    CHECK(!(x * y).equal(y * x));
  }
}

TEST_CASE("cone push matches the set image") {
  CHECK(cone_push(ProjMapX::identity(3), cplx(1), cplx(1)) ==
        std::pair<cplx, cplx>{cplx(1), cplx(1)});
  auto g = ProjMapX(upper(1.0 / 6, 0, 0, 2, 1, 3));
  auto [x2, y2] = cone_push(g, cplx(1), cplx(1));
  CHECK(std::abs(x2 - 3.0) < 1e-9);
  CHECK(std::abs(y2 - 1.0) < 1e-9);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int it = 0; it < 20; ++it) {
    ProjMapX gamma(random_upper(rng));
    cplx x(uni(rng), uni(rng)), y(uni(rng), uni(rng));
    if (std::abs(x) + std::abs(y) < 0.2) continue;
    auto line = cone_line<cplx>(x, y);
    auto [px, py] = cone_push(gamma, x, y);
    auto pushed = cone_line<cplx>(px, py);
    for (int s = 0; s < 20; ++s) {
      VecX v = cplx(uni(rng), uni(rng)) * line.basis().col(0) +
               cplx(uni(rng), uni(rng)) * line.basis().col(1);
      if (v.norm() < 1e-3) continue;
      CHECK(pushed.contains(gamma(ProjPointX(v)), 1e-6));
    }
  }
}

TEST_CASE("cone_of dedups lines through e1") {
  auto cone = cone_of({{cplx(1), cplx(0)}, {cplx(2), cplx(0)}, {cplx(0), cplx(1)}});
  CHECK(cone.lines.size() == 2);
  for (const auto& l : cone.lines) CHECK(l.contains(ProjPointX::basis(0, 2)));
}

TEST_CASE("exact additive rank and discreteness") {
  SurdComplex one(1), s2(SurdReal::sqrt_of(2)), i = SurdComplex::i();
  CHECK(additive_rank_exact({one, s2}) == 2);
  CHECK(real_span_dim_exact({one, s2}) == 1);
  CHECK(!additive_discrete_exact({one, s2}));
  CHECK(additive_discrete_exact({one, i}));
  CHECK(additive_discrete_exact({one}));
  CHECK(additive_rank_exact({one, one + one}) == 1);
  CHECK(!additive_discrete_exact({one, s2, i}));  // rank 3, span dim 2
}

TEST_CASE("numeric ranks are found by bounded relation search") {
  CHECK(multiplicative_rank_numeric({cplx(16, 0), cplx(2, 0)}, 8) == 1);  // 16 = 2^4
  CHECK(multiplicative_rank_numeric({cplx(2, 0), cplx(3, 0)}, 8) == 2);
  CHECK(additive_rank_numeric({cplx(1, 0), cplx(0, 1)}, 8) == 2);
  CHECK(additive_rank_numeric({cplx(1, 0), cplx(3, 0)}, 8) == 1);
}

TEST_CASE("condition (F) chain prober") {
  FProbePolicy policy;
  // fabricated chain satisfying all the gates (growth 4, decay 0.55, so
  // the |w mu^3| values stay inside the band)
  std::vector<FCandidate> good = {
      {1.0, 0.4, 0.064}, {4.0, 0.22, 0.0426}, {16.0, 0.121, 0.0283}, {64.0, 0.0666, 0.0189}};
  CHECK(probe_condition_F_chain(good, policy) == FStatus::holds);
  // a pool with no chained decay fails
  std::vector<FCandidate> bad = {{1.0, 0.4, 0.064}, {2.5, 0.39, 0.15}, {6.0, 0.38, 0.33}};
  CHECK(probe_condition_F_chain(bad, policy) == FStatus::fails);
  CHECK(probe_condition_F_chain({}, policy) == FStatus::fails);
}

TEST_CASE("kulkarni case1 descriptor branches") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  auto l12 = line_through(e1, e2);
  auto l23 = line_through(e2, e3);

  auto d = kulkarni_case1_descriptor(Case1::C11, FStatus::unknown);
  CHECK(d.components.size() == 1);
  CHECK(d.contains_subspace_component(l12));

  d = kulkarni_case1_descriptor(Case1::C12, FStatus::unknown);
  CHECK(d.components.size() == 2);

  d = kulkarni_case1_descriptor(Case1::C13, FStatus::fails);
  CHECK(d.components.size() == 2);
  CHECK(d.contains_point_component(e1));
  CHECK(d.contains_point_component(e2));

  d = kulkarni_case1_descriptor(Case1::C14, FStatus::holds);
  CHECK(d.components.size() == 1);
  CHECK(d.contains_subspace_component(l12));

  d = kulkarni_case1_descriptor(Case1::C16, FStatus::fails);
  CHECK(d.components.size() == 2);
  CHECK(d.contains_point_component(e1));
  CHECK(d.contains_subspace_component(l23));

  d = kulkarni_case1_descriptor(Case1::C15, FStatus::holds);
  CHECK(d.components.size() == 2);
  CHECK(d.contains_subspace_component(l12));
  CHECK(d.contains_subspace_component(l23));
}

TEST_CASE("classify_case1 walks the diagram") {
  // C1.1: W = Z discrete, mu(1) = i (rational rotation 1/4)
  WmuSpec c11;
  c11.w_gens = {cplx(1, 0)};
  c11.mu_gens = {cplx(0, 1)};
  c11.w_gens_exact = std::vector<SurdComplex>{SurdComplex(1)};
  c11.mu_log_gens = std::vector<SurdComplex>{
      SurdComplex(SurdReal(0), SurdReal(BigRational::of(1, 4)))};
  auto r = classify_case1(c11, 8);
  CHECK(r.case_tag == Case1::C11);
  CHECK(r.kulkarni.components.size() == 1);
  CHECK(r.discrete_from == "exact");
  CHECK(r.rational_from == "exact");

  // C1.2: W = Z + Z sqrt2 non-discrete, mu(1) = i, mu(sqrt 2) = e
  WmuSpec c12 = c11;
  c12.w_gens.push_back(cplx(std::sqrt(2.0), 0));
  c12.mu_gens.push_back(cplx(std::exp(1.0), 0));
  c12.w_gens_exact->push_back(SurdComplex(SurdReal::sqrt_of(2)));
  c12.mu_log_gens->push_back(SurdComplex(SurdReal(1)));
  r = classify_case1(c12, 8);
  CHECK(r.case_tag == Case1::C12);
  CHECK(r.kulkarni.components.size() == 2);

  // C1.5: W non-discrete, no rational rotations, irrational rotation present
  WmuSpec c15;
  c15.w_gens = {cplx(1, 0), cplx(std::sqrt(2.0), 0)};
  c15.mu_gens = {std::polar(1.0, 2 * M_PI * std::sqrt(2.0)), cplx(std::exp(1.0), 0)};
  c15.w_gens_exact =
      std::vector<SurdComplex>{SurdComplex(1), SurdComplex(SurdReal::sqrt_of(2))};
  c15.mu_log_gens = std::vector<SurdComplex>{
      SurdComplex(SurdReal(0), SurdReal::sqrt_of(2)), SurdComplex(SurdReal(1))};
  r = classify_case1(c15, 8);
  CHECK(r.case_tag == Case1::C15);

  // flags resolve when exact data is absent
  WmuSpec flagged;
  flagged.w_gens = {cplx(1, 0)};
  flagged.mu_gens = {cplx(2, 0)};
  flagged.w_discrete = TriBool::yes;
  flagged.mu_rational_rotation = TriBool::no;
  flagged.mu_irrational_rotation = TriBool::no;
  r = classify_case1(flagged, 8);
  CHECK(r.case_tag == Case1::C14);

  // unresolved flags raise
  WmuSpec unresolved;
  unresolved.w_gens = {cplx(1, 0)};
  unresolved.mu_gens = {cplx(2, 0)};
  CHECK_THROWS_AS(classify_case1(unresolved, 8), UnresolvedFlagsError);
}

TEST_CASE("falso-Hopf reproduces C1.6 with (F) failing") {
  auto r = classify_case1(falso_hopf_spec(), 8);
  CHECK(r.case_tag == Case1::C16);
  CHECK(r.condition_f == FStatus::fails);
  CHECK(r.kulkarni.contains_point_component(ProjPointX::basis(0, 2)));
  CHECK(r.kulkarni.contains_subspace_component(
      line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2))));
  CHECK(!r.provisional);
}

TEST_CASE("classify_diagonal cases") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  auto l12 = line_through(e1, e2);
  auto l23 = line_through(e2, e3);

  DiagonalPairSpec s;
  s.alpha = 4;
  s.beta = 2;
  s.alpha_exact = SurdComplex(4);
  s.beta_exact = SurdComplex(2);
  auto r = classify_diagonal(s, 20);
  CHECK(r.case_tag == DiagCase::D2);
  CHECK(r.kulkarni.contains_subspace_component(l12));
  CHECK(r.kulkarni.contains_point_component(e3));
  REQUIRE(r.dependence_found.has_value());

  // D1: dependent with moduli split around 1: 4^1 = (1/2)^-2
  DiagonalPairSpec d1;
  d1.alpha = 4;
  d1.beta = 0.5;
  d1.alpha_exact = SurdComplex(4);
  d1.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 2)));
  r = classify_diagonal(d1, 20);
  CHECK(r.case_tag == DiagCase::D1);
  CHECK(r.kulkarni.contains_subspace_component(l12));

  DiagonalPairSpec d3;
  d3.alpha = 2;
  d3.beta = cplx(1.0 / 3, 0);
  d3.alpha_exact = SurdComplex(2);
  d3.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 3)));
  r = classify_diagonal(d3, 20);
  CHECK(r.case_tag == DiagCase::D3);
  CHECK(r.kulkarni.components.size() == 3);

  DiagonalPairSpec d4;
  d4.alpha = 2;
  d4.beta = 3;
  d4.alpha_exact = SurdComplex(2);
  d4.beta_exact = SurdComplex(3);
  r = classify_diagonal(d4, 20);
  CHECK(r.case_tag == DiagCase::D4);

  DiagonalPairSpec d5;
  d5.alpha = 2;
  d5.beta = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  d5.beta_arg_hint = RationalityHint{Rationality::Irrational, 0, 1};
  r = classify_diagonal(d5, 20);
  CHECK(r.case_tag == DiagCase::D5);
  CHECK(r.kulkarni.contains_subspace_component(l12));
  CHECK(r.kulkarni.contains_subspace_component(l23));

  DiagonalPairSpec ell;
  ell.alpha = std::polar(1.0, 1.0);
  ell.beta = std::polar(1.0, 2.0);
  CHECK_THROWS_AS(classify_diagonal(ell, 10), NoLoxodromicError);
}

TEST_CASE("decompose_layers") {
  auto gxy = [&](double x, double y) { return core_element<cplx>(x, y); };
  auto d = decompose_layers({gxy(1, 0), gxy(0, 1)}, 2);
  CHECK(d.core_rank == 2);
  CHECK(d.r == 0);
  CHECK(d.m == 0);
  CHECK(d.n == 0);
  CHECK(d.bound_ok);

  ProjMapX trans(upper(1, 0, 0, 1, 1, 1));
  ProjMapX lox(diag3(4, 2, 0.125));
  auto d2 = decompose_layers({gxy(1, 0), trans, lox}, 2);
  CHECK(d2.core_rank == 1);
  CHECK(d2.r == 1);
  CHECK(d2.m == 0);
  CHECK(d2.n == 1);
  CHECK(d2.bound_ok);

  auto d3 = decompose_layers({ProjMapX::identity(3)}, 2);
  CHECK(d3.core_rank == 0);
  CHECK(d3.r + d3.m + d3.n == 0);

  // stability under generator permutation
  auto d4 = decompose_layers({lox, gxy(1, 0), trans}, 2);
  CHECK(d4.core_rank == d2.core_rank);
  CHECK(d4.r == d2.r);
  CHECK(d4.m == d2.m);
  CHECK(d4.n == d2.n);
}

TEST_CASE("verify_normality") {
  // Core generator is normalized by any triangular element at bound 1
  auto core = core_element<cplx>(1, 0);
  ProjMapX g(upper(0.25, 0.3, -0.7, 2, 1, 2));
  // conjugate of g_{1,0}: g_{(g11/g22) x, ...} lands in the complex span,
  // so allow a two-generator lattice
  auto status = verify_normality(
      std::vector<ProjMapX>{core, core_element<cplx>(0, 1),
                            core_element<cplx>(cplx(0, 1), 0), core_element<cplx>(0, cplx(0, 1))},
      ProjMapX(upper(1, 0, 0, 1, 2, 1)), 3);
  CHECK(status == NormalityStatus::confirmed);

  // exact refutation: conjugating g_{1,0} by a diagonal gamma with a surd
  // ratio gamma11/gamma22 = sqrt 2 sends it to g_{sqrt2, 0}, outside the
  // integer lattice
  using S = SurdComplex;
  Mat<S> cm = Mat<S>::Constant(3, 3, S(0));
  cm(0, 0) = S(1);
  cm(0, 1) = S(1);
  cm(1, 1) = S(1);
  cm(2, 2) = S(1);
  ProjMap<S> core_exact(cm);
  Mat<S> gm = Mat<S>::Constant(3, 3, S(0));
  gm(0, 0) = S(SurdReal::sqrt_of(2));
  gm(1, 1) = S(1);
  gm(2, 2) = S(1);
  ProjMap<S> gamma(gm);
  CHECK(verify_normality(std::vector<ProjMap<S>>{core_exact}, gamma, 3) ==
        NormalityStatus::refuted);

  // tight bound on a true normal pair stays unknown
  CHECK(verify_normality(std::vector<ProjMapX>{core}, ProjMapX(diag3(4, 2, 0.125)), 0) ==
        NormalityStatus::unknown);
}
