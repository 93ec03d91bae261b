#include <doctest.h>

#include <random>

#include "projdyn/classify.hpp"

using namespace projdyn;

namespace {

MatX diag3(cplx a, cplx b, cplx c) {
  MatX m = MatX::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

MatX jordan2(cplx l, cplx third) {
  MatX m = MatX::Zero(3, 3);
  m(0, 0) = m(1, 1) = l;
  m(0, 1) = 1;
  m(2, 2) = third;
  return m;
}

MatX random_unimodular_int(std::mt19937& rng) {
  // product of elementary integer shears: exact in floating point
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> pick(0, 5);
  MatX m = MatX::Identity(3, 3);
  for (int it = 0; it < 6; ++it) {
    MatX e = MatX::Identity(3, 3);
    int ij = pick(rng);
    int i = ij / 2, j = (i + 1 + ij % 2) % 3;
    e(i, j) = coef(rng);
    m = m * e;
  }
  return m;
}

}  // namespace

TEST_CASE("eigen3 on the spec examples") {
  auto id = eigen3(ProjMapX::identity(3));
  REQUIRE(id.pairs.size() == 1);
  CHECK(id.pairs[0].algebraic_mult == 3);
  CHECK(id.diagonalizable);

  auto d = eigen3(ProjMapX(diag3(2, 1, 0.5)));
  REQUIRE(d.pairs.size() == 3);
  CHECK(std::abs(d.pairs[0].value - cplx(2)) < 1e-9);
  CHECK(d.diagonalizable);

  MatX u = MatX::Identity(3, 3);
  u(0, 1) = 1;
  auto j = eigen3(ProjMapX(u));
  REQUIRE(j.pairs.size() == 1);
  CHECK(j.pairs[0].algebraic_mult == 3);
  CHECK(j.pairs[0].geometric_mult == 2);
  CHECK(!j.diagonalizable);
}

TEST_CASE("eigen3 residuals are small") {
  std::mt19937 rng(31);
  std::normal_distribution<double> gauss;
  for (int it = 0; it < 50; ++it) {
    MatX m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    if (std::abs(det_of<cplx>(m)) < 0.1) continue;
    ProjMapX g(m);
    auto ed = eigen3(g);
    double scale = g.max_abs();
    for (const auto& p : ed.pairs)
      for (const auto& v : p.vectors) {
        VecX r = g.matrix() * v - p.value * v;
        CHECK(r.norm() <= 1e-8 * scale * v.norm());
      }
  }
}

TEST_CASE("exact eigen3 handles triangular lifts only") {
  using S = SurdComplex;
  Mat<S> m = Mat<S>::Constant(3, 3, S(0));
  m(0, 0) = S(2);
  m(1, 1) = S(1);
  m(2, 2) = S(1);
  m(0, 1) = S(5);
  auto ed = eigen3(ProjMap<S>(m));
  CHECK(ed.pairs.size() == 2);
  Mat<S> full = Mat<S>::Constant(3, 3, S(1));
  full(0, 1) = S(2);
  full(1, 0) = S(3);
  full(2, 2) = S(7);
  CHECK_THROWS_AS(eigen3(ProjMap<S>(full)), UnsupportedExactCubicError);
}

TEST_CASE("classify_element across the taxonomy") {
  RationalityHint none{};
  RationalityHint rat{Rationality::Rational, 1, 4};
  RationalityHint irr{Rationality::Irrational, 0, 1};

  auto cls = classify_element(ProjMapX(diag3(2, 1, 0.5)), none);
  CHECK(cls.major == MajorClass::Loxodromic);
  CHECK(cls.minor == MinorClass::StronglyLoxodromic);

  cls = classify_element(ProjMapX(jordan2(2, 0.25)), none);
  CHECK(cls.minor == MinorClass::LoxoParabolic);

  cls = classify_element(ProjMapX(diag3(cplx(0, 2), 2, cplx(0, -0.25))), rat);
  CHECK(cls.minor == MinorClass::ScrewRational);

  cls = classify_element(ProjMapX(diag3(2, 2, 0.25)), none);
  CHECK(cls.minor == MinorClass::ComplexHomothety);

  MatX u = MatX::Identity(3, 3);
  u(0, 1) = 1;
  cls = classify_element(ProjMapX(u), none);
  CHECK(cls.major == MajorClass::Parabolic);
  CHECK(cls.minor == MinorClass::Unipotent);

  cplx w = std::polar(1.0, 2 * M_PI / 5);
  cls = classify_element(ProjMapX(jordan2(w, std::conj(w) * std::conj(w))),
                         RationalityHint{Rationality::Rational, 1, 5});
  CHECK(cls.minor == MinorClass::ElliptoParabolicRational);

  cls = classify_element(ProjMapX(diag3(cplx(0, 1), cplx(0, 1), -1)), none);
  CHECK(cls.major == MajorClass::Elliptic);
  CHECK(cls.minor == MinorClass::ComplexReflection);

  cls = classify_element(
      ProjMapX(diag3(std::polar(1.0, 0.9), std::polar(1.0, 1.7), std::polar(1.0, -2.6))), none);
  CHECK(cls.minor == MinorClass::Regular);
}

TEST_CASE("rationality probe tags without a hint are provisional") {
  cplx wi = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  auto cls = classify_element(ProjMapX(diag3(2.0 * wi, 2.0, 0.25 / wi)), {});
  CHECK(cls.minor == MinorClass::ScrewIrrational);
  CHECK(cls.provisional_rationality);
  cplx wr = std::polar(1.0, 2 * M_PI / 4);
  cls = classify_element(ProjMapX(diag3(2.0 * wr, 2.0, 0.25 / wr)), {});
  CHECK(cls.minor == MinorClass::ScrewRational);
  CHECK(cls.provisional_rationality);
}

TEST_CASE("classification is invariant under unimodular conjugation") {
  std::mt19937 rng(37);
  RationalityHint irr{Rationality::Irrational, 0, 1};
  cplx wi = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  struct Sample {
    MatX m;
    MinorClass expect;
    RationalityHint hint;
  };
  MatX u = MatX::Identity(3, 3);
  u(0, 1) = 1;
  std::vector<Sample> samples = {
      {diag3(3, 1, 1.0 / 3), MinorClass::StronglyLoxodromic, {}},
      {jordan2(2, 0.25), MinorClass::LoxoParabolic, {}},
      {diag3(2, 2, 0.25), MinorClass::ComplexHomothety, {}},
      {u, MinorClass::Unipotent, {}},
      {jordan2(wi, 1.0 / (wi * wi)), MinorClass::ElliptoParabolicIrrational, irr},
      {diag3(2.0 * wi, 2.0, 0.25 / wi), MinorClass::ScrewIrrational, irr},
  };
  for (const auto& s : samples) {
    for (int it = 0; it < 60; ++it) {
      MatX h = random_unimodular_int(rng);
      MatX conj = h * s.m * invert<cplx>(h);
      auto cls = classify_element(ProjMapX(conj), s.hint);
      CHECK(cls.minor == s.expect);
    }
  }
}

TEST_CASE("dominant_vector") {
  auto v = dominant_vector(ProjMapX(diag3(3, 1, 1.0 / 3)));
  REQUIRE(v.has_value());
  CHECK(v->equal(ProjPointX::basis(0, 2)));
  CHECK(!dominant_vector(ProjMapX(diag3(cplx(0, 1), cplx(0, 1), -1))).has_value());

  // conjugation covariance, and the dominant vector is fixed
  std::mt19937 rng(41);
  for (int it = 0; it < 30; ++it) {
    MatX h = random_unimodular_int(rng);
    ProjMapX g(MatX(h * diag3(3, 1, 1.0 / 3) * invert<cplx>(h)));
    auto dv = dominant_vector(g);
    REQUIRE(dv.has_value());
    CHECK(dv->equal(ProjPointX(VecX(h.col(0))), 1e-7));
    CHECK(g(*dv).equal(*dv, 1e-7));
  }
}

TEST_CASE("cyclic_kulkarni per class") {
  // complex homothety diag(l^-2, l, l), l = 2
  auto d = cyclic_kulkarni(ProjMapX(diag3(0.25, 2, 2)));
  REQUIRE(d.components.size() == 2);
  CHECK(d.contains_point_component(ProjPointX::basis(0, 2)));
  auto l23 = line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2));
  CHECK(d.contains_subspace_component(l23));

  // loxo-parabolic Gamma_{W,mu} generator with |mu| != 1
  MatX g = MatX::Zero(3, 3);
  g(0, 0) = 0.125;
  g(1, 1) = 1;
  g(1, 2) = 1;
  g(2, 2) = 1;
  auto dl = cyclic_kulkarni(ProjMapX(g));
  auto l12 = line_through(ProjPointX::basis(0, 2), ProjPointX::basis(1, 2));
  CHECK(dl.contains_subspace_component(l12, 1e-7));
  CHECK(dl.contains_subspace_component(l23, 1e-7));

  // ellipto-parabolic generator (|mu| = 1): a single line
  MatX ep = MatX::Zero(3, 3);
  cplx mu = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  ep(0, 0) = 1.0 / (mu * mu * mu);
  ep(1, 1) = 1;
  ep(1, 2) = 1;
  ep(2, 2) = 1;
  auto de = cyclic_kulkarni(ProjMapX(ep));
  CHECK(de.components.size() == 1);
  CHECK(de.contains_subspace_component(l12, 1e-7));

  CHECK_THROWS_AS(cyclic_kulkarni(ProjMapX(diag3(3, 1, 1.0 / 3))), UnsupportedClassError);

  // the component subspaces are invariant sets
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> uni(-1, 1);
  ProjMapX hom(diag3(0.25, 2, 2));
  for (const auto& c : d.components) {
    if (!c.subspace) continue;
    for (int s = 0; s < 50; ++s) {
      VecX v = VecX::Zero(3);
      for (int j = 0; j < c.subspace->basis().cols(); ++j)
        v += cplx(uni(rng), uni(rng)) * c.subspace->basis().col(j);
      if (v.norm() < 1e-6) continue;
      CHECK(c.subspace->contains(hom(ProjPointX(v)), 1e-7));
    }
  }
}

TEST_CASE("verify_ping_pong") {
  // strongly loxodromic with a large exponent: two balls around the
  // attracting and repelling points
  ProjMapX g(diag3(4, 1, 0.25));
  ProjMapX gN = g.pow(8);
  std::vector<ProjMapX> gens{gN, gN.inverse()};
  std::vector<RegionBall> regions{{ProjPointX::basis(0, 2), 0.25},
                                  {ProjPointX::basis(2, 2), 0.25}};
  CHECK(verify_ping_pong(gens, regions, 200));

  // a shared fixed point inside both regions breaks the inclusion
  ProjMapX h(diag3(4, 0.5, 0.5));
  std::vector<ProjMapX> gens2{h.pow(8), h.pow(-8)};
  std::vector<RegionBall> regions2{{ProjPointX::basis(1, 2), 0.3},
                                   {ProjPointX::basis(2, 2), 0.3}};
  CHECK(!verify_ping_pong(gens2, regions2, 200));

  std::vector<RegionBall> overlap{{ProjPointX::basis(0, 2), 0.9},
                                  {ProjPointX::basis(2, 2), 0.9}};
  CHECK_THROWS_AS(verify_ping_pong(gens, overlap, 50), RegionsOverlapError);
}
