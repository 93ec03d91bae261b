#include <doctest.h>

#include <random>

#include "projdyn/projective.hpp"

using namespace projdyn;

namespace {

ProjPointX pt(cplx a, cplx b, cplx c) {
  VecX v(3);
  v << a, b, c;
  return ProjPointX(v);
}

MatX random_psl3(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    MatX m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    if (std::abs(det_of<cplx>(m)) > 0.1) return m;
  }
}

}  // namespace

TEST_CASE("projective equality is scale invariant") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  for (int it = 0; it < 200; ++it) {
    VecX v(3);
    v << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng));
    if (v.norm() < 0.1) continue;
    cplx c(gauss(rng), gauss(rng));
    if (std::abs(c) < 0.1) continue;
    CHECK(ProjPointX(v).equal(ProjPointX(VecX(c * v))));
  }
}

TEST_CASE("line_through and intersect_lines") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  auto l12 = line_through(e1, e2);
  auto l23 = line_through(e2, e3);
  CHECK(intersect_lines(l12, l23).equal(e2));
  CHECK_THROWS_AS(line_through(e1, e1), IdenticalPointsError);
  CHECK_THROWS_AS(intersect_lines(l12, l12), SameLineError);

  // ([1:1:0], [1:0:1]) spans the plane {x - y - z = 0}
  auto l = line_through(pt(1, 1, 0), pt(1, 0, 1));
  VecX c = l.hyperplane_coeffs();
  cplx ratio = c(0);
  CHECK(std::abs(c(1) / ratio - cplx(-1)) < 1e-12);
  CHECK(std::abs(c(2) / ratio - cplx(-1)) < 1e-12);
}

TEST_CASE("intersect_lines recovers q13 for the (2,3) parameter") {
  // l1 through (1,0), (0,1); l3 through (2,0), (0,3)
  auto l1 = line_through(pt(1, 0, 1), pt(0, 1, 1));
  auto l3 = line_through(pt(2, 0, 1), pt(0, 3, 1));
  auto q = intersect_lines(l1, l3);
  CHECK(q.equal(pt(4, -3, 1)));
}

TEST_CASE("meet of joins returns the common point") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  int done = 0;
  while (done < 50) {
    auto rnd = [&]() {
      VecX v(3);
      v << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)),
          cplx(gauss(rng), gauss(rng));
      return ProjPointX(v);
    };
    ProjPointX p = rnd(), q = rnd(), r = rnd();
    MatX M(3, 3);
    M.col(0) = p.lift();
    M.col(1) = q.lift();
    M.col(2) = r.lift();
    if (std::abs(det_of<cplx>(M)) < 0.05) continue;
    CHECK(intersect_lines(line_through(p, q), line_through(p, r)).equal(p, 1e-7));
    ++done;
  }
}

TEST_CASE("is_general_position") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  std::vector<ProjSubspaceX> triangle{line_through(e1, e2), line_through(e2, e3),
                                      line_through(e1, e3)};
  CHECK(is_general_position(triangle));
  std::vector<ProjSubspaceX> pencil{line_through(e1, e2), line_through(e1, e3),
                                    line_through(e1, pt(0, 1, 1))};
  CHECK(!is_general_position(pencil));
}

TEST_CASE("apply o inverse is the identity on points") {
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  for (int it = 0; it < 1000; ++it) {
    ProjMapX g(random_psl3(rng));
    VecX v(3);
    v << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng));
    if (v.norm() < 0.1) continue;
    ProjPointX p(v);
    CHECK(g(g.inverse()(p)).equal(p, 1e-7));
  }
}

TEST_CASE("ProjMap equality quotients by cube roots of unity") {
  std::mt19937 rng(5);
  MatX m = random_psl3(rng);
  ProjMapX g(m);
  cplx w = std::polar(1.0, 2 * M_PI / 3);
  ProjMapX gw(MatX(w * m));
  CHECK(g.equal(gw));
}

TEST_CASE("qp_from_matrix kernels and images") {
  MatX d = MatX::Zero(3, 3);
  d(0, 0) = 1;
  auto q = qp_from_matrix<cplx>(d);
  REQUIRE(q.kernel.has_value());
  CHECK(q.kernel->proj_dim() == 1);
  CHECK(q.kernel->contains(ProjPointX::basis(1, 2)));
  CHECK(q.kernel->contains(ProjPointX::basis(2, 2)));
  CHECK(q.image.proj_dim() == 0);
  CHECK(q.image.contains(ProjPointX::basis(0, 2)));

  auto qid = qp_from_matrix<cplx>(MatX(MatX::Identity(3, 3)));
  CHECK(!qid.kernel.has_value());
  CHECK(qid.image.proj_dim() == 2);

  MatX e23 = MatX::Zero(3, 3);
  e23(1, 2) = 1;
  auto q2 = qp_from_matrix<cplx>(e23);
  REQUIRE(q2.kernel.has_value());
  CHECK(q2.kernel->contains(ProjPointX::basis(0, 2)));
  CHECK(q2.kernel->contains(ProjPointX::basis(1, 2)));
  CHECK(q2.image.contains(ProjPointX::basis(1, 2)));
  CHECK(q2.image.proj_dim() == 0);

  CHECK_THROWS_AS(qp_from_matrix<cplx>(MatX(MatX::Zero(3, 3))), ZeroMatrixError);
}

TEST_CASE("qp rank + kernel dimension identity") {
  std::mt19937 rng(13);
  std::normal_distribution<double> gauss;
  for (int it = 0; it < 100; ++it) {
    MatX m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    if (it % 3 == 0) m.col(2) = m.col(0) + m.col(1);  // force singularity sometimes
    if (it % 7 == 0) m.col(1) = 2.0 * m.col(0);
    auto q = qp_from_matrix<cplx>(m, 1e-9);
    int kdim = q.kernel ? q.kernel->proj_dim() : -1;
    CHECK(q.rank(1e-9) + kdim + 1 == 3);
    CHECK(q.rank(1e-9) >= 1);
  }
}

TEST_CASE("dual_action matches the set image") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2);
  auto l12 = line_through(e1, e2);
  MatX d = MatX::Zero(3, 3);
  d(0, 0) = 2;
  d(1, 1) = 1;
  d(2, 2) = 0.5;
  ProjMapX g(d);
  CHECK(dual_action(g, l12).equal(l12));

  // permutation swapping coordinates 1 and 3 sends {x = 0} to {z = 0}
  MatX p = MatX::Zero(3, 3);
  p(0, 2) = 1;
  p(1, 1) = 1;
  p(2, 0) = 1;
  ProjMapX perm(p);
  auto x0 = line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2));  // {x = 0}
  auto z0 = line_through(ProjPointX::basis(0, 2), ProjPointX::basis(1, 2));  // {z = 0}
  CHECK(dual_action(perm, x0).equal(z0));

  // identity fixes everything; generic agreement with the set image
  std::mt19937 rng(17);
  for (int it = 0; it < 20; ++it) {
    ProjMapX h(random_psl3(rng));
    auto img = dual_action(h, l12);
    for (const auto& s : {pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0)}) {
      CHECK(img.contains(h(s), 1e-7));
    }
  }
}

TEST_CASE("plucker coordinates") {
  auto span12 = ProjSubspaceX::span({ProjPointX::basis(0, 2), ProjPointX::basis(1, 2)});
  auto w = plucker(span12);
  CHECK(w.equal(pt(1, 0, 0)));
  // basis change leaves the class fixed
  auto span12b = ProjSubspaceX::span({pt(1, 1, 0), ProjPointX::basis(1, 2)});
  CHECK(plucker(span12b).equal(w));
  // span{e1, e2 + e3} -> [1 : 1 : 0]
  auto s = ProjSubspaceX::span({ProjPointX::basis(0, 2), pt(0, 1, 1)});
  CHECK(plucker(s).equal(pt(1, 1, 0)));
}

TEST_CASE("plucker is injective on sampled lines") {
  std::mt19937 rng(23);
  std::normal_distribution<double> gauss;
  std::vector<ProjSubspaceX> lines;
  std::vector<ProjPointX> wedges;
  while (lines.size() < 100) {
    VecX a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = cplx(gauss(rng), gauss(rng));
      b(i) = cplx(gauss(rng), gauss(rng));
    }
    MatX B(3, 2);
    B.col(0) = a;
    B.col(1) = b;
    if (rank_of<cplx>(MatX(B.transpose())) < 2) continue;
    ProjSubspaceX l(B);
    bool dup = false;
    for (const auto& k : lines) dup = dup || k.equal(l, 1e-7);
    if (dup) continue;
    lines.push_back(l);
    wedges.push_back(plucker(l));
  }
  for (size_t i = 0; i < wedges.size(); ++i)
    for (size_t j = i + 1; j < wedges.size(); ++j) CHECK(!wedges[i].equal(wedges[j], 1e-7));
}

TEST_CASE("transform_from_point_correspondence") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  auto u = pt(1, 1, 1);
  std::vector<ProjPointX> frame{e1, e2, e3, u};
  auto id = transform_from_point_correspondence(frame, frame);
  CHECK(id.equal(ProjMapX::identity(3)));

  std::vector<ProjPointX> swapped{e2, e1, e3, u};
  auto g = transform_from_point_correspondence(frame, swapped);
  MatX p = MatX::Zero(3, 3);
  p(0, 1) = 1;
  p(1, 0) = 1;
  p(2, 2) = 1;
  CHECK(g.equal(ProjMapX(p)));

  std::vector<ProjPointX> collinear{e1, e2, pt(1, 1, 0), u};
  CHECK_THROWS_AS(transform_from_point_correspondence(collinear, frame),
                  DegenerateConfigurationError);
}

TEST_CASE("transform_from_line_correspondence") {
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  std::vector<ProjSubspaceX> quad{line_through(e1, e3), line_through(pt(-1, 1, 0), pt(1, 0, 1)),
                                  line_through(e2, e3), line_through(e1, e2)};
  auto id = transform_from_line_correspondence(quad, quad);
  CHECK(id.equal(ProjMapX::identity(3)));

  // a cyclic relabeling of a symmetric quadruple is realized line-wise
  std::vector<ProjSubspaceX> rot{quad[1], quad[2], quad[3], quad[0]};
  auto g = transform_from_line_correspondence(quad, rot);
  for (int i = 0; i < 4; ++i) {
    auto img = g(quad[i]);
    CHECK(img.equal(rot[i], 1e-7));
  }

  std::vector<ProjSubspaceX> bad{line_through(e1, e2), line_through(e1, e3),
                                 line_through(e1, pt(0, 1, 1)), line_through(e2, e3)};
  CHECK_THROWS_AS(transform_from_line_correspondence(bad, quad), NotGeneralPositionError);
}

TEST_CASE("polar hyperplane under the corner form") {
  auto form = HermitianFormX::corner_form(2);
  auto h = polar_hyperplane(ProjPointX::basis(0, 2), form);
  // {w : w_3 = 0} = span{e1, e2}
  CHECK(h.contains(ProjPointX::basis(0, 2)));
  CHECK(h.contains(ProjPointX::basis(1, 2)));
  CHECK(!h.contains(ProjPointX::basis(2, 2)));

  // interior point: polar hyperplane misses the closed ball
  auto p = pt(1, 0, -2);  // <p,p> = 1*(-2)~ + ... = -4 < 0 under the corner form
  VecX pv = p.lift();
  CHECK(form.inner(pv, pv).real() < 0);
  auto hp = polar_hyperplane(p, form);
  std::mt19937 rng(29);
  std::normal_distribution<double> gauss;
  int hits = 0;
  for (int it = 0; it < 100; ++it) {
    // sample points w of the hyperplane, none may satisfy <w,w> <= 0
    VecX a = hp.basis().col(0), b = hp.basis().col(1);
    VecX w = cplx(gauss(rng), gauss(rng)) * a + cplx(gauss(rng), gauss(rng)) * b;
    if (w.norm() < 1e-6) continue;
    if (form.inner(w, w).real() <= 1e-12) ++hits;
  }
  CHECK(hits == 0);

  // wrong signature rejected
  CHECK_THROWS_AS(HermitianFormX(MatX(MatX::Identity(3, 3))), SignatureError);
}

TEST_CASE("exact backend mirrors the float operations") {
  using S = SurdComplex;
  auto e1 = ProjPoint<S>::basis(0, 2), e2 = ProjPoint<S>::basis(1, 2),
       e3 = ProjPoint<S>::basis(2, 2);
  auto l12 = line_through(e1, e2);
  auto l23 = line_through(e2, e3);
  CHECK(intersect_lines(l12, l23).equal(e2));
  Mat<S> m = Mat<S>::Constant(3, 3, S(0));
  m(0, 0) = S(SurdReal::sqrt_of(2));
  m(1, 1) = S(1);
  m(2, 2) = S(1);
  ProjMap<S> g(m);
  CHECK(g(e1).equal(e1));
  CHECK(g.inverse()(g(e2)).equal(e2));
}
