// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "projdyn/arrangements.hpp"
#include "projdyn/classify.hpp"
#include "projdyn/cli.hpp"
#include "projdyn/corpus.hpp"
#include "projdyn/counting.hpp"
#include "projdyn/frances.hpp"
#include "projdyn/json_io.hpp"
#include "projdyn/qp_limits.hpp"
#include "projdyn/triangular.hpp"

using namespace projdyn;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  bool ok = true;
  std::ostringstream detail;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Criterion(std::string n) : name(std::move(n)) {}
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "    failed: " << what << "\n";
    }
  }
  ~Criterion() {
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  (" << secs << " s)\n"
              << detail.str() << std::flush;
    if (!ok) ++failures;
  }
};

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

// 1. Classification table fidelity and conjugation invariance.
void criterion1() {
  Criterion c("1. classification table, 10 canonical forms x 500 conjugations, < 10 s");
  RationalityHint none{};
  RationalityHint rat15{Rationality::Rational, 1, 5};
  RationalityHint rat14{Rationality::Rational, 1, 4};
  RationalityHint irr{Rationality::Irrational, 0, 1};
  cplx wi = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  cplx w5 = std::polar(1.0, 2 * M_PI / 5.0);
  MatX u = MatX::Identity(3, 3);
  u(0, 1) = 1;
  struct Form {
    MatX m;
    MajorClass major;
    MinorClass minor;
    RationalityHint hint;
    const char* name;
  };
  std::vector<Form> forms = {
      {diag3(std::polar(1.0, 0.9), std::polar(1.0, 1.7), std::polar(1.0, -2.6)),
       MajorClass::Elliptic, MinorClass::Regular, none, "regular"},
      {diag3(cplx(0, 1), cplx(0, 1), -1), MajorClass::Elliptic, MinorClass::ComplexReflection,
       none, "complex reflection"},
      {u, MajorClass::Parabolic, MinorClass::Unipotent, none, "unipotent"},
      {jordan2(w5, std::conj(w5) * std::conj(w5)), MajorClass::Parabolic,
       MinorClass::ElliptoParabolicRational, rat15, "EP rational"},
      {jordan2(wi, 1.0 / (wi * wi)), MajorClass::Parabolic,
       MinorClass::ElliptoParabolicIrrational, irr, "EP irrational"},
      {jordan2(2, 0.25), MajorClass::Loxodromic, MinorClass::LoxoParabolic, none,
       "loxo-parabolic"},
      {diag3(cplx(0, 2), 2, cplx(0, -0.25)), MajorClass::Loxodromic, MinorClass::ScrewRational,
       rat14, "screw rational"},
      {diag3(2.0 * wi, 2, 0.25 / wi), MajorClass::Loxodromic, MinorClass::ScrewIrrational, irr,
       "screw irrational"},
      {diag3(2, 2, 0.25), MajorClass::Loxodromic, MinorClass::ComplexHomothety, none,
       "complex homothety"},
      {diag3(3, 1, 1.0 / 3), MajorClass::Loxodromic, MinorClass::StronglyLoxodromic, none,
       "strongly loxodromic"},
  };
  std::mt19937 rng(20240401);
  for (const auto& f : forms) {
    auto base = classify_element(ProjMapX(f.m), f.hint, 1e-9);
    c.require(base.major == f.major && base.minor == f.minor,
              std::string(f.name) + ": canonical form classifies as " + to_string(base.minor));
    for (int it = 0; it < 500; ++it) {
      MatX h = random_unimodular_int(rng);
      auto cls = classify_element(ProjMapX(MatX(h * f.m * invert<cplx>(h))), f.hint, 1e-9);
      if (cls.major != f.major || cls.minor != f.minor) {
        c.require(false, std::string(f.name) + ": conjugation " + std::to_string(it) +
                             " drifted to " + to_string(cls.minor));
        break;
      }
    }
  }
}

// 2. Quasi-projective power limits of the case-1 generator.
void criterion2() {
  Criterion c("2. power limits of the mu=2, w=1 generator, error <= 1e-10");
  MatX g = MatX::Zero(3, 3);
  g(0, 0) = 0.125;
  g(1, 1) = 1;
  g(1, 2) = 1;
  g(2, 2) = 1;
  ProjMapX gm(g);
  auto fwd = qp_limit_of_powers(gm, +1);
  auto bwd = qp_limit_of_powers(gm, -1);
  MatX e23 = MatX::Zero(3, 3);
  e23(1, 2) = 1;
  MatX e11 = MatX::Zero(3, 3);
  e11(0, 0) = 1;
  double ef = 0, eb = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ef = std::max(ef, std::abs(fwd.matrix(i, j) - e23(i, j)));
      eb = std::max(eb, std::abs(bwd.matrix(i, j) - e11(i, j)));
    }
  c.require(ef <= 1e-10, "forward limit matrix error " + std::to_string(ef));
  c.require(eb <= 1e-10, "backward limit matrix error " + std::to_string(eb));
  auto l12 = line_through(ProjPointX::basis(0, 2), ProjPointX::basis(1, 2));
  auto l23 = line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2));
  c.require(fwd.kernel && fwd.kernel->equal(l12, 1e-8), "forward kernel is <e1,e2>");
  c.require(bwd.kernel && bwd.kernel->equal(l23, 1e-8), "backward kernel is <e2,e3>");
}

// 3. Falso-Hopf reproduction.
void criterion3() {
  Criterion c("3. falso-Hopf: C1.6, (F) fails, cloud within 1e-6, < 60 s");
  auto spec = falso_hopf_spec();
  auto res = classify_case1(spec, 8);
  c.require(res.case_tag == Case1::C16, "case C1.6");
  c.require(res.condition_f == FStatus::fails, "condition (F) fails");
  LimitSetDescriptor target;
  target.add_point(ProjPointX::basis(0, 2));
  target.add_subspace(line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2)));
  c.require(res.kulkarni.contains_point_component(ProjPointX::basis(0, 2)) &&
                res.kulkarni.contains_subspace_component(
                    line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2))),
            "descriptor is {e1} u <e2,e3>");
  // sampled Kulkarni cloud at word length 8
  std::vector<ProjMapX> gens;
  for (const auto& n : {std::vector<long long>{1, 0}, std::vector<long long>{0, 1}})
    gens.push_back(spec.element(n));
  WordOrbit orbit = build_word_orbit(gens, 8);
  auto layers = approximate_kulkarni(orbit, 60, 777, 10);
  auto all = layers.merged();
  c.require(!all.cloud.empty(), "cloud is non-empty");
  double worst = 0;
  for (const auto& p : all.cloud) worst = std::max(worst, target.distance(p));
  c.require(worst <= 1e-6, "cloud within 1e-6 (worst " + std::to_string(worst) + ")");
}

// 4. The five diagonal cases.
void criterion4() {
  Criterion c("4. diagonal cases return the ledger descriptors");
  auto e1 = ProjPointX::basis(0, 2), e2 = ProjPointX::basis(1, 2), e3 = ProjPointX::basis(2, 2);
  auto l12 = line_through(e1, e2);
  auto l23 = line_through(e2, e3);
  auto check_line_point = [&](const DiagonalResult& r, const std::string& label) {
    c.require(r.kulkarni.contains_subspace_component(l12) &&
                  r.kulkarni.contains_point_component(e3) && r.kulkarni.components.size() == 2,
              label + ": <e1,e2> u {e3}");
  };
  auto check_points = [&](const DiagonalResult& r, const std::string& label) {
    c.require(r.kulkarni.contains_point_component(e1) && r.kulkarni.contains_point_component(e2) &&
                  r.kulkarni.contains_point_component(e3) && r.kulkarni.components.size() == 3,
              label + ": {e1, e2, e3}");
  };

  DiagonalPairSpec s1;
  s1.alpha = 4;
  s1.beta = 2;
  s1.alpha_exact = SurdComplex(4);
  s1.beta_exact = SurdComplex(2);
  auto r = classify_diagonal(s1, 20);
  c.require(r.case_tag == DiagCase::D2, "(4,2) lands in D2");
  check_line_point(r, "(4,2)");

  DiagonalPairSpec s2;
  s2.alpha = 2;
  s2.beta = cplx(1.0 / 3, 0);
  s2.alpha_exact = SurdComplex(2);
  s2.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 3)));
  r = classify_diagonal(s2, 20);
  c.require(r.case_tag == DiagCase::D3, "(2,1/3) lands in D3");
  check_points(r, "(2,1/3)");

  DiagonalPairSpec s3;
  s3.alpha = 2;
  s3.beta = 3;
  s3.alpha_exact = SurdComplex(2);
  s3.beta_exact = SurdComplex(3);
  r = classify_diagonal(s3, 20);
  c.require(r.case_tag == DiagCase::D4, "(2,3) lands in D4");
  check_points(r, "(2,3)");

  DiagonalPairSpec s4;
  s4.alpha = 0.25;
  s4.beta = 0.5;
  s4.alpha_exact = SurdComplex(SurdReal(BigRational::of(1, 4)));
  s4.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 2)));
  r = classify_diagonal(s4, 20);
  c.require(r.case_tag == DiagCase::D2, "(1/4,1/2) lands in D2");
  check_line_point(r, "(1/4,1/2)");

  DiagonalPairSpec s5;
  s5.alpha = 2;
  s5.beta = std::polar(1.0, 2 * M_PI * std::sqrt(2.0));
  s5.beta_arg_hint = RationalityHint{Rationality::Irrational, 0, 1};
  r = classify_diagonal(s5, 20);
  c.require(r.case_tag == DiagCase::D5, "(2, e^{2 pi i sqrt 2}) lands in D5");
  c.require(r.kulkarni.contains_subspace_component(l12) &&
                r.kulkarni.contains_subspace_component(l23) && r.kulkarni.components.size() == 2,
            "D5: <e1,e2> u <e2,e3>");

  // D1 coverage beyond the listed pairs: dependent split moduli
  DiagonalPairSpec s6;
  s6.alpha = 4;
  s6.beta = 0.5;
  s6.alpha_exact = SurdComplex(4);
  s6.beta_exact = SurdComplex(SurdReal(BigRational::of(1, 2)));
  r = classify_diagonal(s6, 20);
  c.require(r.case_tag == DiagCase::D1, "(4,1/2) lands in D1");
}

// 5. Frances blocks: the 9x9 sequence and the A_eps family.
void criterion5() {
  Criterion c("5. nine-by-nine blocks (3,1,2,2,1), pentagon svg, A_eps endpoints");
  auto bd = blocks_of(nine_by_nine_spec());
  c.require(bd.dims == std::vector<int>{3, 1, 2, 2, 1}, "block dims (3,1,2,2,1)");
  auto [s0, L] = middle_space(bd);
  c.require(s0 == 2, "middle block s0 = 2");
  bool mid_ok = L.proj_dim() == 3;
  for (int i = 0; i < 4; ++i) mid_ok = mid_ok && L.contains(ProjPointX::basis(i, 8));
  c.require(mid_ok, "middle space <e1..e4>");
  std::string svg = polygon_svg(polygon_doc(bd));
  c.require(svg.find("<svg") != std::string::npos && bd.blocks() == 5,
            "pentagon svg emitted");

  auto half = frances_cyclic(ProjMapX(a_eps_matrix(0.5)));
  MatX e12 = MatX::Zero(4, 2);
  e12(0, 0) = 1;
  e12(1, 1) = 1;
  c.require(half.contains_subspace_component(ProjSubspaceX(e12), 1e-7),
            "A_{1/2} yields <e1,e2>");
  auto zero = frances_cyclic(ProjMapX(a_eps_matrix(0.0)));
  MatX e123 = MatX::Zero(4, 3);
  e123(0, 0) = 1;
  e123(1, 1) = 1;
  e123(2, 2) = 1;
  c.require(zero.contains_subspace_component(ProjSubspaceX(e123), 1e-7),
            "A_0 yields <e1,e2,e3>");
}

// 6. Dynamic-image oracle, 200 randomized trials.
void criterion6() {
  Criterion c("6. dynamic-image oracle: 200 trials, accumulation + 20 targets, < 120 s");
  std::mt19937 rng(424242);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> nblocks(2, 4);
  std::uniform_int_distribution<int> bsize(1, 3);
  const std::vector<double> bases{7, 5, 3, 2, 1.4, 1, 0.7, 0.5, 0.2};
  int trials = 0;
  double worst_acc = 0, worst_target = 0;
  while (trials < 200) {
    // random spec: pick descending bases with distinct values
    int m = nblocks(rng);
    std::uniform_int_distribution<int> start(0, static_cast<int>(bases.size()) - m);
    int s = start(rng);
    SingularSequenceSpec spec;
    std::vector<int> sizes;
    for (int b = 0; b < m; ++b) {
      int k = bsize(rng);
      sizes.push_back(k);
      for (int i = 0; i < k; ++i)
        spec.entries.push_back({1.0 + 0.3 * i, bases[s + b]});
    }
    // sort c descending within blocks
    for (auto& e : spec.entries) e.c = 1.0 / e.c;
    std::sort(spec.entries.begin(), spec.entries.end(), [](const auto& a, const auto& b) {
      if (a.b != b.b) return a.b > b.b;
      return a.c > b.c;
    });
    auto bd = blocks_of(spec);
    const int n1 = spec.size();
    // random z supported from a random block onward
    std::uniform_int_distribution<int> pick(0, bd.blocks() - 1);
    int blk = pick(rng);
    VecX z = VecX::Zero(n1);
    for (int i = bd.block_start(blk); i < n1; ++i) z(i) = cplx(gauss(rng), gauss(rng));
    double blknorm = 0;
    for (int i = bd.block_start(blk); i < bd.block_start(blk) + bd.dims[blk]; ++i)
      blknorm += std::abs(z(i));
    if (blknorm < 0.3) continue;
    ProjPointX zp(z);
    auto d = dynamic_image(bd, zp);
    if (d.block_index != blk + 1) continue;

    // accumulation of g_k(z_k) along exponentially convergent z_k -> z,
    // sampled at k = 52: the deviation left is the between-block decay
    const double k = 52;
    Eigen::VectorXd gk = spec.at(k);
    for (int rep = 0; rep < 5; ++rep) {
      VecX zk = z;
      for (int i = 0; i < n1; ++i) zk(i) += cplx(gauss(rng), gauss(rng)) * 1e-10;
      VecX img = gk.asDiagonal() * zk;
      worst_acc = std::max(worst_acc, chordal_distance(ProjPointX(img), d.closure));
    }

    // realizing sequences for 20 prescribed targets
    double alpha_i = spec.entries[bd.block_start(blk)].c *
                     std::pow(spec.entries[bd.block_start(blk)].b, k);
    for (int t = 0; t < 20; ++t) {
      VecX target = VecX::Zero(n1);
      for (int j = 0; j < bd.dims[blk]; ++j) {
        int idx = bd.block_start(blk) + j;
        target(idx) = bd.limit_blocks[blk][j] * z(idx);
      }
      for (int j = 0; j < bd.block_start(blk); ++j) target(j) = cplx(gauss(rng), gauss(rng));
      VecX X = z;
      for (int j = 0; j < bd.block_start(blk); ++j) X(j) = target(j) * alpha_i / gk(j);
      VecX img = gk.asDiagonal() * X;
      worst_target = std::max(worst_target, chordal_distance(ProjPointX(img), ProjPointX(target)));
    }
    ++trials;
  }
  c.require(worst_acc <= 1e-6, "sampled accumulation within 1e-6 (worst " +
                                   std::to_string(worst_acc) + ")");
  c.require(worst_target <= 1e-6,
            "realizing sequences hit targets (worst " + std::to_string(worst_target) + ")");
}

// 7. Arrangements in exact mode.
void criterion7() {
  Criterion c("7. exact arrangements: q memberships, 1000 random eta, C0, surds");
  using S = SurdComplex;
  auto rat = [](long long n, long long d = 1) { return S(SurdReal(BigRational::of(n, d))); };
  ArrangementParam<S> par{rat(2), rat(3)};
  auto lines = standard_lines(par);
  bool q_ok = true;
  for (const auto& [ij, p] : intersections_q(par))
    q_ok = q_ok && lines[ij.first].contains(p) && lines[ij.second].contains(p);
  c.require(q_ok, "all ten q points lie on their lines, exactly");

  S z1 = rat(5), z2 = rat(7);
  auto c0 = forbidden_eta(par, z1, z2);
  bool c0_ok = c0.size() == 9;
  for (const auto& eta : c0)
    c0_ok = c0_ok && intersection_count<S>(par, z1, z2, std::optional<S>(eta)) == 4;
  c.require(c0_ok, "all nine C0 members give 4 intersections");
  c.require(intersection_count<S>(par, z1, z2, std::nullopt) == 4, "eta = infinity gives 4");

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 12);
  int good = 0, trials = 0;
  while (trials < 1000) {
    S eta = rat(num(rng), den(rng));
    bool forbidden = false;
    for (const auto& f : c0) forbidden = forbidden || f == eta;
    if (forbidden) continue;
    ++trials;
    if (intersection_count<S>(par, z1, z2, std::optional<S>(eta)) == 5) ++good;
  }
  c.require(good == 1000, "1000 random eta off C0 give 5 intersections (got " +
                              std::to_string(good) + ")");

  SurdReal s2 = SurdReal::sqrt_of(2);
  c.require(alpha0_exact() == SurdReal(1) / (s2 * (SurdReal(1) + s2)),
            "alpha0 = 1/(sqrt2 (1 + sqrt2)) exactly");
  auto fs = tangent_forbidden_set();
  c.require(fs.size() == 5 && fs[3] == SurdReal(BigRational(3), BigRational(-2), 2) &&
                fs[4] == SurdReal(BigRational(2), BigRational(-1), 2),
            "forbidden set matches the surd values");
}

// 8. Counting.
void criterion8() {
  Criterion c("8. counting: cayley, Vol(D)=6pi, symmetry, bounds, atoms, series");
  auto [s3, b3] = cayley_counts(3);
  c.require(s3 == 392 && b3 == 457, "cayley_counts(3) = (392, 457)");
  bool consist = true;
  for (int n = 1; n <= 12; ++n) {
    auto [sn, bn] = cayley_counts(n);
    auto [sp, bp] = cayley_counts(n - 1);
    consist = consist && (bn - bp == sn);
  }
  c.require(consist, "|B_n| - |B_{n-1}| = |S_n| for n <= 12");
  c.require(std::abs(nhat_bounds(1, 0.5, ball_area(0.5), 1.0).slice_volume /
                         nhat_bounds(1, 0.5, ball_area(0.5), 1.0).volume -
                     6 * M_PI) < 1e-12,
            "slice volume constant is 6 pi");

  FuchsianSpec spec = FuchsianSpec::reference_rank4(6.0);
  cplx z(0.1, 0.05), w(-0.2, 0.15);
  auto zw = orbit_enumerate(spec, z, w, 4);
  auto wz = orbit_enumerate(spec, w, z, 4);
  double horizon = std::min(zw.horizon(), wz.horizon());
  bool sym = true;
  for (int k = 1; k <= 40; ++k) {
    double r = horizon * k / 40.0;
    sym = sym && orbital_count(zw, r).count == orbital_count(wz, r).count;
  }
  c.require(sym, "N(r,z,w) = N(r,w,z) below the horizon");

  double eps = 1e300;
  for (const auto& g : spec.generators)
    eps = std::min(eps, 0.5 * poincare_distance(w, mobius_apply(g, w)));
  double A = std::exp(eps) / (4.0 * ball_area(eps));
  double lo = std::log(1.0 / A) + 0.5;
  bool growth = horizon > lo;
  for (int k = 1; k <= 20 && growth; ++k) {
    double r = lo + (horizon - lo) * k / 20.0;
    growth = static_cast<double>(orbital_count(zw, r).count) < A * std::exp(r);
  }
  c.require(growth, "N(r) < A e^r at 20 sampled radii");

  auto pp = orbit_enumerate(spec, z, z, 3);
  bool nhat_ok = true;
  for (double R : {2.0, 4.0, 6.0, 8.0}) {
    long long n0 = std::max(1LL, orbital_count(pp, R).count);
    nhat_ok = nhat_ok && nhat_measured(pp, R, 2000) <= 49 * n0 + 16;
  }
  c.require(nhat_ok, "measured N-hat <= 49 N + 16");

  auto measure = ps_atoms(spec, zw, 1.0);
  c.require(std::abs(measure.total - 1.0) <= 1e-12, "atom measure total = 1 +- 1e-12");

  // cyclic series against the closed form
  FuchsianSpec cyc;
  {
    Mat2 h;
    double t = 0.75;
    h << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
    cyc.generators.push_back(h);
  }
  auto table = orbit_enumerate(cyc, 0, 0, 10);
  double s = 1.2, ell = 1.5;
  auto sr = poincare_series(table, s);
  double qq = std::exp(-s * ell);
  c.require(std::abs(sr.partial_sum - (1 + qq) / (1 - qq)) <= sr.tail_bound + 1e-12,
            "cyclic Poincare series matches its closed form within the tail bound");
}

// 9. Entropy-volume estimator.
void criterion9() {
  Criterion c("9. entropy-volume slope on exact disk areas in [0.95, 1.05]");
  std::vector<std::pair<double, double>> samples;
  for (double r : {6.0, 8.0, 10.0}) samples.emplace_back(r, ball_area(r));
  double slope = entropy_volume_estimate(samples);
  c.require(slope >= 0.95 && slope <= 1.05, "slope " + std::to_string(slope));
}

// 10. CLI determinism.
void criterion10() {
  Criterion c("10. corpus commands are byte-reproducible");
  for (const auto& name : corpus_names()) {
    std::string first, second, svg1, svg2;
    json a = corpus_run(name, &svg1);
    json b = corpus_run(name, &svg2);
    first = a.dump(2);
    second = b.dump(2);
    if (first != second || svg1 != svg2) {
      c.require(false, "corpus entry '" + name + "' not reproducible");
    }
  }
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
