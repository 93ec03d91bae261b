#include "projdyn/classify.hpp"

#include <cmath>

namespace projdyn {

const char* to_string(MajorClass m) {
  switch (m) {
    case MajorClass::Elliptic: return "elliptic";
    case MajorClass::Parabolic: return "parabolic";
    case MajorClass::Loxodromic: return "loxodromic";
  }
  return "?";
}

const char* to_string(MinorClass m) {
  switch (m) {
    case MinorClass::Regular: return "regular";
    case MinorClass::ComplexReflection: return "complex-reflection";
    case MinorClass::Unipotent: return "unipotent";
    case MinorClass::ElliptoParabolicRational: return "ellipto-parabolic-rational";
    case MinorClass::ElliptoParabolicIrrational: return "ellipto-parabolic-irrational";
    case MinorClass::LoxoParabolic: return "loxo-parabolic";
    case MinorClass::ScrewRational: return "screw-rational";
    case MinorClass::ScrewIrrational: return "screw-irrational";
    case MinorClass::ComplexHomothety: return "complex-homothety";
    case MinorClass::StronglyLoxodromic: return "strongly-loxodromic";
  }
  return "?";
}

AngleProbe probe_angle(double turns, long long den_bound) {
  double x = turns - std::floor(turns);
  // Continued fraction expansion; a huge partial quotient means the
  // remaining error is at rounding scale, i.e. the input was rational.
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    double a_f = std::floor(y);
    if (a_f > 9e17) a_f = 9e17;
    long long a = static_cast<long long>(a_f);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = y - a_f;
    if (frac < 1e-12 || 1.0 / frac > 1e8) {
      // terminated: rational p1/q1
      if (q1 <= den_bound) return {true, p1 % std::max<long long>(q1, 1), q1};
      return {false, 0, 1};
    }
    y = 1.0 / frac;
    if (q1 > den_bound) return {false, 0, 1};
  }
  return {false, 0, 1};
}

std::array<cplx, 3> cardano_roots(const cplx& c2, const cplx& c1, const cplx& c0) {
  // Roots of x^3 + c2 x^2 + c1 x + c0.
  const cplx s = c2 / 3.0;
  const cplx p = c1 - c2 * c2 / 3.0;
  const cplx q = c0 - c2 * c1 / 3.0 + 2.0 * c2 * c2 * c2 / 27.0;
  std::array<cplx, 3> t;
  if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
    t = {0.0, 0.0, 0.0};
  } else {
    cplx disc = q * q / 4.0 + p * p * p / 27.0;
    cplx sq = std::sqrt(disc);
    // Pick the branch giving the larger |u|^3 for stability.
    cplx u3a = -q / 2.0 + sq, u3b = -q / 2.0 - sq;
    cplx u3 = std::abs(u3a) >= std::abs(u3b) ? u3a : u3b;
    cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    auto eval = [&](const cplx& x) { return ((x + c2) * x + c1) * x + c0; };
    for (int k = 0; k < 3; ++k) {
      cplx uk = u * (k == 0 ? cplx(1.0) : (k == 1 ? w : w * w));
      cplx root = (std::abs(uk) < 1e-300) ? cplx(0.0) : uk - p / (3.0 * uk);
      t[k] = root;
      // One Newton polish step on the shifted cubic.
      cplx x = t[k];
      cplx f = ((x)*x + p) * x + q;
      cplx fp = 3.0 * x * x + p;
      if (std::abs(fp) > 1e-300) {
        cplx x2 = x - f / fp;
        if (std::abs((((x2)*x2 + p) * x2 + q)) < std::abs(f)) t[k] = x2;
      }
      (void)eval;
    }
  }
  return {t[0] - s, t[1] - s, t[2] - s};
}

namespace {

// Smallest singular value of A - r I relative to |A|: certifies that r is
// an eigenvalue of the matrix regardless of coefficient rounding.
double eigen_residual(const MatX& A, const cplx& r) {
  MatX shifted = A;
  for (int i = 0; i < A.rows(); ++i) shifted(i, i) -= r;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
  double scale = 0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) scale = std::max(scale, std::abs(A(i, j)));
  return svd.singularValues()(A.rows() - 1) / std::max(scale, 1e-300);
}

// Structural multiplicity detection: a triple or double root hypothesis is
// accepted when its polynomial residual is at rounding scale and the matrix
// itself certifies the root; conjugation noise splits a Jordan block's
// eigenvalues by sqrt(eps), which pure root extraction cannot undo.
std::vector<std::pair<cplx, int>> clustered_roots(const MatX& A, const cplx& c2, const cplx& c1,
                                                  const cplx& c0, double tol) {
  double scale = std::max({1.0, std::abs(c2), std::abs(c1), std::abs(c0)});
  auto eval = [&](const cplx& x) { return ((x + c2) * x + c1) * x + c0; };
  const double loose = 1e-7 * scale * scale * scale;
  const double certify = 1e-7;

  // Triple root: x = -c2/3.
  cplx r3 = -c2 / 3.0;
  if (std::abs(eval(r3)) <= loose && eigen_residual(A, r3) <= certify) {
    // distinguish from a double plus a very close simple root: the critical
    // points must both collapse onto r3
    cplx disc = c2 * c2 - 3.0 * c1;
    if (std::abs(disc) <= 1e-5 * scale * scale) return {{r3, 3}};
  }

  // Double root: critical points of the cubic.
  {
    cplx disc = c2 * c2 - 3.0 * c1;
    cplx sq = std::sqrt(disc);
    for (const cplx& rc : {(-c2 + sq) / 3.0, (-c2 - sq) / 3.0}) {
      if (std::abs(eval(rc)) <= loose && eigen_residual(A, rc) <= certify) {
        cplx other = -c2 - 2.0 * rc;
        if (std::abs(other - rc) > std::max(tol, 1e-5) * std::max(1.0, std::abs(rc)))
          return {{rc, 2}, {other, 1}};
        return {{rc, 3}};
      }
    }
  }

  auto roots = cardano_roots(c2, c1, c0);
  // Merge tolerance-close roots.
  std::vector<std::pair<cplx, int>> out;
  double mx = std::max({std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2]), 1e-300});
  for (const cplx& r : roots) {
    bool merged = false;
    for (auto& [v, m] : out) {
      if (std::abs(v - r) <= tol * mx) {
        v = (v * static_cast<double>(m) + r) / static_cast<double>(m + 1);
        ++m;
        merged = true;
        break;
      }
    }
    if (!merged) out.emplace_back(r, 1);
  }
  return out;
}

MatX to_matx(const ProjMapX& g) { return g.matrix(); }

}  // namespace

EigenData eigen3(const ProjMapX& g, double tol) {
  if (g.size() != 3) throw std::invalid_argument("eigen3: expects 3x3");
  const MatX A = to_matx(g);
  const cplx tr = A(0, 0) + A(1, 1) + A(2, 2);
  const cplx m01 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  const cplx m02 = A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0);
  const cplx m12 = A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
  const cplx det = det_of<cplx>(A, tol);
  // char poly: x^3 - tr x^2 + (sum principal minors) x - det
  auto clusters = clustered_roots(A, -tr, m01 + m02 + m12, -det, tol);

  EigenData out;
  for (auto& [lam, mult] : clusters) {
    EigenPair p;
    p.value = lam;
    p.algebraic_mult = mult;
    MatX shifted = A;
    for (int i = 0; i < 3; ++i) shifted(i, i) -= lam;
    // rank with a floor that absorbs conjugation rounding
    MatX K = null_space<cplx>(shifted, std::max(tol, 1e-7));
    p.geometric_mult = std::max(1, static_cast<int>(K.cols()));
    for (int c = 0; c < K.cols(); ++c) p.vectors.push_back(K.col(c));
    if (p.vectors.empty()) {
      // Numerically defective; take the singular vector of least singular value.
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
      p.vectors.push_back(svd.matrixV().col(2));
    }
    out.pairs.push_back(std::move(p));
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) > std::abs(b.value);
    return std::arg(a.value) < std::arg(b.value);
  });
  out.diagonalizable = out.total_geometric() == 3;
  return out;
}

EigenData eigen3(const ProjMap<SurdComplex>& g, double tol) {
  const auto& A = g.matrix();
  if (A.rows() != 3) throw std::invalid_argument("eigen3: expects 3x3");
  bool upper = A(1, 0).is_zero() && A(2, 0).is_zero() && A(2, 1).is_zero();
  bool lower = A(0, 1).is_zero() && A(0, 2).is_zero() && A(1, 2).is_zero();
  if (!upper && !lower) throw UnsupportedExactCubicError();
  // Work in floating point from the exact diagonal, then reuse the float path
  // for the eigenvector extraction: the roots are exact by triangularity.
  MatX Af(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Af(i, j) = A(i, j).to_complex();
  return eigen3(ProjMapX(Af, tol), tol);
}

namespace {

Rationality resolve_rationality(double turns, const RationalityHint& hint, bool& provisional) {
  if (hint.kind != Rationality::Unknown) return hint.kind;
  provisional = true;
  return probe_angle(turns).rational ? Rationality::Rational : Rationality::Irrational;
}

}  // namespace

ElementClass classify_element(const ProjMapX& g, const RationalityHint& hint, double tol) {
  EigenData ed = eigen3(g, tol);
  double mx = 0;
  for (const auto& p : ed.pairs) mx = std::max(mx, std::abs(p.value));
  auto unit = [&](const cplx& v) { return std::abs(std::abs(v) - 1.0) <= tol * std::max(1.0, mx); };
  bool all_unit = true;
  for (const auto& p : ed.pairs) all_unit = all_unit && unit(p.value);

  ElementClass out{MajorClass::Elliptic, MinorClass::Regular, false};
  if (all_unit && ed.diagonalizable) {
    out.major = MajorClass::Elliptic;
    out.minor = ed.pairs.size() >= 3 ? MinorClass::Regular
                                     : (ed.pairs.size() == 2 ? MinorClass::ComplexReflection
                                                             : MinorClass::Regular);
    return out;
  }
  if (all_unit && !ed.diagonalizable) {
    out.major = MajorClass::Parabolic;
    // Unipotent iff some lift has all eigenvalues 1 iff the three eigenvalues
    // coincide (their product is a cube root of unity absorbed by the lift).
    if (ed.pairs.size() == 1) {
      out.minor = MinorClass::Unipotent;
    } else {
      // Repeated eigenvalue lambda = e^{2 pi i theta}; theta decides the tag.
      cplx lam = ed.pairs[0].algebraic_mult >= 2 ? ed.pairs[0].value : ed.pairs[1].value;
      for (const auto& p : ed.pairs)
        if (p.algebraic_mult >= 2) lam = p.value;
      double turns = std::arg(lam) / (2.0 * M_PI);
      Rationality r = resolve_rationality(turns, hint, out.provisional_rationality);
      out.minor = r == Rationality::Rational ? MinorClass::ElliptoParabolicRational
                                             : MinorClass::ElliptoParabolicIrrational;
    }
    return out;
  }

  out.major = MajorClass::Loxodromic;
  if (!ed.diagonalizable) {
    out.minor = MinorClass::LoxoParabolic;
    return out;
  }
  if (ed.pairs.size() == 2) {
    out.minor = MinorClass::ComplexHomothety;
    return out;
  }
  // Three distinct eigenvalues; screw iff exactly two share a modulus.
  std::array<double, 3> mods{std::abs(ed.pairs[0].value), std::abs(ed.pairs[1].value),
                             std::abs(ed.pairs[2].value)};
  int equal_i = -1, equal_j = -1;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(mods[i] - mods[j]) <= tol * std::max(1.0, mx)) {
        equal_i = i;
        equal_j = j;
      }
  if (equal_i < 0) {
    out.minor = MinorClass::StronglyLoxodromic;
    return out;
  }
  // lambda_1 / lambda_2 for the equal-modulus pair, sorted by argument in [0, 2pi).
  cplx a = ed.pairs[equal_i].value, b = ed.pairs[equal_j].value;
  double arga = std::arg(a), argb = std::arg(b);
  if (arga < 0) arga += 2 * M_PI;
  if (argb < 0) argb += 2 * M_PI;
  cplx ratio = arga <= argb ? a / b : b / a;
  double turns = std::arg(ratio) / (2.0 * M_PI);
  Rationality r = resolve_rationality(turns, hint, out.provisional_rationality);
  out.minor =
      r == Rationality::Rational ? MinorClass::ScrewRational : MinorClass::ScrewIrrational;
  return out;
}

std::optional<ProjPointX> dominant_vector(const ProjMapX& g, double tol) {
  EigenData ed = eigen3(g, tol);
  double mx = 0;
  for (const auto& p : ed.pairs) mx = std::max(mx, std::abs(p.value));
  // pairs sorted by descending modulus; proximal needs a strict, simple leader
  if (ed.pairs.empty()) return std::nullopt;
  if (ed.pairs[0].algebraic_mult != 1) return std::nullopt;
  if (ed.pairs.size() >= 2 &&
      std::abs(std::abs(ed.pairs[0].value) - std::abs(ed.pairs[1].value)) <=
          tol * std::max(1.0, mx))
    return std::nullopt;
  return ProjPointX(ed.pairs[0].vectors.at(0));
}

LimitSetDescriptor cyclic_kulkarni(const ProjMapX& g, double tol) {
  EigenData ed = eigen3(g, tol);
  ElementClass cls = classify_element(g, {}, tol);
  LimitSetDescriptor out;
  out.exactness = LimitSetDescriptor::Exactness::symbolic;

  auto simple_and_double = [&]() -> std::pair<const EigenPair*, const EigenPair*> {
    const EigenPair* simple = nullptr;
    const EigenPair* dbl = nullptr;
    for (const auto& p : ed.pairs) {
      if (p.algebraic_mult == 2) dbl = &p;
      if (p.algebraic_mult == 1) simple = &p;
    }
    return {simple, dbl};
  };

  switch (cls.minor) {
    case MinorClass::ComplexHomothety: {
      // diag(l^-2, l, l) pattern: isolated simple eigendirection plus the
      // line of the double eigenspace.
      auto [simple, dbl] = simple_and_double();
      if (!simple || !dbl || dbl->geometric_mult != 2) throw UnsupportedClassError();
      out.add_point(ProjPointX(simple->vectors[0]), tol);
      MatX B(3, 2);
      B.col(0) = dbl->vectors[0];
      B.col(1) = dbl->vectors[1];
      out.add_subspace(ProjSubspaceX(std::move(B), tol), tol);
      return out;
    }
    case MinorClass::LoxoParabolic: {
      // <e1,e2> u <e2,e3> in the eigenbasis: the line joining the two fixed
      // points and the invariant plane ker (A - l I)^2 of the double value.
      auto [simple, dbl] = simple_and_double();
      if (!simple || !dbl) throw UnsupportedClassError();
      MatX shifted = g.matrix();
      for (int i = 0; i < 3; ++i) shifted(i, i) -= dbl->value;
      MatX sq = shifted * shifted;
      MatX K = null_space<cplx>(sq, std::max(tol, 1e-7));
      if (K.cols() != 2) throw UnsupportedClassError();
      MatX L(3, 2);
      L.col(0) = simple->vectors[0];
      L.col(1) = dbl->vectors[0];
      out.add_subspace(ProjSubspaceX(std::move(L), tol), tol);
      out.add_subspace(ProjSubspaceX(std::move(K), tol), tol);
      return out;
    }
    case MinorClass::ElliptoParabolicRational:
    case MinorClass::ElliptoParabolicIrrational: {
      // <e1,e2>: the line joining the simple fixed point and the double one.
      auto [simple, dbl] = simple_and_double();
      if (!simple || !dbl) throw UnsupportedClassError();
      MatX L(3, 2);
      L.col(0) = simple->vectors[0];
      L.col(1) = dbl->vectors[0];
      out.add_subspace(ProjSubspaceX(std::move(L), tol), tol);
      return out;
    }
    default:
      throw UnsupportedClassError();
  }
}

namespace {

// Deterministic samples of a chordal ball: center plus points pushed toward
// random directions at radii up to r.
std::vector<ProjPointX> sample_ball(const RegionBall& ball, int samples, std::mt19937& rng) {
  std::vector<ProjPointX> out;
  out.push_back(ball.center);
  const int n1 = static_cast<int>(ball.center.lift().size());
  std::normal_distribution<double> gauss;
  VecX c = ball.center.lift();
  c /= c.norm();
  for (int s = 0; s < samples; ++s) {
    VecX d(n1);
    for (int i = 0; i < n1; ++i) d(i) = cplx(gauss(rng), gauss(rng));
    d -= c.dot(d) * c;
    double dn = d.norm();
    if (dn < 1e-12) continue;
    d /= dn;
    // chordal distance sin(theta); boundary-heavy sampling
    double frac = (s % 4 == 0) ? 1.0 : std::pow((s % 100) / 99.0, 0.5);
    double theta = std::asin(std::min(1.0, ball.radius * frac));
    VecX v = std::cos(theta) * c + std::sin(theta) * d;
    out.emplace_back(v);
  }
  return out;
}

bool in_ball(const ProjPointX& p, const RegionBall& ball, double slack) {
  return chordal_distance(p, ball.center) <= ball.radius + slack;
}

}  // namespace

bool verify_ping_pong(const std::vector<ProjMapX>& gens, const std::vector<RegionBall>& regions,
                      int samples, unsigned seed, double tol) {
  if (gens.size() != regions.size() || gens.empty())
    throw std::invalid_argument("verify_ping_pong: one region per generator");
  const int k = static_cast<int>(gens.size());
  // symmetric closure check: every generator's inverse must be present
  std::vector<int> inv_index(k, -1);
  for (int a = 0; a < k; ++a) {
    ProjMapX ia = gens[a].inverse();
    for (int b = 0; b < k; ++b)
      if (gens[b].equal(ia, std::max(tol, 1e-7))) inv_index[a] = b;
    if (inv_index[a] < 0)
      throw std::invalid_argument("verify_ping_pong: generator set not symmetric");
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (chordal_distance(regions[a].center, regions[b].center) <=
          regions[a].radius + regions[b].radius)
        throw RegionsOverlapError();

  std::mt19937 rng(seed);
  std::vector<std::vector<ProjPointX>> pts(k);
  for (int a = 0; a < k; ++a) pts[a] = sample_ball(regions[a], samples, rng);

  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (b == inv_index[a]) continue;
      for (const auto& p : pts[b]) {
        ProjPointX image = gens[a](p);
        if (!in_ball(image, regions[a], tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace projdyn
