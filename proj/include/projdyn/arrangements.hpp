#pragma once

// The parameter space of 4 complex lines in general position in C^2 (the
// line at infinity being the fifth projective line), tangency-to-ball
// configurations, special points and lines, forbidden parameters, and the
// slice geometry feeding the counting module. Defaults to the exact
// Q(i, sqrt 2) backend; the float backend instantiates the same templates.

#include <optional>

#include "projdyn/projective.hpp"

namespace projdyn {

struct NotInPError : std::runtime_error {
  NotInPError() : std::runtime_error("parameter outside the space P") {}
};
struct PointOnHError : std::runtime_error {
  PointOnHError() : std::runtime_error("base point lies on a special line") {}
};
struct ForbiddenEtaError : std::runtime_error {
  ForbiddenEtaError() : std::runtime_error("eta lies in the forbidden set C0") {}
};

template <class S>
struct ArrangementParam {
  S zeta1, zeta2;
};

template <class S>
bool in_parameter_space(const S& z1, const S& z2, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  S one = T::from_int(1);
  auto eq = [&](const S& a, const S& b) { return scalar_eq<S>(a, b, tol); };
  if (eq(z1, T::from_int(0)) || eq(z1, one)) return false;
  if (eq(z2, T::from_int(0)) || eq(z2, one) || eq(z2, z1)) return false;
  return true;
}

// alpha0 = 1 / (sqrt 2 (1 + sqrt 2)) = 1 - sqrt(2)/2
inline SurdReal alpha0_exact() {
  return SurdReal(BigRational(1), BigRational(0) - BigRational(1, 2), 2);
}

// {0, 1, alpha0, 3 - 2 sqrt 2, 2 - sqrt 2}
std::vector<SurdReal> tangent_forbidden_set();

// Affine point (x, y) as [x : y : 1].
template <class S>
ProjPoint<S> affine_point(const S& x, const S& y) {
  Vec<S> v(3);
  v(0) = x;
  v(1) = y;
  v(2) = scalar_traits<S>::from_int(1);
  return ProjPoint<S>(std::move(v));
}

// The standard lines l0, l1, l2, l3^Upsilon, l4 (l4 = line at infinity).
template <class S>
std::vector<ProjSubspace<S>> standard_lines(const ArrangementParam<S>& par,
                                            double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  auto pt = [&](long long a, long long b, long long c) {
    Vec<S> v(3);
    v(0) = T::from_int(a);
    v(1) = T::from_int(b);
    v(2) = T::from_int(c);
    return ProjPoint<S>(std::move(v));
  };
  std::vector<ProjSubspace<S>> lines;
  lines.push_back(line_through(pt(1, 0, 0), pt(0, 0, 1), tol));  // l0: y = 0
  lines.push_back(line_through(pt(-1, 1, 0), pt(1, 0, 1), tol)); // l1 through (1,0),(0,1)
  lines.push_back(line_through(pt(0, 1, 0), pt(0, 0, 1), tol));  // l2: x = 0
  {
    Vec<S> a(3), b(3);
    a(0) = -par.zeta1;
    a(1) = par.zeta2;
    a(2) = T::from_int(0);
    b(0) = par.zeta1;
    b(1) = T::from_int(0);
    b(2) = T::from_int(1);
    lines.push_back(line_through(ProjPoint<S>(std::move(a)), ProjPoint<S>(std::move(b)), tol));
  }
  lines.push_back(line_through(pt(1, 0, 0), pt(0, 1, 0), tol));  // l4: infinity
  return lines;
}

// All ten pairwise intersections q_{i,j}, in the paper's closed forms,
// indexed by (i, j) with 0 <= i < j <= 4.
template <class S>
std::vector<std::pair<std::pair<int, int>, ProjPoint<S>>> intersections_q(
    const ArrangementParam<S>& par, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  if (!in_parameter_space(par.zeta1, par.zeta2, tol)) throw NotInPError();
  const S one = T::from_int(1);
  const S& z1 = par.zeta1;
  const S& z2 = par.zeta2;
  auto proj = [&](S a, S b, S c) {
    Vec<S> v(3);
    v(0) = a;
    v(1) = b;
    v(2) = c;
    return ProjPoint<S>(std::move(v));
  };
  std::vector<std::pair<std::pair<int, int>, ProjPoint<S>>> out;
  out.push_back({{0, 1}, affine_point(one, T::from_int(0))});
  out.push_back({{0, 2}, affine_point(T::from_int(0), T::from_int(0))});
  out.push_back({{0, 3}, affine_point(z1, T::from_int(0))});
  out.push_back({{0, 4}, proj(one, T::from_int(0), T::from_int(0))});
  out.push_back({{1, 2}, affine_point(T::from_int(0), one)});
  {
    S den = z1 - z2;
    out.push_back({{1, 3}, affine_point(z1 * (one - z2) / den, z2 * (z1 - one) / den)});
  }
  out.push_back({{1, 4}, proj(T::from_int(0) - one, one, T::from_int(0))});
  out.push_back({{2, 3}, affine_point(T::from_int(0), z2)});
  out.push_back({{2, 4}, proj(T::from_int(0), one, T::from_int(0))});
  out.push_back({{3, 4}, proj(T::from_int(0) - z1, z2, T::from_int(0))});
  return out;
}

// The special lines H_{i,j,k,m} joining q_{i,j} and q_{k,m} over disjoint
// index pairs (15 lines).
template <class S>
std::vector<ProjSubspace<S>> special_lines_H(const ArrangementParam<S>& par,
                                             double tol = kDefaultTol) {
  auto qs = intersections_q(par, tol);
  auto find = [&](int i, int j) -> const ProjPoint<S>& {
    for (const auto& [ij, p] : qs)
      if (ij.first == i && ij.second == j) return p;
    throw std::logic_error("q index");
  };
  std::vector<ProjSubspace<S>> out;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = i; k < 5; ++k)
        for (int m = k + 1; m < 5; ++m) {
          if (!(k > i || (k == i && m > j))) continue;
          if (k == i || k == j || m == i || m == j) continue;
          out.push_back(line_through(find(i, j), find(k, m), tol));
        }
  return out;
}

// The nine closed-form forbidden parameters C0 for a base point z = (z1, z2).
template <class S>
std::vector<S> forbidden_eta(const ArrangementParam<S>& par, const S& z1, const S& z2,
                             double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  ProjPoint<S> zp = affine_point(z1, z2);
  for (const auto& h : special_lines_H(par, tol))
    if (h.contains(zp, tol)) throw PointOnHError();
  const S one = T::from_int(1);
  const S& c1 = par.zeta1;
  const S& c2 = par.zeta2;
  // The L_{2,3} entry carries the denominator zeta2 - z2; the line through
  // z and q_{2,3} = (0, zeta2) meets l0 at x = zeta2 z1 / (zeta2 - z2).
  return {
      T::from_int(0),
      one,
      c1,
      z1 / (one - z2),
      (c2 * z1 + c1 * z2 - c1 * c2 * (z1 + z2)) / (c2 * (one - c1) + z2 * (c1 - c2)),
      z1 + z2,
      c2 * z1 / (c2 - z2),
      z1,
      (c2 * z1 + c1 * z2) / c2,
  };
}

// The slice line L_eta through z and (eta, 0); empty eta encodes infinity
// (the line through z with the direction of l0).
template <class S>
ProjSubspace<S> slice_line(const S& z1, const S& z2, const std::optional<S>& eta,
                           double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  ProjPoint<S> zp = affine_point(z1, z2);
  if (eta) return line_through(zp, affine_point(*eta, T::from_int(0)), tol);
  Vec<S> dir(3);
  dir(0) = T::from_int(1);
  dir(1) = T::from_int(0);
  dir(2) = T::from_int(0);
  return line_through(zp, ProjPoint<S>(std::move(dir)), tol);
}

// Number of distinct points of L_eta ^ (l0 u ... u l4): 4 iff eta in C0
// (or infinity), else 5. Decided by actual pairwise coincidence testing.
template <class S>
int intersection_count(const ArrangementParam<S>& par, const S& z1, const S& z2,
                       const std::optional<S>& eta, double tol = kDefaultTol) {
  ProjPoint<S> zp = affine_point(z1, z2);
  for (const auto& h : special_lines_H(par, tol))
    if (h.contains(zp, tol)) throw PointOnHError();
  auto lines = standard_lines(par, tol);
  ProjSubspace<S> L = slice_line(z1, z2, eta, tol);
  std::vector<ProjPoint<S>> pts;
  for (const auto& l : lines) {
    ProjPoint<S> p = intersect_lines(L, l, tol);
    bool dup = false;
    for (const auto& q : pts) dup = dup || q.equal(p, tol);
    if (!dup) pts.push_back(std::move(p));
  }
  return static_cast<int>(pts.size());
}

template <class S>
struct SliceGeometry {
  S z1, z2, eta;
  std::array<ProjPoint<S>, 4> P;  // L_eta ^ l_i for i = 0..3
  std::array<S, 4> p;             // parameters with h_eta(p_i) = P_i
};

// h_eta(xi) = (z1 + xi (eta - z1), (1 - xi) z2)
template <class S>
ProjPoint<S> h_eta(const S& z1, const S& z2, const S& eta, const S& xi) {
  using T = scalar_traits<S>;
  return affine_point(z1 + xi * (eta - z1), (T::from_int(1) - xi) * z2);
}

template <class S>
SliceGeometry<S> slice_points(const ArrangementParam<S>& par, const S& z1, const S& z2,
                              const S& eta, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  for (const auto& f : forbidden_eta(par, z1, z2, tol))
    if (scalar_eq<S>(f, eta, tol)) throw ForbiddenEtaError();
  const S one = T::from_int(1);
  const S& c1 = par.zeta1;
  const S& c2 = par.zeta2;
  SliceGeometry<S> out{z1, z2, eta, {affine_point(eta, T::from_int(0)),
                                     affine_point(one, T::from_int(0)),
                                     affine_point(one, T::from_int(0)),
                                     affine_point(one, T::from_int(0))},
                       {one, one, one, one}};
  // P_1, P_2 and the parameters, in the closed forms that do not depend on
  // the arrangement parameter. P_1 = h_eta(p_1) lies on x + y = 1, which
  // fixes the sign of its second coordinate as (1 - eta) z2 / den.
  S den1 = z1 + z2 - eta;
  out.P[1] = affine_point((z1 + eta * (z2 - one)) / den1, (one - eta) * z2 / den1);
  out.p[1] = (z1 + z2 - one) / den1;
  S den2 = eta - z1;
  out.P[2] = affine_point(T::from_int(0), eta * z2 / den2);
  out.p[2] = z1 / (z1 - eta);
  // P_3, p_3 depend on the parameter.
  S den3 = z2 * c1 + (z1 - eta) * c2;
  out.P[3] = affine_point(c1 * (eta * (z2 - c2) + z1 * c2) / den3, z2 * c2 * (c1 - eta) / den3);
  out.p[3] = (z2 * c1 + c2 * (z1 - c1)) / den3;
  // verify h_eta(p_i) = P_i
  for (int i = 0; i < 4; ++i) {
    if (!h_eta(z1, z2, eta, out.p[i]).equal(out.P[i], std::max(tol, 1e-9)))
      throw std::logic_error("slice_points: parametrization mismatch");
  }
  return out;
}

// Normalizes four affine lines in general position to {l0, l1, l2, l3^par}
// with the line at infinity fixed, returning the transform and the
// recovered parameter.
template <class S>
std::pair<ProjMap<S>, ArrangementParam<S>> normalize_arrangement(
    const std::vector<ProjSubspace<S>>& lines, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  if (lines.size() != 4) throw std::invalid_argument("normalize_arrangement: need 4 lines");
  ProjSubspace<S> infinity = line_through(ProjPoint<S>::basis(0, 2), ProjPoint<S>::basis(1, 2), tol);
  for (const auto& l : lines)
    if (l.equal(infinity, tol)) throw NotGeneralPositionError();
  std::vector<ProjSubspace<S>> five = lines;
  five.push_back(infinity);
  if (!is_general_position(five, tol)) throw NotGeneralPositionError();

  // Reference parameter only fixes the targets of l0, l1, l2, l4; any value
  // in P works, the recovered parameter comes from g(l3).
  ArrangementParam<S> ref{T::from_int(2), T::from_int(3)};
  auto std5 = standard_lines(ref, tol);
  std::vector<ProjSubspace<S>> src{lines[0], lines[1], lines[2], infinity};
  std::vector<ProjSubspace<S>> dst{std5[0], std5[1], std5[2], std5[4]};
  ProjMap<S> g = transform_from_line_correspondence(src, dst, tol);

  ProjSubspace<S> l3 = g(lines[3]);
  // zeta1 from l3 ^ l0 = (zeta1, 0); zeta2 from l3 ^ l2 = (0, zeta2).
  ProjPoint<S> a = intersect_lines(l3, std5[0], tol);
  ProjPoint<S> b = intersect_lines(l3, std5[2], tol);
  if (scalar_traits<S>::is_zero(a.lift()(2), 1.0, tol) ||
      scalar_traits<S>::is_zero(b.lift()(2), 1.0, tol))
    throw NotGeneralPositionError();
  ArrangementParam<S> par{a.lift()(0) / a.lift()(2), b.lift()(1) / b.lift()(2)};
  if (!in_parameter_space(par.zeta1, par.zeta2, tol)) throw NotGeneralPositionError();
  return {std::move(g), std::move(par)};
}

// ----------------------------------------------------------- tangency

// Rational point on the real slice of the sphere S with center
// (alpha0, alpha0) and radius alpha0: (alpha0 (1 + cos), alpha0 (1 + sin))
// with (cos, sin) = ((1 - t^2) / (1 + t^2), 2t / (1 + t^2)).
std::pair<SurdComplex, SurdComplex> sphere_point(const BigRational& t);

// Complex tangent line to the sphere at a point of S.
ProjSubspace<SurdComplex> tangent_line_at(const SurdComplex& z1, const SurdComplex& z2,
                                          double tol = kDefaultTol);

// dist(center, line)^2 - r^2 up to the positive factor |direction|^2;
// exactly zero iff the line is tangent to the sphere.
SurdReal tangency_residual(const ProjSubspace<SurdComplex>& line);

// The l0-intersection parameter xi of the tangent line at a sphere point,
// via the paper's closed form.
SurdComplex xi_of_tangent_at(const SurdComplex& z1, const SurdComplex& z2);

}  // namespace projdyn
