#pragma once

// Points, subspaces, projective and quasi-projective maps of CP^n over a
// scalar backend S (float complex or exact surd complex), plus the basic
// constructions: joins, meets, duality, Plucker coordinates, 4-point and
// 4-line transitivity, polar hyperplanes.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "projdyn/scalar.hpp"

namespace projdyn {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatX = Mat<cplx>;
using VecX = Vec<cplx>;

struct IdenticalPointsError : std::runtime_error {
  IdenticalPointsError() : std::runtime_error("points coincide") {}
};
struct SameLineError : std::runtime_error {
  SameLineError() : std::runtime_error("lines coincide") {}
};
struct ZeroMatrixError : std::runtime_error {
  ZeroMatrixError() : std::runtime_error("zero matrix") {}
};
struct SingularMatrixError : std::runtime_error {
  SingularMatrixError() : std::runtime_error("matrix is singular") {}
};
struct DegenerateConfigurationError : std::runtime_error {
  DegenerateConfigurationError() : std::runtime_error("degenerate configuration") {}
};
struct NotGeneralPositionError : std::runtime_error {
  NotGeneralPositionError() : std::runtime_error("lines not in general position") {}
};
struct SignatureError : std::runtime_error {
  SignatureError() : std::runtime_error("hermitian form has wrong signature") {}
};

// ------------------------------------------------------------ elimination

// Row echelon reduction with backend-appropriate pivoting. Returns rank and
// leaves M in (unreduced) echelon form; pivot column indices appended.
template <class S>
int echelon(Mat<S>& M, double tol, std::vector<int>* pivot_cols = nullptr) {
  using T = scalar_traits<S>;
  const int rows = static_cast<int>(M.rows());
  const int cols = static_cast<int>(M.cols());
  double scale = 0;
  if constexpr (!T::is_exact) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) scale = std::max(scale, T::abs(M(i, j)));
  }
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    if constexpr (T::is_exact) {
      for (int i = r; i < rows; ++i)
        if (!M(i, c).is_zero()) {
          best = i;
          break;
        }
    } else {
      double bm = tol * std::max(1.0, scale);
      for (int i = r; i < rows; ++i) {
        double a = T::abs(M(i, c));
        if (a > bm) {
          bm = a;
          best = i;
        }
      }
    }
    if (best < 0) continue;
    if (best != r) M.row(best).swap(M.row(r));
    for (int i = r + 1; i < rows; ++i) {
      S f = M(i, c) / M(r, c);
      for (int j = c; j < cols; ++j) M(i, j) = M(i, j) - f * M(r, j);
      M(i, c) = T::from_int(0);
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

template <class S>
int rank_of(Mat<S> M, double tol = kDefaultTol) {
  return echelon(M, tol);
}

// Basis of the null space, as columns.
template <class S>
Mat<S> null_space(const Mat<S>& M, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  Mat<S> E = M;
  std::vector<int> piv;
  int r = echelon(E, tol, &piv);
  const int cols = static_cast<int>(M.cols());
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  Mat<S> K(cols, cols - r);
  int k = 0;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    Vec<S> x = Vec<S>::Constant(cols, T::from_int(0));
    x(fc) = T::from_int(1);
    // Back-substitute over the pivot rows.
    for (int pr = r - 1; pr >= 0; --pr) {
      int pc = piv[pr];
      S acc = T::from_int(0);
      for (int j = pc + 1; j < cols; ++j) acc = acc + E(pr, j) * x(j);
      x(pc) = -(acc / E(pr, pc));
    }
    K.col(k++) = x;
  }
  return K;
}

// Determinant by elimination. Pivots only give up at machine scale: a
// small pivot is not a rank decision here, badly scaled but nonsingular
// inputs (high powers, say) must keep their determinant.
template <class S>
S det_of(Mat<S> M, double = kDefaultTol) {
  using T = scalar_traits<S>;
  const int n = static_cast<int>(M.rows());
  Mat<S> E = M;
  S det = T::from_int(1);
  double scale = 0;
  if constexpr (!T::is_exact) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scale = std::max(scale, T::abs(E(i, j)));
  }
  for (int c = 0; c < n; ++c) {
    int best = -1;
    if constexpr (T::is_exact) {
      for (int i = c; i < n; ++i)
        if (!E(i, c).is_zero()) {
          best = i;
          break;
        }
    } else {
      double bm = 1e-300 + 0.0 * scale;
      for (int i = c; i < n; ++i)
        if (T::abs(E(i, c)) > bm) {
          bm = T::abs(E(i, c));
          best = i;
        }
    }
    if (best < 0) return T::from_int(0);
    if (best != c) {
      E.row(best).swap(E.row(c));
      det = -det;
    }
    det = det * E(c, c);
    for (int i = c + 1; i < n; ++i) {
      S f = E(i, c) / E(c, c);
      for (int j = c; j < n; ++j) E(i, j) = E(i, j) - f * E(c, j);
    }
  }
  return det;
}

template <class S>
Mat<S> invert(const Mat<S>& M, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  const int n = static_cast<int>(M.rows());
  Mat<S> A(n, 2 * n);
  A.leftCols(n) = M;
  A.rightCols(n) = Mat<S>::Constant(n, n, T::from_int(0));
  for (int i = 0; i < n; ++i) A(i, n + i) = T::from_int(1);
  std::vector<int> piv;
  // Pivots at machine scale: inversion must work on badly scaled inputs.
  int r = echelon(A, T::is_exact ? tol : 1e-15, &piv);
  if (r < n) throw SingularMatrixError();
  // Back-substitution to reduced form.
  for (int pr = n - 1; pr >= 0; --pr) {
    int pc = piv[pr];
    S d = A(pr, pc);
    for (int j = pc; j < 2 * n; ++j) A(pr, j) = A(pr, j) / d;
    for (int i = 0; i < pr; ++i) {
      S f = A(i, pc);
      for (int j = pc; j < 2 * n; ++j) A(i, j) = A(i, j) - f * A(pr, j);
    }
  }
  return A.rightCols(n);
}

// --------------------------------------------------------------- ProjPoint

template <class S>
class ProjPoint {
public:
  explicit ProjPoint(Vec<S> lift, double tol = kDefaultTol) : lift_(std::move(lift)) {
    canonicalize(tol);
  }

  static ProjPoint basis(int i, int dim_ambient) {
    Vec<S> v = Vec<S>::Constant(dim_ambient + 1, scalar_traits<S>::from_int(0));
    v(i) = scalar_traits<S>::from_int(1);
    return ProjPoint(std::move(v));
  }

  const Vec<S>& lift() const { return lift_; }
  int dim_ambient() const { return static_cast<int>(lift_.size()) - 1; }

  bool equal(const ProjPoint& o, double tol = kDefaultTol) const {
    if (lift_.size() != o.lift_.size()) return false;
    for (int i = 0; i < lift_.size(); ++i)
      if (!scalar_eq(lift_(i), o.lift_(i), tol)) return false;
    return true;
  }

private:
  Vec<S> lift_;

  void canonicalize(double tol) {
    using T = scalar_traits<S>;
    double mx = 0;
    for (int i = 0; i < lift_.size(); ++i) mx = std::max(mx, T::abs(lift_(i)));
    if (mx == 0) throw ZeroMatrixError();
    for (int i = 0; i < lift_.size(); ++i) {
      // zero test relative to the largest coordinate only: lifts may be
      // uniformly tiny
      if (T::is_exact ? !T::is_zero(lift_(i), mx, 0.0) : T::abs(lift_(i)) > tol * mx) {
        S inv = T::inv(lift_(i));
        for (int j = static_cast<int>(lift_.size()) - 1; j >= i; --j)
          lift_(j) = lift_(j) * inv;
        lift_(i) = T::from_int(1);
        return;
      }
      lift_(i) = T::from_int(0);
    }
    throw ZeroMatrixError();
  }
};

using ProjPointX = ProjPoint<cplx>;

// ------------------------------------------------------------ ProjSubspace

template <class S>
class ProjSubspace {
public:
  // Basis vectors are the columns.
  explicit ProjSubspace(Mat<S> basis, double tol = kDefaultTol) : basis_(std::move(basis)) {
    if (rank_of<S>(basis_.transpose(), tol) != basis_.cols())
      throw std::invalid_argument("ProjSubspace: basis not independent");
  }

  static ProjSubspace span(const std::vector<ProjPoint<S>>& pts, double tol = kDefaultTol) {
    Mat<S> B(pts.at(0).lift().size(), pts.size());
    for (size_t i = 0; i < pts.size(); ++i) B.col(static_cast<int>(i)) = pts[i].lift();
    return ProjSubspace(std::move(B), tol);
  }

  // Whole of CP^n has proj_dim n; a point proj_dim 0.
  int proj_dim() const { return static_cast<int>(basis_.cols()) - 1; }
  int dim_ambient() const { return static_cast<int>(basis_.rows()) - 1; }
  const Mat<S>& basis() const { return basis_; }

  bool contains(const ProjPoint<S>& p, double tol = kDefaultTol) const {
    Mat<S> M(basis_.rows(), basis_.cols() + 1);
    M.leftCols(basis_.cols()) = basis_;
    M.col(basis_.cols()) = p.lift();
    return rank_of<S>(M.transpose(), tol) == basis_.cols();
  }

  bool contains_subspace(const ProjSubspace& o, double tol = kDefaultTol) const {
    if (o.proj_dim() > proj_dim()) return false;
    Mat<S> M(basis_.rows(), basis_.cols() + o.basis_.cols());
    M.leftCols(basis_.cols()) = basis_;
    M.rightCols(o.basis_.cols()) = o.basis_;
    return rank_of<S>(M.transpose(), tol) == basis_.cols();
  }

  bool equal(const ProjSubspace& o, double tol = kDefaultTol) const {
    return proj_dim() == o.proj_dim() && contains_subspace(o, tol);
  }

  // Coefficient vector of a hyperplane (proj_dim = n-1): kernel of basis^T.
  Vec<S> hyperplane_coeffs(double tol = kDefaultTol) const {
    if (proj_dim() != dim_ambient() - 1)
      throw std::invalid_argument("hyperplane_coeffs: not a hyperplane");
    Mat<S> K = null_space<S>(Mat<S>(basis_.transpose()), tol);
    return K.col(0);
  }

  static ProjSubspace from_hyperplane_coeffs(const Vec<S>& coeffs, double tol = kDefaultTol) {
    Mat<S> row(1, coeffs.size());
    for (int i = 0; i < coeffs.size(); ++i) row(0, i) = coeffs(i);
    Mat<S> K = null_space<S>(row, tol);
    return ProjSubspace(std::move(K), tol);
  }

private:
  Mat<S> basis_;
};

using ProjSubspaceX = ProjSubspace<cplx>;

// ----------------------------------------------------------------- ProjMap

// The float backend keeps lifts det-normalized by the principal root; the
// exact backend works with an arbitrary nonzero lift (n+1-th roots rarely
// stay inside Q(i, sqrt d)) and compares projectively, which induces the
// same equivalence.
template <class S>
class ProjMap {
public:
  explicit ProjMap(Mat<S> m, double tol = kDefaultTol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("ProjMap: not square");
    if constexpr (scalar_traits<S>::is_exact) {
      S d = det_of<S>(m_, tol);
      if (d.is_zero()) throw SingularMatrixError();
      normalize(d);
    } else {
      // Singularity is a spectral decision, not a determinant-size one:
      // products of group elements can carry huge entries with det 1.
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m_);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= 1e-13 * sv(0)) throw SingularMatrixError();
      normalize(det_of<S>(m_, tol));
    }
  }

  static ProjMap identity(int n_plus_1) {
    Mat<S> I = Mat<S>::Constant(n_plus_1, n_plus_1, scalar_traits<S>::from_int(0));
    for (int i = 0; i < n_plus_1; ++i) I(i, i) = scalar_traits<S>::from_int(1);
    return ProjMap(std::move(I));
  }

  const Mat<S>& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

  // Group operations trust closure and skip the singularity check.
  ProjMap operator*(const ProjMap& o) const { return ProjMap(Mat<S>(m_ * o.m_), trusted{}); }

  ProjMap inverse(double tol = kDefaultTol) const {
    return ProjMap(invert<S>(m_, tol), trusted{});
  }

  ProjMap pow(long long e) const {
    ProjMap base = e >= 0 ? *this : inverse();
    long long k = e >= 0 ? e : -e;
    ProjMap acc = identity(size());
    while (k) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    return acc;
  }

  ProjPoint<S> operator()(const ProjPoint<S>& p) const {
    return ProjPoint<S>(Vec<S>(m_ * p.lift()));
  }

  ProjSubspace<S> operator()(const ProjSubspace<S>& sub) const {
    return ProjSubspace<S>(Mat<S>(m_ * sub.basis()));
  }

  // Equality in PSL(n+1): up to an (n+1)-th root of unity for the float
  // backend, plain projective equality for the exact backend.
  bool equal(const ProjMap& o, double tol = kDefaultTol) const {
    if (size() != o.size()) return false;
    if constexpr (scalar_traits<S>::is_exact) {
      return projectively_equal(o, tol);
    } else {
      const int n1 = size();
      for (int k = 0; k < n1; ++k) {
        cplx w = std::polar(1.0, 2.0 * M_PI * k / n1);
        bool ok = true;
        for (int i = 0; i < n1 && ok; ++i)
          for (int j = 0; j < n1 && ok; ++j)
            if (!scalar_eq<cplx>(m_(i, j) * w, o.m_(i, j), tol)) ok = false;
        if (ok) return true;
      }
      return false;
    }
  }

  double max_abs() const {
    double mx = 0;
    for (int i = 0; i < m_.rows(); ++i)
      for (int j = 0; j < m_.cols(); ++j)
        mx = std::max(mx, scalar_traits<S>::abs(m_(i, j)));
    return mx;
  }

private:
  Mat<S> m_;

  struct trusted {};
  ProjMap(Mat<S> m, trusted) : m_(std::move(m)) { normalize(det_of<S>(m_)); }

  void normalize(const S& det) {
    if constexpr (scalar_traits<S>::is_exact) {
      // Scale so the first nonzero entry (row-major) is 1.
      for (int i = 0; i < m_.rows(); ++i)
        for (int j = 0; j < m_.cols(); ++j)
          if (!m_(i, j).is_zero()) {
            S inv = scalar_traits<S>::inv(m_(i, j));
            m_ = m_ * inv;
            return;
          }
    } else {
      const int n1 = size();
      cplx d = det;
      double r = std::pow(std::abs(d), 1.0 / n1);
      double th = std::arg(d) / n1;
      cplx root = std::polar(r, th);
      m_ /= root;
    }
  }

  bool projectively_equal(const ProjMap& o, double tol) const {
    // Find the scale from the first significant entry, then compare.
    for (int i = 0; i < m_.rows(); ++i)
      for (int j = 0; j < m_.cols(); ++j) {
        if (!scalar_traits<S>::is_zero(m_(i, j), max_abs(), tol)) {
          if (scalar_traits<S>::is_zero(o.m_(i, j), o.max_abs(), tol)) return false;
          S f = o.m_(i, j) / m_(i, j);
          for (int a = 0; a < m_.rows(); ++a)
            for (int b = 0; b < m_.cols(); ++b)
              if (!scalar_eq<S>(m_(a, b) * f, o.m_(a, b), tol)) return false;
          return true;
        }
      }
    return false;
  }
};

using ProjMapX = ProjMap<cplx>;

// ------------------------------------------------------------ QuasiProjMap

template <class S>
class QuasiProjMap {
public:
  Mat<S> matrix;                          // scaled so the max-modulus entry is 1
  std::optional<ProjSubspace<S>> kernel;  // empty optional = empty kernel (proj_dim -1)
  ProjSubspace<S> image;

  int rank(double tol = kDefaultTol) const { return rank_of<S>(matrix, tol); }
};

using QuasiProjMapX = QuasiProjMap<cplx>;

template <class S>
QuasiProjMap<S> qp_from_matrix(Mat<S> M, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  double mx = 0;
  int bi = -1, bj = -1;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      double a = T::abs(M(i, j));
      if (a > mx) {
        mx = a;
        bi = i;
        bj = j;
      }
    }
  if (bi < 0 || mx == 0) throw ZeroMatrixError();
  S inv = T::inv(M(bi, bj));
  M = M * inv;

  Mat<S> K = null_space<S>(M, tol);
  std::optional<ProjSubspace<S>> ker;
  if (K.cols() > 0) ker = ProjSubspace<S>(std::move(K), tol);

  // Column space: echelon of M^T, keep pivot rows of the transpose.
  Mat<S> Mt = M.transpose();
  int r = echelon(Mt, tol);
  Mat<S> img(M.rows(), r);
  for (int i = 0; i < r; ++i) img.col(i) = Mt.row(i).transpose();
  return QuasiProjMap<S>{std::move(M), std::move(ker), ProjSubspace<S>(std::move(img), tol)};
}

// Evaluation away from the kernel.
template <class S>
ProjPoint<S> qp_apply(const QuasiProjMap<S>& q, const ProjPoint<S>& p) {
  return ProjPoint<S>(Vec<S>(q.matrix * p.lift()));
}

// ------------------------------------------------------------- operations

template <class S>
ProjSubspace<S> line_through(const ProjPoint<S>& p, const ProjPoint<S>& q,
                             double tol = kDefaultTol) {
  if (p.equal(q, tol)) throw IdenticalPointsError();
  Mat<S> B(p.lift().size(), 2);
  B.col(0) = p.lift();
  B.col(1) = q.lift();
  return ProjSubspace<S>(std::move(B), tol);
}

template <class S>
ProjPoint<S> intersect_lines(const ProjSubspace<S>& l1, const ProjSubspace<S>& l2,
                             double tol = kDefaultTol) {
  if (l1.proj_dim() != 1 || l2.proj_dim() != 1 || l1.dim_ambient() != 2)
    throw std::invalid_argument("intersect_lines: expects lines in CP^2");
  if (l1.equal(l2, tol)) throw SameLineError();
  Mat<S> rows(2, 3);
  rows.row(0) = l1.hyperplane_coeffs(tol).transpose();
  rows.row(1) = l2.hyperplane_coeffs(tol).transpose();
  Mat<S> K = null_space<S>(rows, tol);
  return ProjPoint<S>(K.col(0));
}

template <class S>
bool is_general_position(const std::vector<ProjSubspace<S>>& lines, double tol = kDefaultTol) {
  const int k = static_cast<int>(lines.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (lines[i].equal(lines[j], tol)) return false;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      ProjPoint<S> p = intersect_lines(lines[i], lines[j], tol);
      for (int m = j + 1; m < k; ++m)
        if (lines[m].contains(p, tol)) return false;
    }
  return true;
}

// Action on the dual space: coefficient vectors transform by the inverse
// transpose of a lift.
template <class S>
ProjSubspace<S> dual_action(const ProjMap<S>& g, const ProjSubspace<S>& line,
                            double tol = kDefaultTol) {
  Vec<S> c = line.hyperplane_coeffs(tol);
  Mat<S> git = invert<S>(g.matrix(), tol).transpose();
  Vec<S> c2 = git * c;
  return ProjSubspace<S>::from_hyperplane_coeffs(c2, tol);
}

// Plucker embedding: wedge of the basis vectors in lexicographic index order.
template <class S>
ProjPoint<S> plucker(const ProjSubspace<S>& sub, double tol = kDefaultTol) {
  const int n1 = sub.dim_ambient() + 1;
  const int k = sub.proj_dim() + 1;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<S> coords;
  // Iterate k-subsets of {0..n}, lexicographically.
  while (true) {
    Mat<S> minor(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor(r, c) = sub.basis()(idx[r], c);
    coords.push_back(det_of<S>(minor, tol));
    int i = k - 1;
    while (i >= 0 && idx[i] == n1 - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  Vec<S> v(static_cast<int>(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i) v(static_cast<int>(i)) = coords[i];
  return ProjPoint<S>(std::move(v), tol);
}

// Unique g with g(src_i) = dst_i for four points of CP^2, no 3 collinear.
template <class S>
ProjMap<S> transform_from_point_correspondence(const std::vector<ProjPoint<S>>& src,
                                               const std::vector<ProjPoint<S>>& dst,
                                               double tol = kDefaultTol) {
  if (src.size() != 4 || dst.size() != 4)
    throw std::invalid_argument("transform_from_point_correspondence: need 4+4 points");
  auto frame = [&](const std::vector<ProjPoint<S>>& pts) -> Mat<S> {
    Mat<S> M(3, 3);
    for (int j = 0; j < 3; ++j) M.col(j) = pts[j].lift();
    if (rank_of<S>(M, tol) < 3) throw DegenerateConfigurationError();
    Vec<S> c = invert<S>(M, tol) * pts[3].lift();
    for (int j = 0; j < 3; ++j) {
      if (scalar_traits<S>::is_zero(c(j), 1.0, tol)) throw DegenerateConfigurationError();
      M.col(j) = M.col(j) * c(j);
    }
    return M;
  };
  Mat<S> A = frame(src);
  Mat<S> B = frame(dst);
  return ProjMap<S>(Mat<S>(B * invert<S>(A, tol)), tol);
}

// 4-transitivity on lines, via the pairwise intersection points
// p1 = l1^l3, p2 = l2^l3, p3 = l2^l4, p4 = l1^l4.
template <class S>
ProjMap<S> transform_from_line_correspondence(const std::vector<ProjSubspace<S>>& src,
                                              const std::vector<ProjSubspace<S>>& dst,
                                              double tol = kDefaultTol) {
  if (src.size() != 4 || dst.size() != 4)
    throw std::invalid_argument("transform_from_line_correspondence: need 4+4 lines");
  if (!is_general_position(src, tol) || !is_general_position(dst, tol))
    throw NotGeneralPositionError();
  auto corners = [&](const std::vector<ProjSubspace<S>>& l) {
    return std::vector<ProjPoint<S>>{
        intersect_lines(l[0], l[2], tol), intersect_lines(l[1], l[2], tol),
        intersect_lines(l[1], l[3], tol), intersect_lines(l[0], l[3], tol)};
  };
  return transform_from_point_correspondence(corners(src), corners(dst), tol);
}

// --------------------------------------------------------- HermitianForm

template <class S>
class HermitianForm {
public:
  explicit HermitianForm(Mat<S> m, double tol = kDefaultTol) : m_(std::move(m)) {
    using T = scalar_traits<S>;
    const int n1 = static_cast<int>(m_.rows());
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        if (!scalar_eq<S>(m_(i, j), T::conj(m_(j, i)), tol))
          throw std::invalid_argument("HermitianForm: matrix not hermitian");
    if (negative_directions() != 1) throw SignatureError();
  }

  // The paper's basis: antidiagonal ones in the corners, identity middle.
  static HermitianForm corner_form(int n) {
    Mat<S> F = Mat<S>::Constant(n + 1, n + 1, scalar_traits<S>::from_int(0));
    F(0, n) = scalar_traits<S>::from_int(1);
    F(n, 0) = scalar_traits<S>::from_int(1);
    for (int j = 1; j < n; ++j) F(j, j) = scalar_traits<S>::from_int(1);
    return HermitianForm(std::move(F));
  }

  const Mat<S>& matrix() const { return m_; }

  S inner(const Vec<S>& v, const Vec<S>& w) const {
    using T = scalar_traits<S>;
    S acc = T::from_int(0);
    for (int j = 0; j < m_.rows(); ++j)
      for (int k = 0; k < m_.cols(); ++k) acc = acc + m_(j, k) * v(j) * T::conj(w(k));
    return acc;
  }

private:
  Mat<S> m_;

  int negative_directions() const {
    // Signature check runs in floating point for either backend.
    Eigen::MatrixXcd F(m_.rows(), m_.cols());
    for (int i = 0; i < m_.rows(); ++i)
      for (int j = 0; j < m_.cols(); ++j) F(i, j) = scalar_traits<S>::to_complex(m_(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F);
    int neg = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 0) ++neg;
    return neg;
  }
};

using HermitianFormX = HermitianForm<cplx>;

// p^perp = {[w] : <w,p> = 0}; coefficient vector F * conj(p).
template <class S>
ProjSubspace<S> polar_hyperplane(const ProjPoint<S>& p, const HermitianForm<S>& form,
                                 double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  const auto& F = form.matrix();
  Vec<S> coeffs = Vec<S>::Constant(F.rows(), T::from_int(0));
  for (int j = 0; j < F.rows(); ++j) {
    S acc = T::from_int(0);
    for (int k = 0; k < F.cols(); ++k) acc = acc + F(j, k) * T::conj(p.lift()(k));
    coeffs(j) = acc;
  }
  return ProjSubspace<S>::from_hyperplane_coeffs(coeffs, tol);
}

// -------------------------------------------------- float-only helpers

// Fubini-Study chordal distance (sine of the angle) between points.
inline double chordal_distance(const ProjPointX& p, const ProjPointX& q) {
  cplx ip = 0;
  double np = 0, nq = 0;
  for (int i = 0; i < p.lift().size(); ++i) {
    ip += std::conj(p.lift()(i)) * q.lift()(i);
    np += std::norm(p.lift()(i));
    nq += std::norm(q.lift()(i));
  }
  double c2 = std::norm(ip) / (np * nq);
  return std::sqrt(std::max(0.0, 1.0 - c2));
}

// Distance from a point to a subspace: sine of the principal angle.
inline double chordal_distance(const ProjPointX& p, const ProjSubspaceX& sub) {
  // Orthonormalize the basis, subtract the projection.
  MatX B = sub.basis();
  std::vector<VecX> ortho;
  for (int c = 0; c < B.cols(); ++c) {
    VecX v = B.col(c);
    for (const auto& u : ortho) v -= u.dot(v) * u;  // Eigen dot conjugates the left arg
    double n = v.norm();
    if (n > 1e-13) ortho.push_back(v / n);
  }
  VecX v = p.lift();
  v /= v.norm();
  VecX proj = VecX::Zero(v.size());
  for (const auto& u : ortho) proj += u.dot(v) * u;
  return std::min(1.0, (v - proj).norm());
}

}  // namespace projdyn
