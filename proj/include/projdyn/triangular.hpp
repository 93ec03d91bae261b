#pragma once

// Structure theory of upper-triangular discrete subgroups: the lambda
// morphisms, Core and cone, layer and F-class assignment, the commutative
// case-1 and diagonal Kulkarni classifiers, the four-layer decomposition
// with its rank bound, and a bounded-word normality validator.

#include <array>
#include <optional>

#include "projdyn/classify.hpp"
#include "projdyn/descriptor.hpp"
#include "projdyn/words.hpp"

namespace projdyn {

struct NotTriangularError : std::runtime_error {
  NotTriangularError() : std::runtime_error("matrix is not upper triangular") {}
};
struct UnresolvedFlagsError : std::runtime_error {
  UnresolvedFlagsError()
      : std::runtime_error("tri-state flags unresolved; supply exact data or flags") {}
};
struct NoLoxodromicError : std::runtime_error {
  NoLoxodromicError() : std::runtime_error("group contains no loxodromic element") {}
};

enum class TriBool { yes, no, unknown };

// ------------------------------------------------------- lambda morphisms

template <class S>
bool is_upper_triangular(const Mat<S>& m, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  double scale = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) scale = std::max(scale, T::abs(m(i, j)));
  for (int i = 1; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (!T::is_zero(m(i, j), scale, tol)) return false;
  return true;
}

// (lambda12, lambda23, lambda13) = (a11/a22, a22/a33, a11/a33)
template <class S>
std::array<S, 3> lambda_maps(const ProjMap<S>& g, double tol = kDefaultTol) {
  const auto& m = g.matrix();
  if (m.rows() != 3 || !is_upper_triangular(m, tol)) throw NotTriangularError();
  return {m(0, 0) / m(1, 1), m(1, 1) / m(2, 2), m(0, 0) / m(2, 2)};
}

enum class LayerTag { Layer1_Core, Layer2_AminusCore, Layer3_Ker23minusA, Layer4_rest };
enum class FClass { F1, F2, F3, F4 };

const char* to_string(LayerTag t);
const char* to_string(FClass f);

template <class S>
LayerTag layer_of(const ProjMap<S>& g, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  const auto& m = g.matrix();
  if (m.rows() != 3 || !is_upper_triangular(m, tol)) throw NotTriangularError();
  double scale = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) scale = std::max(scale, T::abs(m(i, j)));
  S one = T::from_int(1);
  bool l23_trivial = scalar_eq<S>(m(1, 1), m(2, 2), tol);
  bool unit_diag = l23_trivial && scalar_eq<S>(m(0, 0), m(1, 1), tol);
  bool a23_zero = T::is_zero(m(1, 2), scale, tol);
  (void)one;
  if (unit_diag && a23_zero) return LayerTag::Layer1_Core;
  if (unit_diag) return LayerTag::Layer2_AminusCore;
  if (l23_trivial) return LayerTag::Layer3_Ker23minusA;
  return LayerTag::Layer4_rest;
}

template <class S>
FClass f_class(const ProjMap<S>& g, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  const auto& m = g.matrix();
  if (m.rows() != 3 || !is_upper_triangular(m, tol)) throw NotTriangularError();
  double scale = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) scale = std::max(scale, T::abs(m(i, j)));
  bool z12 = T::is_zero(m(0, 1), scale, tol);
  bool z23 = T::is_zero(m(1, 2), scale, tol);
  if (z12 && z23) return FClass::F1;
  if (!z12 && z23) return FClass::F2;
  if (z12 && !z23) return FClass::F3;
  return FClass::F4;
}

// ------------------------------------------------------------ cone / Core

// g_{x,y} = [[1,x,y],[0,1,0],[0,0,1]]
template <class S>
ProjMap<S> core_element(const S& x, const S& y) {
  using T = scalar_traits<S>;
  Mat<S> m = Mat<S>::Constant(3, 3, T::from_int(0));
  m(0, 0) = m(1, 1) = m(2, 2) = T::from_int(1);
  m(0, 1) = x;
  m(0, 2) = y;
  return ProjMap<S>(std::move(m));
}

// ell_{x,y}: the line through e1 and [0 : -y : x]
template <class S>
ProjSubspace<S> cone_line(const S& x, const S& y, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  Mat<S> B = Mat<S>::Constant(3, 2, T::from_int(0));
  B(0, 0) = T::from_int(1);
  B(1, 1) = -y;
  B(2, 1) = x;
  return ProjSubspace<S>(std::move(B), tol);
}

// gamma(ell_{x,y}) = ell_{g33 x, g22 y - g23 x}
template <class S>
std::pair<S, S> cone_push(const ProjMap<S>& gamma, const S& x, const S& y,
                          double tol = kDefaultTol) {
  const auto& m = gamma.matrix();
  if (m.rows() != 3 || !is_upper_triangular(m, tol)) throw NotTriangularError();
  return {m(2, 2) * x, m(1, 1) * y - m(1, 2) * x};
}

struct ConeDescriptor {
  std::vector<std::pair<cplx, cplx>> generators;      // (x, y) per Core element
  std::vector<ProjSubspaceX> lines;                   // ell_{x,y}, deduplicated
};

ConeDescriptor cone_of(const std::vector<std::pair<cplx, cplx>>& core_xy,
                       double tol = kDefaultTol);

// ------------------------------------------------------------- case 1

struct WmuSpec {
  std::vector<cplx> w_gens;   // generators of the additive group W
  std::vector<cplx> mu_gens;  // mu on each generator
  // Exact data, when available: w generators in Q(i, sqrt d), and logs of mu
  // with Re = ln|mu| and Im = arg(mu)/2pi, both in Q(sqrt d).
  std::optional<std::vector<SurdComplex>> w_gens_exact;
  std::optional<std::vector<SurdComplex>> mu_log_gens;
  TriBool w_discrete = TriBool::unknown;
  TriBool mu_rational_rotation = TriBool::unknown;
  TriBool mu_irrational_rotation = TriBool::unknown;

  // gamma_w for w = sum n_j w_j: [[mu^-3, 0, 0], [0, 1, w], [0, 0, 1]]
  ProjMapX element(const std::vector<long long>& n) const;
};

enum class Case1 { C11, C12, C13, C14, C15, C16 };
enum class FStatus { holds, fails, unknown };

const char* to_string(Case1 c);
const char* to_string(FStatus f);

struct FProbePolicy {
  double annulus = 1e-3;  // |w mu^3| confined to [annulus, 1/annulus]
  double mu_first = 0.5;  // first witness needs |mu| at most this
  double mu_decay = 0.6;  // each witness |mu| <= decay * previous
  double w_growth = 2.0;  // each witness |w| >= growth * previous
  double band = 2.0;      // successive |w mu^3| within this factor
  int witnesses = 3;
};

struct FCandidate {
  double abs_w, abs_mu, value;  // value = |w| * |mu|^3
};

// Chain search over candidate lattice points; exposed for direct testing.
FStatus probe_condition_F_chain(std::vector<FCandidate> candidates, const FProbePolicy& policy);

FStatus probe_condition_F(const WmuSpec& spec, int search_bound, const FProbePolicy& policy = {});

// The four-branch Kulkarni formula of the case-1 theorem.
LimitSetDescriptor kulkarni_case1_descriptor(Case1 c, FStatus f);

struct Case1Result {
  Case1 case_tag;
  FStatus condition_f;
  LimitSetDescriptor kulkarni;
  // provenance of each tri-state decision
  std::string discrete_from, rational_from, irrational_from;
  bool provisional = false;
};

Case1Result classify_case1(const WmuSpec& spec, int search_bound,
                           const FProbePolicy& policy = {}, double tol = kDefaultTol);

// ------------------------------------------------------------- diagonal

struct DiagonalPairSpec {
  cplx alpha, beta;
  std::optional<SurdComplex> alpha_exact, beta_exact;
  RationalityHint alpha_arg_hint{}, beta_arg_hint{};
  std::optional<std::pair<long long, long long>> dependence;  // alpha^n = beta^m
};

enum class DiagCase { D1, D2, D3, D4, D5 };
const char* to_string(DiagCase c);

struct DiagonalResult {
  DiagCase case_tag;
  LimitSetDescriptor kulkarni;
  std::optional<std::pair<long long, long long>> dependence_found;
  bool assuming_independent = false;  // search exhausted without exact proof
};

DiagonalResult classify_diagonal(const DiagonalPairSpec& spec, int search_bound,
                                 double tol = kDefaultTol);

// ------------------------------------------------- layer decomposition

struct LayerDecomposition {
  int core_rank = 0;  // k
  int r = 0, m = 0, n = 0;
  bool bound_ok = true;  // k + r + m + n <= 4
  bool provisional = false;
  std::vector<std::string> core_witnesses, layer2_witnesses, layer3_witnesses, layer4_witnesses;
};

LayerDecomposition decompose_layers(const std::vector<ProjMapX>& gens, int word_bound = 3,
                                    int relation_bound = 12, double tol = kDefaultTol);

// ------------------------------------------------------------ normality

enum class NormalityStatus { confirmed, refuted, unknown };
const char* to_string(NormalityStatus s);

NormalityStatus verify_normality(const std::vector<ProjMapX>& sub_gens, const ProjMapX& g,
                                 int word_bound, double tol = kDefaultTol);

// Exact backend: the refutation path proves escapes from the Core lattice.
NormalityStatus verify_normality(const std::vector<ProjMap<SurdComplex>>& sub_gens,
                                 const ProjMap<SurdComplex>& g, int word_bound,
                                 double tol = kDefaultTol);

// ------------------------------------------------ shared rank machinery

// Rank of the additive subgroup of C generated by exact values: the Q-rank
// of their coefficient vectors over the basis {1, sqrt d} x {1, i}.
int additive_rank_exact(const std::vector<SurdComplex>& gens);

// Dimension over R of the real span, in {0, 1, 2}.
int real_span_dim_exact(const std::vector<SurdComplex>& gens);

// A finitely generated subgroup of (C, +) is discrete iff its rank equals
// the dimension of its real span.
bool additive_discrete_exact(const std::vector<SurdComplex>& gens);

// Rank of the multiplicative subgroup of C* generated by float values,
// via bounded integer-relation search on (ln|z|, arg z); provisional.
int multiplicative_rank_numeric(const std::vector<cplx>& values, int relation_bound,
                                double tol = kDefaultTol);

int additive_rank_numeric(const std::vector<cplx>& values, int relation_bound,
                          double tol = kDefaultTol);

}  // namespace projdyn
