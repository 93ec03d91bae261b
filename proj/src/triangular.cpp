#include "projdyn/triangular.hpp"

#include <cmath>
#include <functional>

#include "projdyn/qp_limits.hpp"

namespace projdyn {

const char* to_string(LayerTag t) {
  switch (t) {
    case LayerTag::Layer1_Core: return "layer1-core";
    case LayerTag::Layer2_AminusCore: return "layer2-A-minus-core";
    case LayerTag::Layer3_Ker23minusA: return "layer3-ker23-minus-A";
    case LayerTag::Layer4_rest: return "layer4";
  }
  return "?";
}

const char* to_string(FClass f) {
  switch (f) {
    case FClass::F1: return "F1";
    case FClass::F2: return "F2";
    case FClass::F3: return "F3";
    case FClass::F4: return "F4";
  }
  return "?";
}

const char* to_string(Case1 c) {
  switch (c) {
    case Case1::C11: return "C1.1";
    case Case1::C12: return "C1.2";
    case Case1::C13: return "C1.3";
    case Case1::C14: return "C1.4";
    case Case1::C15: return "C1.5";
    case Case1::C16: return "C1.6";
  }
  return "?";
}

const char* to_string(FStatus f) {
  switch (f) {
    case FStatus::holds: return "holds";
    case FStatus::fails: return "fails";
    case FStatus::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(DiagCase c) {
  switch (c) {
    case DiagCase::D1: return "D1";
    case DiagCase::D2: return "D2";
    case DiagCase::D3: return "D3";
    case DiagCase::D4: return "D4";
    case DiagCase::D5: return "D5";
  }
  return "?";
}

const char* to_string(NormalityStatus s) {
  switch (s) {
    case NormalityStatus::confirmed: return "confirmed";
    case NormalityStatus::refuted: return "refuted";
    case NormalityStatus::unknown: return "unknown";
  }
  return "?";
}

ConeDescriptor cone_of(const std::vector<std::pair<cplx, cplx>>& core_xy, double tol) {
  ConeDescriptor out;
  out.generators = core_xy;
  for (const auto& [x, y] : core_xy) {
    if (std::abs(x) < tol && std::abs(y) < tol) continue;
    ProjSubspaceX l = cone_line<cplx>(x, y, tol);
    bool dup = false;
    for (const auto& k : out.lines) dup = dup || k.equal(l, tol);
    if (!dup) out.lines.push_back(std::move(l));
  }
  return out;
}

// -------------------------------------------------- exact rational rank

namespace {

// Gaussian elimination rank over Q.
int rational_rank(std::vector<std::vector<BigRational>> rows) {
  if (rows.empty()) return 0;
  const size_t cols = rows[0].size();
  int rank = 0;
  size_t rr = 0;
  for (size_t c = 0; c < cols && rr < rows.size(); ++c) {
    size_t p = rr;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rr]);
    for (size_t i = rr + 1; i < rows.size(); ++i) {
      if (rows[i][c].is_zero()) continue;
      BigRational f = rows[i][c] / rows[rr][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] = rows[i][j] - f * rows[rr][j];
    }
    ++rank;
    ++rr;
  }
  return rank;
}

// Basis of the rational kernel of the linear map given by column vectors:
// solutions n with sum_j n_j col_j = 0; returned as rational vectors.
std::vector<std::vector<BigRational>> rational_kernel(
    const std::vector<std::vector<BigRational>>& cols) {
  const size_t k = cols.size();
  if (k == 0) return {};
  const size_t m = cols[0].size();
  // Row echelon on the m x k matrix.
  std::vector<std::vector<BigRational>> rows(m, std::vector<BigRational>(k));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < m; ++i) rows[i][j] = cols[j][i];
  std::vector<int> pivot_col;
  size_t rr = 0;
  for (size_t c = 0; c < k && rr < m; ++c) {
    size_t p = rr;
    while (p < m && rows[p][c].is_zero()) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[rr]);
    for (size_t i = 0; i < m; ++i) {
      if (i == rr || rows[i][c].is_zero()) continue;
      BigRational f = rows[i][c] / rows[rr][c];
      for (size_t j = 0; j < k; ++j) rows[i][j] = rows[i][j] - f * rows[rr][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++rr;
  }
  std::vector<bool> is_pivot(k, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<BigRational>> basis;
  for (size_t fc = 0; fc < k; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<BigRational> v(k, BigRational(0));
    v[fc] = BigRational(1);
    for (size_t pr = 0; pr < pivot_col.size(); ++pr) {
      size_t pc = pivot_col[pr];
      v[pc] = BigRational(0) - rows[pr][fc] / rows[pr][pc];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<BigRational> surd_coords(const SurdComplex& z) {
  return {z.real().rational_part(), z.real().surd_part(), z.imag().rational_part(),
          z.imag().surd_part()};
}

}  // namespace

int additive_rank_exact(const std::vector<SurdComplex>& gens) {
  std::vector<std::vector<BigRational>> rows;
  for (const auto& g : gens) rows.push_back(surd_coords(g));
  return rational_rank(std::move(rows));
}

int real_span_dim_exact(const std::vector<SurdComplex>& gens) {
  std::vector<const SurdComplex*> nonzero;
  for (const auto& g : gens)
    if (!g.is_zero()) nonzero.push_back(&g);
  if (nonzero.empty()) return 0;
  for (size_t i = 0; i < nonzero.size(); ++i)
    for (size_t j = i + 1; j < nonzero.size(); ++j) {
      SurdReal cross = nonzero[i]->real() * nonzero[j]->imag() -
                       nonzero[j]->real() * nonzero[i]->imag();
      if (!cross.is_zero()) return 2;
    }
  return 1;
}

bool additive_discrete_exact(const std::vector<SurdComplex>& gens) {
  return additive_rank_exact(gens) == real_span_dim_exact(gens);
}

// ---------------------------------------------- numeric relation search

namespace {

// Is there a nonzero integer vector n in the ball with |sum n_j v_j| small,
// requiring a nonzero coefficient on the last vector? Vectors live in R^d;
// when mod_one is set the last coordinate is only defined modulo 1.
bool has_relation_with_last(const std::vector<std::vector<double>>& vecs, int bound, double tol,
                            bool mod_one) {
  const int k = static_cast<int>(vecs.size());
  if (k == 0) return false;
  const size_t d = vecs[0].size();
  std::vector<long long> n(k, -bound);
  for (;;) {
    if (n[k - 1] != 0) {
      double worst = 0;
      for (size_t c = 0; c < d; ++c) {
        double acc = 0;
        for (int j = 0; j < k; ++j) acc += static_cast<double>(n[j]) * vecs[j][c];
        if (mod_one && c + 1 == d) acc -= std::round(acc);
        worst = std::max(worst, std::abs(acc));
      }
      if (worst <= tol) return true;
    }
    int i = 0;
    while (i < k && n[i] == bound) n[i++] = -bound;
    if (i == k) break;
    ++n[i];
  }
  return false;
}

// Greedy rank of the Z-span of real vectors: grow an independent basis,
// testing each candidate for a bounded integer relation against it.
int greedy_lattice_rank(const std::vector<std::vector<double>>& vecs, int bound, double tol,
                        bool mod_one, int max_rank) {
  std::vector<std::vector<double>> basis;
  for (const auto& v : vecs) {
    double norm = 0;
    for (double c : v) norm = std::max(norm, std::abs(c));
    if (norm <= tol) continue;
    bool dup = false;
    for (const auto& b : basis) {
      double d = 0;
      for (size_t c = 0; c < v.size(); ++c) d = std::max(d, std::abs(b[c] - v[c]));
      if (d <= tol) dup = true;
    }
    if (dup) continue;
    if (static_cast<int>(basis.size()) >= max_rank) continue;
    std::vector<std::vector<double>> trial = basis;
    trial.push_back(v);
    if (!has_relation_with_last(trial, bound, tol, mod_one)) basis.push_back(v);
  }
  return static_cast<int>(basis.size());
}

}  // namespace

int multiplicative_rank_numeric(const std::vector<cplx>& values, int relation_bound, double tol) {
  std::vector<std::vector<double>> vecs;
  for (const auto& v : values)
    vecs.push_back({std::log(std::abs(v)), std::arg(v) / (2 * M_PI)});
  // swap so the mod-one coordinate (the argument) comes last
  return greedy_lattice_rank(vecs, relation_bound, std::max(tol, 1e-9) * 100, true, 4);
}

int additive_rank_numeric(const std::vector<cplx>& values, int relation_bound, double tol) {
  std::vector<std::vector<double>> vecs;
  for (const auto& v : values) vecs.push_back({v.real(), v.imag()});
  return greedy_lattice_rank(vecs, relation_bound, std::max(tol, 1e-9) * 100, false, 4);
}

// ------------------------------------------------------------- case 1

ProjMapX WmuSpec::element(const std::vector<long long>& n) const {
  cplx w = 0, logmu = 0;
  for (size_t j = 0; j < w_gens.size(); ++j) {
    w += static_cast<double>(n[j]) * w_gens[j];
    logmu += static_cast<double>(n[j]) * std::log(mu_gens[j]);
  }
  cplx mu = std::exp(logmu);
  MatX m = MatX::Zero(3, 3);
  m(0, 0) = std::pow(mu, -3.0);
  m(1, 1) = 1;
  m(1, 2) = w;
  m(2, 2) = 1;
  return ProjMapX(m);
}

FStatus probe_condition_F_chain(std::vector<FCandidate> candidates, const FProbePolicy& policy) {
  std::vector<FCandidate> pool;
  for (const auto& c : candidates) {
    if (c.value < policy.annulus || c.value > 1.0 / policy.annulus) continue;
    if (c.abs_mu >= 1.0) continue;
    pool.push_back(c);
  }
  if (pool.empty()) return FStatus::fails;
  std::sort(pool.begin(), pool.end(),
            [](const FCandidate& a, const FCandidate& b) { return a.abs_w < b.abs_w; });
  // DFS for a chain of `witnesses` candidates with growing |w|, decaying
  // |mu|, and |w mu^3| stable within the band.
  std::function<bool(int, int)> extend = [&](int idx, int depth) -> bool {
    if (depth == policy.witnesses) return true;
    const FCandidate& prev = pool[idx];
    for (int j = idx + 1; j < static_cast<int>(pool.size()); ++j) {
      const FCandidate& c = pool[j];
      if (c.abs_w < policy.w_growth * prev.abs_w) continue;
      if (c.abs_mu > policy.mu_decay * prev.abs_mu) continue;
      double ratio = c.value / prev.value;
      if (ratio > policy.band || ratio < 1.0 / policy.band) continue;
      if (extend(j, depth + 1)) return true;
    }
    return false;
  };
  for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
    if (pool[i].abs_mu > policy.mu_first) continue;
    if (extend(i, 1)) return FStatus::holds;
  }
  return FStatus::fails;
}

FStatus probe_condition_F(const WmuSpec& spec, int search_bound, const FProbePolicy& policy) {
  const int k = static_cast<int>(spec.w_gens.size());
  if (k == 0 || search_bound < 2) return FStatus::unknown;
  std::vector<double> logmods;
  for (const auto& m : spec.mu_gens) logmods.push_back(std::log(std::abs(m)));
  std::vector<FCandidate> cands;
  std::vector<long long> n(k, -search_bound);
  for (;;) {
    double w_re = 0, w_im = 0, lm = 0;
    for (int j = 0; j < k; ++j) {
      w_re += static_cast<double>(n[j]) * spec.w_gens[j].real();
      w_im += static_cast<double>(n[j]) * spec.w_gens[j].imag();
      lm += static_cast<double>(n[j]) * logmods[j];
    }
    double aw = std::hypot(w_re, w_im);
    if (aw > 1e-12) {
      double amu = std::exp(lm);
      cands.push_back({aw, amu, aw * amu * amu * amu});
    }
    int i = 0;
    while (i < k && n[i] == search_bound) n[i++] = -search_bound;
    if (i == k) break;
    ++n[i];
  }
  return probe_condition_F_chain(std::move(cands), policy);
}

LimitSetDescriptor kulkarni_case1_descriptor(Case1 c, FStatus f) {
  LimitSetDescriptor d;
  d.exactness = LimitSetDescriptor::Exactness::symbolic;
  auto e1 = ProjPointX::basis(0, 2);
  auto e2 = ProjPointX::basis(1, 2);
  auto line12 = line_through(ProjPointX::basis(0, 2), ProjPointX::basis(1, 2));
  auto line23 = line_through(ProjPointX::basis(1, 2), ProjPointX::basis(2, 2));
  bool has_f = f == FStatus::holds;
  switch (c) {
    case Case1::C11:
      d.add_subspace(line12);
      break;
    case Case1::C12:
      d.add_subspace(line12);
      d.add_subspace(line23);
      break;
    case Case1::C13:
    case Case1::C14:
      if (has_f) {
        d.add_subspace(line12);
      } else {
        d.add_point(e1);
        d.add_point(e2);
      }
      break;
    case Case1::C15:
    case Case1::C16:
      if (has_f) {
        d.add_subspace(line12);
        d.add_subspace(line23);
      } else {
        d.add_point(e1);
        d.add_subspace(line23);
      }
      break;
  }
  return d;
}

namespace {

struct RotationFacts {
  TriBool rational = TriBool::unknown;
  TriBool irrational = TriBool::unknown;
  std::string source = "unknown";
};

// Exact decision from mu logs: a rotation exists iff the log-moduli admit a
// nonzero integer relation; its angle (in turns) is rational iff the surd
// part vanishes.
RotationFacts rotations_from_exact_logs(const std::vector<SurdComplex>& logs) {
  std::vector<std::vector<BigRational>> cols;
  std::vector<SurdReal> angle;  // arg / 2pi as exact surds
  for (const auto& l : logs) {
    cols.push_back({l.real().rational_part(), l.real().surd_part()});
    angle.push_back(l.imag());
  }
  auto kernel = rational_kernel(cols);
  RotationFacts out;
  out.source = "exact";
  if (kernel.empty()) {
    out.rational = TriBool::no;
    out.irrational = TriBool::no;
    return out;
  }
  // Angle of a kernel vector n: sum n_j angle_j in Q(sqrt d); split into the
  // rational and surd coordinates as linear maps on the kernel.
  std::vector<std::vector<BigRational>> surd_rows;  // constraint: surd part = 0
  bool surd_all_zero = true;
  std::vector<BigRational> surd_vals;
  for (const auto& n : kernel) {
    BigRational s(0);
    for (size_t j = 0; j < n.size(); ++j) s = s + n[j] * angle[j].surd_part();
    surd_vals.push_back(s);
    if (!s.is_zero()) surd_all_zero = false;
  }
  // Irrational rotation exists iff the surd form is not identically zero on
  // the kernel lattice.
  out.irrational = surd_all_zero ? TriBool::no : TriBool::yes;
  // Rational rotation exists iff the surd form has nontrivial kernel inside
  // the relation lattice (equivalently rank < dim).
  if (surd_all_zero) {
    out.rational = TriBool::yes;  // any relation gives a rational (or zero) angle
  } else {
    surd_rows.push_back(surd_vals);
    int rank = rational_rank(surd_rows);
    out.rational = (static_cast<int>(kernel.size()) - rank) > 0 ? TriBool::yes : TriBool::no;
  }
  return out;
}

// Numeric probe: search lattice points whose mu has modulus ~1; classify
// the angle by continued fractions. Can answer yes, never no.
RotationFacts rotations_numeric(const WmuSpec& spec, int bound, double tol) {
  RotationFacts out;
  out.source = "probe";
  const int k = static_cast<int>(spec.w_gens.size());
  std::vector<long long> n(k, -bound);
  bool saw_rational = false, saw_irrational = false;
  for (;;) {
    bool all_zero = true;
    for (long long v : n) all_zero = all_zero && v == 0;
    if (!all_zero) {
      double lm = 0, ang = 0;
      for (int j = 0; j < k; ++j) {
        lm += static_cast<double>(n[j]) * std::log(std::abs(spec.mu_gens[j]));
        ang += static_cast<double>(n[j]) * std::arg(spec.mu_gens[j]) / (2 * M_PI);
      }
      if (std::abs(lm) <= tol * 100) {
        if (probe_angle(ang).rational)
          saw_rational = true;
        else
          saw_irrational = true;
      }
    }
    int i = 0;
    while (i < k && n[i] == bound) n[i++] = -bound;
    if (i == k) break;
    ++n[i];
  }
  if (saw_rational) out.rational = TriBool::yes;
  if (saw_irrational) out.irrational = TriBool::yes;
  return out;
}

}  // namespace

Case1Result classify_case1(const WmuSpec& spec, int search_bound, const FProbePolicy& policy,
                           double tol) {
  if (spec.w_gens.empty() || spec.w_gens.size() != spec.mu_gens.size())
    throw std::invalid_argument("classify_case1: need matching w and mu generators");
  if (spec.w_gens_exact) {
    int rank = additive_rank_exact(*spec.w_gens_exact);
    if (rank > 3) throw std::invalid_argument("classify_case1: rank(W) must be at most 3");
  }

  Case1Result out{};
  // --- rotations in mu(W)
  RotationFacts rot;
  if (spec.mu_rational_rotation != TriBool::unknown ||
      spec.mu_irrational_rotation != TriBool::unknown) {
    rot.rational = spec.mu_rational_rotation;
    rot.irrational = spec.mu_irrational_rotation;
    rot.source = "flag";
  } else if (spec.mu_log_gens) {
    rot = rotations_from_exact_logs(*spec.mu_log_gens);
  } else {
    rot = rotations_numeric(spec, std::min(search_bound, 12), tol);
  }
  out.rational_from = rot.source;
  out.irrational_from = rot.source;
  if (rot.rational == TriBool::unknown) throw UnresolvedFlagsError();

  // --- discreteness of W
  TriBool discrete = spec.w_discrete;
  out.discrete_from = "flag";
  if (discrete == TriBool::unknown && spec.w_gens_exact) {
    discrete = additive_discrete_exact(*spec.w_gens_exact) ? TriBool::yes : TriBool::no;
    out.discrete_from = "exact";
  }
  if (discrete == TriBool::unknown) {
    // probe: a tiny nonzero lattice combination witnesses non-discreteness
    const int k = static_cast<int>(spec.w_gens.size());
    std::vector<long long> n(k, -std::min(search_bound, 64));
    const long long b = std::min(search_bound, 64);
    bool near_zero = false;
    for (;;) {
      bool all_zero = true;
      for (long long v : n) all_zero = all_zero && v == 0;
      if (!all_zero) {
        cplx w = 0;
        for (int j = 0; j < k; ++j) w += static_cast<double>(n[j]) * spec.w_gens[j];
        if (std::abs(w) < 1e-4) near_zero = true;
      }
      int i = 0;
      while (i < k && n[i] == b) n[i++] = -b;
      if (i == k) break;
      ++n[i];
    }
    if (near_zero) {
      discrete = TriBool::no;
      out.discrete_from = "probe";
    } else {
      throw UnresolvedFlagsError();
    }
  }

  // --- walk the decision diagram
  if (rot.rational == TriBool::yes) {
    out.case_tag = discrete == TriBool::yes ? Case1::C11 : Case1::C12;
  } else {
    if (rot.irrational == TriBool::unknown) throw UnresolvedFlagsError();
    bool irr = rot.irrational == TriBool::yes;
    out.case_tag = discrete == TriBool::yes ? (irr ? Case1::C13 : Case1::C14)
                                            : (irr ? Case1::C15 : Case1::C16);
  }

  // --- condition (F), needed only for C1.3..C1.6
  if (out.case_tag == Case1::C11 || out.case_tag == Case1::C12) {
    out.condition_f = FStatus::unknown;
  } else {
    out.condition_f = probe_condition_F(spec, search_bound, policy);
  }
  out.provisional = rot.source == "probe" || out.discrete_from == "probe";
  out.kulkarni = kulkarni_case1_descriptor(out.case_tag, out.condition_f);
  return out;
}

// ------------------------------------------------------------- diagonal

namespace {

std::optional<std::pair<long long, long long>> find_dependence(const DiagonalPairSpec& spec,
                                                               int bound, double tol) {
  if (spec.dependence) return spec.dependence;
  // alpha^n = beta^m with (n, m) != (0, 0)
  for (long long n = 0; n <= bound; ++n) {
    for (long long m = -bound; m <= bound; ++m) {
      if (n == 0 && m <= 0) continue;
      if (spec.alpha_exact && spec.beta_exact) {
        SurdComplex an(1), bm(1);
        SurdComplex a = *spec.alpha_exact, b = *spec.beta_exact;
        SurdComplex ai = SurdComplex(1) / a, bi = SurdComplex(1) / b;
        for (long long i = 0; i < n; ++i) an = an * a;
        for (long long i = 0; i < std::llabs(m); ++i) bm = bm * (m >= 0 ? b : bi);
        (void)ai;
        if (an == bm) return std::make_pair(n, m);
      } else {
        cplx diff = static_cast<double>(n) * std::log(spec.alpha) -
                    static_cast<double>(m) * std::log(spec.beta);
        double im = diff.imag() / (2 * M_PI);
        im -= std::round(im);
        if (std::abs(diff.real()) <= tol * 100 && std::abs(im) <= tol * 100)
          return std::make_pair(n, m);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

DiagonalResult classify_diagonal(const DiagonalPairSpec& spec, int search_bound, double tol) {
  double ma = std::abs(spec.alpha), mb = std::abs(spec.beta);
  bool a_unit = std::abs(ma - 1.0) <= tol;
  bool b_unit = std::abs(mb - 1.0) <= tol;
  if (a_unit && b_unit) throw NoLoxodromicError();

  DiagonalResult out{};
  auto e1 = ProjPointX::basis(0, 2);
  auto e2 = ProjPointX::basis(1, 2);
  auto e3 = ProjPointX::basis(2, 2);
  auto line12 = line_through(e1, e2);
  auto line23 = line_through(e2, e3);
  out.kulkarni.exactness = LimitSetDescriptor::Exactness::symbolic;

  // D5: the unit-modulus member is an irrational rotation (rational would be
  // torsion and the standing torsion-free reduction removes it).
  if (a_unit || b_unit) {
    const RationalityHint& hint = a_unit ? spec.alpha_arg_hint : spec.beta_arg_hint;
    bool provisional = false;
    Rationality r = hint.kind;
    if (r == Rationality::Unknown) {
      double turns = std::arg(a_unit ? spec.alpha : spec.beta) / (2 * M_PI);
      r = probe_angle(turns).rational ? Rationality::Rational : Rationality::Irrational;
      provisional = true;
    }
    (void)provisional;
    if (r == Rationality::Rational)
      throw std::invalid_argument(
          "classify_diagonal: rational rotation factor is torsion; reduce first");
    out.case_tag = DiagCase::D5;
    out.kulkarni.add_subspace(line12);
    out.kulkarni.add_subspace(line23);
    return out;
  }

  auto dep = find_dependence(spec, search_bound, tol);
  out.dependence_found = dep;
  out.assuming_independent = !dep && !(spec.alpha_exact && spec.beta_exact);
  bool split = (ma > 1.0 && mb < 1.0) || (ma < 1.0 && mb > 1.0);
  if (dep) {
    out.case_tag = split ? DiagCase::D1 : DiagCase::D2;
    out.kulkarni.add_subspace(line12);
    out.kulkarni.add_point(e3);
  } else {
    out.case_tag = split ? DiagCase::D3 : DiagCase::D4;
    out.kulkarni.add_point(e1);
    out.kulkarni.add_point(e2);
    out.kulkarni.add_point(e3);
  }
  return out;
}

// ------------------------------------------------- layer decomposition

LayerDecomposition decompose_layers(const std::vector<ProjMapX>& gens, int word_bound,
                                    int relation_bound, double tol) {
  for (const auto& g : gens)
    if (!is_upper_triangular(g.matrix(), tol)) throw NotTriangularError();

  LayerDecomposition out;
  out.provisional = true;  // value-group ranks come from the numeric search

  // Enumerate a ball of the group; words in kernels below feed the value
  // groups that single generators miss (relation words, commutators).
  WordOrbit orbit = build_word_orbit(gens, word_bound, tol);

  std::vector<cplx> l23_vals;
  std::vector<cplx> l12_of_ker23;
  std::vector<cplx> translations;  // zeta = a23/a33 on Ker l12 ^ Ker l23
  std::vector<cplx> core_x, core_y;
  std::vector<std::pair<std::string, LayerTag>> tags;

  auto scale_of = [](const MatX& m) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(m(i, j)));
    return s;
  };

  for (const auto& [w, e] : orbit.elements) {
    const MatX& m = e.matrix();
    auto [l12, l23, l13] = lambda_maps(e, tol);
    LayerTag tag = layer_of(e, tol);
    tags.emplace_back(word_letters(w, static_cast<int>(gens.size())), tag);
    double s = scale_of(m);
    bool ker23 = scalar_eq<cplx>(l23, 1.0, tol);
    bool ker12 = scalar_eq<cplx>(l12, 1.0, tol);
    if (!ker23) l23_vals.push_back(l23);
    if (ker23 && !ker12) l12_of_ker23.push_back(l12);
    if (ker23 && ker12) {
      cplx zeta = m(1, 2) / m(2, 2);
      if (std::abs(zeta) > tol * std::max(1.0, s)) {
        translations.push_back(zeta);
      } else {
        // Core element [[1, x, y], [0, 1, 0], [0, 0, 1]] up to scalar.
        cplx x = m(0, 1) / m(1, 1), y = m(0, 2) / m(2, 2);
        if (std::abs(x) > tol * std::max(1.0, s) || std::abs(y) > tol * std::max(1.0, s)) {
          core_x.push_back(x);
          core_y.push_back(y);
        }
      }
    }
    switch (tag) {
      case LayerTag::Layer1_Core: out.core_witnesses.push_back(tags.back().first); break;
      case LayerTag::Layer2_AminusCore: out.layer2_witnesses.push_back(tags.back().first); break;
      case LayerTag::Layer3_Ker23minusA: out.layer3_witnesses.push_back(tags.back().first); break;
      case LayerTag::Layer4_rest: out.layer4_witnesses.push_back(tags.back().first); break;
    }
  }

  out.n = l23_vals.empty() ? 0 : multiplicative_rank_numeric(l23_vals, relation_bound, tol);
  out.m = l12_of_ker23.empty() ? 0
                               : multiplicative_rank_numeric(l12_of_ker23, relation_bound, tol);
  out.r = translations.empty() ? 0 : additive_rank_numeric(translations, relation_bound, tol);
  if (core_x.empty()) {
    out.core_rank = 0;
  } else {
    // additive rank of the (x, y) translation pairs in C^2
    std::vector<std::vector<double>> vecs;
    for (size_t i = 0; i < core_x.size(); ++i)
      vecs.push_back({core_x[i].real(), core_x[i].imag(), core_y[i].real(), core_y[i].imag()});
    out.core_rank =
        greedy_lattice_rank(vecs, relation_bound, std::max(tol, 1e-9) * 100, false, 4);
  }
  out.bound_ok = out.core_rank + out.r + out.m + out.n <= 4;
  return out;
}

// ------------------------------------------------------------ normality

namespace {

template <class S>
NormalityStatus verify_normality_impl(const std::vector<ProjMap<S>>& sub_gens,
                                      const ProjMap<S>& g, int word_bound, double tol,
                                      bool exact_refute) {
  if (sub_gens.empty()) return NormalityStatus::confirmed;
  for (const auto& s : sub_gens)
    if (!is_upper_triangular(s.matrix(), tol)) throw NotTriangularError();
  if (!is_upper_triangular(g.matrix(), tol)) throw NotTriangularError();

  std::vector<ProjMap<S>> letters = sub_gens;
  for (const auto& s : sub_gens) letters.push_back(s.inverse());
  ProjMap<S> gi = g.inverse();

  bool all_found = true;
  for (const auto& s : sub_gens) {
    ProjMap<S> conj = g * s * gi;
    bool found = conj.equal(ProjMap<S>::identity(3), tol);
    if (!found && word_bound >= 1) {
      std::function<ProjMap<S>(const ProjMap<S>&, const ProjMap<S>&)> mul =
          [](const ProjMap<S>& a, const ProjMap<S>& b) { return a * b; };
      std::function<void(const Word&, const ProjMap<S>&)> visit =
          [&](const Word&, const ProjMap<S>& e) {
            if (!found && e.equal(conj, tol)) found = true;
          };
      for_each_reduced_word<ProjMap<S>>(letters, static_cast<int>(sub_gens.size()), word_bound,
                                        mul, visit);
    }
    if (found) continue;
    all_found = false;

    if (exact_refute) {
      // Core-lattice escape: when every subgroup generator is of the
      // g_{x,y} form, membership of the conjugate's (x, y) in the Z-span
      // is decidable; a non-integral unique solution refutes.
      bool all_core = true;
      std::vector<SurdComplex> xs, ys;
      for (const auto& sg : sub_gens) {
        if constexpr (scalar_traits<S>::is_exact) {
          const auto& m = sg.matrix();
          bool core = m(1, 2).is_zero() && m(0, 0) == m(1, 1) && m(1, 1) == m(2, 2);
          all_core = all_core && core;
          if (core) {
            xs.push_back(m(0, 1) / m(1, 1));
            ys.push_back(m(0, 2) / m(2, 2));
          }
        }
      }
      if constexpr (scalar_traits<S>::is_exact) {
        const auto& cm = conj.matrix();
        bool conj_core = cm(1, 2).is_zero() && cm(0, 0) == cm(1, 1) && cm(1, 1) == cm(2, 2);
        if (all_core && conj_core) {
          SurdComplex tx = cm(0, 1) / cm(1, 1), ty = cm(0, 2) / cm(2, 2);
          // Solve sum c_i (x_i, y_i) = (tx, ty) over Q and test integrality.
          std::vector<std::vector<BigRational>> cols;
          for (size_t i = 0; i < xs.size(); ++i) {
            auto cx = surd_coords(xs[i]);
            auto cy = surd_coords(ys[i]);
            cx.insert(cx.end(), cy.begin(), cy.end());
            cols.push_back(cx);
          }
          auto ct = surd_coords(tx);
          auto cty = surd_coords(ty);
          ct.insert(ct.end(), cty.begin(), cty.end());
          // Least-structure solve: augment and do rational elimination.
          const size_t m = ct.size(), k = cols.size();
          std::vector<std::vector<BigRational>> A(m, std::vector<BigRational>(k + 1));
          for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < k; ++j) A[i][j] = cols[j][i];
            A[i][k] = ct[i];
          }
          // forward elimination
          size_t rr = 0;
          std::vector<int> piv;
          for (size_t c = 0; c < k && rr < m; ++c) {
            size_t p = rr;
            while (p < m && A[p][c].is_zero()) ++p;
            if (p == m) continue;
            std::swap(A[p], A[rr]);
            for (size_t i = 0; i < m; ++i) {
              if (i == rr || A[i][c].is_zero()) continue;
              BigRational f = A[i][c] / A[rr][c];
              for (size_t j = 0; j <= k; ++j) A[i][j] = A[i][j] - f * A[rr][j];
            }
            piv.push_back(static_cast<int>(c));
            ++rr;
          }
          bool inconsistent = false;
          for (size_t i = rr; i < m; ++i)
            if (!A[i][k].is_zero()) inconsistent = true;
          if (inconsistent) return NormalityStatus::refuted;
          if (piv.size() == k) {  // unique rational solution; integral?
            bool integral = true;
            for (size_t pr = 0; pr < piv.size(); ++pr) {
              BigRational c = A[pr][k] / A[pr][piv[pr]];
              if (!c.is_integer()) integral = false;
            }
            if (!integral) return NormalityStatus::refuted;
          }
        }
      }
    }
    return exact_refute ? NormalityStatus::unknown : NormalityStatus::unknown;
  }
  return all_found ? NormalityStatus::confirmed : NormalityStatus::unknown;
}

}  // namespace

NormalityStatus verify_normality(const std::vector<ProjMapX>& sub_gens, const ProjMapX& g,
                                 int word_bound, double tol) {
  return verify_normality_impl<cplx>(sub_gens, g, word_bound, tol, false);
}

NormalityStatus verify_normality(const std::vector<ProjMap<SurdComplex>>& sub_gens,
                                 const ProjMap<SurdComplex>& g, int word_bound, double tol) {
  return verify_normality_impl<SurdComplex>(sub_gens, g, word_bound, tol, true);
}

}  // namespace projdyn
