#include "projdyn/qp_limits.hpp"

#include <cmath>

namespace projdyn {

namespace {

MatX normalize_max(MatX M) {
  double mx = 0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) mx = std::max(mx, std::abs(M(i, j)));
  if (mx == 0) throw ZeroMatrixError();
  // keep the phase of the largest entry so iterates compare stably
  cplx pivot;
  double best = -1;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (std::abs(M(i, j)) > best) {
        best = std::abs(M(i, j));
        pivot = M(i, j);
      }
  return M / pivot;
}

double mat_dist(const MatX& a, const MatX& b) {
  double d = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

MatX moduli(const MatX& a) {
  MatX m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = std::abs(a(i, j));
  return m;
}

// Smallest/largest singular value ratio of a normalized matrix.
double singular_ratio(const MatX& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

// Best singular rank-truncation of a nearly singular normalized matrix.
MatX truncate_to_singular(const MatX& m, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > threshold * s(0)) S(i, i) = s(i);
  return svd.matrixU() * S * svd.matrixV().adjoint();
}

}  // namespace

bool has_infinite_order(const ProjMapX& g, int power_bound, double tol) {
  ProjMapX id = ProjMapX::identity(g.size());
  ProjMapX p = g;
  for (int k = 1; k <= power_bound; ++k) {
    if (p.equal(id, std::max(tol, 1e-8))) return false;
    p = p * g;
  }
  return true;
}

QuasiProjMapX qp_limit_of_powers(const ProjMapX& g, int direction, long long kmax, double tol) {
  if (!has_infinite_order(g, 64, tol)) throw NoLimitError();
  ProjMapX base = direction >= 0 ? g : g.inverse();
  MatX gh = normalize_max(base.matrix());
  MatX P = gh;
  int stable = 0;
  long long k = 1;
  bool moduli_stable_seen = false;
  MatX prev_mod = moduli(P);
  // Detect a touch below the requested tolerance: the tail error of slow
  // (polynomial) Jordan growth matches the detection threshold.
  const double detect = std::min(tol * 1e-3, 1e-12);
  while (k <= kmax) {
    MatX Q = normalize_max(P * P);  // power 2k
    double d = mat_dist(Q, P);
    MatX succ = normalize_max(Q * gh);  // power 2k+1
    double ds = mat_dist(succ, Q);
    MatX mod = moduli(Q);
    if (mat_dist(mod, prev_mod) <= tol) moduli_stable_seen = true;
    prev_mod = mod;
    if (d <= detect && ds <= detect) {
      if (++stable >= 3) {
        // Converged in QP space; rank-truncate rounding noise so the kernel
        // and image come out clean.
        double sr = singular_ratio(Q);
        MatX limit = sr < 1e-6 ? truncate_to_singular(Q, 1e-6) : Q;
        return qp_from_matrix<cplx>(std::move(limit), std::max(tol, 1e-8));
      }
    } else {
      stable = 0;
    }
    P = std::move(Q);
    k *= 2;
  }
  if (moduli_stable_seen) throw NoLimitError();
  throw DivergedError();
}

WordOrbit build_word_orbit(const std::vector<ProjMapX>& generators, int max_length, double tol) {
  WordOrbit orbit;
  orbit.generators = generators;
  orbit.max_length = max_length;
  const int k = static_cast<int>(generators.size());
  std::vector<ProjMapX> letters = generators;
  for (const auto& g : generators) letters.push_back(g.inverse());

  // Breadth-first with global dedup keeps abelian-ish orbits small.
  const double eq_tol = std::max(tol, 1e-8);
  ProjMapX id = ProjMapX::identity(generators.at(0).size());
  std::vector<std::pair<Word, ProjMapX>> frontier;
  auto known = [&](const ProjMapX& m) {
    if (m.equal(id, eq_tol)) return true;
    for (const auto& [w, e] : orbit.elements)
      if (e.equal(m, eq_tol)) return true;
    return false;
  };
  for (int l = 0; l < 2 * k; ++l) {
    if (known(letters[l])) continue;
    orbit.elements.emplace_back(Word{l}, letters[l]);
    frontier.emplace_back(Word{l}, letters[l]);
  }
  for (int depth = 2; depth <= max_length; ++depth) {
    std::vector<std::pair<Word, ProjMapX>> next;
    for (const auto& [w, e] : frontier) {
      for (int l = 0; l < 2 * k; ++l) {
        if (l == inverse_letter(w.back(), k)) continue;
        ProjMapX m = e * letters[l];
        if (known(m)) continue;
        Word w2 = w;
        w2.push_back(l);
        orbit.elements.emplace_back(w2, m);
        next.emplace_back(std::move(w2), std::move(m));
      }
    }
    frontier = std::move(next);
  }
  return orbit;
}

std::vector<QuasiProjMapX> limit_maps_of_group(const WordOrbit& orbit, double tol,
                                               double singular_threshold, bool include_snapped) {
  std::vector<MatX> candidates;

  // Power limits of every loxodromic word, both directions.
  for (const auto& [w, e] : orbit.elements) {
    EigenData ed = eigen3(e, tol);
    double mods_min = 1e300, mods_max = 0;
    for (const auto& p : ed.pairs) {
      mods_min = std::min(mods_min, std::abs(p.value));
      mods_max = std::max(mods_max, std::abs(p.value));
    }
    bool loxodromic = mods_max - mods_min > tol * std::max(1.0, mods_max);
    if (!loxodromic) continue;
    for (int dir : {+1, -1}) {
      try {
        candidates.push_back(qp_limit_of_powers(e, dir, 1LL << 48, tol).matrix);
      } catch (const NoLimitError&) {
      } catch (const DivergedError&) {
      }
    }
  }

  // Near-singular orbit elements approximate limits along mixed-word
  // divergent sequences; snap them onto their rank-truncated versions.
  // Only spectra with a clear gap qualify: every singular value is either
  // dropped (below the threshold) or safely kept (above its square root),
  // otherwise the truncated rank would be an artifact of the word depth.
  const double keep_floor = std::sqrt(singular_threshold);
  for (const auto& [w, e] : orbit.elements) {
    if (!include_snapped) break;
    MatX m = normalize_max(e.matrix());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    bool any_dropped = false, ambiguous = false;
    for (int i = 0; i < s.size(); ++i) {
      double rel = s(i) / s(0);
      if (rel <= singular_threshold)
        any_dropped = true;
      else if (rel < keep_floor)
        ambiguous = true;
    }
    if (any_dropped && !ambiguous)
      candidates.push_back(normalize_max(truncate_to_singular(m, singular_threshold)));
  }

  // Greedy clustering over a canonical order.
  std::vector<QuasiProjMapX> out;
  std::vector<MatX> reps;
  auto key = [](const MatX& m) {
    std::vector<double> k;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        k.push_back(m(i, j).real());
        k.push_back(m(i, j).imag());
      }
    return k;
  };
  std::sort(candidates.begin(), candidates.end(),
            [&](const MatX& a, const MatX& b) { return key(a) < key(b); });
  const double radius = std::max(tol, 1e-6);
  for (const auto& m : candidates) {
    bool found = false;
    for (const auto& r : reps) {
      // compare projectively: phases were pinned by normalize_max
      if (mat_dist(m, r) <= radius || mat_dist(m, MatX(-r)) <= radius) {
        found = true;
        break;
      }
    }
    if (!found) {
      reps.push_back(m);
      out.push_back(qp_from_matrix<cplx>(m, std::max(tol, 1e-8)));
    }
  }
  return out;
}

LimitSetDescriptor equicontinuity_complement(const WordOrbit& orbit, double tol) {
  LimitSetDescriptor out;
  out.exactness = LimitSetDescriptor::Exactness::symbolic;
  for (const auto& q : limit_maps_of_group(orbit, tol))
    if (q.kernel) out.add_subspace(*q.kernel, std::max(tol, 1e-6));
  out.prune(std::max(tol, 1e-6));
  return out;
}

LimitSetDescriptor KulkarniLayers::merged() const {
  LimitSetDescriptor all;
  all.exactness = LimitSetDescriptor::Exactness::sampled;
  all.cloud = L0.cloud;
  all.cloud.insert(all.cloud.end(), L1.cloud.begin(), L1.cloud.end());
  all.cloud.insert(all.cloud.end(), L2.cloud.begin(), L2.cloud.end());
  return all;
}

namespace {

std::vector<ProjPointX> random_points(int count, int n1, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  std::vector<ProjPointX> pts;
  for (int i = 0; i < count; ++i) {
    VecX v(n1);
    for (int j = 0; j < n1; ++j) v(j) = cplx(gauss(rng), gauss(rng));
    if (v.norm() < 1e-9) {
      --i;
      continue;
    }
    pts.emplace_back(v);
  }
  return pts;
}

}  // namespace

KulkarniLayers approximate_kulkarni(const WordOrbit& orbit, int samples, unsigned seed, int grid,
                                    double tol) {
  if (samples < 1) throw std::invalid_argument("approximate_kulkarni: samples >= 1");
  KulkarniLayers out;
  out.L0.exactness = out.L1.exactness = out.L2.exactness =
      LimitSetDescriptor::Exactness::sampled;
  std::mt19937 rng(seed);
  const int n1 = orbit.generators.empty() ? 3 : orbit.generators[0].size();

  // L0: fixed points of infinite-order words; a repeated eigenvalue with a
  // 2-dimensional eigenspace contributes the whole projective line of fixed
  // points (sampled).
  for (const auto& [w, e] : orbit.elements) {
    if (!has_infinite_order(e, 64, tol)) continue;
    EigenData ed = eigen3(e, tol);
    for (const auto& p : ed.pairs) {
      for (const auto& v : p.vectors) out.L0.cloud.emplace_back(v);
      if (p.vectors.size() >= 2) {
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (int s = 0; s < samples; ++s) {
          cplx a(uni(rng), uni(rng)), b(uni(rng), uni(rng));
          VecX v = a * p.vectors[0] + b * p.vectors[1];
          if (v.norm() > 1e-9) out.L0.cloud.emplace_back(v);
        }
      }
    }
  }

  // Clouds come from power limits only: finite-depth rank truncations are
  // transients of not-yet-converged sequences and would scatter points off
  // the true limit set.
  auto limits = limit_maps_of_group(orbit, tol, 1e-3, false);

  auto off_kernel = [](const ProjPointX& z, const QuasiProjMapX& q) {
    return !q.kernel || chordal_distance(z, *q.kernel) > 1e-6;
  };
  auto near_cloud = [&](const ProjPointX& z, const std::vector<ProjPointX>& cloud) {
    for (const auto& c : cloud)
      if (chordal_distance(z, c) < 1e-6) return true;
    return false;
  };

  // L1: orbit accumulation of points off L0, via the limit maps.
  auto pts = random_points(samples, n1, rng);
  for (const auto& z : pts) {
    if (near_cloud(z, out.L0.cloud)) continue;
    for (const auto& q : limits)
      if (off_kernel(z, q)) out.L1.cloud.push_back(qp_apply(q, z));
  }

  // L2: accumulation of orbits of compact grids off L0 u L1.
  int grid_count = grid * grid * grid;
  auto gridpts = random_points(grid_count, n1, rng);
  for (const auto& z : gridpts) {
    if (near_cloud(z, out.L0.cloud) || near_cloud(z, out.L1.cloud)) continue;
    for (const auto& q : limits)
      if (off_kernel(z, q)) out.L2.cloud.push_back(qp_apply(q, z));
  }
  return out;
}

LimitSetDescriptor approximate_CG(const WordOrbit& orbit, double tol) {
  LimitSetDescriptor out;
  out.exactness = LimitSetDescriptor::Exactness::sampled;
  for (const auto& [w, e] : orbit.elements) {
    auto dom = dominant_vector(e, tol);
    if (dom) out.cloud.push_back(*dom);
  }
  return out;
}

}  // namespace projdyn
