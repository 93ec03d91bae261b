#pragma once

// Poincare-disk geometry, Fuchsian orbit enumeration, orbital counting,
// Cayley-tree counts and the N-hat bounds, Poincare series and critical
// exponent, Patterson-Sullivan atom measures, quotient distance by orbit
// minimization, and the entropy-volume estimator.
//
// Convention: curvature -1, metric 2|dz|/(1-|z|^2), area element
// 4/(1-|z|^2)^2, so balls have area 4 pi sinh^2(r/2) and the ideal-octagon
// fundamental domain of the 5-punctured sphere has area 6 pi.

#include <array>
#include <functional>
#include <optional>

#include "projdyn/words.hpp"
#include "projdyn/projective.hpp"

namespace projdyn {

struct OutsideDiskError : std::runtime_error {
  OutsideDiskError() : std::runtime_error("point not inside the unit disk") {}
};
struct TooFewRowsError : std::runtime_error {
  TooFewRowsError() : std::runtime_error("orbit table too small") {}
};
struct TooFewSamplesError : std::runtime_error {
  TooFewSamplesError() : std::runtime_error("need at least 3 volume samples") {}
};

using Mat2 = Eigen::Matrix2cd;

double poincare_distance(cplx z, cplx w);
cplx mobius_apply(const Mat2& m, cplx z);

// Area of the hyperbolic ball of radius r.
inline double ball_area(double r) {
  double s = std::sinh(r / 2);
  return 4.0 * M_PI * s * s;
}

struct FuchsianSpec {
  std::vector<Mat2> generators;  // unit determinant, disk-preserving
  std::optional<int> free_rank_claim;

  void validate(int samples = 64, unsigned seed = 7) const;
  // The bundled reference spec: four hyperbolic generators with pairwise
  // separated axes, free of rank 4.
  static FuchsianSpec reference_rank4(double translation = 6.0);
};

struct OrbitRow {
  Word word;
  cplx image;       // gamma(w)
  double distance;  // rho(z, gamma(w))
};

struct OrbitTable {
  cplx z, w;
  int word_bound = 0;
  int num_gens = 0;
  std::vector<OrbitRow> rows;  // sorted ascending by (distance, word)

  // Largest radius at which the table is guaranteed complete.
  double horizon() const { return rows.empty() ? 0.0 : rows.back().distance; }
};

OrbitTable orbit_enumerate(const FuchsianSpec& spec, cplx z, cplx w, int word_bound,
                           double tol = kDefaultTol);

struct OrbitalCount {
  long long count = 0;
  bool truncated = false;  // r beyond the enumeration horizon
};

OrbitalCount orbital_count(const OrbitTable& table, double r);

// |S_n| = 8 * 7^(n-1) (n > 0), |B_n| = 1 + (4/3)(7^n - 1).
std::pair<unsigned long long, unsigned long long> cayley_counts(int n);

struct NhatBounds {
  double combinatorial;  // 49 N0 + 16
  double volume;         // (49/4) (e^eps / vol) e^R + 16
  double slice_volume;   // 6 pi * volume bound
};

NhatBounds nhat_bounds(long long n0, double epsilon, double vol_eps_ball, double R);

// Sampled count of Dirichlet-domain translates meeting the ball B(p, R):
// assigns hyperbolic-area samples of the ball to nearest orbit points.
long long nhat_measured(const OrbitTable& table_pp, double R, int samples = 4000,
                        unsigned seed = 99);

struct SeriesResult {
  double partial_sum;
  double tail_bound;  // +inf when the geometric tail estimate diverges
  double per_letter_gap;
};

SeriesResult poincare_series(const OrbitTable& table, double s);

struct DeltaEstimate {
  double limsup_estimate;    // max over the last quartile of log n / rho_n
  double bisection_estimate; // transition s of partial-sum growth
  double spread;             // |difference|
};

DeltaEstimate critical_exponent(const OrbitTable& table);

// Streaming variant for deep enumerations: histograms distances without
// materializing the table.
DeltaEstimate critical_exponent_streaming(const FuchsianSpec& spec, cplx z, cplx w,
                                          int word_bound, double bin_width = 0.01);

struct AtomMeasure {
  struct Atom {
    Word word;
    cplx point;
    double weight;  // normalized; weights sum to 1
  };
  std::vector<Atom> atoms;
  double total = 0.0;        // after normalization: 1
  double prenormalizer = 0;  // f*_s(w, w) from the companion table

  double mass_outside(cplx z, double r) const;
};

AtomMeasure ps_atoms(const FuchsianSpec& spec, const OrbitTable& table, double s,
                     const std::function<double(double)>& h = nullptr);

double quotient_distance(const FuchsianSpec& spec, cplx lift1, cplx lift2, int word_bound);

double entropy_volume_estimate(const std::vector<std::pair<double, double>>& samples);

}  // namespace projdyn
