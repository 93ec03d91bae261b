#pragma once

// Quasi-projective limits of matrix powers and word orbits, the
// equicontinuity complement, and sampled Kulkarni / Conze-Guivarc'h
// limit set approximations.

#include "projdyn/classify.hpp"
#include "projdyn/descriptor.hpp"
#include "projdyn/words.hpp"

namespace projdyn {

struct NoLimitError : std::runtime_error {
  NoLimitError() : std::runtime_error("power sequence has no quasi-projective limit") {}
};
struct DivergedError : std::runtime_error {
  DivergedError() : std::runtime_error("power sequence did not stabilize") {}
};

struct WordOrbit {
  std::vector<ProjMapX> generators;  // user generators, inverses appended internally
  int max_length = 0;
  std::vector<std::pair<Word, ProjMapX>> elements;  // deduplicated, identity excluded
};

WordOrbit build_word_orbit(const std::vector<ProjMapX>& generators, int max_length,
                           double tol = kDefaultTol);

// Limit of g^k (direction +) or g^-k (direction -), detected on a
// geometrically spaced ladder k = 2^j: three consecutive tau-close
// normalized iterates plus consistency of the successor g^(k+1), which
// rules out finite-order and oscillating unitary parts.
QuasiProjMapX qp_limit_of_powers(const ProjMapX& g, int direction, long long kmax = (1LL << 48),
                                 double tol = kDefaultTol);

// Candidate limits: power limits of every loxodromic word, plus (when
// include_snapped) rank-truncations of near-singular orbit elements, which
// approximate limits along mixed-word divergent sequences.
std::vector<QuasiProjMapX> limit_maps_of_group(const WordOrbit& orbit, double tol = kDefaultTol,
                                               double singular_threshold = 1e-3,
                                               bool include_snapped = true);

LimitSetDescriptor equicontinuity_complement(const WordOrbit& orbit, double tol = kDefaultTol);

struct KulkarniLayers {
  LimitSetDescriptor L0, L1, L2;

  LimitSetDescriptor merged() const;
};

KulkarniLayers approximate_kulkarni(const WordOrbit& orbit, int samples,
                                    unsigned seed = 20240401, int grid = 32,
                                    double tol = kDefaultTol);

LimitSetDescriptor approximate_CG(const WordOrbit& orbit, double tol = kDefaultTol);

// True when the first `power_bound` powers never return to the identity.
bool has_infinite_order(const ProjMapX& g, int power_bound = 64, double tol = kDefaultTol);

}  // namespace projdyn
