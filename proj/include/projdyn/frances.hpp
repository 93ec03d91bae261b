#pragma once

// Cartan projections, block decomposition of diverging diagonal sequences,
// the attracting flags, pointwise dynamics of sequences, the Frances limit
// set for cyclic and word-approximated groups, purely-dimensional checks,
// and polygon diagrams.

#include <optional>

#include "projdyn/descriptor.hpp"
#include "projdyn/qp_limits.hpp"

namespace projdyn {

struct NoDivergentSequenceError : std::runtime_error {
  NoDivergentSequenceError() : std::runtime_error("group has no divergent sequence") {}
};
struct EmptyInputError : std::runtime_error {
  EmptyInputError() : std::runtime_error("empty input") {}
};
struct BadSubsetError : std::runtime_error {
  BadSubsetError() : std::runtime_error("hull subset out of range") {}
};
struct ZeroPointError : std::runtime_error {
  ZeroPointError() : std::runtime_error("point has no nonzero block component") {}
};

// ------------------------------------------------------------- Cartan

struct CartanDecomposition {
  MatX k1;                  // unitary
  Eigen::VectorXd mu;       // positive, non-increasing
  MatX k2;                  // unitary; g = k1 * diag(mu) * k2^*
};

// One-sided Jacobi with a fixed sweep order and phase canonicalization
// (first significant entry of each k1 column made real positive), so the
// factors are reproducible and stabilization can be detected.
CartanDecomposition cartan_projection(const MatX& g);

inline CartanDecomposition cartan_projection(const ProjMapX& g) {
  return cartan_projection(g.matrix());
}

// ------------------------------------------------- sequence block data

// Per-diagonal-entry geometric law lambda_i(k) = c_i * b_i^k, ordered so
// the sequence is non-increasing for large k (b descending, then c).
struct SingularSequenceSpec {
  struct Entry {
    double c, b;
  };
  std::vector<Entry> entries;

  int size() const { return static_cast<int>(entries.size()); }
  void validate() const;
  // Diagonal matrix at step k.
  Eigen::VectorXd at(double k) const;
};

struct BlockDecomposition {
  SingularSequenceSpec spec;
  std::vector<int> block_of;            // index i -> block number (0-based)
  std::vector<int> dims;                // c_i = block sizes
  std::vector<std::vector<double>> limit_blocks;  // D_i: limit diagonal ratios per block

  int blocks() const { return static_cast<int>(dims.size()); }
  int block_start(int b) const;
  // A_b as a subspace spanned by the block's standard basis vectors.
  ProjSubspaceX block_subspace(int b) const;
};

BlockDecomposition blocks_of(const SingularSequenceSpec& spec);

struct FlagPair {
  // V_1 c ... c V_m with V_i = <A_1..A_i>; W_i = <A_{i+1}..A_m> minus A_m,
  // recorded by its carrier subspace <A_{i+1}..A_m> for i = 0..m-2.
  std::vector<ProjSubspaceX> V;
  std::vector<ProjSubspaceX> W_carrier;
};

FlagPair flags_of(const BlockDecomposition& bd);

// ------------------------------------------------------ pointwise dynamics

struct DynamicImage {
  int block_index;                       // least i with nonzero block component (1-based)
  ProjPointX y;                          // limit image inside A_i
  std::optional<ProjSubspaceX> V_prev;   // V_{i-1}; empty when i = 1
  ProjSubspaceX closure;                 // join <V_{i-1}, y_z> = closure of D(z)
};

DynamicImage dynamic_image(const BlockDecomposition& bd, const ProjPointX& z,
                           double tol = kDefaultTol);

// s0 = index (1-based) of the block containing e_{floor((n+1)/2)}; L = V_{s0}.
std::pair<int, ProjSubspaceX> middle_space(const BlockDecomposition& bd);

// ------------------------------------------------------ Frances limit set

bool tends_simply_to_infinity(const ProjMapX& g, int kmax, double tol,
                              CartanDecomposition* stabilized = nullptr);

// Dominant eigendirection for any matrix size (the 3x3 classifier has its
// own Cardano-based route).
std::optional<ProjPointX> dominant_vector_nd(const ProjMapX& g, double tol = kDefaultTol);

LimitSetDescriptor frances_cyclic(const ProjMapX& g, double tol = kDefaultTol);

std::vector<ProjSubspaceX> frances_group_approx(const WordOrbit& orbit,
                                                double tol = kDefaultTol);

struct PureDimension {
  int k = -1;
  bool ok = false;
};

PureDimension check_purely_dimensional(const std::vector<ProjSubspaceX>& subspaces, int n);

// --------------------------------------------------------------- polygon

struct PolygonDoc {
  std::vector<int> weights;                     // c_i per vertex
  int attracting = 0;                           // first block
  int repelling = 0;                            // last block
  struct Hull {
    std::vector<int> vertices;  // 1-based block indices
    int proj_dim;               // dimension of <A_i : i in hull>
  };
  std::vector<Hull> hulls;
};

PolygonDoc polygon_doc(const BlockDecomposition& bd,
                       const std::vector<std::vector<int>>& hulls = {});

std::string polygon_svg(const PolygonDoc& doc);

}  // namespace projdyn
