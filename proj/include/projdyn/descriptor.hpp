#pragma once

// Symbolic-plus-sampled description of a limit set: a union of projective
// subspaces and isolated points, optionally with a sampled point cloud.

#include <optional>
#include <string>
#include <vector>

#include "projdyn/projective.hpp"

namespace projdyn {

struct LimitSetDescriptor {
  struct Component {
    // Exactly one of these is set; a point is kept separate from a
    // proj_dim-0 subspace only for printing.
    std::optional<ProjSubspaceX> subspace;
    std::optional<ProjPointX> point;

    int proj_dim() const { return subspace ? subspace->proj_dim() : 0; }
  };

  enum class Exactness { symbolic, sampled };

  std::vector<Component> components;
  std::vector<ProjPointX> cloud;
  Exactness exactness = Exactness::symbolic;

  void add_point(const ProjPointX& p, double tol = kDefaultTol);
  void add_subspace(const ProjSubspaceX& s, double tol = kDefaultTol);
  // Drops components contained in another component.
  void prune(double tol = kDefaultTol);

  bool contains_point_component(const ProjPointX& p, double tol = kDefaultTol) const;
  bool contains_subspace_component(const ProjSubspaceX& s, double tol = kDefaultTol) const;

  // Distance from a point to the nearest component (chordal).
  double distance(const ProjPointX& p) const;
  // Largest distance from a cloud point to the symbolic part.
  double cloud_excess() const;

  std::string to_string() const;
};

}  // namespace projdyn
