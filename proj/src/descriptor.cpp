#include "projdyn/descriptor.hpp"

#include <sstream>

namespace projdyn {

void LimitSetDescriptor::add_point(const ProjPointX& p, double tol) {
  for (const auto& c : components) {
    if (c.point && c.point->equal(p, tol)) return;
    if (c.subspace && c.subspace->contains(p, tol)) return;
  }
  Component c;
  c.point = p;
  components.push_back(std::move(c));
}

void LimitSetDescriptor::add_subspace(const ProjSubspaceX& s, double tol) {
  for (const auto& c : components)
    if (c.subspace && c.subspace->contains_subspace(s, tol)) return;
  Component c;
  c.subspace = s;
  components.push_back(std::move(c));
  prune(tol);
}

void LimitSetDescriptor::prune(double tol) {
  std::vector<Component> kept;
  for (size_t i = 0; i < components.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < components.size() && !redundant; ++j) {
      if (i == j || !components[j].subspace) continue;
      if (components[i].point && components[j].subspace->contains(*components[i].point, tol))
        redundant = true;
      if (components[i].subspace && components[j].subspace->proj_dim() >
          components[i].subspace->proj_dim() &&
          components[j].subspace->contains_subspace(*components[i].subspace, tol))
        redundant = true;
    }
    if (!redundant) kept.push_back(components[i]);
  }
  components = std::move(kept);
}

bool LimitSetDescriptor::contains_point_component(const ProjPointX& p, double tol) const {
  for (const auto& c : components)
    if (c.point && c.point->equal(p, tol)) return true;
  return false;
}

bool LimitSetDescriptor::contains_subspace_component(const ProjSubspaceX& s, double tol) const {
  for (const auto& c : components)
    if (c.subspace && c.subspace->equal(s, tol)) return true;
  return false;
}

double LimitSetDescriptor::distance(const ProjPointX& p) const {
  double best = 2.0;
  for (const auto& c : components) {
    if (c.point) best = std::min(best, chordal_distance(p, *c.point));
    if (c.subspace) best = std::min(best, chordal_distance(p, *c.subspace));
  }
  return best;
}

double LimitSetDescriptor::cloud_excess() const {
  double worst = 0.0;
  for (const auto& p : cloud) worst = std::max(worst, distance(p));
  return worst;
}

namespace {

std::string point_str(const ProjPointX& p) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < p.lift().size(); ++i) {
    if (i) os << ":";
    cplx v = p.lift()(i);
    if (std::abs(v.imag()) < 1e-12)
      os << v.real();
    else
      os << v.real() << (v.imag() >= 0 ? "+" : "") << v.imag() << "i";
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string LimitSetDescriptor::to_string() const {
  if (components.empty() && cloud.empty()) return "(empty)";
  std::ostringstream os;
  bool first = true;
  for (const auto& c : components) {
    if (!first) os << " u ";
    first = false;
    if (c.point) {
      os << "{" << point_str(*c.point) << "}";
    } else {
      os << "span{";
      for (int j = 0; j < c.subspace->basis().cols(); ++j) {
        if (j) os << ", ";
        os << point_str(ProjPointX(c.subspace->basis().col(j)));
      }
      os << "}";
    }
  }
  if (!cloud.empty()) {
    if (!first) os << " ";
    os << "(+" << cloud.size() << " sampled points)";
  }
  return os.str();
}

}  // namespace projdyn
