#include "projdyn/frances.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace projdyn {

// --------------------------------------------------------------- Cartan

CartanDecomposition cartan_projection(const MatX& g) {
  const int n = static_cast<int>(g.rows());
  MatX A = g;
  MatX V = MatX::Identity(n, n);
  const double eps = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx apq = 0;
        double app = 0, aqq = 0;
        for (int i = 0; i < n; ++i) {
          apq += std::conj(A(i, p)) * A(i, q);
          app += std::norm(A(i, p));
          aqq += std::norm(A(i, q));
        }
        double mag = std::abs(apq);
        off = std::max(off, mag / std::sqrt(std::max(app * aqq, 1e-300)));
        if (mag <= eps * std::sqrt(app * aqq)) continue;
        // phase-align the q column so the pair problem becomes real symmetric:
        // with v~ = conj(phase) v the Gram matrix is [[a, |c|], [|c|, b]]
        cplx phase = apq / mag;
        double zeta = (aqq - app) / (2.0 * mag);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (int i = 0; i < n; ++i) {
          cplx ap = A(i, p), aq = A(i, q);
          A(i, p) = cs * ap - sn * std::conj(phase) * aq;
          A(i, q) = sn * phase * ap + cs * aq;
        }
        for (int i = 0; i < n; ++i) {
          cplx vp = V(i, p), vq = V(i, q);
          V(i, p) = cs * vp - sn * std::conj(phase) * vq;
          V(i, q) = sn * phase * vp + cs * vq;
        }
      }
    }
    if (off <= eps) break;
  }
  // Column norms are the singular values.
  CartanDecomposition out;
  out.mu.resize(n);
  out.k1 = MatX::Zero(n, n);
  std::vector<int> order(n);
  std::vector<double> sv(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::norm(A(i, j));
    sv[j] = std::sqrt(s);
  }
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sv[a] > sv[b]; });
  out.k2 = MatX::Zero(n, n);
  for (int jj = 0; jj < n; ++jj) {
    int j = order[jj];
    out.mu(jj) = sv[j];
    if (sv[j] > 1e-300)
      out.k1.col(jj) = A.col(j) / sv[j];
    else
      out.k1.col(jj).setZero();
    out.k2.col(jj) = V.col(j);
  }
  // Phase canonicalization: first significant entry of each k1 column made
  // real positive; compensate on k2 (Sigma is real and commutes).
  for (int j = 0; j < n; ++j) {
    double mx = 0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(out.k1(i, j)));
    for (int i = 0; i < n; ++i) {
      if (std::abs(out.k1(i, j)) > 0.5 * mx && std::abs(out.k1(i, j)) > 1e-12) {
        cplx ph = out.k1(i, j) / std::abs(out.k1(i, j));
        out.k1.col(j) /= ph;
        out.k2.col(j) /= ph;
        break;
      }
    }
  }
  return out;
}

// ------------------------------------------------------ block machinery

void SingularSequenceSpec::validate() const {
  if (entries.empty()) throw EmptyInputError();
  for (const auto& e : entries)
    if (e.c <= 0 || e.b <= 0)
      throw std::invalid_argument("SingularSequenceSpec: entries must be positive");
  for (size_t i = 0; i + 1 < entries.size(); ++i) {
    if (entries[i].b < entries[i + 1].b ||
        (entries[i].b == entries[i + 1].b && entries[i].c < entries[i + 1].c))
      throw std::invalid_argument("SingularSequenceSpec: entries must be sorted (b desc, c desc)");
  }
}

Eigen::VectorXd SingularSequenceSpec::at(double k) const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v(i) = entries[i].c * std::pow(entries[i].b, k);
  return v;
}

int BlockDecomposition::block_start(int b) const {
  int s = 0;
  for (int i = 0; i < b; ++i) s += dims[i];
  return s;
}

ProjSubspaceX BlockDecomposition::block_subspace(int b) const {
  const int n1 = spec.size();
  int start = block_start(b);
  MatX B = MatX::Zero(n1, dims[b]);
  for (int j = 0; j < dims[b]; ++j) B(start + j, j) = 1.0;
  return ProjSubspaceX(std::move(B));
}

BlockDecomposition blocks_of(const SingularSequenceSpec& spec) {
  spec.validate();
  BlockDecomposition bd;
  bd.spec = spec;
  bd.block_of.resize(spec.size());
  int blk = 0;
  bd.block_of[0] = 0;
  for (int i = 1; i < spec.size(); ++i) {
    // same block iff lim lambda_i / lambda_{i+1} lies in R+, i.e. the bases agree
    if (spec.entries[i].b != spec.entries[i - 1].b) ++blk;
    bd.block_of[i] = blk;
  }
  bd.dims.assign(blk + 1, 0);
  for (int i = 0; i < spec.size(); ++i) bd.dims[bd.block_of[i]]++;
  // Limit blocks D_i: within a block, lambda_j / alpha_i -> c_j / c_lead.
  bd.limit_blocks.resize(blk + 1);
  for (int i = 0; i < spec.size(); ++i) {
    int b = bd.block_of[i];
    double lead_c = spec.entries[bd.block_start(b)].c;
    bd.limit_blocks[b].push_back(spec.entries[i].c / lead_c);
  }
  return bd;
}

FlagPair flags_of(const BlockDecomposition& bd) {
  FlagPair out;
  const int n1 = bd.spec.size();
  const int m = bd.blocks();
  for (int i = 1; i <= m; ++i) {
    int cols = 0;
    for (int b = 0; b < i; ++b) cols += bd.dims[b];
    MatX B = MatX::Zero(n1, cols);
    for (int j = 0; j < cols; ++j) B(j, j) = 1.0;
    out.V.emplace_back(std::move(B));
  }
  for (int i = 0; i + 2 <= m; ++i) {
    int start = bd.block_start(i);
    int cols = n1 - start;
    MatX B = MatX::Zero(n1, cols);
    for (int j = 0; j < cols; ++j) B(start + j, j) = 1.0;
    out.W_carrier.emplace_back(std::move(B));
  }
  return out;
}

DynamicImage dynamic_image(const BlockDecomposition& bd, const ProjPointX& z, double tol) {
  const int n1 = bd.spec.size();
  if (z.lift().size() != n1)
    throw std::invalid_argument("dynamic_image: dimension mismatch");
  double mx = 0;
  for (int i = 0; i < n1; ++i) mx = std::max(mx, std::abs(z.lift()(i)));
  // least block with a nonzero component
  int blk = -1;
  for (int b = 0; b < bd.blocks() && blk < 0; ++b) {
    int s = bd.block_start(b);
    for (int j = 0; j < bd.dims[b]; ++j)
      if (std::abs(z.lift()(s + j)) > tol * mx) {
        blk = b;
        break;
      }
  }
  if (blk < 0) throw ZeroPointError();

  // y_z = [lim D_{i,k} z_i] in A_i
  VecX y = VecX::Zero(n1);
  int s = bd.block_start(blk);
  for (int j = 0; j < bd.dims[blk]; ++j)
    y(s + j) = bd.limit_blocks[blk][j] * z.lift()(s + j);
  std::optional<ProjSubspaceX> V_prev;
  if (blk > 0) {
    MatX B = MatX::Zero(n1, s);
    for (int j = 0; j < s; ++j) B(j, j) = 1.0;
    V_prev = ProjSubspaceX(std::move(B));
  }
  MatX J = MatX::Zero(n1, s + 1);
  for (int j = 0; j < s; ++j) J(j, j) = 1.0;
  J.col(s) = y;
  return DynamicImage{blk + 1, ProjPointX(y), std::move(V_prev), ProjSubspaceX(std::move(J))};
}

std::pair<int, ProjSubspaceX> middle_space(const BlockDecomposition& bd) {
  const int n1 = bd.spec.size();
  const int mid = (n1) / 2;  // e_{floor((n+1)/2)}, 1-based -> 0-based index mid-1
  int idx = mid - 1;
  int s0 = bd.block_of[idx];
  FlagPair fl = flags_of(bd);
  return {s0 + 1, fl.V[s0]};
}

// ------------------------------------------------------ Frances limit set

bool tends_simply_to_infinity(const ProjMapX& g, int kmax, double tol,
                              CartanDecomposition* stabilized) {
  MatX P = g.matrix();
  double scale = 0;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) scale = std::max(scale, std::abs(P(i, j)));
  P /= scale;
  CartanDecomposition prev = cartan_projection(P);
  int stable = 0;
  double prev_ratio = prev.mu(0) / prev.mu(prev.mu.size() - 1);
  bool diverging = false;
  for (int k = 2; k <= kmax; ++k) {
    MatX Q = P * g.matrix();
    double s = 0;
    for (int i = 0; i < Q.rows(); ++i)
      for (int j = 0; j < Q.cols(); ++j) s = std::max(s, std::abs(Q(i, j)));
    Q /= s;
    CartanDecomposition cur = cartan_projection(Q);
    double d1 = 0, d2 = 0;
    for (int i = 0; i < Q.rows(); ++i)
      for (int j = 0; j < Q.cols(); ++j) {
        d1 = std::max(d1, std::abs(cur.k1(i, j) - prev.k1(i, j)));
        d2 = std::max(d2, std::abs(cur.k2(i, j) - prev.k2(i, j)));
      }
    double ratio = cur.mu(0) / cur.mu(cur.mu.size() - 1);
    if (d1 <= tol && d2 <= tol)
      ++stable;
    else
      stable = 0;
    if (ratio > prev_ratio * (1.0 + 1e-9) && ratio > 1e4) diverging = true;
    prev = std::move(cur);
    prev_ratio = ratio;
    P = std::move(Q);
    if (stable >= 3 && diverging) {
      if (stabilized) *stabilized = prev;
      return true;
    }
  }
  return false;
}

namespace {

// Eigen-decomposition route for diagonalizable elements: moduli give the
// singular law b_i = |lambda_i| (c_i = 1), and the attracting flags are
// spans of eigenvector groups.
struct EigenBlocks {
  std::vector<cplx> values;        // sorted by modulus descending
  std::vector<VecX> vectors;
  std::vector<int> block_of;
  int blocks = 0;
  bool valid = false;
};

EigenBlocks eigen_blocks(const ProjMapX& g, double tol) {
  EigenBlocks out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g.matrix());
  if (es.info() != Eigen::Success) return out;
  const int n1 = g.size();
  std::vector<int> order(n1);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
  });
  for (int i : order) {
    out.values.push_back(es.eigenvalues()(i));
    out.vectors.push_back(es.eigenvectors().col(i));
  }
  // diagonalizability check: eigenvector matrix well conditioned enough
  MatX EV(n1, n1);
  for (int j = 0; j < n1; ++j) EV.col(j) = out.vectors[j];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(EV);
  if (svd.singularValues()(n1 - 1) < 1e-8 * svd.singularValues()(0)) return out;
  out.block_of.resize(n1);
  int blk = 0;
  out.block_of[0] = 0;
  for (int i = 1; i < n1; ++i) {
    double a = std::abs(out.values[i - 1]), b = std::abs(out.values[i]);
    if (std::abs(a - b) > tol * std::max(1.0, a)) ++blk;
    out.block_of[i] = blk;
  }
  out.blocks = blk + 1;
  out.valid = true;
  return out;
}

ProjSubspaceX span_of(const std::vector<VecX>& vs) {
  MatX B(vs.at(0).size(), vs.size());
  for (size_t j = 0; j < vs.size(); ++j) B.col(static_cast<int>(j)) = vs[j];
  return ProjSubspaceX(std::move(B));
}

// L_a for the forward power sequence of a diagonalizable g: the span of the
// eigenvectors of the top blocks, down to the block containing the middle
// index. Inverse direction = same with the order reversed.
std::optional<ProjSubspaceX> frances_L_of_direction(const EigenBlocks& eb, bool forward,
                                                    double tol) {
  const int n1 = static_cast<int>(eb.values.size());
  if (eb.blocks <= 1) return std::nullopt;  // no divergence in QP terms
  (void)tol;
  std::vector<int> order(n1);
  std::iota(order.begin(), order.end(), 0);
  if (!forward) std::reverse(order.begin(), order.end());
  // block sizes along this direction
  std::vector<int> blocks;
  {
    int prev = -1;
    for (int idx : order) {
      int b = eb.block_of[idx];
      if (b != prev) {
        blocks.push_back(1);
        prev = b;
      } else {
        ++blocks.back();
      }
    }
  }
  int mid = n1 / 2;   // e_{floor((n+1)/2)}, 1-based
  int upto = 0, acc = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    acc += blocks[b];
    if (acc >= mid) {
      upto = acc;
      break;
    }
  }
  std::vector<VecX> vs;
  for (int i = 0; i < upto; ++i) vs.push_back(eb.vectors[order[i]]);
  return span_of(vs);
}

}  // namespace

std::optional<ProjPointX> dominant_vector_nd(const ProjMapX& g, double tol) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g.matrix());
  if (es.info() != Eigen::Success) return std::nullopt;
  const int n1 = g.size();
  int best = 0;
  for (int i = 1; i < n1; ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  double top = std::abs(es.eigenvalues()(best));
  for (int i = 0; i < n1; ++i)
    if (i != best && std::abs(std::abs(es.eigenvalues()(i)) - top) <= tol * std::max(1.0, top))
      return std::nullopt;
  return ProjPointX(VecX(es.eigenvectors().col(best)));
}

LimitSetDescriptor frances_cyclic(const ProjMapX& g, double tol) {
  if (!has_infinite_order(g, 64, tol)) throw NoDivergentSequenceError();
  LimitSetDescriptor out;
  out.exactness = LimitSetDescriptor::Exactness::symbolic;

  EigenBlocks eb = eigen_blocks(g, tol);
  if (eb.valid) {
    bool all_unit = true;
    for (const auto& v : eb.values) all_unit = all_unit && std::abs(std::abs(v) - 1.0) <= tol;
    if (all_unit) throw NoDivergentSequenceError();
    auto Lf = frances_L_of_direction(eb, true, tol);
    auto Lb = frances_L_of_direction(eb, false, tol);
    if (Lf) out.add_subspace(*Lf, std::max(tol, 1e-7));
    if (Lb) out.add_subspace(*Lb, std::max(tol, 1e-7));
    return out;
  }

  // Non-diagonalizable: detect the stabilized Cartan factors of g^k and read
  // the block structure off the singular value growth.
  for (int dir : {+1, -1}) {
    ProjMapX base = dir > 0 ? g : g.inverse();
    CartanDecomposition cd;
    // Jordan blocks rotate the Cartan factors at O(1/k^2) per step, so the
    // stabilization tolerance here is necessarily coarse.
    if (!tends_simply_to_infinity(base, 400, std::max(tol, 1e-4), &cd)) continue;
    // growth rates: mu_i(g^{k+1}) / mu_i(g^k) at stabilization
    MatX P = base.matrix();
    for (int k = 0; k < 60; ++k) {
      P = P * base.matrix();
      double s = 0;
      for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j) s = std::max(s, std::abs(P(i, j)));
      P /= s;
    }
    CartanDecomposition c1 = cartan_projection(P);
    CartanDecomposition c2 = cartan_projection(MatX(P * base.matrix()));
    const int n1 = g.size();
    std::vector<double> rate(n1);
    for (int i = 0; i < n1; ++i) rate[i] = c2.mu(i) / c1.mu(i);
    double total = 0;
    for (double r : rate) total += std::log(r);
    // block split where growth rates differ; polynomial wobble inside a
    // Jordan block decays like 1/k and sits well under this threshold
    int mid = n1 / 2;
    int upto = 0;
    for (int i = 0; i < n1; ++i) {
      if (i + 1 == n1 || std::abs(std::log(rate[i + 1]) - std::log(rate[i])) > 0.05) {
        if (i + 1 >= mid) {
          upto = i + 1;
          break;
        }
      }
    }
    if (upto == 0 || upto == n1) continue;
    std::vector<VecX> vs;
    for (int i = 0; i < upto; ++i) vs.push_back(c1.k1.col(i));
    out.add_subspace(span_of(vs), std::max(tol, 1e-6));
  }
  if (out.components.empty()) throw NoDivergentSequenceError();
  return out;
}

std::vector<ProjSubspaceX> frances_group_approx(const WordOrbit& orbit, double tol) {
  std::vector<ProjSubspaceX> out;
  for (const auto& [w, e] : orbit.elements) {
    LimitSetDescriptor d;
    try {
      d = frances_cyclic(e, tol);
    } catch (const NoDivergentSequenceError&) {
      continue;
    }
    for (const auto& c : d.components) {
      if (!c.subspace) continue;
      bool dup = false;
      for (const auto& s : out) dup = dup || s.equal(*c.subspace, std::max(tol, 1e-7));
      if (!dup) out.push_back(*c.subspace);
    }
  }
  return out;
}

PureDimension check_purely_dimensional(const std::vector<ProjSubspaceX>& subspaces, int n) {
  if (subspaces.empty()) throw EmptyInputError();
  PureDimension out;
  for (const auto& s : subspaces) out.k = std::max(out.k, s.proj_dim());
  bool uniform = true;
  for (const auto& s : subspaces) uniform = uniform && s.proj_dim() == out.k;
  out.ok = uniform && out.k >= n / 2;
  return out;
}

// --------------------------------------------------------------- polygon

PolygonDoc polygon_doc(const BlockDecomposition& bd, const std::vector<std::vector<int>>& hulls) {
  PolygonDoc doc;
  doc.weights = bd.dims;
  doc.attracting = 1;
  doc.repelling = bd.blocks();
  for (const auto& h : hulls) {
    PolygonDoc::Hull hull;
    int total = 0;
    for (int v : h) {
      if (v < 1 || v > bd.blocks()) throw BadSubsetError();
      hull.vertices.push_back(v);
      total += bd.dims[v - 1];
    }
    hull.proj_dim = total - 1;
    doc.hulls.push_back(std::move(hull));
  }
  return doc;
}

std::string polygon_svg(const PolygonDoc& doc) {
  const int m = static_cast<int>(doc.weights.size());
  const double cx = 160, cy = 160, R = 110;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"320\" height=\"320\" "
        "viewBox=\"0 0 320 320\">\n";
  auto vx = [&](int i) { return cx + R * std::cos(2 * M_PI * i / std::max(m, 1) - M_PI / 2); };
  auto vy = [&](int i) { return cy + R * std::sin(2 * M_PI * i / std::max(m, 1) - M_PI / 2); };
  // hulls first (translucent green)
  for (const auto& h : doc.hulls) {
    os << "  <polygon points=\"";
    for (size_t j = 0; j < h.vertices.size(); ++j) {
      int i = h.vertices[j] - 1;
      os << vx(i) << "," << vy(i) << (j + 1 < h.vertices.size() ? " " : "");
    }
    os << "\" fill=\"#3cb371\" fill-opacity=\"0.35\" stroke=\"#2e8b57\"/>\n";
    int i0 = h.vertices.at(0) - 1;
    os << "  <text x=\"" << vx(i0) + 8 << "\" y=\"" << vy(i0) - 8
       << "\" font-size=\"11\">dim " << h.proj_dim << "</text>\n";
  }
  // polygon outline
  if (m >= 2) {
    os << "  <polygon points=\"";
    for (int i = 0; i < m; ++i) os << vx(i) << "," << vy(i) << (i + 1 < m ? " " : "");
    os << "\" fill=\"none\" stroke=\"#333\"/>\n";
  }
  // vertices: radius proportional to weight; attracting red, repelling white
  for (int i = 0; i < m; ++i) {
    double r = 6.0 + 4.0 * doc.weights[i];
    const char* fill = (i + 1 == doc.attracting) ? "#d33"
                       : (i + 1 == doc.repelling) ? "#fff"
                                                  : "#888";
    os << "  <circle cx=\"" << vx(i) << "\" cy=\"" << vy(i) << "\" r=\"" << r << "\" fill=\""
       << fill << "\" stroke=\"#222\"/>\n";
    os << "  <text x=\"" << vx(i) - 4 << "\" y=\"" << vy(i) + 4 << "\" font-size=\"12\">"
       << doc.weights[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace projdyn
