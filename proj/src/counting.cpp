#include "projdyn/counting.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

namespace projdyn {

double poincare_distance(cplx z, cplx w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) throw OutsideDiskError();
  double t = std::abs((z - w) / (1.0 - std::conj(z) * w));
  t = std::min(t, 1.0 - 1e-16);
  return std::log((1.0 + t) / (1.0 - t));
}

cplx mobius_apply(const Mat2& m, cplx z) {
  return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1));
}

void FuchsianSpec::validate(int samples, unsigned seed) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const auto& g : generators) {
    cplx det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (std::abs(det - 1.0) > 1e-8)
      throw std::invalid_argument("FuchsianSpec: generator determinant != 1");
    for (int s = 0; s < samples; ++s) {
      double r = std::sqrt(uni(rng)) * 0.999;
      double th = 2 * M_PI * uni(rng);
      cplx z = std::polar(r, th);
      if (std::abs(mobius_apply(g, z)) >= 1.0 + 1e-12)
        throw std::invalid_argument("FuchsianSpec: generator does not preserve the disk");
    }
  }
}

FuchsianSpec FuchsianSpec::reference_rank4(double translation) {
  // Hyperbolic along the axis through +-1: [[cosh t, sinh t], [sinh t, cosh t]]
  // (translation length 2t), conjugated by rotations to axes at angles
  // k pi / 4.
  FuchsianSpec spec;
  double t = translation / 2;
  Mat2 H;
  H << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
  for (int k = 0; k < 4; ++k) {
    double phi = k * M_PI / 4;
    Mat2 R;
    R << std::polar(1.0, phi / 2), 0, 0, std::polar(1.0, -phi / 2);
    spec.generators.push_back(R * H * R.inverse());
  }
  spec.free_rank_claim = 4;
  return spec;
}

OrbitTable orbit_enumerate(const FuchsianSpec& spec, cplx z, cplx w, int word_bound, double tol) {
  if (std::abs(z) >= 1 || std::abs(w) >= 1) throw OutsideDiskError();
  OrbitTable table;
  table.z = z;
  table.w = w;
  table.word_bound = word_bound;
  table.num_gens = static_cast<int>(spec.generators.size());
  table.rows.push_back({Word{}, w, poincare_distance(z, w)});
  if (word_bound >= 1 && !spec.generators.empty()) {
    std::vector<Mat2> letters = spec.generators;
    for (const auto& g : spec.generators) letters.push_back(g.inverse());
    std::vector<OrbitRow> rows;
    std::function<Mat2(const Mat2&, const Mat2&)> mul = [](const Mat2& a, const Mat2& b) {
      return Mat2(a * b);
    };
    std::function<void(const Word&, const Mat2&)> visit = [&](const Word& word, const Mat2& m) {
      cplx img = mobius_apply(m, w);
      rows.push_back({word, img, poincare_distance(z, img)});
    };
    for_each_reduced_word_sharded<Mat2>(letters, table.num_gens, word_bound, mul, visit);
    // A spec claiming to be free on its generators has all reduced words
    // distinct; otherwise dedup repeated orbit points on a rounding grid.
    bool is_free = spec.free_rank_claim &&
                   *spec.free_rank_claim == static_cast<int>(spec.generators.size());
    if (is_free) {
      for (auto& r : rows) table.rows.push_back(std::move(r));
    } else {
      const double cell = std::max(tol, 1e-9);
      std::unordered_map<long long, int> grid;
      auto key_of = [&](cplx p, int dx, int dy) {
        long long a = static_cast<long long>(std::floor(p.real() / cell)) + dx;
        long long b = static_cast<long long>(std::floor(p.imag() / cell)) + dy;
        return a * 2000003LL + b;
      };
      grid[key_of(w, 0, 0)] = 1;
      for (auto& r : rows) {
        bool dup = false;
        for (int dx = -1; dx <= 1 && !dup; ++dx)
          for (int dy = -1; dy <= 1 && !dup; ++dy)
            if (grid.count(key_of(r.image, dx, dy))) dup = true;
        if (!dup) {
          grid[key_of(r.image, 0, 0)] = 1;
          table.rows.push_back(std::move(r));
        }
      }
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const OrbitRow& a, const OrbitRow& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.word < b.word;
  });
  return table;
}

OrbitalCount orbital_count(const OrbitTable& table, double r) {
  OrbitalCount out;
  for (const auto& row : table.rows)
    if (row.distance < r) ++out.count;
  out.truncated = r > table.horizon();
  return out;
}

std::pair<unsigned long long, unsigned long long> cayley_counts(int n) {
  if (n < 0) throw std::invalid_argument("cayley_counts: n >= 0");
  if (n > 22) throw std::invalid_argument("cayley_counts: n too large for exact arithmetic");
  if (n == 0) return {1ULL, 1ULL};
  unsigned long long p = 1;
  for (int i = 0; i < n - 1; ++i) p *= 7ULL;
  unsigned long long sn = 8ULL * p;
  unsigned long long bn = 1ULL + 4ULL * (p * 7ULL - 1ULL) / 3ULL;
  return {sn, bn};
}

NhatBounds nhat_bounds(long long n0, double epsilon, double vol_eps_ball, double R) {
  if (n0 < 1 || epsilon <= 0 || vol_eps_ball <= 0)
    throw std::invalid_argument("nhat_bounds: need N0 >= 1, eps > 0, vol > 0");
  NhatBounds out;
  out.combinatorial = 49.0 * static_cast<double>(n0) + 16.0;
  out.volume = (49.0 / 4.0) * (std::exp(epsilon) / vol_eps_ball) * std::exp(R) + 16.0;
  out.slice_volume = 6.0 * M_PI * out.volume;
  return out;
}

long long nhat_measured(const OrbitTable& table_pp, double R, int samples, unsigned seed) {
  // Sample the hyperbolic ball B(p, R) uniformly in area; each sample's
  // Dirichlet cell is the nearest enumerated orbit point. The number of
  // distinct cells hit lower-bounds N-hat.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  cplx p = table_pp.z;
  std::set<size_t> cells;
  for (int s = 0; s < samples; ++s) {
    // radius density: area(r) ~ sinh^2(r/2); invert by sampling area fraction
    double frac = uni(rng);
    double r = 2.0 * std::asinh(std::sqrt(frac) * std::sinh(R / 2));
    double th = 2 * M_PI * uni(rng);
    // point at hyperbolic distance r from p in direction th
    double eu = std::tanh(r / 2);
    cplx q0 = std::polar(eu, th);
    cplx q = (q0 + p) / (1.0 + std::conj(p) * q0);
    double best = 1e300;
    size_t best_i = 0;
    for (size_t i = 0; i < table_pp.rows.size(); ++i) {
      double d = poincare_distance(q, table_pp.rows[i].image);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    cells.insert(best_i);
  }
  return static_cast<long long>(cells.size());
}

SeriesResult poincare_series(const OrbitTable& table, double s) {
  SeriesResult out{0.0, 0.0, 0.0};
  for (const auto& row : table.rows) out.partial_sum += std::exp(-s * row.distance);
  // per-letter gap from the deepest shell
  double gap = 1e300;
  for (const auto& row : table.rows)
    if (static_cast<int>(row.word.size()) == table.word_bound && !row.word.empty())
      gap = std::min(gap, row.distance / static_cast<double>(row.word.size()));
  if (gap == 1e300) gap = 0;
  out.per_letter_gap = gap;
  // tail: sum over n > bound of |S_n| e^{-s n gap} with |S_n| for the free
  // group on the spec's generator count
  int k = table.num_gens;
  double branch = std::max(1, 2 * k - 1);
  double x = branch * std::exp(-s * gap);
  if (x >= 1.0 || gap <= 0) {
    out.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    double first = 2.0 * k * std::pow(branch, table.word_bound) *
                   std::exp(-s * gap * (table.word_bound + 1));
    out.tail_bound = first / (1.0 - x);
  }
  return out;
}

namespace {

DeltaEstimate delta_from_rows(const std::vector<double>& sorted_dist,
                              const std::vector<int>& word_len, int word_bound) {
  const size_t n = sorted_dist.size();
  DeltaEstimate out{0, 0, 0};
  // limsup estimate over the last quartile
  for (size_t i = 3 * n / 4; i < n; ++i) {
    if (sorted_dist[i] > 1e-12)
      out.limsup_estimate =
          std::max(out.limsup_estimate, std::log(static_cast<double>(i + 1)) / sorted_dist[i]);
  }
  // bisection on s of partial-sum growth across word-length shells
  auto shell_sum = [&](double s, int upto) {
    double acc = 0;
    for (size_t i = 0; i < n; ++i)
      if (word_len[i] <= upto) acc += std::exp(-s * sorted_dist[i]);
    return acc;
  };
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 40; ++it) {
    double mid = (lo + hi) / 2;
    double a = shell_sum(mid, word_bound - 2);
    double b = shell_sum(mid, word_bound - 1);
    double c = shell_sum(mid, word_bound);
    double inc1 = b - a, inc2 = c - b;
    bool growing = inc2 > inc1 && inc2 > 1e-12;
    if (growing)
      lo = mid;
    else
      hi = mid;
  }
  out.bisection_estimate = (lo + hi) / 2;
  out.spread = std::abs(out.limsup_estimate - out.bisection_estimate);
  return out;
}

}  // namespace

DeltaEstimate critical_exponent(const OrbitTable& table) {
  if (table.rows.size() < 32) throw TooFewRowsError();
  std::vector<double> dist;
  std::vector<int> len;
  for (const auto& r : table.rows) {
    dist.push_back(r.distance);
    len.push_back(static_cast<int>(r.word.size()));
  }
  return delta_from_rows(dist, len, table.word_bound);
}

DeltaEstimate critical_exponent_streaming(const FuchsianSpec& spec, cplx z, cplx w,
                                          int word_bound, double bin_width) {
  // Histogram of distances per word length; memory O(bins).
  std::vector<Mat2> letters = spec.generators;
  for (const auto& g : spec.generators) letters.push_back(g.inverse());
  const int k = static_cast<int>(spec.generators.size());
  std::map<std::pair<int, int>, long long> hist;  // (bin, word length) -> count
  hist[{static_cast<int>(poincare_distance(z, w) / bin_width), 0}]++;
  std::function<Mat2(const Mat2&, const Mat2&)> mul = [](const Mat2& a, const Mat2& b) {
    return Mat2(a * b);
  };
  std::function<void(const Word&, const Mat2&)> visit = [&](const Word& word, const Mat2& m) {
    double d = poincare_distance(z, mobius_apply(m, w));
    hist[{static_cast<int>(d / bin_width), static_cast<int>(word.size())}]++;
  };
  for_each_reduced_word_sharded<Mat2>(letters, k, word_bound, mul, visit);
  // expand histogram into sorted pseudo-rows
  std::vector<double> dist;
  std::vector<int> len;
  std::vector<std::tuple<int, int, long long>> entries;
  for (const auto& [key, count] : hist) entries.emplace_back(key.first, key.second, count);
  std::sort(entries.begin(), entries.end());
  for (const auto& [bin, l, count] : entries)
    for (long long c = 0; c < count; ++c) {
      dist.push_back((bin + 0.5) * bin_width);
      len.push_back(l);
    }
  if (dist.size() < 32) throw TooFewRowsError();
  std::sort(dist.begin(), dist.end());
  return delta_from_rows(dist, len, word_bound);
}

double AtomMeasure::mass_outside(cplx z, double r) const {
  double acc = 0;
  for (const auto& a : atoms)
    if (poincare_distance(z, a.point) >= r) acc += a.weight;
  return acc;
}

AtomMeasure ps_atoms(const FuchsianSpec& spec, const OrbitTable& table, double s,
                     const std::function<double(double)>& h) {
  auto hh = h ? h : [](double) { return 1.0; };
  // companion table based at w for the normalizer f*_s(w, w)
  OrbitTable ww = orbit_enumerate(spec, table.w, table.w, table.word_bound);
  double fstar_ww = 0;
  for (const auto& row : ww.rows) fstar_ww += std::exp(-s * row.distance) * hh(std::exp(row.distance));
  AtomMeasure out;
  out.prenormalizer = fstar_ww;
  double raw_total = 0;
  for (const auto& row : table.rows) {
    double wgt = std::exp(-s * row.distance) * hh(std::exp(row.distance)) / fstar_ww;
    out.atoms.push_back({row.word, row.image, wgt});
    raw_total += wgt;
  }
  for (auto& a : out.atoms) a.weight /= raw_total;
  out.total = 0;
  for (const auto& a : out.atoms) out.total += a.weight;
  return out;
}

double quotient_distance(const FuchsianSpec& spec, cplx lift1, cplx lift2, int word_bound) {
  OrbitTable t = orbit_enumerate(spec, lift1, lift2, word_bound);
  double best = 1e300;
  for (const auto& row : t.rows) best = std::min(best, row.distance);
  return best;
}

double entropy_volume_estimate(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw TooFewSamplesError();
  // least-squares slope of log V against r over the largest-r half
  std::vector<std::pair<double, double>> pts(samples);
  std::sort(pts.begin(), pts.end());
  size_t start = pts.size() / 2;
  if (pts.size() - start < 2) start = pts.size() - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = start; i < pts.size(); ++i) {
    double x = pts[i].first;
    double y = std::log(std::max(pts[i].second, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace projdyn
