#include "projdyn/svg.hpp"

#include <cmath>
#include <sstream>

namespace projdyn {

namespace {

struct Frame {
  double xmin, xmax, ymin, ymax, w = 420, h = 420, margin = 30;
  double px(double x) const { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); }
  double py(double y) const { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); }
};

void clip_draw_line(std::ostringstream& os, const Frame& f, double a, double b, double c) {
  // a x + b y = c within the frame box
  std::vector<std::pair<double, double>> pts;
  auto push = [&](double x, double y) {
    if (x >= f.xmin - 1e-9 && x <= f.xmax + 1e-9 && y >= f.ymin - 1e-9 && y <= f.ymax + 1e-9)
      pts.emplace_back(x, y);
  };
  if (std::abs(b) > 1e-12) {
    push(f.xmin, (c - a * f.xmin) / b);
    push(f.xmax, (c - a * f.xmax) / b);
  }
  if (std::abs(a) > 1e-12) {
    push((c - b * f.ymin) / a, f.ymin);
    push((c - b * f.ymax) / a, f.ymax);
  }
  if (pts.size() < 2) return;
  os << "  <line x1=\"" << f.px(pts[0].first) << "\" y1=\"" << f.py(pts[0].second) << "\" x2=\""
     << f.px(pts[1].first) << "\" y2=\"" << f.py(pts[1].second)
     << "\" stroke=\"#456\" stroke-width=\"1.4\"/>\n";
}

}  // namespace

std::string arrangement_svg(double zeta1, double zeta2) {
  Frame f{};
  double lo = std::min({0.0, zeta1, zeta2}) - 1.0;
  double hi = std::max({1.0, zeta1, zeta2}) + 1.0;
  f.xmin = f.ymin = lo;
  f.xmax = f.ymax = hi;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w << "\" height=\"" << f.h
     << "\" viewBox=\"0 0 " << f.w << " " << f.h << "\">\n";
  // l0: y = 0; l1: x + y = 1; l2: x = 0; l3: x/z1 + y/z2 = 1
  clip_draw_line(os, f, 0, 1, 0);
  clip_draw_line(os, f, 1, 1, 1);
  clip_draw_line(os, f, 1, 0, 0);
  clip_draw_line(os, f, 1.0 / zeta1, 1.0 / zeta2, 1.0);
  struct Q {
    const char* name;
    double x, y;
  };
  double den = zeta1 - zeta2;
  std::vector<Q> pts = {
      {"q01", 1, 0},
      {"q02", 0, 0},
      {"q03", zeta1, 0},
      {"q12", 0, 1},
      {"q13", zeta1 * (1 - zeta2) / den, zeta2 * (zeta1 - 1) / den},
      {"q23", 0, zeta2},
  };
  for (const auto& q : pts) {
    os << "  <circle cx=\"" << f.px(q.x) << "\" cy=\"" << f.py(q.y)
       << "\" r=\"3.5\" fill=\"#c33\"/>\n";
    os << "  <text x=\"" << f.px(q.x) + 5 << "\" y=\"" << f.py(q.y) - 5 << "\" font-size=\"11\">"
       << q.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace projdyn
