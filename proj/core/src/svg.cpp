#include "lienard/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

class Canvas {
 public:
  Canvas(const PortraitOptions& o) : o_(o) {
    w_ = o.width;
    h_ = static_cast<int>(std::lround(o.width * (o.y_max - o.y_min) / (o.x_max - o.x_min)));
  }
  int width() const { return w_; }
  int height() const { return h_; }

  std::string coords(Point p) const {
    char buf[48];
    const double px = (p.x - o_.x_min) / (o_.x_max - o_.x_min) * w_;
    const double py = (o_.y_max - p.y) / (o_.y_max - o_.y_min) * h_;
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", px, py);
    return buf;
  }
  bool inside(Point p) const {
    const double mx = 0.05 * (o_.x_max - o_.x_min);
    const double my = 0.05 * (o_.y_max - o_.y_min);
    return p.x > o_.x_min - mx && p.x < o_.x_max + mx && p.y > o_.y_min - my && p.y < o_.y_max + my;
  }

 private:
  PortraitOptions o_;
  int w_;
  int h_;
};

void polyline(std::ostringstream& os, const Canvas& c, const std::vector<Point>& pts, const char* cls) {
  os << "  <polyline class=\"" << cls << "\" points=\"";
  bool first = true;
  for (const Point& p : pts) {
    if (!c.inside(p)) continue;
    if (!first) os << ' ';
    first = false;
    os << c.coords(p);
  }
  os << "\"/>\n";
}

}  // namespace

std::string phase_portrait_svg(const LienardField& field, const CycleSet& cycles, const PortraitOptions& options,
                               const FlowSettings& settings) {
  if (!(options.x_max > options.x_min) || !(options.y_max > options.y_min) || options.width <= 0) {
    throw ValidationFailure("portrait box must have positive extent");
  }
  const Canvas c(options);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width() << "\" height=\"" << c.height()
     << "\" viewBox=\"0 0 " << c.width() << ' ' << c.height() << "\">\n";
  os << "  <style>.axis{stroke:#999;stroke-width:1}.section{stroke:#2a7;stroke-width:2}"
        ".orbit{fill:none;stroke:#88a;stroke-width:0.8}.cycle{fill:none;stroke-width:2.5}"
        ".attracting{stroke:#c33}.repelling{stroke:#36c;stroke-dasharray:6 3}</style>\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "  <line class=\"axis\" x1=\"0\" y1=\"" << c.coords({0, 0}).substr(c.coords({0, 0}).find(',') + 1)
     << "\" x2=\"" << c.width() << "\" y2=\"" << c.coords({0, 0}).substr(c.coords({0, 0}).find(',') + 1) << "\"/>\n";
  const std::string ox = c.coords({0, 0}).substr(0, c.coords({0, 0}).find(','));
  os << "  <line class=\"axis\" x1=\"" << ox << "\" y1=\"0\" x2=\"" << ox << "\" y2=\"" << c.height() << "\"/>\n";
  const std::string top = c.coords({0, options.y_max});
  const std::string origin = c.coords({0, 0});
  os << "  <line class=\"section\" x1=\"" << ox << "\" y1=\"" << origin.substr(origin.find(',') + 1) << "\" x2=\""
     << ox << "\" y2=\"" << top.substr(top.find(',') + 1) << "\"/>\n";

  const int n = std::max(0, options.sample_orbits);
  const int steps = 600;
  for (int k = 0; k < n; ++k) {
    const double s = options.y_max * (k + 0.5) / n;
    std::vector<double> times(steps + 1);
    for (int j = 0; j <= steps; ++j) times[j] = options.orbit_time * j / steps;
    try {
      polyline(os, c, flow_samples(field, {0.0, s}, times, settings), "orbit");
    } catch (const Error&) {
      // Orbits that blow up are simply not drawn.
    }
  }
  for (const auto& cyc : cycles.cycles) {
    auto pts = cycle_points(field, cyc, 256, settings);
    pts.push_back(pts.front());
    polyline(os, c, pts, cyc.stability == Stability::attracting ? "cycle attracting" : "cycle repelling");
  }
  os << "  <circle cx=\"" << ox << "\" cy=\"" << origin.substr(origin.find(',') + 1) << "\" r=\"3\" fill=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace lienard
