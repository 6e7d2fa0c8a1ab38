#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "m2s2/pipeline.hpp"

namespace m2s2 {

namespace {

constexpr double kPanel = 220.0;
constexpr double kMargin = 36.0;
constexpr double kWidth = kPanel + 2 * kMargin;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& title, const std::vector<NamedDiagram>& panels, double threshold) {
  double top = 0.0;
  for (const auto& p : panels)
    for (const auto& pt : p.diagram.points) {
      top = std::max(top, pt.birth);
      if (!pt.essential()) top = std::max(top, pt.death);
    }
  top = top > 0.0 ? top * 1.05 : 1.0;

  const std::size_t n = std::max<std::size_t>(panels.size(), 1);
  const double width = kWidth * static_cast<double>(n);
  const double height = kWidth + 24.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  svg << "<style>.axis{stroke:#333;fill:none}.diag{stroke:#999;stroke-dasharray:4 3}"
         ".point{fill:#1f77b4;fill-opacity:0.7}.essential{fill:#d62728}"
         "text{font-family:sans-serif;font-size:11px}</style>\n";
  svg << "<text x=\"8\" y=\"16\" font-size=\"13\">" << escape(title) << "</text>\n";

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& panel = panels[i];
    const double x0 = kWidth * static_cast<double>(i) + kMargin;
    const double y0 = 24.0 + kMargin;
    const auto px = [&](double v) { return x0 + v / top * kPanel; };
    const auto py = [&](double v) { return y0 + kPanel - v / top * kPanel; };
    svg << "<g class=\"panel\" data-name=\"" << escape(panel.name) << "\">\n";
    svg << "<rect class=\"axis\" x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(kPanel)
        << "\" height=\"" << num(kPanel) << "\"/>\n";
    svg << "<line class=\"diag\" x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(top))
        << "\" y2=\"" << num(py(top)) << "\"/>\n";
    svg << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 - 6) << "\">" << escape(panel.name) << "</text>\n";
    svg << "<text x=\"" << num(x0 + kPanel) << "\" y=\"" << num(y0 + kPanel + 14)
        << "\" text-anchor=\"end\">birth, max " << num(top) << "</text>\n";
    for (const auto& pt : panel.diagram.points) {
      if (pt.persistence() < threshold) continue;
      if (pt.essential()) {
        const double cx = px(pt.birth), cy = y0;
        svg << "<path class=\"point essential\" d=\"M" << num(cx) << ',' << num(cy - 4) << " L" << num(cx + 4)
            << ',' << num(cy + 3) << " L" << num(cx - 4) << ',' << num(cy + 3) << " Z\"/>\n";
      } else {
        svg << "<circle class=\"point\" cx=\"" << num(px(pt.birth)) << "\" cy=\"" << num(py(pt.death))
            << "\" r=\"3\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace m2s2
