#include "gaborface/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gaborface/errors.hpp"

namespace gaborface {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

}  // namespace

std::string render_scatter(const Configuration& config, const std::map<std::string, std::string>& labels,
                           const ScatterStyle& style) {
  if (config.dimension() != 2) {
    throw ValidationError("scatter plots need a 2-dimensional configuration, got d = " +
                          std::to_string(config.dimension()));
  }
  const auto& xy = config.coordinates;
  const Eigen::Index n = xy.rows();
  const double cx = n ? 0.5 * (xy.col(0).maxCoeff() + xy.col(0).minCoeff()) : 0.0;
  const double cy = n ? 0.5 * (xy.col(1).maxCoeff() + xy.col(1).minCoeff()) : 0.0;
  double half_extent = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    half_extent = std::max({half_extent, std::abs(xy(i, 0) - cx), std::abs(xy(i, 1) - cy)});
  }
  if (half_extent == 0.0) half_extent = 1.0;
  const double plot = style.canvas - 2.0 * style.margin;
  const double unit = plot / (2.0 * half_extent);  // pixels per configuration unit, both axes
  const double mid = style.canvas / 2.0;
  auto px = [&](double x) { return mid + (x - cx) * unit; };
  auto py = [&](double y) { return mid - (y - cy) * unit; };

  const std::string size = std::to_string(style.canvas);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size +
         "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size + "\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg += "  <text x=\"" + fixed(mid) + "\" y=\"20.00\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" + escape_xml(style.title) + "</text>\n";
  }
  const std::string lo = fixed(style.margin), hi = fixed(style.canvas - style.margin);
  svg += "  <g stroke=\"#999999\" stroke-width=\"1\">\n";
  svg += "    <line x1=\"" + lo + "\" y1=\"" + fixed(py(cy)) + "\" x2=\"" + hi + "\" y2=\"" + fixed(py(cy)) + "\"/>\n";
  svg += "    <line x1=\"" + fixed(px(cx)) + "\" y1=\"" + lo + "\" x2=\"" + fixed(px(cx)) + "\" y2=\"" + hi + "\"/>\n";
  svg += "  </g>\n";
  svg += "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& id = config.item_ids[static_cast<std::size_t>(i)];
    const auto it = labels.find(id);
    const std::string label = it == labels.end() || it->second.empty() ? id : it->second;
    const std::string x = fixed(px(xy(i, 0))), y = fixed(py(xy(i, 1)));
    svg += "    <circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"3\" fill=\"black\"><title>" + escape_xml(id) +
           "</title></circle>\n";
    svg += "    <text x=\"" + fixed(px(xy(i, 0)) + 5) + "\" y=\"" + fixed(py(xy(i, 1)) - 5) + "\">" +
           escape_xml(label) + "</text>\n";
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

}  // namespace gaborface
