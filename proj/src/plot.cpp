#include "odsearch/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

// Blue for the first series and orange for the second, matching the usual
// value/score overlay colours.
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 32.0;
constexpr double kPanelGap = 28.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // Avoid "-0.00" so mirrored inputs do not differ only in sign of zero.
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

struct Bounds {
  double x0, x1, y0, y1;
};

Bounds bounds_of(const std::vector<const Series*>& series) {
  Bounds b{series.front()->x.front(), series.front()->x.front(), series.front()->y.front(),
           series.front()->y.front()};
  for (const auto* s : series) {
    for (const double x : s->x) {
      b.x0 = std::min(b.x0, x);
      b.x1 = std::max(b.x1, x);
    }
    for (const double y : s->y) {
      b.y0 = std::min(b.y0, y);
      b.y1 = std::max(b.y1, y);
    }
  }
  if (b.x1 == b.x0) {
    b.x0 -= 0.5;
    b.x1 += 0.5;
  }
  if (b.y1 == b.y0) {
    b.y0 -= 0.5;
    b.y1 += 0.5;
  }
  return b;
}

void draw_panel(std::ostringstream& svg, const std::vector<const Series*>& series, std::size_t colour_offset,
                double left, double top, double width, double height) {
  const Bounds b = bounds_of(series);
  const auto px = [&](double x) { return left + (x - b.x0) / (b.x1 - b.x0) * width; };
  const auto py = [&](double y) { return top + height - (y - b.y0) / (b.y1 - b.y0) * height; };

  svg << "<g class=\"axes\">"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + height) << "\" x2=\"" << num(left + width)
      << "\" y2=\"" << num(top + height) << "\" stroke=\"#444\"/>"
      << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(top + height) << "\" stroke=\"#444\"/>"
      << "<text x=\"" << num(left - 4) << "\" y=\"" << num(top + 10) << "\" text-anchor=\"end\" font-size=\"10\">"
      << label(b.y1) << "</text>"
      << "<text x=\"" << num(left - 4) << "\" y=\"" << num(top + height) << "\" text-anchor=\"end\" font-size=\"10\">"
      << label(b.y0) << "</text>"
      << "<text x=\"" << num(left) << "\" y=\"" << num(top + height + 14) << "\" font-size=\"10\">" << label(b.x0)
      << "</text>"
      << "<text x=\"" << num(left + width) << "\" y=\"" << num(top + height + 14)
      << "\" text-anchor=\"end\" font-size=\"10\">" << label(b.x1) << "</text>"
      << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto* s = series[i];
    svg << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\""
        << kPalette[(colour_offset + i) % std::size(kPalette)] << "\" points=\"";
    for (std::size_t j = 0; j < s->x.size(); ++j) {
      if (j > 0) svg << ' ';
      svg << num(px(s->x[j])) << ',' << num(py(s->y[j]));
    }
    svg << "\"/>\n";
  }
}

void draw_legend(std::ostringstream& svg, const std::vector<const Series*>& series, std::size_t colour_offset,
                 double left, double top) {
  svg << "<g class=\"legend\">";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = top + 14.0 * static_cast<double>(i);
    svg << "<g class=\"legend-entry\"><rect x=\"" << num(left) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
        << kPalette[(colour_offset + i) % std::size(kPalette)] << "\"/><text x=\"" << num(left + 14) << "\" y=\""
        << num(y) << "\" font-size=\"11\">" << escape(series[i]->name) << "</text></g>";
  }
  svg << "</g>\n";
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  if (spec.series.empty()) throw Error(ErrorCode::kEmptySeries, "plot has no series");
  for (const auto& s : spec.series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw Error(ErrorCode::kEmptySeries, "series '" + s.name + "' is empty or has mismatched x/y lengths");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(s.x.begin(), s.x.end(), finite) || !std::all_of(s.y.begin(), s.y.end(), finite)) {
      throw Error(ErrorCode::kNonFiniteValue, "series '" + s.name + "' has non-finite coordinates");
    }
  }

  const double w = spec.width;
  const double h = spec.height;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(w / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
      << "</text>\n";

  const double plot_w = w - kMarginLeft - kMarginRight;
  if (spec.kind == PlotKind::kDecomposition) {
    const auto panels = static_cast<double>(spec.series.size());
    const double panel_h = (h - kMarginTop - kMarginBottom - kPanelGap * (panels - 1)) / panels;
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
      const double top = kMarginTop + static_cast<double>(i) * (panel_h + kPanelGap);
      draw_panel(svg, {&spec.series[i]}, i, kMarginLeft, top, plot_w, panel_h);
      svg << "<text x=\"" << num(kMarginLeft + 4) << "\" y=\"" << num(top - 4) << "\" font-size=\"11\">"
          << escape(spec.series[i].name) << "</text>\n";
    }
    std::vector<const Series*> all;
    for (const auto& s : spec.series) all.push_back(&s);
    draw_legend(svg, all, 0, w - kMarginRight - 120, 14);
  } else {
    std::vector<const Series*> all;
    for (const auto& s : spec.series) all.push_back(&s);
    draw_panel(svg, all, 0, kMarginLeft, kMarginTop, plot_w, h - kMarginTop - kMarginBottom);
    draw_legend(svg, all, 0, w - kMarginRight - 120, kMarginTop + 12);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace odsearch
