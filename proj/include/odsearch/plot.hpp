#pragma once

#include <string>
#include <vector>

namespace odsearch {

enum class PlotKind { kOverlay, kDecomposition, kDensity, kSearchProgress };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// kOverlay, kDensity and kSearchProgress draw every series in one panel with
/// a shared legend; kDecomposition stacks one panel per series.
struct PlotSpec {
  PlotKind kind = PlotKind::kOverlay;
  std::vector<Series> series;
  std::string title;
  int width = 960;
  int height = 480;
};

/// Self-contained SVG document. Identical specs give identical bytes. Throws
/// kEmptySeries for no series, an empty series or mismatched x/y lengths, and
/// kNonFiniteValue for NaN/Inf coordinates.
std::string render_svg(const PlotSpec& spec);

}  // namespace odsearch
