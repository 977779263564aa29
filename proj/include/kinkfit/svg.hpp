#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinkfit {

enum class SeriesRole { kModelCurve, kDataPoints, kLimitCurve };

std::string_view to_string(SeriesRole role) noexcept;

struct PlotPoint {
  double x;
  double y;
};

/// Curves (model and limit) render as one polyline; data points as circles.
struct Series {
  SeriesRole role = SeriesRole::kModelCurve;
  std::string label;
  std::vector<PlotPoint> points;
};

struct AxisRange {
  double lo;
  double hi;
};

struct Margins {
  double left = 80.0;
  double right = 20.0;
  double top = 40.0;
  double bottom = 60.0;
};

struct PlotSpec {
  int width = 720;
  int height = 480;
  Margins margins;
  /// Auto ranges span the data; the y range gets 5% padding on each side.
  std::optional<AxisRange> x_range;
  std::optional<AxisRange> y_range;
  std::vector<Series> series;
  std::string title;
  std::string x_label = "phi";
  std::string y_label = "F";
};

/// Renders an SVG 1.1 document using only svg, g, polyline, circle, line and
/// text elements. Tick marks sit at round numbers (1, 2 or 5 times a power of
/// ten); each carries class "x-tick"/"y-tick" and a matching "*-tick-label"
/// text element holding the data value. Pixel coordinates have two decimals.
///
/// Throws Error(EmptyPlot) without series or points, Error(NonFiniteSample)
/// for NaN/infinite samples and Error(InvalidParameter) for a non-positive
/// canvas or an empty explicit range.
std::string render_svg(const PlotSpec& spec);

}  // namespace kinkfit
