#pragma once

#include <expat.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "kinkfit/error.hpp"

namespace kinkfit::testing {

/// The error code thrown by f, or nullopt if it returns normally.
inline std::optional<ErrorCode> error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Strict XML well-formedness via expat.
inline bool well_formed_xml(const std::string& doc) {
  XML_Parser parser = XML_ParserCreate(nullptr);
  const auto status =
      XML_Parse(parser, doc.data(), static_cast<int>(doc.size()), XML_TRUE);
  XML_ParserFree(parser);
  return status == XML_STATUS_OK;
}

struct Pixel {
  double x;
  double y;
};

/// Coordinates of every polyline with the given class, in document order.
inline std::vector<std::vector<Pixel>> polylines(const std::string& svg,
                                                 const std::string& cls) {
  std::vector<std::vector<Pixel>> out;
  const std::regex line_re("<polyline class=\"" + cls + "\"[^>]*points=\"([^\"]*)\"");
  for (std::sregex_iterator it(svg.begin(), svg.end(), line_re), end; it != end; ++it) {
    std::vector<Pixel> pts;
    const std::string coords = (*it)[1];
    const std::regex pair_re("([-0-9.]+),([-0-9.]+)");
    for (std::sregex_iterator p(coords.begin(), coords.end(), pair_re); p != end; ++p) {
      pts.push_back({std::stod((*p)[1]), std::stod((*p)[2])});
    }
    out.push_back(std::move(pts));
  }
  return out;
}

inline std::size_t count_of(const std::string& svg, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = svg.find(needle); pos != std::string::npos;
       pos = svg.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

/// Affine pixel -> data map recovered from tick marks and their labels.
struct AxisMap {
  double scale;   // data units per pixel
  double offset;  // data value at pixel 0

  double operator()(double pixel) const { return offset + scale * pixel; }
};

/// axis is 'x' or 'y'. Uses the first and last tick to fix the map.
inline std::optional<AxisMap> axis_from_ticks(const std::string& svg, char axis) {
  const std::string a(1, axis);
  const std::regex tick_re(
      "<line class=\"" + a + "-tick\" x1=\"([-0-9.]+)\" y1=\"([-0-9.]+)\"");
  const std::regex label_re("<text class=\"" + a + "-tick-label\"[^>]*>([^<]*)</text>");
  std::vector<double> pixels;
  std::vector<double> values;
  for (std::sregex_iterator it(svg.begin(), svg.end(), tick_re), end; it != end; ++it) {
    pixels.push_back(std::stod((*it)[axis == 'x' ? 1 : 2]));
  }
  for (std::sregex_iterator it(svg.begin(), svg.end(), label_re), end; it != end; ++it) {
    values.push_back(std::stod((*it)[1]));
  }
  if (pixels.size() < 2 || pixels.size() != values.size()) return std::nullopt;
  const double scale = (values.back() - values.front()) / (pixels.back() - pixels.front());
  return AxisMap{scale, values.front() - scale * pixels.front()};
}

}  // namespace kinkfit::testing
