#include "kinkfit/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "kinkfit/error.hpp"

namespace kinkfit {

std::string_view to_string(SeriesRole role) noexcept {
  switch (role) {
    case SeriesRole::kModelCurve: return "model-curve";
    case SeriesRole::kDataPoints: return "data-points";
    case SeriesRole::kLimitCurve: return "limit-curve";
  }
  return "model-curve";
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  (void)ec;
  std::string s(buf, ptr);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    // Avoid "-0.00".
    if (!s.empty() && s.front() == '-') s.erase(0, 1);
  }
  return s;
}

std::string px(double v) { return fixed(v, 2); }

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string_view stroke_for(SeriesRole role) {
  switch (role) {
    case SeriesRole::kModelCurve: return "#1f77b4";
    case SeriesRole::kDataPoints: return "#444444";
    case SeriesRole::kLimitCurve: return "#d62728";
  }
  return "#000000";
}

struct Ticks {
  double step;
  int decimals;
  std::vector<double> values;
};

Ticks nice_ticks(AxisRange r) {
  const double raw = (r.hi - r.lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double unit = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  Ticks t;
  t.step = unit * mag;
  t.decimals = std::max(0, -static_cast<int>(std::floor(std::log10(t.step) + 1e-9)));
  const double first = std::ceil(r.lo / t.step - 1e-9);
  const double last = std::floor(r.hi / t.step + 1e-9);
  for (double k = first; k <= last; k += 1.0) {
    t.values.push_back(k * t.step);
  }
  return t;
}

AxisRange widen_if_flat(AxisRange r) {
  if (r.hi > r.lo) return r;
  const double pad = r.lo == 0.0 ? 0.5 : 0.05 * std::abs(r.lo);
  return {r.lo - pad, r.hi + pad};
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw Error(ErrorCode::InvalidParameter, "plot width and height must be > 0");
  }
  const double plot_w = spec.width - spec.margins.left - spec.margins.right;
  const double plot_h = spec.height - spec.margins.top - spec.margins.bottom;
  if (!(plot_w > 0.0) || !(plot_h > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "margins leave no plotting area");
  }
  std::size_t total = 0;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : spec.series) {
    for (const auto& p : s.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::NonFiniteSample, "plot sample is not finite");
      }
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
      ++total;
    }
  }
  if (spec.series.empty() || total == 0) {
    throw Error(ErrorCode::EmptyPlot, "nothing to plot");
  }

  for (const auto* r : {&spec.x_range, &spec.y_range}) {
    if (*r && !(std::isfinite((*r)->lo) && std::isfinite((*r)->hi) &&
                (*r)->lo < (*r)->hi)) {
      throw Error(ErrorCode::InvalidParameter, "axis range must have lo < hi");
    }
  }
  const AxisRange xr = spec.x_range ? *spec.x_range : widen_if_flat({x_lo, x_hi});
  AxisRange yr;
  if (spec.y_range) {
    yr = *spec.y_range;
  } else {
    yr = widen_if_flat({y_lo, y_hi});
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr = {yr.lo - pad, yr.hi + pad};
  }

  const double left = spec.margins.left;
  const double top = spec.margins.top;
  const double bottom = top + plot_h;
  const auto map_x = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto map_y = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << spec.width << "\" height=\"" << spec.height << "\" viewBox=\"0 0 "
      << spec.width << ' ' << spec.height << "\">\n";

  if (!spec.title.empty()) {
    out << "  <text class=\"title\" x=\"" << px(left + 0.5 * plot_w) << "\" y=\""
        << px(0.6 * top) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << xml_escape(spec.title) << "</text>\n";
  }

  out << "  <g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n"
      << "    <line class=\"x-axis\" x1=\"" << px(left) << "\" y1=\"" << px(bottom)
      << "\" x2=\"" << px(left + plot_w) << "\" y2=\"" << px(bottom) << "\"/>\n"
      << "    <line class=\"y-axis\" x1=\"" << px(left) << "\" y1=\"" << px(top)
      << "\" x2=\"" << px(left) << "\" y2=\"" << px(bottom) << "\"/>\n";
  const auto xt = nice_ticks(xr);
  for (double v : xt.values) {
    const double x = map_x(v);
    out << "    <line class=\"x-tick\" x1=\"" << px(x) << "\" y1=\"" << px(bottom)
        << "\" x2=\"" << px(x) << "\" y2=\"" << px(bottom + 6.0) << "\"/>\n";
  }
  const auto yt = nice_ticks(yr);
  for (double v : yt.values) {
    const double y = map_y(v);
    out << "    <line class=\"y-tick\" x1=\"" << px(left - 6.0) << "\" y1=\""
        << px(y) << "\" x2=\"" << px(left) << "\" y2=\"" << px(y) << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (double v : xt.values) {
    out << "    <text class=\"x-tick-label\" x=\"" << px(map_x(v)) << "\" y=\""
        << px(bottom + 20.0) << "\" text-anchor=\"middle\">"
        << fixed(v, xt.decimals) << "</text>\n";
  }
  for (double v : yt.values) {
    out << "    <text class=\"y-tick-label\" x=\"" << px(left - 9.0) << "\" y=\""
        << px(map_y(v) + 4.0) << "\" text-anchor=\"end\">"
        << fixed(v, yt.decimals) << "</text>\n";
  }
  out << "    <text class=\"x-label\" x=\"" << px(left + 0.5 * plot_w) << "\" y=\""
      << px(bottom + 45.0) << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x_label) << "</text>\n"
      << "    <text class=\"y-label\" x=\"" << px(left - 60.0) << "\" y=\""
      << px(top + 0.5 * plot_h) << "\" text-anchor=\"middle\">"
      << xml_escape(spec.y_label) << "</text>\n"
      << "  </g>\n";

  double legend_y = top + 16.0;
  for (const auto& s : spec.series) {
    const auto role = to_string(s.role);
    const auto color = stroke_for(s.role);
    out << "  <g class=\"series " << role << "\">\n";
    if (s.role == SeriesRole::kDataPoints) {
      for (const auto& p : s.points) {
        out << "    <circle class=\"" << role << "\" cx=\"" << px(map_x(p.x))
            << "\" cy=\"" << px(map_y(p.y)) << "\" r=\"2.5\" fill=\"" << color
            << "\"/>\n";
      }
    } else if (!s.points.empty()) {
      out << "    <polyline class=\"" << role << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i > 0) out << ' ';
        out << px(map_x(s.points[i].x)) << ',' << px(map_y(s.points[i].y));
      }
      out << "\"/>\n";
    }
    if (!s.label.empty()) {
      out << "    <text class=\"legend\" x=\"" << px(left + plot_w - 8.0)
          << "\" y=\"" << px(legend_y) << "\" text-anchor=\"end\" "
          << "font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
          << "\">" << xml_escape(s.label) << "</text>\n";
      legend_y += 16.0;
    }
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace kinkfit
