#include "kinkfit/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <system_error>

#include "kinkfit/error.hpp"

namespace kinkfit {

DataSet::DataSet(std::vector<DataPoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.phi) || !std::isfinite(p.f)) {
      throw Error(ErrorCode::NonFiniteValue, "data values must be finite");
    }
  }
  std::stable_sort(points_.begin(), points_.end(),
                   [](const DataPoint& a, const DataPoint& b) {
                     return a.phi < b.phi;
                   });
}

std::vector<double> DataSet::distinct_phi() const {
  std::vector<double> out;
  for (const auto& p : points_) {
    if (out.empty() || p.phi != out.back()) out.push_back(p.phi);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

// nullopt for syntax errors; a non-finite value for overflow, inf or nan.
std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ptr != field.data() + field.size()) return std::nullopt;
  if (ec == std::errc::result_out_of_range) return HUGE_VAL;
  if (ec != std::errc{}) return std::nullopt;
  return v;
}

}  // namespace

DataSet read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<DataPoint> points;

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto text = trim(line);
    if (!have_header) {
      if (text != "phi,F") {
        throw Error(ErrorCode::MalformedHeader,
                    "expected header 'phi,F' on line " + std::to_string(line_no),
                    line_no);
      }
      have_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos ||
        text.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::MalformedRecord,
                  "expected two fields on line " + std::to_string(line_no),
                  line_no);
    }
    const auto phi = parse_number(text.substr(0, comma));
    const auto f = parse_number(text.substr(comma + 1));
    if (!phi || !f) {
      throw Error(ErrorCode::MalformedRecord,
                  "unparseable number on line " + std::to_string(line_no),
                  line_no);
    }
    if (!std::isfinite(*phi) || !std::isfinite(*f)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite value on line " + std::to_string(line_no),
                  line_no);
    }
    points.push_back({*phi, *f});
  }
  if (!have_header) {
    throw Error(ErrorCode::MalformedHeader, "missing header 'phi,F'");
  }
  return DataSet(std::move(points));
}

DataSet read_dataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_dataset(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

void write_dataset(const DataSet& data, std::ostream& out) {
  out << "phi,F\n";
  for (const auto& p : data.points()) {
    out << format_double(p.phi) << ',' << format_double(p.f) << '\n';
  }
}

std::string write_dataset(const DataSet& data) {
  std::ostringstream out;
  write_dataset(data, out);
  return out.str();
}

}  // namespace kinkfit
