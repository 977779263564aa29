#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kinkfit {

struct DataPoint {
  double phi;
  double f;

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

/// Observations ordered by phi. Ties keep their input order.
class DataSet {
 public:
  DataSet() = default;

  /// Stable-sorts by phi. Throws Error(NonFiniteValue) on NaN or infinity.
  explicit DataSet(std::vector<DataPoint> points);

  std::span<const DataPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// Distinct phi values in ascending order.
  std::vector<double> distinct_phi() const;

  friend bool operator==(const DataSet&, const DataSet&) = default;

 private:
  std::vector<DataPoint> points_;
};

}  // namespace kinkfit
