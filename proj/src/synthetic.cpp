#include "kinkfit/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kinkfit/error.hpp"

namespace kinkfit {

std::string_view to_string(Sampling s) noexcept {
  return s == Sampling::kUniformGrid ? "grid" : "random";
}

std::string_view to_string(ModelKind m) noexcept {
  return m == ModelKind::kSmooth ? "smooth" : "piecewise";
}

void SyntheticSpec::validate() const {
  if (n == 0) {
    throw Error(ErrorCode::InvalidParameter, "n must be >= 1");
  }
  if (!std::isfinite(phi_lo) || !std::isfinite(phi_hi) || !(phi_lo < phi_hi)) {
    throw Error(ErrorCode::InvalidParameter, "need finite phi_lo < phi_hi");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::InvalidParameter, "noise sigma must be >= 0");
  }
}

namespace {

class NormalSource {
 public:
  explicit NormalSource(std::mt19937_64& engine) : engine_(engine) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64& engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

DataSet generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 engine(spec.seed);
  NormalSource rng(engine);

  const double width = spec.phi_hi - spec.phi_lo;
  std::vector<DataPoint> points(spec.n);
  for (std::size_t k = 0; k < spec.n; ++k) {
    double phi = 0.0;
    if (spec.sampling == Sampling::kUniformRandom) {
      phi = spec.phi_lo + width * rng.uniform();
    } else if (spec.n == 1) {
      phi = 0.5 * (spec.phi_lo + spec.phi_hi);
    } else if (k + 1 == spec.n) {
      phi = spec.phi_hi;
    } else {
      phi = spec.phi_lo + width * static_cast<double>(k) /
                              static_cast<double>(spec.n - 1);
    }
    points[k].phi = phi;
  }
  for (auto& pt : points) {
    pt.f = spec.model == ModelKind::kSmooth ? value(pt.phi, spec.params)
                                            : piecewise_limit(pt.phi, spec.params);
    if (spec.noise_sigma > 0.0) {
      pt.f += spec.noise_sigma * rng.normal();
    }
  }
  return DataSet(std::move(points));
}

}  // namespace kinkfit
