#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "kinkfit/dataset.hpp"
#include "kinkfit/model.hpp"

namespace kinkfit {

enum class Sampling { kUniformGrid, kUniformRandom };
enum class ModelKind { kSmooth, kPiecewise };

std::string_view to_string(Sampling s) noexcept;
std::string_view to_string(ModelKind m) noexcept;

struct SyntheticSpec {
  TransitionParams params{10.7, 80.0, 40.0, 0.598, 0.5};
  std::size_t n = 200;
  double phi_lo = 0.57;
  double phi_hi = 0.63;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::kUniformGrid;
  ModelKind model = ModelKind::kSmooth;

  /// Throws Error(InvalidParameter) on n == 0, phi_lo >= phi_hi or
  /// noise_sigma < 0.
  void validate() const;
};

/// Draws a data set from value() or piecewise_limit() plus Gaussian noise.
///
/// Random numbers come from std::mt19937_64 seeded with spec.seed. Each draw
/// takes the top 53 bits of one 64-bit output. Uniform-random phi values are
/// drawn first, one per point, as phi_lo + (phi_hi - phi_lo) u with u in
/// [0, 1). Noise follows in point order: Box-Muller on a pair (u1, u2) with
/// u1 in (0, 1] gives sqrt(-2 ln u1) cos(2 pi u2) and then
/// sqrt(-2 ln u1) sin(2 pi u2). No draws are made when noise_sigma == 0 and
/// sampling is the grid. The grid is phi_lo + (phi_hi - phi_lo) k / (n - 1),
/// or the midpoint when n == 1.
DataSet generate_synthetic(const SyntheticSpec& spec);

}  // namespace kinkfit
