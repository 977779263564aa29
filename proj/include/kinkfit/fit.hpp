#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "kinkfit/dataset.hpp"
#include "kinkfit/model.hpp"

namespace kinkfit {

struct FitConfig {
  int max_iterations = 200;
  /// Converged when the accepted step satisfies |dtheta| <= tol (|theta| + tol).
  double step_tolerance = 1e-10;
  /// Converged when three consecutive accepted steps each lower sse by at
  /// most tol * sse.
  double sse_tolerance = 1e-12;
  double initial_damping = 1e-3;
  double damping_up = 10.0;
  double damping_down = 0.1;
  double gamma_max = 1e8;
  /// Extra uniformly spaced breakpoint candidates for the hinge scan, on top
  /// of the midpoints between consecutive distinct phi. 0 disables.
  int breakpoint_grid_points = 0;

  /// Throws Error(InvalidParameter) when a field is out of range.
  void validate() const;
};

/// Continuous two-segment (hinge) least-squares fit.
struct PiecewiseFit {
  double alpha = 0.0;
  double beta = 0.0;
  double phi_c = 0.0;
  double f_c = 0.0;
  double sse = 0.0;
  std::size_t candidate_count = 0;
};

struct FitResult {
  TransitionParams params;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  /// gamma reached FitConfig::gamma_max: sharper than the data can resolve.
  bool gamma_at_bound = false;
  /// Gauss-Newton standard errors in ParamIndex order; absent when the normal
  /// matrix is singular or there are no residual degrees of freedom.
  std::optional<std::array<double, 5>> standard_errors;
  /// sse before the first step followed by the sse after each accepted step.
  std::vector<double> sse_history;
};

/// Scans breakpoint candidates and solves the linear least-squares problem in
/// (f_c, alpha, beta) with basis {1, min(phi-phi_c, 0), max(phi-phi_c, 0)} for
/// each one. Candidates are the midpoints between consecutive distinct phi,
/// the interior data phi, and, for every gap between data, the crossing of
/// independent line fits on either side when it falls inside that gap (the
/// exact hinge optimum there). Only candidates with at least two distinct phi
/// strictly on each side are scanned. Ties go to the smallest phi_c.
///
/// Throws Error(InsufficientData) or Error(DegenerateDesign).
PiecewiseFit fit_piecewise(const DataSet& data, const FitConfig& config = {});

/// Starting point for fit_smooth: the hinge parameters plus a gamma that makes
/// the transition width one tenth of the data span.
TransitionParams init_smooth(const PiecewiseFit& pw, const DataSet& data);

/// Levenberg-Marquardt fit of value() over (alpha, beta, log gamma, phi_c, f_c).
///
/// Throws Error(InsufficientData) with fewer than 5 distinct phi and
/// Error(SingularNormalMatrix) when no step can be computed even at maximal
/// damping.
FitResult fit_smooth(const DataSet& data, const TransitionParams& init,
                     const FitConfig& config = {});

/// Sum of squared residuals of value() against the data.
double residual_sse(const DataSet& data, const TransitionParams& params) noexcept;

}  // namespace kinkfit
