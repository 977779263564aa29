#pragma once

#include <cstddef>
#include <vector>

#include "kinkfit/model.hpp"

namespace kinkfit {

/// One fixed-step RK4 integration of ds/dphi = riccati_rhs(s).
/// phi_end may lie below phi_start (backward integration).
struct OdeRun {
  TransitionParams params;
  double phi_start;
  double phi_end;
  double step;
  double s_start;
};

struct SlopeSample {
  double phi;
  double s;
};

/// Classical RK4 with a fixed step; the last step is shortened to land on
/// phi_end exactly. The trajectory includes both endpoints.
///
/// Throws Error(InvalidParameter) when the run violates its invariants
/// (step <= 0, phi_start == phi_end, s_start outside [alpha, beta]) and
/// Error(StepTooLarge) when any stage value leaves
/// [alpha - (beta-alpha), beta + (beta-alpha)].
std::vector<SlopeSample> integrate_slope_ode(const OdeRun& run);

/// Number of equal quadrature panels between phi_c and phi: one per unit of
/// the logistic argument (at most 1e5), plus one.
std::size_t transition_panels(const TransitionParams& params, double phi);

/// f_c plus the adaptive Simpson integral of slope() from phi_c to phi,
/// split into transition_panels() panels.
double integrate_value_quadrature(const TransitionParams& params, double phi,
                                  double tol);

/// The integrated observable with beta, rather than alpha, as the linear
/// coefficient. It is not an antiderivative of slope() unless alpha == beta
/// and exists only as a diagnostic for verify_closed_forms.
double literal_printed_value(double phi, const TransitionParams& params) noexcept;

enum class ValueForm { kIntegrated, kLiteralPrinted };

struct VerificationReport {
  double max_slope_deviation = 0.0;
  double max_value_deviation = 0.0;
  std::vector<double> grid;
};

/// Samples n_samples uniform points over [phi_lo, phi_hi] and compares
/// slope() with RK4 runs anchored at (phi_c, (alpha+beta)/2), and the chosen
/// value form with quadrature of slope() anchored at (phi_c, f_c).
///
/// Requires phi_lo < phi_c < phi_hi and n_samples >= 3.
VerificationReport verify_closed_forms(const TransitionParams& params,
                                       double phi_lo, double phi_hi,
                                       int n_samples, double ode_step,
                                       double quad_tol,
                                       ValueForm form = ValueForm::kIntegrated);

}  // namespace kinkfit
