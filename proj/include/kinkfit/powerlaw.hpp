#pragma once

namespace kinkfit {

/// Two matched power laws joined by a logistic shear in y:
///   s(y) = d log u / d log y,  s -> alpha below y_c, s -> beta above.
/// The upper amplitude B = A y_c^(alpha - beta) follows from continuity.
class PowerLawParams {
 public:
  /// Throws Error(InvalidParameter) unless all fields are finite,
  /// a_coef > 0, gamma > 0 and y_c > 0. Canonicalizes alpha <= beta.
  PowerLawParams(double a_coef, double alpha, double beta, double gamma,
                 double y_c);

  double a_coef() const noexcept { return a_coef_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double y_c() const noexcept { return y_c_; }

  /// B = A y_c^(alpha - beta).
  double b_coef() const noexcept;

 private:
  double a_coef_;
  double alpha_;
  double beta_;
  double gamma_;
  double y_c_;
};

/// Logistic shear with phi = y. Throws Error(NonPositiveY) for y <= 0.
double shear(double y, const PowerLawParams& p);

/// A y^alpha for y <= y_c, B y^beta above.
double velocity_limit(double y, const PowerLawParams& p);

/// A y_c^alpha exp(integral from y_c to y of shear(t)/t dt), the integral by
/// panelled adaptive Simpson to absolute tolerance tol.
double velocity_smooth(double y, const PowerLawParams& p, double tol);

/// Central difference of log velocity_smooth in log y with relative step h.
double loglog_slope(double y, const PowerLawParams& p, double h, double tol);

}  // namespace kinkfit
