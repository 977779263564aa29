#pragma once

#include <array>

namespace kinkfit {

/// Logistic function 1/(1+e^{-z}), evaluated without overflow for any finite z.
double logistic(double z) noexcept;

/// log(1+e^z) in the form max(z,0) + log1p(e^{-|z|}).
double softplus(double z) noexcept;

/// The five constants of the smooth transition family.
///
///   ds/dphi = gamma (s - alpha)(beta - s),  s(phi_c) = (alpha + beta)/2,
///   F(phi_c) = f_c.
///
/// Construction validates that every field is finite and gamma > 0, and
/// canonicalizes to alpha <= beta. Swapping the roots leaves slope() and
/// value() unchanged, so canonicalization loses nothing.
class TransitionParams {
 public:
  /// Throws Error(InvalidParameter) on non-finite fields or gamma <= 0.
  TransitionParams(double alpha, double beta, double gamma, double phi_c,
                   double f_c);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double phi_c() const noexcept { return phi_c_; }
  double f_c() const noexcept { return f_c_; }

  friend bool operator==(const TransitionParams&,
                         const TransitionParams&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
  double phi_c_;
  double f_c_;
};

/// Quadratic expansion of ds/dphi about s0:
///   f0 + f1 (s - s0) + (f2 / 2) (s - s0)^2.
struct TaylorCoeffs {
  double s0 = 0.0;
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

struct Roots {
  double alpha;
  double beta;
  double gamma;
};

/// Rewrites the quadratic as gamma (s - alpha)(beta - s) with alpha <= beta.
///
/// Throws Error with DegenerateQuadratic (f2 == 0), NonPositiveGamma (f2 > 0)
/// or ComplexRoots (negative discriminant).
Roots taylor_to_params(const TaylorCoeffs& coeffs);

/// gamma (s - alpha)(beta - s).
double riccati_rhs(double s, const TransitionParams& p) noexcept;

/// Logistic slope alpha + (beta - alpha) sigma(Z), Z = (beta-alpha) gamma (phi-phi_c).
/// Exactly (alpha + beta)/2 at phi_c.
double slope(double phi, const TransitionParams& p) noexcept;

/// Antiderivative of slope() anchored at F(phi_c) = f_c:
///   f_c + alpha (phi - phi_c) + [softplus(Z) - log 2] / gamma.
double value(double phi, const TransitionParams& p) noexcept;

/// gamma -> infinity limit of value(): two lines of slope alpha and beta
/// meeting at (phi_c, f_c). gamma is ignored.
double piecewise_limit(double phi, const TransitionParams& p) noexcept;

/// gamma -> infinity limit of slope(); the midpoint (alpha+beta)/2 at phi_c.
double slope_limit(double phi, const TransitionParams& p) noexcept;

/// Indices into ValueGradient.
enum ParamIndex { kAlpha = 0, kBeta = 1, kGamma = 2, kPhiC = 3, kFc = 4 };

using ValueGradient = std::array<double, 5>;

/// Analytic partials of value() with respect to (alpha, beta, gamma, phi_c, f_c).
ValueGradient value_gradient(double phi, const TransitionParams& p) noexcept;

}  // namespace kinkfit
