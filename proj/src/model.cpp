#include "kinkfit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "kinkfit/error.hpp"

namespace kinkfit {

namespace {

double transition_argument(double phi, const TransitionParams& p) noexcept {
  return (p.beta() - p.alpha()) * p.gamma() * (phi - p.phi_c());
}

}  // namespace

double logistic(double z) noexcept {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) noexcept {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

TransitionParams::TransitionParams(double alpha, double beta, double gamma,
                                   double phi_c, double f_c)
    : alpha_(alpha), beta_(beta), gamma_(gamma), phi_c_(phi_c), f_c_(f_c) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
      !std::isfinite(phi_c) || !std::isfinite(f_c)) {
    throw Error(ErrorCode::InvalidParameter,
                "transition parameters must be finite");
  }
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gamma must be > 0");
  }
  if (alpha_ > beta_) {
    std::swap(alpha_, beta_);
  }
}

Roots taylor_to_params(const TaylorCoeffs& c) {
  if (!std::isfinite(c.s0) || !std::isfinite(c.f0) || !std::isfinite(c.f1) ||
      !std::isfinite(c.f2)) {
    throw Error(ErrorCode::InvalidParameter, "Taylor coefficients must be finite");
  }
  if (c.f2 == 0.0) {
    throw Error(ErrorCode::DegenerateQuadratic, "f_ss is zero");
  }
  if (c.f2 > 0.0) {
    throw Error(ErrorCode::NonPositiveGamma,
                "f_ss > 0 gives gamma = -f_ss/2 <= 0");
  }
  // Roots of (f2/2) t^2 + f1 t + f0 in t = s - s0.
  const double a = 0.5 * c.f2;
  const double disc = c.f1 * c.f1 - 2.0 * c.f0 * c.f2;
  if (disc < 0.0) {
    throw Error(ErrorCode::ComplexRoots, "discriminant f_s^2 - 2 f f_ss < 0");
  }
  const double q = -0.5 * (c.f1 + std::copysign(std::sqrt(disc), c.f1));
  double t1 = 0.0;
  double t2 = 0.0;
  if (q != 0.0) {
    t1 = q / a;
    t2 = c.f0 / q;
  }
  if (t1 > t2) {
    std::swap(t1, t2);
  }
  return {c.s0 + t1, c.s0 + t2, -a};
}

double riccati_rhs(double s, const TransitionParams& p) noexcept {
  return p.gamma() * (s - p.alpha()) * (p.beta() - s);
}

double slope(double phi, const TransitionParams& p) noexcept {
  const double z = transition_argument(phi, p);
  const double gap = p.beta() - p.alpha();
  // Offset from the nearer root so each tail keeps full relative accuracy.
  if (z > 0.0) return p.beta() - gap * logistic(-z);
  if (z < 0.0) return p.alpha() + gap * logistic(z);
  return 0.5 * (p.alpha() + p.beta());
}

double value(double phi, const TransitionParams& p) noexcept {
  const double delta = phi - p.phi_c();
  const double z = transition_argument(phi, p);
  return p.f_c() + p.alpha() * delta +
         (softplus(z) - std::numbers::ln2) / p.gamma();
}

double piecewise_limit(double phi, const TransitionParams& p) noexcept {
  const double delta = phi - p.phi_c();
  return p.f_c() + (delta <= 0.0 ? p.alpha() : p.beta()) * delta;
}

double slope_limit(double phi, const TransitionParams& p) noexcept {
  if (phi < p.phi_c()) return p.alpha();
  if (phi > p.phi_c()) return p.beta();
  return 0.5 * (p.alpha() + p.beta());
}

ValueGradient value_gradient(double phi, const TransitionParams& p) noexcept {
  const double delta = phi - p.phi_c();
  const double gamma = p.gamma();
  const double z = transition_argument(phi, p);
  const double sig = logistic(z);
  // 1 - sigma(z) == sigma(-z), evaluated directly to keep relative accuracy.
  const double sig_c = logistic(-z);

  ValueGradient g{};
  g[kAlpha] = delta * sig_c;
  g[kBeta] = delta * sig;
  g[kGamma] = (sig * z - (softplus(z) - std::numbers::ln2)) / (gamma * gamma);
  g[kPhiC] = -slope(phi, p);
  g[kFc] = 1.0;
  return g;
}

}  // namespace kinkfit
