#include "kinkfit/powerlaw.hpp"

#include <cmath>
#include <utility>

#include "kinkfit/error.hpp"
#include "kinkfit/model.hpp"
#include "kinkfit/oracle.hpp"
#include "kinkfit/quadrature.hpp"

namespace kinkfit {

PowerLawParams::PowerLawParams(double a_coef, double alpha, double beta,
                               double gamma, double y_c)
    : a_coef_(a_coef), alpha_(alpha), beta_(beta), gamma_(gamma), y_c_(y_c) {
  if (!std::isfinite(a_coef) || !std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(gamma) || !std::isfinite(y_c)) {
    throw Error(ErrorCode::InvalidParameter, "power-law parameters must be finite");
  }
  if (!(a_coef > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "A must be > 0");
  }
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gamma must be > 0");
  }
  if (!(y_c > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "y_c must be > 0");
  }
  if (alpha_ > beta_) std::swap(alpha_, beta_);
}

double PowerLawParams::b_coef() const noexcept {
  return a_coef_ * std::pow(y_c_, alpha_ - beta_);
}

namespace {

void require_positive(double y) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw Error(ErrorCode::NonPositiveY, "distance y must be finite and > 0");
  }
}

TransitionParams as_transition(const PowerLawParams& p) {
  // f_c is irrelevant for the slope.
  return TransitionParams(p.alpha(), p.beta(), p.gamma(), p.y_c(), 0.0);
}

}  // namespace

double shear(double y, const PowerLawParams& p) {
  require_positive(y);
  return slope(y, as_transition(p));
}

double velocity_limit(double y, const PowerLawParams& p) {
  require_positive(y);
  if (y <= p.y_c()) return p.a_coef() * std::pow(y, p.alpha());
  return p.b_coef() * std::pow(y, p.beta());
}

double velocity_smooth(double y, const PowerLawParams& p, double tol) {
  require_positive(y);
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "quadrature tolerance must be > 0");
  }
  const auto tp = as_transition(p);
  const double anchor = p.a_coef() * std::pow(p.y_c(), p.alpha());
  if (y == p.y_c()) return anchor;
  const auto integrand = [&tp](double t) { return slope(t, tp) / t; };
  return anchor * std::exp(adaptive_simpson_panels(integrand, p.y_c(), y, tol,
                                                    transition_panels(tp, y)));
}

double loglog_slope(double y, const PowerLawParams& p, double h, double tol) {
  require_positive(y);
  if (!(h > 0.0 && h < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "relative step h must be in (0, 1)");
  }
  const double up = std::log(velocity_smooth(y * (1.0 + h), p, tol));
  const double down = std::log(velocity_smooth(y * (1.0 - h), p, tol));
  return (up - down) / (std::log1p(h) - std::log1p(-h));
}

}  // namespace kinkfit
