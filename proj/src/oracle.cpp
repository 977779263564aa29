#include "kinkfit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinkfit/error.hpp"
#include "kinkfit/quadrature.hpp"

namespace kinkfit {

namespace {

void validate(const OdeRun& run) {
  const auto& p = run.params;
  if (!(run.step > 0.0) || !std::isfinite(run.step)) {
    throw Error(ErrorCode::InvalidParameter, "RK4 step must be > 0");
  }
  if (!std::isfinite(run.phi_start) || !std::isfinite(run.phi_end) ||
      run.phi_start == run.phi_end) {
    throw Error(ErrorCode::InvalidParameter,
                "phi_start and phi_end must be finite and distinct");
  }
  if (!(run.s_start >= p.alpha() && run.s_start <= p.beta())) {
    throw Error(ErrorCode::InvalidParameter, "s_start must lie in [alpha, beta]");
  }
}

class StiffnessGuard {
 public:
  explicit StiffnessGuard(const TransitionParams& p)
      : lo_(p.alpha() - (p.beta() - p.alpha())),
        hi_(p.beta() + (p.beta() - p.alpha())) {}

  void operator()(double s, double phi) const {
    if (!(s >= lo_ && s <= hi_)) {
      throw Error(ErrorCode::StepTooLarge,
                  "RK4 stage left the admissible slope band near phi = " +
                      std::to_string(phi) + "; reduce the step");
    }
  }

 private:
  double lo_;
  double hi_;
};

double rk4_step(double s, double h, double phi, const TransitionParams& p,
                const StiffnessGuard& guard) {
  const double k1 = riccati_rhs(s, p);
  const double s2 = s + 0.5 * h * k1;
  guard(s2, phi);
  const double k2 = riccati_rhs(s2, p);
  const double s3 = s + 0.5 * h * k2;
  guard(s3, phi);
  const double k3 = riccati_rhs(s3, p);
  const double s4 = s + h * k3;
  guard(s4, phi);
  const double k4 = riccati_rhs(s4, p);
  const double next = s + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
  guard(next, phi + h);
  return next;
}

// Fixed-step RK4 from (phi_start, s_start) to phi_end. Appends every step to
// `out` when non-null; returns the slope at phi_end.
double integrate_segment(const TransitionParams& p, double phi_start,
                         double phi_end, double step, double s_start,
                         std::vector<SlopeSample>* out) {
  const StiffnessGuard guard(p);
  const double dir = phi_end > phi_start ? 1.0 : -1.0;
  const double length = std::abs(phi_end - phi_start);

  double s = s_start;
  double phi = phi_start;
  for (std::size_t i = 1;; ++i) {
    // Grid points are computed from the start to avoid accumulating drift.
    const double travelled = static_cast<double>(i) * step;
    const bool last = travelled >= length;
    const double next_phi = last ? phi_end : phi_start + dir * travelled;
    s = rk4_step(s, next_phi - phi, phi, p, guard);
    phi = next_phi;
    if (out != nullptr) out->push_back({phi, s});
    if (last) break;
  }
  return s;
}

}  // namespace

std::size_t transition_panels(const TransitionParams& p, double phi) {
  // One panel per unit change of the logistic argument, capped.
  constexpr double kMaxPanels = 1e5;
  const double span = std::abs((p.beta() - p.alpha()) * p.gamma() * (phi - p.phi_c()));
  return static_cast<std::size_t>(std::ceil(std::min(span, kMaxPanels))) + 1;
}

std::vector<SlopeSample> integrate_slope_ode(const OdeRun& run) {
  validate(run);
  std::vector<SlopeSample> out;
  out.reserve(static_cast<std::size_t>(
                  std::abs(run.phi_end - run.phi_start) / run.step) +
              2);
  out.push_back({run.phi_start, run.s_start});
  integrate_segment(run.params, run.phi_start, run.phi_end, run.step,
                    run.s_start, &out);
  return out;
}

double integrate_value_quadrature(const TransitionParams& params, double phi,
                                  double tol) {
  const auto integrand = [&params](double x) { return slope(x, params); };
  return params.f_c() +
         adaptive_simpson_panels(integrand, params.phi_c(), phi, tol,
                                 transition_panels(params, phi));
}

double literal_printed_value(double phi, const TransitionParams& p) noexcept {
  const double delta = phi - p.phi_c();
  const double z = (p.beta() - p.alpha()) * p.gamma() * delta;
  return p.f_c() + p.beta() * delta +
         (softplus(z) - std::numbers::ln2) / p.gamma();
}

VerificationReport verify_closed_forms(const TransitionParams& params,
                                       double phi_lo, double phi_hi,
                                       int n_samples, double ode_step,
                                       double quad_tol, ValueForm form) {
  const double phi_c = params.phi_c();
  if (!(phi_lo < phi_c && phi_c < phi_hi)) {
    throw Error(ErrorCode::InvalidParameter,
                "verification range must satisfy phi_lo < phi_c < phi_hi");
  }
  if (n_samples < 3) {
    throw Error(ErrorCode::InvalidParameter, "n_samples must be >= 3");
  }
  if (!(ode_step > 0.0) || !std::isfinite(ode_step)) {
    throw Error(ErrorCode::InvalidParameter, "RK4 step must be > 0");
  }

  VerificationReport report;
  report.grid.resize(static_cast<std::size_t>(n_samples));
  const double width = phi_hi - phi_lo;
  for (int k = 0; k < n_samples; ++k) {
    report.grid[static_cast<std::size_t>(k)] =
        k == n_samples - 1 ? phi_hi : phi_lo + width * k / (n_samples - 1);
  }

  const double s_mid = 0.5 * (params.alpha() + params.beta());

  // Chain RK4 outward from the anchor so each grid point is visited once per
  // direction. Left points are walked in descending order.
  auto sweep = [&](auto first, auto last) {
    double phi = phi_c;
    double s = s_mid;
    for (auto it = first; it != last; ++it) {
      const double target = *it;
      if (target != phi) {
        s = integrate_segment(params, phi, target, ode_step, s, nullptr);
        phi = target;
      }
      report.max_slope_deviation = std::max(
          report.max_slope_deviation, std::abs(s - slope(target, params)));
    }
  };
  const auto split = std::lower_bound(report.grid.begin(), report.grid.end(), phi_c);
  sweep(split, report.grid.end());
  sweep(std::make_reverse_iterator(split), report.grid.rend());

  for (double phi : report.grid) {
    const double closed = form == ValueForm::kIntegrated
                              ? value(phi, params)
                              : literal_printed_value(phi, params);
    const double quad = integrate_value_quadrature(params, phi, quad_tol);
    report.max_value_deviation =
        std::max(report.max_value_deviation, std::abs(quad - closed));
  }
  return report;
}

}  // namespace kinkfit
