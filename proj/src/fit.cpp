#include "kinkfit/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "kinkfit/error.hpp"

namespace kinkfit {

void FitConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (max_iterations <= 0 || !positive(step_tolerance) ||
      !positive(sse_tolerance) || !positive(initial_damping) ||
      !positive(damping_up) || !positive(damping_down)) {
    throw Error(ErrorCode::InvalidParameter,
                "fit configuration values must be positive");
  }
  if (!(gamma_max > 1.0) || !std::isfinite(gamma_max)) {
    throw Error(ErrorCode::InvalidParameter, "gamma_max must be > 1");
  }
  if (breakpoint_grid_points < 0) {
    throw Error(ErrorCode::InvalidParameter,
                "breakpoint_grid_points must be >= 0");
  }
}

double residual_sse(const DataSet& data, const TransitionParams& params) noexcept {
  double sse = 0.0;
  for (const auto& pt : data.points()) {
    const double r = value(pt.phi, params) - pt.f;
    sse += r * r;
  }
  return sse;
}

// ---------------------------------------------------------------------------
// Hinge scan

namespace {

struct HingeSolution {
  double f_c;
  double alpha;
  double beta;
  double sse;
};

std::optional<HingeSolution> solve_hinge(const DataSet& data, double phi_c) {
  const auto pts = data.points();
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = pts[static_cast<std::size_t>(i)].phi - phi_c;
    design(i, 0) = 1.0;
    design(i, 1) = std::min(d, 0.0);
    design(i, 2) = std::max(d, 0.0);
    rhs(i) = pts[static_cast<std::size_t>(i)].f;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) return std::nullopt;
  const Eigen::Vector3d coef = qr.solve(rhs);
  if (!coef.allFinite()) return std::nullopt;
  const double sse = (design * coef - rhs).squaredNorm();
  return HingeSolution{coef(0), coef(1), coef(2), sse};
}

struct Line {
  double intercept;
  double slope;
};

// Least-squares line through the points with phi in [lo, hi].
std::optional<Line> fit_line(const DataSet& data, double lo, double hi) {
  double sx = 0.0;
  double sy = 0.0;
  std::size_t m = 0;
  for (const auto& p : data.points()) {
    if (p.phi < lo || p.phi > hi) continue;
    sx += p.phi;
    sy += p.f;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : data.points()) {
    if (p.phi < lo || p.phi > hi) continue;
    sxx += (p.phi - mx) * (p.phi - mx);
    sxy += (p.phi - mx) * (p.f - my);
  }
  if (sxx == 0.0) return std::nullopt;
  const double b = sxy / sxx;
  return Line{my - b * mx, b};
}

std::vector<double> breakpoint_candidates(const DataSet& data,
                                          const std::vector<double>& distinct,
                                          const FitConfig& config) {
  const std::size_t nd = distinct.size();
  std::vector<double> out;
  // Gaps with at least two distinct phi on each side: k in [1, nd - 3].
  for (std::size_t k = 1; k + 3 <= nd; ++k) {
    const double lo = distinct[k];
    const double hi = distinct[k + 1];
    out.push_back(0.5 * (lo + hi));
    const auto left = fit_line(data, distinct.front(), lo);
    const auto right = fit_line(data, hi, distinct.back());
    if (left && right && left->slope != right->slope) {
      const double cross =
          (right->intercept - left->intercept) / (left->slope - right->slope);
      if (cross > lo && cross < hi) out.push_back(cross);
    }
  }
  for (std::size_t k = 2; k + 3 <= nd; ++k) {
    out.push_back(distinct[k]);
  }
  if (config.breakpoint_grid_points > 0) {
    const double lo = distinct.front();
    const double span = distinct.back() - lo;
    const int m = config.breakpoint_grid_points;
    for (int j = 1; j <= m; ++j) {
      const double c = lo + span * j / (m + 1);
      const auto below = std::lower_bound(distinct.begin(), distinct.end(), c) -
                         distinct.begin();
      const auto above = distinct.end() -
                         std::upper_bound(distinct.begin(), distinct.end(), c);
      if (below >= 2 && above >= 2) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PiecewiseFit fit_piecewise(const DataSet& data, const FitConfig& config) {
  config.validate();
  const auto distinct = data.distinct_phi();
  if (data.size() < 4 || distinct.size() < 4) {
    throw Error(ErrorCode::InsufficientData,
                "hinge fit needs at least 4 points with 2 distinct phi on each "
                "side of a breakpoint");
  }

  double mean = 0.0;
  for (const auto& p : data.points()) mean += p.f;
  mean /= static_cast<double>(data.size());
  double sst = 0.0;
  for (const auto& p : data.points()) sst += (p.f - mean) * (p.f - mean);
  const double tie_tolerance = 1e-12 * sst;

  const auto candidates = breakpoint_candidates(data, distinct, config);
  std::optional<PiecewiseFit> best;
  for (double c : candidates) {
    const auto sol = solve_hinge(data, c);
    if (!sol) continue;
    if (!best || sol->sse < best->sse - tie_tolerance) {
      best = PiecewiseFit{sol->alpha, sol->beta, c, sol->f_c, sol->sse, 0};
    }
  }
  if (!best) {
    throw Error(ErrorCode::DegenerateDesign,
                "hinge design is singular for every breakpoint candidate");
  }
  best->candidate_count = candidates.size();
  return *best;
}

TransitionParams init_smooth(const PiecewiseFit& pw, const DataSet& data) {
  if (data.empty()) {
    throw Error(ErrorCode::InsufficientData, "empty data set");
  }
  const double span =
      data.points().back().phi - data.points().front().phi;
  if (!(span > 0.0)) {
    throw Error(ErrorCode::InsufficientData, "data span in phi is zero");
  }
  const double gap = std::abs(pw.beta - pw.alpha);
  const double gamma0 = gap == 0.0 ? 1.0 : 10.0 / (gap * 0.1 * span);
  return TransitionParams(pw.alpha, pw.beta, gamma0, pw.phi_c, pw.f_c);
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

constexpr double kMaxDamping = 1e12;
// Consecutive accepted steps with a negligible sse drop that count as
// convergence. A single such step says little about the parameters: near the
// minimum the sse is quadratic in the remaining error.
constexpr int kStallSteps = 3;

// theta = (alpha, beta, log gamma, phi_c, f_c); alpha > beta is allowed while
// iterating since the model is symmetric under the swap.
struct Theta {
  Vec5 v;

  double gamma() const { return std::exp(v(kGamma)); }
  TransitionParams params() const {
    return TransitionParams(v(kAlpha), v(kBeta), gamma(), v(kPhiC), v(kFc));
  }
};

bool valid(const Theta& t) {
  return t.v.allFinite() && std::isfinite(t.gamma()) && t.gamma() > 0.0;
}

// Evaluates value() without canonicalization so the Jacobian columns keep
// their meaning when alpha > beta.
double model_value(double phi, const Theta& t) {
  const double alpha = t.v(kAlpha);
  const double beta = t.v(kBeta);
  const double gamma = t.gamma();
  const double delta = phi - t.v(kPhiC);
  const double z = (beta - alpha) * gamma * delta;
  return t.v(kFc) + alpha * delta + (softplus(z) - std::log(2.0)) / gamma;
}

Vec5 model_gradient(double phi, const Theta& t, bool log_gamma) {
  const double alpha = t.v(kAlpha);
  const double beta = t.v(kBeta);
  const double gamma = t.gamma();
  const double delta = phi - t.v(kPhiC);
  const double z = (beta - alpha) * gamma * delta;
  const double sig = logistic(z);
  const double sig_c = logistic(-z);
  Vec5 g;
  g(kAlpha) = delta * sig_c;
  g(kBeta) = delta * sig;
  g(kGamma) = (sig * z - (softplus(z) - std::log(2.0))) / (gamma * gamma);
  if (log_gamma) g(kGamma) *= gamma;
  g(kPhiC) = -(alpha + (beta - alpha) * sig);
  g(kFc) = 1.0;
  return g;
}

double sse_of(const DataSet& data, const Theta& t) {
  double sse = 0.0;
  for (const auto& p : data.points()) {
    const double r = model_value(p.phi, t) - p.f;
    sse += r * r;
  }
  return sse;
}

void normal_equations(const DataSet& data, const Theta& t, bool log_gamma,
                      Mat5& jtj, Vec5& jtr) {
  jtj.setZero();
  jtr.setZero();
  for (const auto& p : data.points()) {
    const Vec5 g = model_gradient(p.phi, t, log_gamma);
    const double r = model_value(p.phi, t) - p.f;
    jtj.noalias() += g * g.transpose();
    jtr.noalias() += g * r;
  }
}

std::optional<std::array<double, 5>> standard_errors(const DataSet& data,
                                                     const Theta& t,
                                                     double sse) {
  const auto n = data.size();
  if (n <= 5) return std::nullopt;
  Mat5 jtj;
  Vec5 jtr;
  normal_equations(data, t, /*log_gamma=*/false, jtj, jtr);
  const Vec5 d = jtj.diagonal();
  if ((d.array() <= 0.0).any() || !d.allFinite()) return std::nullopt;
  // Judge singularity on the unit-diagonal scaling so parameter units don't
  // matter.
  const Vec5 inv_sqrt = d.array().rsqrt();
  const Mat5 scaled = inv_sqrt.asDiagonal() * jtj * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat5> eig(scaled);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-13 * hi)) return std::nullopt;
  const Mat5 scaled_inv =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  const double sigma2 = sse / static_cast<double>(n - 5);
  std::array<double, 5> se{};
  for (int i = 0; i < 5; ++i) {
    se[static_cast<std::size_t>(i)] =
        std::sqrt(scaled_inv(i, i) * sigma2) * inv_sqrt(i);
  }
  return se;
}

struct LmState {
  Theta theta;
  double sse;
  double lambda;
  int iterations = 0;
  std::vector<double> history;
};

// Runs damped Gauss-Newton steps until a convergence test passes or the
// iteration budget is spent. Returns whether it converged.
bool run_lm(const DataSet& data, const FitConfig& config, double g_max,
            LmState& st) {
  if (st.sse == 0.0) return true;
  Mat5 jtj;
  Vec5 jtr;
  bool need_jacobian = true;
  int stalled = 0;
  while (st.iterations < config.max_iterations) {
    if (need_jacobian) {
      normal_equations(data, st.theta, /*log_gamma=*/true, jtj, jtr);
      need_jacobian = false;
    }
    ++st.iterations;

    Vec5 scale = jtj.diagonal();
    const double floor = std::max(scale.maxCoeff(), 1.0) *
                         std::numeric_limits<double>::epsilon();
    scale = scale.cwiseMax(floor);
    const Mat5 damped = jtj + Mat5(st.lambda * scale.asDiagonal());
    Eigen::LDLT<Mat5> ldlt(damped);
    Vec5 step = Vec5::Zero();
    bool solved = ldlt.info() == Eigen::Success;
    if (solved) {
      step = ldlt.solve(-jtr);
      solved = step.allFinite();
    }
    if (!solved) {
      st.lambda *= config.damping_up;
      if (st.lambda > kMaxDamping) {
        throw Error(ErrorCode::SingularNormalMatrix,
                    "normal matrix singular even at maximal damping");
      }
      continue;
    }

    Theta trial = st.theta;
    trial.v += step;
    trial.v(kGamma) = std::min(trial.v(kGamma), g_max);
    const Vec5 taken = trial.v - st.theta.v;
    const bool small_step =
        taken.norm() <=
        config.step_tolerance * (st.theta.v.norm() + config.step_tolerance);

    const double trial_sse = valid(trial) ? sse_of(data, trial)
                                          : std::numeric_limits<double>::infinity();
    if (trial_sse < st.sse) {
      const double drop = st.sse - trial_sse;
      st.theta = trial;
      st.sse = trial_sse;
      st.history.push_back(st.sse);
      st.lambda = std::max(st.lambda * config.damping_down, 1e-300);
      need_jacobian = true;
      stalled = drop <= config.sse_tolerance * (st.sse + drop) ? stalled + 1 : 0;
      if (small_step || stalled >= kStallSteps || st.sse == 0.0) return true;
    } else {
      // No decrease from a step below the resolution threshold means we are
      // sitting on the minimum to rounding.
      if (small_step) return true;
      st.lambda *= config.damping_up;
      if (st.lambda > kMaxDamping) {
        throw Error(ErrorCode::SingularNormalMatrix,
                    "no descent step found even at maximal damping");
      }
    }
  }
  return false;
}

}  // namespace

FitResult fit_smooth(const DataSet& data, const TransitionParams& init,
                     const FitConfig& config) {
  config.validate();
  if (data.distinct_phi().size() < 5) {
    throw Error(ErrorCode::InsufficientData,
                "smooth fit needs at least 5 distinct phi values");
  }

  const double g_max = std::log(config.gamma_max);
  LmState st;
  st.theta.v << init.alpha(), init.beta(),
      std::min(std::log(init.gamma()), g_max), init.phi_c(), init.f_c();
  st.sse = sse_of(data, st.theta);
  st.lambda = config.initial_damping;
  st.history.push_back(st.sse);

  bool converged = run_lm(data, config, g_max, st);

  // Once the transition is narrower than the data spacing the sse keeps
  // falling with gamma along a flat valley that LM crawls through. Probe the
  // bound directly with the hinge coefficients refitted at the current phi_c;
  // the probe is kept only if it does not raise the sse.
  if (converged && st.theta.v(kGamma) < g_max &&
      st.iterations < config.max_iterations) {
    Theta probe = st.theta;
    probe.v(kGamma) = g_max;
    // value() is convex and sits log(2)/gamma below its asymptotes.
    if (const auto hinge = solve_hinge(data, probe.v(kPhiC));
        hinge && hinge->alpha <= hinge->beta) {
      probe.v(kAlpha) = hinge->alpha;
      probe.v(kBeta) = hinge->beta;
      probe.v(kFc) = hinge->f_c + std::log(2.0) / config.gamma_max;
    }
    ++st.iterations;
    const double probe_sse = sse_of(data, probe);
    if (probe_sse <= st.sse) {
      st.theta = probe;
      if (probe_sse < st.sse) st.history.push_back(probe_sse);
      st.sse = probe_sse;
      st.lambda = config.initial_damping;
      converged = run_lm(data, config, g_max, st);
    }
  }

  Theta& theta = st.theta;
  // Moves smaller than a converged step do not count as leaving the bound.
  const double bound_resolution =
      config.step_tolerance * (theta.v.norm() + config.step_tolerance);
  // Canonical ordering: the swap is an exact symmetry of the model.
  if (theta.v(kAlpha) > theta.v(kBeta)) {
    std::swap(theta.v(kAlpha), theta.v(kBeta));
  }
  return FitResult{
      .params = theta.params(),
      .sse = st.sse,
      .iterations = st.iterations,
      .converged = converged,
      .gamma_at_bound = g_max - theta.v(kGamma) <= bound_resolution,
      .standard_errors = standard_errors(data, theta, st.sse),
      .sse_history = std::move(st.history),
  };
}

}  // namespace kinkfit
