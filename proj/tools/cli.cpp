#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "kinkfit/csv.hpp"
#include "kinkfit/error.hpp"
#include "kinkfit/fit.hpp"
#include "kinkfit/model.hpp"
#include "kinkfit/oracle.hpp"
#include "kinkfit/svg.hpp"
#include "kinkfit/synthetic.hpp"

namespace kinkfit::cli {

namespace {

using json = nlohmann::ordered_json;

// Figure reproduction constants: the sharp-limit curve of the granular
// penetration force.
constexpr double kFigureAlpha = 10.7;
constexpr double kFigureBeta = 80.0;
constexpr double kFigurePhiC = 0.598;
constexpr double kFigureFc = 0.5;
constexpr double kDemoGamma = 40.0;
constexpr double kDomainLo = 0.57;
constexpr double kDomainHi = 0.63;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  double alpha = kFigureAlpha;
  double beta = kFigureBeta;
  double gamma = kDemoGamma;
  double phi_c = kFigurePhiC;
  double f_c = kFigureFc;
  std::vector<CLI::Option*> options;

  void attach(CLI::App* app) {
    options = {
        app->add_option("--alpha", alpha, "Lower slope")->capture_default_str(),
        app->add_option("--beta", beta, "Upper slope")->capture_default_str(),
        app->add_option("--gamma", gamma, "Transition sharpness (> 0)")
            ->capture_default_str(),
        app->add_option("--phi-c", phi_c, "Critical parameter value")
            ->capture_default_str(),
        app->add_option("--f-c", f_c, "Observable value at phi_c")
            ->capture_default_str(),
    };
  }

  bool any_given() const {
    for (const auto* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  TransitionParams build() const {
    try {
      return TransitionParams(alpha, beta, gamma, phi_c, f_c);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
};

json params_json(const TransitionParams& p) {
  return json{{"alpha", p.alpha()},
              {"beta", p.beta()},
              {"gamma", p.gamma()},
              {"phi_c", p.phi_c()},
              {"f_c", p.f_c()}};
}

bool is_usage(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::InsufficientData:
    case ErrorCode::MalformedHeader:
    case ErrorCode::MalformedRecord:
    case ErrorCode::NonFiniteValue:
      return true;
    default:
      return false;
  }
}

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

DataSet load_dataset(const std::string& path, Io& io) {
  if (path == "-") return read_dataset(io.in);
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open input file '" + path + "'");
  }
  return read_dataset(file);
}

void emit(const std::string& path, const std::string& content, Io& io) {
  if (path == "-") {
    io.out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << content;
  file.close();
  if (!file) {
    throw std::runtime_error("cannot write output file '" + path + "'");
  }
}

std::string table_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-22.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  ParamFlags params;
  std::vector<double> phis;
  std::string range;
  bool csv = false;
};

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) {
    throw UsageError("--phi-range expects lo:hi:count");
  }
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw UsageError("--phi-range expects lo:hi:count, got '" + text + "'");
  }
  if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError("--phi-range needs finite bounds and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> out;
  for (long k = 0; k < count; ++k) {
    out.push_back(k == count - 1 ? hi : lo + (hi - lo) * k / (count - 1));
  }
  return out;
}

int cmd_eval(const EvalArgs& args, Io& io) {
  const auto params = args.params.build();
  std::vector<double> phis = args.phis;
  if (!args.range.empty()) {
    const auto r = parse_range(args.range);
    phis.insert(phis.end(), r.begin(), r.end());
  }
  if (phis.empty()) {
    throw UsageError("eval needs --phi or --phi-range");
  }
  for (double phi : phis) {
    if (!std::isfinite(phi)) throw UsageError("phi values must be finite");
  }
  if (args.csv) {
    io.out << "phi,s,F,F_limit\n";
    for (double phi : phis) {
      io.out << format_double(phi) << ',' << format_double(slope(phi, params))
             << ',' << format_double(value(phi, params)) << ','
             << format_double(piecewise_limit(phi, params)) << '\n';
    }
    return kOk;
  }
  char header[128];
  std::snprintf(header, sizeof(header), "%-22s%-22s%-22s%s\n", "phi", "slope",
                "value", "piecewise_limit");
  io.out << header;
  for (double phi : phis) {
    io.out << table_cell(phi) << table_cell(slope(phi, params))
           << table_cell(value(phi, params));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", piecewise_limit(phi, params));
    io.out << buf << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  ParamFlags params;
  double phi_lo = kDomainLo;
  double phi_hi = kDomainHi;
  int samples = 61;
  double ode_step = 2.5e-6;
  double quad_tol = 1e-10;
  double slope_tol = 1e-9;
  double value_tol = 1e-8;
  bool literal = false;
};

int cmd_check(const CheckArgs& args, Io& io) {
  const auto params = args.params.build();
  if (!(args.phi_lo < params.phi_c() && params.phi_c() < args.phi_hi)) {
    throw UsageError("check needs phi_lo < phi_c < phi_hi");
  }
  if (args.samples < 3) throw UsageError("--samples must be >= 3");
  if (!(args.ode_step > 0.0) || !(args.quad_tol > 0.0) ||
      !(args.slope_tol >= 0.0) || !(args.value_tol >= 0.0)) {
    throw UsageError("steps and tolerances must be positive");
  }
  const auto form = args.literal ? ValueForm::kLiteralPrinted : ValueForm::kIntegrated;
  const auto report = verify_closed_forms(params, args.phi_lo, args.phi_hi,
                                          args.samples, args.ode_step,
                                          args.quad_tol, form);
  const bool passed = report.max_slope_deviation <= args.slope_tol &&
                      report.max_value_deviation <= args.value_tol;
  json j;
  j["params"] = params_json(params);
  j["phi_lo"] = args.phi_lo;
  j["phi_hi"] = args.phi_hi;
  j["samples"] = args.samples;
  j["ode_step"] = args.ode_step;
  j["quad_tol"] = args.quad_tol;
  j["slope_tol"] = args.slope_tol;
  j["value_tol"] = args.value_tol;
  j["value_form"] = args.literal ? "literal-printed" : "integrated";
  j["max_slope_deviation"] = report.max_slope_deviation;
  j["max_value_deviation"] = report.max_value_deviation;
  j["passed"] = passed;
  io.out << j.dump(2) << '\n';
  return passed ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  ParamFlags params;
  long long n = 200;
  double phi_lo = kDomainLo;
  double phi_hi = kDomainHi;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string sampling = "grid";
  std::string model = "smooth";
  std::string output = "-";
};

int cmd_simulate(const SimulateArgs& args, Io& io) {
  if (args.n < 1) throw UsageError("--n must be >= 1");
  SyntheticSpec spec;
  spec.params = args.params.build();
  spec.n = static_cast<std::size_t>(args.n);
  spec.phi_lo = args.phi_lo;
  spec.phi_hi = args.phi_hi;
  spec.noise_sigma = args.sigma;
  spec.seed = args.seed;
  spec.sampling = args.sampling == "random" ? Sampling::kUniformRandom
                                            : Sampling::kUniformGrid;
  spec.model = args.model == "piecewise" ? ModelKind::kPiecewise : ModelKind::kSmooth;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  json provenance;
  provenance["params"] = params_json(spec.params);
  provenance["n"] = spec.n;
  provenance["phi_lo"] = spec.phi_lo;
  provenance["phi_hi"] = spec.phi_hi;
  provenance["sigma"] = spec.noise_sigma;
  provenance["seed"] = spec.seed;
  provenance["sampling"] = to_string(spec.sampling);
  provenance["model"] = to_string(spec.model);
  provenance["prng"] = "mt19937_64, 53-bit uniforms, Box-Muller";
  io.err << provenance.dump() << '\n';

  emit(args.output, write_dataset(generate_synthetic(spec)), io);
  return kOk;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string input;
  FitConfig config;
};

json fit_report(const DataSet& data, const FitConfig& config, const PiecewiseFit& pw,
                const FitResult& fr) {
  json j;
  j["n"] = data.size();
  j["config"] = {{"max_iterations", config.max_iterations},
                 {"step_tolerance", config.step_tolerance},
                 {"sse_tolerance", config.sse_tolerance},
                 {"gamma_max", config.gamma_max},
                 {"breakpoint_grid_points", config.breakpoint_grid_points}};
  j["piecewise"] = {{"alpha", pw.alpha}, {"beta", pw.beta},
                    {"phi_c", pw.phi_c}, {"f_c", pw.f_c},
                    {"sse", pw.sse},     {"candidate_count", pw.candidate_count}};
  json smooth = params_json(fr.params);
  smooth["sse"] = fr.sse;
  smooth["iterations"] = fr.iterations;
  smooth["converged"] = fr.converged;
  smooth["gamma_at_bound"] = fr.gamma_at_bound;
  if (fr.standard_errors) {
    const auto& se = *fr.standard_errors;
    smooth["standard_errors"] = {{"alpha", se[kAlpha]}, {"beta", se[kBeta]},
                                 {"gamma", se[kGamma]}, {"phi_c", se[kPhiC]},
                                 {"f_c", se[kFc]}};
  } else {
    smooth["standard_errors"] = nullptr;
  }
  j["smooth"] = std::move(smooth);
  return j;
}

int cmd_fit(const FitArgs& args, Io& io) {
  const auto data = load_dataset(args.input, io);
  const auto pw = fit_piecewise(data, args.config);
  const auto fr = fit_smooth(data, init_smooth(pw, data), args.config);
  json j{{"input", args.input}};
  j.update(fit_report(data, args.config, pw, fr));
  io.out << j.dump(2) << '\n';
  return fr.converged ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// plot

struct PlotArgs {
  ParamFlags params;
  bool figure1 = false;
  std::string input;
  bool overlay_fit = false;
  std::string output;
  int width = 720;
  int height = 480;
  std::optional<double> phi_lo;
  std::optional<double> phi_hi;
  int samples = 601;
};

std::vector<PlotPoint> sample_curve(const std::function<double(double)>& f,
                                    double lo, double hi, int n) {
  std::vector<PlotPoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double x = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
    pts.push_back({x, f(x)});
  }
  return pts;
}

int cmd_plot(const PlotArgs& args, Io& io) {
  const bool have_input = !args.input.empty();
  const bool have_params = args.params.any_given();
  if (args.figure1 && (have_input || have_params || args.overlay_fit)) {
    throw UsageError("--figure1 cannot be combined with parameters or --input");
  }
  if (!args.figure1 && !have_input && !have_params) {
    throw UsageError("plot needs --figure1, model parameters or --input");
  }
  if (args.overlay_fit && !have_input) {
    throw UsageError("--overlay-fit requires --input");
  }
  if (args.overlay_fit && have_params) {
    throw UsageError("--overlay-fit plots fitted curves; drop the parameter flags");
  }
  if (args.samples < 2) throw UsageError("--samples must be >= 2");

  PlotSpec spec;
  spec.width = args.width;
  spec.height = args.height;

  if (args.figure1) {
    const TransitionParams p(kFigureAlpha, kFigureBeta, kDemoGamma, kFigurePhiC,
                             kFigureFc);
    spec.title = "F(phi), piecewise-linear limit";
    spec.x_range = AxisRange{kDomainLo, kDomainHi};
    spec.series.push_back(
        {SeriesRole::kLimitCurve, "limit: alpha=10.7, beta=80, phi_c=0.598",
         sample_curve([&](double x) { return piecewise_limit(x, p); }, kDomainLo,
                      kDomainHi, args.samples)});
  } else {
    std::optional<DataSet> data;
    double lo = args.phi_lo.value_or(kDomainLo);
    double hi = args.phi_hi.value_or(kDomainHi);
    if (have_input) {
      data = load_dataset(args.input, io);
      if (data->empty()) throw UsageError("input data set is empty");
      lo = args.phi_lo.value_or(data->points().front().phi);
      hi = args.phi_hi.value_or(data->points().back().phi);
    }
    if (!(lo < hi)) throw UsageError("plot range needs phi_lo < phi_hi");
    if (data) {
      Series scatter{SeriesRole::kDataPoints, "data", {}};
      for (const auto& pt : data->points()) scatter.points.push_back({pt.phi, pt.f});
      spec.series.push_back(std::move(scatter));
    }
    if (args.overlay_fit) {
      const auto pw = fit_piecewise(*data);
      const auto fr = fit_smooth(*data, init_smooth(pw, *data));
      const TransitionParams hinge(pw.alpha, pw.beta, 1.0, pw.phi_c, pw.f_c);
      spec.series.push_back(
          {SeriesRole::kLimitCurve, "piecewise fit",
           sample_curve([&](double x) { return piecewise_limit(x, hinge); }, lo,
                        hi, args.samples)});
      spec.series.push_back(
          {SeriesRole::kModelCurve, "smooth fit",
           sample_curve([&](double x) { return value(x, fr.params); }, lo, hi,
                        args.samples)});
    } else if (have_params) {
      const auto p = args.params.build();
      spec.series.push_back(
          {SeriesRole::kModelCurve, "smooth model",
           sample_curve([&](double x) { return value(x, p); }, lo, hi,
                        args.samples)});
      if (!data) {
        spec.series.push_back(
            {SeriesRole::kLimitCurve, "piecewise limit",
             sample_curve([&](double x) { return piecewise_limit(x, p); }, lo,
                          hi, args.samples)});
      }
    }
  }
  emit(args.output, render_svg(spec), io);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  Io io{in, out, err};
  CLI::App app{"Smooth piecewise-linear transition model: evaluate, verify, "
               "simulate, fit and plot"};
  app.name(args.empty() ? "kinkfit" : args.front());
  app.require_subcommand(1, 1);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate slope, value and limit");
  eval_args.params.attach(eval);
  eval->add_option("--phi", eval_args.phis, "Parameter values");
  eval->add_option("--phi-range", eval_args.range, "lo:hi:count, endpoints inclusive");
  eval->add_flag("--csv", eval_args.csv, "Emit CSV with header phi,s,F,F_limit");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Verify closed forms against RK4 and quadrature");
  check_args.params.attach(check);
  check->add_option("--phi-lo", check_args.phi_lo)->capture_default_str();
  check->add_option("--phi-hi", check_args.phi_hi)->capture_default_str();
  check->add_option("--samples", check_args.samples)->capture_default_str();
  check->add_option("--ode-step", check_args.ode_step)->capture_default_str();
  check->add_option("--quad-tol", check_args.quad_tol)->capture_default_str();
  check->add_option("--slope-tol", check_args.slope_tol)->capture_default_str();
  check->add_option("--value-tol", check_args.value_tol)->capture_default_str();
  check->add_flag("--use-literal-eq4", check_args.literal,
                  "Diagnostic: check the beta-coefficient printed form instead");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic CSV data set");
  sim_args.params.attach(simulate);
  simulate->add_option("--n", sim_args.n, "Point count (>= 1)")->capture_default_str();
  simulate->add_option("--phi-lo", sim_args.phi_lo)->capture_default_str();
  simulate->add_option("--phi-hi", sim_args.phi_hi)->capture_default_str();
  simulate->add_option("--sigma", sim_args.sigma, "Gaussian noise sd")->capture_default_str();
  simulate->add_option("--seed", sim_args.seed)->capture_default_str();
  simulate->add_option("--sampling", sim_args.sampling)
      ->check(CLI::IsMember({"grid", "random"}))
      ->capture_default_str();
  simulate->add_option("--model", sim_args.model)
      ->check(CLI::IsMember({"smooth", "piecewise"}))
      ->capture_default_str();
  simulate->add_option("-o,--output", sim_args.output, "Output path or -")
      ->capture_default_str();

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit hinge and smooth models to a CSV");
  fit->add_option("input,-i,--input", fit_args.input, "CSV path or -")->required();
  fit->add_option("--max-iterations", fit_args.config.max_iterations)->capture_default_str();
  fit->add_option("--step-tol", fit_args.config.step_tolerance)->capture_default_str();
  fit->add_option("--sse-tol", fit_args.config.sse_tolerance)->capture_default_str();
  fit->add_option("--gamma-max", fit_args.config.gamma_max)->capture_default_str();
  fit->add_option("--grid-points", fit_args.config.breakpoint_grid_points,
                  "Extra uniform breakpoint candidates")
      ->capture_default_str();

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot", "Render an SVG figure");
  plot_args.params.attach(plot);
  plot->add_flag("--figure1", plot_args.figure1,
                 "Sharp-limit curve with alpha=10.7, beta=80, phi_c=0.598, F_c=0.5");
  plot->add_option("-i,--input", plot_args.input, "CSV data to scatter");
  plot->add_flag("--overlay-fit", plot_args.overlay_fit,
                 "Overlay hinge and smooth fits of --input");
  plot->add_option("-o,--output", plot_args.output, "SVG path or -")->required();
  plot->add_option("--width", plot_args.width)->capture_default_str();
  plot->add_option("--height", plot_args.height)->capture_default_str();
  plot->add_option("--phi-lo", plot_args.phi_lo);
  plot->add_option("--phi-hi", plot_args.phi_hi);
  plot->add_option("--samples", plot_args.samples)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("kinkfit");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_args, io);
    if (*check) return cmd_check(check_args, io);
    if (*simulate) return cmd_simulate(sim_args, io);
    if (*fit) return cmd_fit(fit_args, io);
    if (*plot) return cmd_plot(plot_args, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage(e.code()) ? kUsage : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace kinkfit::cli
