#include <doctest.h>

#include <cmath>

#include "kinkfit/model.hpp"
#include "kinkfit/oracle.hpp"
#include "kinkfit/quadrature.hpp"
#include "test_support.hpp"

using namespace kinkfit;
using kinkfit::testing::error_code_of;

namespace {

const TransitionParams kFigure{10.7, 80.0, 40.0, 0.598, 0.5};
const TransitionParams kUnit{1.0, 3.0, 2.0, 0.0, 0.0};

}  // namespace

TEST_CASE("adaptive_simpson integrates polynomials and handles reversed bounds") {
  const auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  CHECK(adaptive_simpson(cubic, 0.0, 2.0, 1e-12) == doctest::Approx(2.0));
  CHECK(adaptive_simpson(cubic, 2.0, 0.0, 1e-12) == doctest::Approx(-2.0));
  CHECK(adaptive_simpson(cubic, 1.0, 1.0, 1e-12) == 0.0);
  CHECK(std::abs(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0,
                                  1e-12) -
                 (std::exp(1.0) - 1.0)) <= 1e-12);
  CHECK(error_code_of([&] { adaptive_simpson(cubic, 0.0, 1.0, 0.0); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("adaptive_simpson reports runaway recursion") {
  // Non-integrable singularity: refinement never settles.
  const auto spike = [](double x) { return x == 0.0 ? 0.0 : 1.0 / (x * x); };
  CHECK(error_code_of([&] { adaptive_simpson(spike, -1.0, 1.0 + 1e-3, 1e-10); }) ==
        ErrorCode::MaxDepthExceeded);
}

TEST_CASE("integrate_slope_ode examples") {
  SUBCASE("fixed point at alpha") {
    const auto traj = integrate_slope_ode({kFigure, 0.5, 0.7, 1e-3, 10.7});
    for (const auto& s : traj) CHECK(s.s == 10.7);
  }
  SUBCASE("forward from the anchor") {
    const auto traj = integrate_slope_ode({kUnit, 0.0, 1.0, 1e-4, 2.0});
    CHECK(traj.front().phi == 0.0);
    CHECK(traj.back().phi == 1.0);
    CHECK(traj.size() == 10001);
    CHECK(std::abs(traj.back().s - slope(1.0, kUnit)) <= 1e-10);
  }
  SUBCASE("backward from the anchor") {
    const auto traj = integrate_slope_ode({kUnit, 0.0, -1.0, 1e-4, 2.0});
    CHECK(traj.back().phi == -1.0);
    CHECK(std::abs(traj.back().s - slope(-1.0, kUnit)) <= 1e-10);
  }
  SUBCASE("last step is shortened to land on the endpoint") {
    const auto traj = integrate_slope_ode({kUnit, 0.0, 0.25, 0.1, 2.0});
    REQUIRE(traj.size() == 4);
    CHECK(traj[2].phi == doctest::Approx(0.2));
    CHECK(traj[3].phi == 0.25);
  }
}

TEST_CASE("integrate_slope_ode validation and stiffness guard") {
  CHECK(error_code_of([] { integrate_slope_ode({kUnit, 0.0, 1.0, 0.0, 2.0}); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { integrate_slope_ode({kUnit, 1.0, 1.0, 0.1, 2.0}); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { integrate_slope_ode({kUnit, 0.0, 1.0, 0.1, 3.5}); }) ==
        ErrorCode::InvalidParameter);
  // gamma (beta - alpha) step = 2772 * 0.01: far too coarse.
  CHECK(error_code_of([] {
          integrate_slope_ode({kFigure, 0.598, 0.63, 1e-2, 45.35});
        }) == ErrorCode::StepTooLarge);
}

TEST_CASE("RK4 forward-backward round trip returns to the start") {
  // Kept inside the transition: backward runs amplify errors by e^|Z| once the
  // forward run has saturated at beta.
  for (double end : {0.600, 0.596}) {
    const auto fwd = integrate_slope_ode({kFigure, 0.598, end, 2.5e-6, 45.35});
    const auto back = integrate_slope_ode({kFigure, end, 0.598, 2.5e-6, fwd.back().s});
    CHECK(std::abs(back.back().s - 45.35) <= 1e-9);
  }
}

TEST_CASE("RK4 deviation scales as step^4") {
  const auto dev = [](double step) {
    return verify_closed_forms(kFigure, 0.57, 0.63, 61, step, 1e-6).max_slope_deviation;
  };
  const double coarse = dev(4e-5);
  const double fine = dev(1e-5);
  CHECK(coarse / fine >= 64.0);
  CHECK(coarse / fine <= 1024.0);
}

TEST_CASE("integrate_value_quadrature examples") {
  CHECK(integrate_value_quadrature(kFigure, 0.598, 1e-10) == 0.5);
  CHECK(std::abs(integrate_value_quadrature(kFigure, 0.63, 1e-10) -
                 value(0.63, kFigure)) <= 1e-8);
  CHECK(std::abs(integrate_value_quadrature(kFigure, 0.60, 1e-10) -
                 0.64276890110098803952) <= 1e-9);
  const TransitionParams flat(2.5, 2.5, 3.0, 1.0, -1.0);
  CHECK(std::abs(integrate_value_quadrature(flat, 4.0, 1e-12) - (-1.0 + 2.5 * 3.0)) <=
        1e-12);
}

TEST_CASE("verify_closed_forms") {
  SUBCASE("Figure-scale parameters at a step where the RK4 bound holds") {
    const auto r = verify_closed_forms(kFigure, 0.57, 0.63, 61, 2.5e-6, 1e-10);
    CHECK(r.grid.size() == 61);
    CHECK(r.grid.front() == 0.57);
    CHECK(r.grid.back() == 0.63);
    CHECK(r.max_slope_deviation <= 1e-9);
    CHECK(r.max_value_deviation <= 1e-8);
  }
  SUBCASE("step 1e-5 sits at the truncation level an independent RK4 predicts") {
    // A separate Python RK4 gives a 1.896e-8 sup over the same sweep.
    const auto r = verify_closed_forms(kFigure, 0.57, 0.63, 61, 1e-5, 1e-10);
    CHECK(r.max_slope_deviation == doctest::Approx(1.9e-8).epsilon(0.05));
  }
  SUBCASE("equal roots integrate exactly") {
    const TransitionParams flat(5.0, 5.0, 40.0, 0.598, 0.5);
    const auto r = verify_closed_forms(flat, 0.57, 0.63, 11, 1e-5, 1e-10);
    CHECK(r.max_slope_deviation <= 1e-12);
    CHECK(r.max_value_deviation <= 1e-12);
  }
  SUBCASE("the beta-coefficient printed form fails the quadrature check") {
    const auto r = verify_closed_forms(kFigure, 0.57, 0.63, 61, 1e-5, 1e-10,
                                       ValueForm::kLiteralPrinted);
    CHECK(r.max_value_deviation >= (80.0 - 10.7) * (0.598 - 0.57) / 2.0);
    // Analytic gap (beta - alpha)|phi - phi_c|, largest at phi = 0.63.
    CHECK(r.max_value_deviation == doctest::Approx(69.3 * 0.032).epsilon(1e-6));
  }
  SUBCASE("quadrature deviation is within tolerance at every sample") {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
      const auto r = verify_closed_forms(kFigure, 0.57, 0.63, 31, 1e-4, tol);
      CHECK(r.max_value_deviation <= tol + 10 * 2.2e-16 * 3.1);
    }
  }
  SUBCASE("preconditions") {
    CHECK(error_code_of([] { verify_closed_forms(kFigure, 0.6, 0.63, 5, 1e-5, 1e-8); }) ==
          ErrorCode::InvalidParameter);
    CHECK(error_code_of([] { verify_closed_forms(kFigure, 0.57, 0.63, 2, 1e-5, 1e-8); }) ==
          ErrorCode::InvalidParameter);
    CHECK(error_code_of([] { verify_closed_forms(kFigure, 0.57, 0.63, 5, 0.0, 1e-8); }) ==
          ErrorCode::InvalidParameter);
  }
}
