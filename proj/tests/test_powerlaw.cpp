#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinkfit/powerlaw.hpp"
#include "test_support.hpp"

using namespace kinkfit;
using kinkfit::testing::error_code_of;
using kinkfit::testing::rel_err;

namespace {

const PowerLawParams kBoundary{1.0, 1.0 / 7.0, 0.5, 1e3, 1.0};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> ys;
  for (int i = 0; i < n; ++i) {
    ys.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  return ys;
}

}  // namespace

TEST_CASE("PowerLawParams validation and canonical order") {
  CHECK(error_code_of([] { PowerLawParams(0.0, 0.1, 0.5, 1.0, 1.0); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { PowerLawParams(1.0, 0.1, 0.5, -1.0, 1.0); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { PowerLawParams(1.0, 0.1, 0.5, 1.0, 0.0); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { PowerLawParams(1.0, NAN, 0.5, 1.0, 1.0); }) ==
        ErrorCode::InvalidParameter);
  const PowerLawParams swapped(2.0, 0.5, 0.1, 3.0, 4.0);
  CHECK(swapped.alpha() == 0.1);
  CHECK(swapped.beta() == 0.5);
  CHECK(swapped.b_coef() == doctest::Approx(2.0 * std::pow(4.0, -0.4)));
}

TEST_CASE("shear examples") {
  CHECK(shear(1.0, kBoundary) == doctest::Approx((1.0 / 7.0 + 0.5) / 2.0).epsilon(1e-15));
  for (double y : {0.9, 0.99, 0.995}) {
    const double gap = 0.5 - 1.0 / 7.0;
    // Plus one rounding of alpha + tail.
    const double bound = std::exp(-gap * 1e3 * (1.0 - y)) * gap + 0x1p-52 / 7.0;
    CHECK(shear(y, kBoundary) - 1.0 / 7.0 <= bound);
    CHECK(shear(y, kBoundary) >= 1.0 / 7.0);
  }
  const PowerLawParams single(3.0, 1.0 / 7.0, 1.0 / 7.0, 50.0, 2.0);
  for (double y : {1e-3, 1.0, 2.0, 40.0}) CHECK(shear(y, single) == 1.0 / 7.0);
  CHECK(error_code_of([] { shear(0.0, kBoundary); }) == ErrorCode::NonPositiveY);
  CHECK(error_code_of([] { shear(-1.0, kBoundary); }) == ErrorCode::NonPositiveY);
}

TEST_CASE("velocity_limit examples") {
  const PowerLawParams p(1.7, 0.2, 0.6, 10.0, 2.5);
  CHECK(velocity_limit(2.5, p) == doctest::Approx(1.7 * std::pow(2.5, 0.2)).epsilon(1e-15));
  CHECK(velocity_limit(std::nextafter(2.5, 3.0), p) ==
        doctest::Approx(1.7 * std::pow(2.5, 0.2)).epsilon(1e-14));
  const PowerLawParams flat(1.0, 0.0, 0.5, 10.0, 3.0);
  for (double y : {0.01, 1.0, 3.0}) CHECK(velocity_limit(y, flat) == 1.0);
  const PowerLawParams hand(2.0, 1.0, 2.0, 10.0, 1.0);
  CHECK(velocity_limit(4.0, hand) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(error_code_of([] { velocity_limit(0.0, kBoundary); }) == ErrorCode::NonPositiveY);
}

TEST_CASE("velocity_smooth examples") {
  const PowerLawParams p(1.7, 0.2, 0.6, 10.0, 2.5);
  CHECK(velocity_smooth(2.5, p, 1e-10) == 1.7 * std::pow(2.5, 0.2));

  const PowerLawParams single(3.0, 0.25, 0.25, 10.0, 2.0);
  for (double y : {0.05, 0.5, 2.0, 7.0, 300.0}) {
    const double want = 3.0 * std::pow(y, 0.25);
    CHECK(std::abs(velocity_smooth(y, single, 1e-10) - want) <= 1e-10 * want);
  }

  const PowerLawParams sharp(1.0, 0.0, 1.0, 1e3, 1.0);
  for (double y : {0.5, 2.0}) {
    CHECK(rel_err(velocity_smooth(y, sharp, 1e-10), velocity_limit(y, sharp)) <= 2e-3);
  }
  CHECK(error_code_of([] { velocity_smooth(0.0, kBoundary, 1e-8); }) ==
        ErrorCode::NonPositiveY);
  CHECK(error_code_of([] { velocity_smooth(1.0, kBoundary, 0.0); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("loglog_slope examples") {
  const double tol = 1e-10;
  const PowerLawParams single(3.0, 0.3, 0.3, 10.0, 2.0);
  for (double y : {0.1, 2.0, 9.0}) {
    CHECK(std::abs(loglog_slope(y, single, 1e-3, tol) - 0.3) <= 10 * tol);
  }
  CHECK(std::abs(loglog_slope(0.5, kBoundary, 1e-3, tol) - 1.0 / 7.0) <= 1e-3);
  CHECK(std::abs(loglog_slope(1.0, kBoundary, 1e-3, tol) - shear(1.0, kBoundary)) <= 1e-2);
  CHECK(error_code_of([] { loglog_slope(1.0, kBoundary, 0.0, 1e-8); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { loglog_slope(1.0, kBoundary, 1.0, 1e-8); }) ==
        ErrorCode::InvalidParameter);
  CHECK(error_code_of([] { loglog_slope(-1.0, kBoundary, 0.1, 1e-8); }) ==
        ErrorCode::NonPositiveY);
}

TEST_CASE("property: loglog_slope reproduces shear") {
  const double tol = 1e-11;
  const double h = 1e-4;
  const PowerLawParams p(2.0, 0.1, 0.9, 20.0, 1.5);
  for (double y : log_grid(0.05, 30.0, 41)) {
    const double gap = p.beta() - p.alpha();
    const double scale = p.gamma() * gap * gap * y * y;
    CHECK(std::abs(loglog_slope(y, p, h, tol) - shear(y, p)) <= 10 * (tol + h * h * scale));
  }
}

TEST_CASE("property: smooth profile converges to the matched power laws") {
  const PowerLawParams base(1.0, 1.0 / 7.0, 0.5, 1.0, 1.0);
  const auto grid = log_grid(0.1, 10.0, 81);
  const auto sup = [&](double gamma) {
    const PowerLawParams p(base.a_coef(), base.alpha(), base.beta(), gamma, base.y_c());
    double worst = 0.0;
    for (double y : grid) {
      const double d = std::abs(std::log(velocity_smooth(y, p, 1e-13)) -
                                std::log(velocity_limit(y, p)));
      CHECK(d <= std::log(2.0) / gamma * (1.0 + std::abs(std::log(y / p.y_c()))));
      worst = std::max(worst, d);
    }
    return worst;
  };
  double prev = sup(100.0);
  for (double gamma : {200.0, 400.0, 800.0}) {
    const double cur = sup(gamma);
    CHECK(prev / cur == doctest::Approx(2.0).epsilon(0.15));
    prev = cur;
  }
}

TEST_CASE("property: velocity_smooth is positive") {
  const PowerLawParams steep(1e-3, -2.0, 3.0, 5.0, 0.7);
  for (double y : log_grid(1e-4, 1e3, 30)) {
    CHECK(velocity_smooth(y, steep, 1e-9) > 0.0);
  }
}
