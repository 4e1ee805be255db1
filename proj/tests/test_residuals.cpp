#include <doctest.h>

#include <random>

#include "skilldecomp/residuals.hpp"
#include "skilldecomp/spline.hpp"

using namespace skilldecomp;

namespace {

Vector ar1_series(int n, double phi, double sigma_inn, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector v(n);
  v(0) = sigma_inn / std::sqrt(1.0 - phi * phi) * nd(rng);
  for (int i = 1; i < n; ++i) v(i) = phi * v(i - 1) + sigma_inn * nd(rng);
  return v;
}

// Direct transcription of the portmanteau statistic, kept deliberately
// independent of the library implementation.
double brute_force_ljung_box(const Vector& x, int lags) {
  int n = static_cast<int>(x.size());
  double mean = x.mean();
  double c0 = 0;
  for (int i = 0; i < n; ++i) c0 += (x(i) - mean) * (x(i) - mean);
  double q = 0;
  for (int k = 1; k <= lags; ++k) {
    double ck = 0;
    for (int i = k; i < n; ++i) ck += (x(i) - mean) * (x(i - k) - mean);
    double rho = ck / c0;
    q += rho * rho / (n - k);
  }
  return n * (n + 2.0) * q;
}

}  // namespace

TEST_CASE("decompose recurrence") {
  SUBCASE("phi = 0 leaves theta in eta") {
    Vector theta(4);
    theta << 1.0, -2.0, 0.5, 3.0;
    ResidualSeries s = decompose(theta, 0.0);
    CHECK((s.lambda.array() == 0.0).all());
    CHECK((s.eta - theta).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("worked example") {
    Vector theta(3);
    theta << 2.0, -1.0, 3.0;
    ResidualSeries s = decompose(theta, 0.5);
    CHECK(s.lambda(0) == 0.0);
    CHECK(s.lambda(1) == doctest::Approx(1.0));
    CHECK(s.lambda(2) == doctest::Approx(-0.5));
    CHECK(s.eta(0) == doctest::Approx(2.0));
    CHECK(s.eta(1) == doctest::Approx(-2.0));
    CHECK(s.eta(2) == doctest::Approx(3.5));
  }
  SUBCASE("exactly invertible") {
    std::mt19937_64 rng(1);
    Vector theta = ar1_series(200, 0.4, 1.0, rng);
    ResidualSeries s = decompose(theta, 0.37);
    Vector back = s.lambda + s.eta;
    CHECK((back - theta).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fitted phi whitens synthetic AR(1)") {
    std::mt19937_64 rng(2);
    Vector theta = ar1_series(2000, 0.3, 1.0, rng);
    double phi = estimate_ar1(theta);
    ResidualSeries s = decompose(theta, phi);
    CHECK(std::abs(estimate_ar1(s.eta.tail(1999))) <= 0.05);
  }
  SUBCASE("|phi| >= 1 rejected") {
    Vector theta(3);
    theta << 1, 2, 3;
    CHECK_THROWS_AS(decompose(theta, 1.0), Error);
  }
}

TEST_CASE("ljung_box") {
  SUBCASE("all-zero autocorrelations give Q = 0, p = 1") {
    // (1, 0, -1, 0) repeated has exactly zero sample autocorrelation at lag 1.
    int reps = 16;
    Vector x(4 * reps);
    for (int i = 0; i < 4 * reps; ++i)
      x(i) = i % 4 == 0 ? 1.0 : (i % 4 == 2 ? -1.0 : 0.0);
    LjungBoxResult r = ljung_box(x, 1);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("matches brute force to 1e-10 on a fixed series") {
    Vector x(20);
    x << 1.2, -0.7, 0.3, 2.1, -1.4, 0.0, 0.8, -0.2, 1.9, -2.3, 0.4, 1.1, -0.6, 0.9, -1.8,
        0.2, 1.5, -0.9, 0.7, -0.1;
    for (int lags : {1, 3, 5, 10}) {
      LjungBoxResult r = ljung_box(x, lags);
      CHECK(r.statistic == doctest::Approx(brute_force_ljung_box(x, lags)).epsilon(1e-10));
    }
  }
  SUBCASE("white-noise rejection rate is calibrated") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> nd;
    int rejections = 0;
    const int trials = 500;
    for (int s = 0; s < trials; ++s) {
      Vector x(200);
      for (int i = 0; i < 200; ++i) x(i) = nd(rng);
      if (ljung_box(x, 10).p_value < 0.05) ++rejections;
    }
    double rate = static_cast<double>(rejections) / trials;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
  }
  SUBCASE("degenerate inputs") {
    Vector x = Vector::Constant(30, 2.0);
    CHECK_THROWS_AS(ljung_box(x, 5), Error);
    Vector y(5);
    y << 1, 2, 3, 4, 5;
    CHECK_THROWS_AS(ljung_box(y, 5), Error);  // n must exceed max_lag
  }
}

TEST_CASE("proportion_negative") {
  {
    Vector v(64);
    for (int i = 0; i < 64; ++i) v(i) = i < 35 ? -1.0 : 1.0;
    CHECK(proportion_negative(v) == doctest::Approx(0.547).epsilon(1e-3));
  }
  {
    Vector v(62);
    for (int i = 0; i < 62; ++i) v(i) = i < 37 ? -0.5 : 0.5;
    CHECK(proportion_negative(v) == doctest::Approx(0.597).epsilon(1e-3));
  }
  {
    Vector v = Vector::Zero(10);
    CHECK(proportion_negative(v) == 0.0);  // exact zeros are not negative
  }
}

TEST_CASE("theta_sd") {
  Vector v(2);
  v << -1.0, 1.0;
  CHECK(theta_sd(v) == doctest::Approx(1.414).epsilon(1e-3));
  CHECK(theta_sd(Vector::Constant(5, 3.0)) == doctest::Approx(0.0));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 2.5);
  double total = 0;
  int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    Vector x(200);
    for (int i = 0; i < 200; ++i) x(i) = nd(rng);
    total += theta_sd(x);
  }
  double avg = total / seeds;
  CHECK(avg >= 2.3);
  CHECK(avg <= 2.7);
}
