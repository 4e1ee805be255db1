#include <doctest.h>

#include "skilldecomp/special_functions.hpp"

using namespace skilldecomp;

// Reference values computed independently with SciPy 1.15.

TEST_CASE("chi-squared cdf") {
  CHECK(chi_squared_cdf(3.5, 1) == doctest::Approx(0.9386311708605977).epsilon(1e-12));
  CHECK(chi_squared_cdf(18.307, 10) == doctest::Approx(0.9499994109086018).epsilon(1e-12));
  CHECK(chi_squared_cdf(0.5, 4) == doctest::Approx(0.026499021160743912).epsilon(1e-12));
  CHECK(chi_squared_cdf(120.0, 100) == doctest::Approx(0.9155933189063082).epsilon(1e-12));
  CHECK(chi_squared_cdf(0.0, 5) == 0.0);
}

TEST_CASE("student t cdf and two-sided p-values") {
  CHECK(student_t_cdf(2.086, 20) == doctest::Approx(0.9750018227712799).epsilon(1e-12));
  CHECK(student_t_cdf(-1.5, 7) == doctest::Approx(0.08864924349498501).epsilon(1e-12));
  CHECK(student_t_cdf(0.0, 3) == doctest::Approx(0.5));
  CHECK(t_test_p_value(2.5, 40) == doctest::Approx(0.016620352830979207).epsilon(1e-12));
  CHECK(t_test_p_value(3.29, 997) == doctest::Approx(0.0010369653110072347).epsilon(1e-12));
  CHECK(t_test_p_value(-2.5, 40) == doctest::Approx(t_test_p_value(2.5, 40)));
}

TEST_CASE("incomplete gamma and beta") {
  CHECK(gamma_p(2.5, 1.2) == doctest::Approx(0.20852587940567532).epsilon(1e-12));
  CHECK(beta_inc(2.0, 3.0, 0.4) == doctest::Approx(0.5248).epsilon(1e-12));
  CHECK(beta_inc(2.0, 3.0, 0.0) == 0.0);
  CHECK(beta_inc(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
}
