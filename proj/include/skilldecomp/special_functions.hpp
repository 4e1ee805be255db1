#pragma once

namespace skilldecomp {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double chi_squared_cdf(double x, double dof);

/// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Two-sided p-value for a t statistic.
double t_test_p_value(double t, double dof);

double normal_cdf(double z);

}  // namespace skilldecomp
