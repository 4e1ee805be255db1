#pragma once

#include <map>
#include <string>
#include <vector>

#include "skilldecomp/types.hpp"

namespace skilldecomp {

/// Per-player residual decomposition theta = lambda + eta, where lambda is
/// the one-step AR(1) prediction of theta and eta the innovation.
struct ResidualSeries {
  std::string player_id;
  Vector theta;
  Vector lambda;
  Vector eta;
  double phi = 0.0;
};

ResidualSeries decompose(const VectorRef& theta, double phi);

struct LjungBoxResult {
  double statistic = 0.0;
  int lags = 0;
  double p_value = 1.0;
};

LjungBoxResult ljung_box(const VectorRef& series, int max_lag);

/// count(x < 0) / n; exact zeros are not negative.
double proportion_negative(const VectorRef& residuals);

/// Sample standard deviation (n-1 denominator).
double theta_sd(const VectorRef& residuals);

enum class ResidualComponent { Theta, Lambda, Eta };

/// Flattens per-player series onto dataset record indices via the roster's
/// chronological ordering.
std::vector<double> residuals_by_record(const Dataset& dataset, const Roster& roster,
                                        const std::map<std::string, ResidualSeries>& series,
                                        ResidualComponent component);

}  // namespace skilldecomp
