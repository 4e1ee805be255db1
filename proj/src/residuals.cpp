#include "skilldecomp/residuals.hpp"

#include <cmath>
#include <limits>

#include "skilldecomp/special_functions.hpp"

namespace skilldecomp {

ResidualSeries decompose(const VectorRef& theta, double phi) {
  if (std::abs(phi) >= 1.0) throw Error(ErrorCode::Data, "|phi| must be < 1");
  const int n = static_cast<int>(theta.size());
  ResidualSeries out;
  out.phi = phi;
  out.theta = theta;
  out.lambda = Vector::Zero(n);
  out.eta = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    double lam = k == 0 ? 0.0 : phi * theta(k - 1);
    double eta = theta(k) - lam;
    // Nudge within rounding so theta == lambda + eta holds bit-exactly.
    for (int it = 0; it < 4 && lam + eta != theta(k); ++it) {
      lam = theta(k) - eta;
      eta = theta(k) - lam;
    }
    out.lambda(k) = lam;
    out.eta(k) = eta;
  }
  return out;
}

LjungBoxResult ljung_box(const VectorRef& series, int max_lag) {
  const int n = static_cast<int>(series.size());
  if (max_lag < 1) throw Error(ErrorCode::Usage, "max_lag must be >= 1");
  if (n <= max_lag) throw Error(ErrorCode::Data, "series shorter than max_lag");
  double mean = series.mean();
  double denom = 0;
  for (int i = 0; i < n; ++i) {
    double d = series(i) - mean;
    denom += d * d;
  }
  if (denom <= 0) throw Error(ErrorCode::Data, "zero-variance series");

  LjungBoxResult out;
  out.lags = max_lag;
  double q = 0;
  for (int k = 1; k <= max_lag; ++k) {
    double num = 0;
    for (int i = k; i < n; ++i) num += (series(i) - mean) * (series(i - k) - mean);
    double rho = num / denom;
    q += rho * rho / (n - k);
  }
  out.statistic = static_cast<double>(n) * (n + 2.0) * q;
  out.p_value = 1.0 - chi_squared_cdf(out.statistic, max_lag);
  return out;
}

double proportion_negative(const VectorRef& residuals) {
  const int n = static_cast<int>(residuals.size());
  if (n < 1) throw Error(ErrorCode::Data, "empty residual vector");
  int neg = 0;
  for (int i = 0; i < n; ++i)
    if (residuals(i) < 0.0) ++neg;
  return static_cast<double>(neg) / n;
}

double theta_sd(const VectorRef& residuals) {
  const int n = static_cast<int>(residuals.size());
  if (n < 2) throw Error(ErrorCode::Data, "need at least 2 residuals");
  double mean = residuals.mean();
  return std::sqrt((residuals.array() - mean).square().sum() / (n - 1));
}

std::vector<double> residuals_by_record(const Dataset& dataset, const Roster& roster,
                                        const std::map<std::string, ResidualSeries>& series,
                                        ResidualComponent component) {
  std::vector<double> out(dataset.records.size(),
                          std::numeric_limits<double>::quiet_NaN());
  for (const auto& [player, idx] : roster.rounds) {
    auto it = series.find(player);
    if (it == series.end()) continue;
    const Vector& v = component == ResidualComponent::Theta    ? it->second.theta
                      : component == ResidualComponent::Lambda ? it->second.lambda
                                                               : it->second.eta;
    if (static_cast<int>(idx.size()) != v.size())
      throw Error(ErrorCode::Runtime, "residual series misaligned for " + player);
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = v(static_cast<int>(k));
  }
  return out;
}

}  // namespace skilldecomp
