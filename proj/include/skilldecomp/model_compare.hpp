#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skilldecomp/spline.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

enum class AltModelKind { ConstantMean, LinearTrend, QuadraticTrend, YearMeans };

AltModelKind alt_model_kind_from_string(const std::string& s);
std::string to_string(AltModelKind kind);

/// Least-squares fit of the simpler skill model on adjusted scores.
/// YearMeans requires a calendar-year label per round.
Vector fit_alternative(const VectorRef& times, const VectorRef& scores, AltModelKind kind,
                       const std::vector<int>& years = {});

struct BootstrapResult {
  AltModelKind kind = AltModelKind::ConstantMean;
  double observed_stat = 0.0;  // MSE(alternative) - MSE(spline)
  std::vector<double> null_stats;
  double p_value = 1.0;
  int n_boot = 0;
  int dropped_replicates = 0;
};

struct BootstrapOptions {
  int n_boot = 200;
  std::uint64_t seed = 1;
  std::vector<int> years;  // for YearMeans
  SplineOptions spline;
  int threads = 1;
};

/// Parametric bootstrap of the spline-vs-simpler-model comparison: the null
/// distribution simulates from the fitted alternative with AR(1) residuals
/// and refits both models per replicate. p = (1 + #{null >= obs}) / (B + 1).
BootstrapResult bootstrap_compare(const VectorRef& times, const VectorRef& adjusted_scores,
                                  AltModelKind kind, const BootstrapOptions& options = {});

}  // namespace skilldecomp
