#include "skilldecomp/model_compare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <random>

#include <Eigen/Dense>

namespace skilldecomp {

AltModelKind alt_model_kind_from_string(const std::string& s) {
  if (s == "mean" || s == "constant") return AltModelKind::ConstantMean;
  if (s == "linear") return AltModelKind::LinearTrend;
  if (s == "quadratic") return AltModelKind::QuadraticTrend;
  if (s == "year" || s == "year-means") return AltModelKind::YearMeans;
  throw Error(ErrorCode::Usage, "unknown alternative model: " + s);
}

std::string to_string(AltModelKind kind) {
  switch (kind) {
    case AltModelKind::ConstantMean: return "mean";
    case AltModelKind::LinearTrend: return "linear";
    case AltModelKind::QuadraticTrend: return "quadratic";
    case AltModelKind::YearMeans: return "year-means";
  }
  return "?";
}

Vector fit_alternative(const VectorRef& times, const VectorRef& scores, AltModelKind kind,
                       const std::vector<int>& years) {
  const int n = static_cast<int>(times.size());
  if (scores.size() != n) throw Error(ErrorCode::Data, "length mismatch");

  switch (kind) {
    case AltModelKind::ConstantMean: {
      if (n < 1) throw Error(ErrorCode::Data, "need at least 1 observation");
      return Vector::Constant(n, scores.mean());
    }
    case AltModelKind::LinearTrend:
    case AltModelKind::QuadraticTrend: {
      int p = kind == AltModelKind::LinearTrend ? 2 : 3;
      if (n < p) throw Error(ErrorCode::Data, "too few observations for trend fit");
      Matrix x(n, p);
      x.col(0).setOnes();
      x.col(1) = times;
      if (p == 3) x.col(2) = times.array().square().matrix();
      Vector beta = (x.transpose() * x).ldlt().solve(x.transpose() * scores);
      return x * beta;
    }
    case AltModelKind::YearMeans: {
      if (static_cast<int>(years.size()) != n)
        throw Error(ErrorCode::Data, "YearMeans needs a calendar-year label per round");
      std::map<int, std::pair<double, int>> acc;
      for (int i = 0; i < n; ++i) {
        acc[years[i]].first += scores(i);
        acc[years[i]].second += 1;
      }
      Vector out(n);
      for (int i = 0; i < n; ++i) {
        auto& [sum, count] = acc[years[i]];
        out(i) = sum / count;
      }
      return out;
    }
  }
  throw Error(ErrorCode::Usage, "unknown alternative model kind");
}

namespace {

double mse(const VectorRef& fitted, const VectorRef& observed) {
  return (observed - fitted).squaredNorm() / static_cast<double>(observed.size());
}

}  // namespace

BootstrapResult bootstrap_compare(const VectorRef& times, const VectorRef& adjusted_scores,
                                  AltModelKind kind, const BootstrapOptions& options) {
  if (options.n_boot < 1) throw Error(ErrorCode::Usage, "n_boot must be >= 1");
  const int n = static_cast<int>(times.size());

  Vector alt_fit = fit_alternative(times, adjusted_scores, kind, options.years);
  Vector alt_resid = adjusted_scores - alt_fit;

  double phi = 0.0;
  if (n >= 3) {
    double var = (alt_resid.array() - alt_resid.mean()).square().sum();
    if (var > 1e-12) phi = std::clamp(estimate_ar1(alt_resid), -0.9, 0.9);
  }
  // Innovation scale from the whitened alternative residuals.
  double sigma_inn;
  {
    double sq = 0;
    for (int i = 1; i < n; ++i) {
      double inn = alt_resid(i) - phi * alt_resid(i - 1);
      sq += inn * inn;
    }
    sigma_inn = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  }

  SplineFit spline = fit_player_spline(times, adjusted_scores, options.spline);
  double observed = mse(alt_fit, adjusted_scores) - mse(spline.fitted_values, adjusted_scores);

  BootstrapResult out;
  out.kind = kind;
  out.observed_stat = observed;
  out.n_boot = options.n_boot;
  out.null_stats.assign(options.n_boot, std::numeric_limits<double>::quiet_NaN());

  std::atomic<int> dropped{0};
  auto replicate = [&](int b) {
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(0xb00f), static_cast<std::uint64_t>(b)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> nd;
    Vector y(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double inn = sigma_inn * nd(rng);
      double theta = i == 0 ? (phi != 0.0 ? inn / std::sqrt(1.0 - phi * phi) : inn)
                            : phi * prev + inn;
      prev = theta;
      y(i) = alt_fit(i) + theta;
    }
    try {
      Vector alt_b = fit_alternative(times, y, kind, options.years);
      SplineOptions sopt = options.spline;
      sopt.warm_start = {{spline.log10_lambda, spline.phi}};
      SplineFit spline_b = fit_player_spline(times, y, sopt);
      out.null_stats[b] = mse(alt_b, y) - mse(spline_b.fitted_values, y);
    } catch (const Error&) {
      dropped.fetch_add(1);
    }
  };

  int threads = std::max(1, options.threads);
  if (threads <= 1) {
    for (int b = 0; b < options.n_boot; ++b) replicate(b);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        int b = next.fetch_add(1);
        if (b >= options.n_boot) break;
        replicate(b);
      }
    };
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t) futures.push_back(std::async(std::launch::async, worker));
    for (auto& f : futures) f.get();
  }

  out.dropped_replicates = dropped.load();
  int exceed = 0;
  int valid = 0;
  for (double v : out.null_stats) {
    if (std::isnan(v)) continue;
    ++valid;
    if (v >= observed) ++exceed;
  }
  out.p_value = (1.0 + exceed) / (valid + 1.0);
  return out;
}

}  // namespace skilldecomp
