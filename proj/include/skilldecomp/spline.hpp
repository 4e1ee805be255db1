#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skilldecomp/banded.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

struct SplineOptions {
  double log10_lambda_min = -8.0;
  double log10_lambda_max = 8.0;
  double phi_min = -0.9;
  double phi_max = 0.9;
  std::optional<double> fixed_log10_lambda;
  std::optional<double> fixed_phi;
  /// Starting point for local refinement; skips most of the coarse grid.
  std::optional<std::pair<double, double>> warm_start;  // (log10_lambda, phi)
  int max_knots = 200;
  int refine_iters = 120;
  /// Constrain the fit so plain residuals sum to zero (the level split
  /// between the skill curve and the residuals is otherwise arbitrary).
  bool center_residuals = true;
  double linear_df_tol = 0.01;
};

/// A fitted natural cubic smoothing spline with AR(1) error structure.
/// `values` holds the curve at the knots; `second_derivs` the natural-spline
/// second derivatives (zero at both boundary knots).
struct SplineFit {
  std::string player_id;
  Vector knots;
  Vector values;
  Vector second_derivs;
  double log10_lambda = 0.0;
  double phi = 0.0;
  double effective_df = 0.0;
  Vector fitted_values;  // at the observation positions, input order
  bool linear_flag = false;
  double gml_criterion = 0.0;
};

struct FitDiagnostics {
  double pseudo_r2 = 0.0;
  double residual_sd = 0.0;
  bool linear_flag = false;
};

/// Fits the time-varying mean by penalized generalized least squares under an
/// AR(1) error model; the smoothing parameter and phi are chosen jointly by
/// generalized maximum likelihood. Deterministic for fixed inputs/options.
SplineFit fit_player_spline(const VectorRef& times, const VectorRef& scores,
                            const SplineOptions& options = {});

double predict_mean(const SplineFit& fit, double t);

/// Lag-1 sample autocorrelation about the mean, clamped to [-0.99, 0.99].
double estimate_ar1(const VectorRef& residuals);

/// 1 - MSE/MST with MST about the sample mean; can be negative.
double pseudo_r2(const VectorRef& fitted, const VectorRef& observed);

FitDiagnostics diagnose(const SplineFit& fit, const VectorRef& observed);

std::string dump_spline_fit(const SplineFit& fit);
SplineFit parse_spline_fit(const std::string& block);

namespace detail {

/// Observation layout shared by every (lambda, phi) evaluation: knots, the
/// observation-to-knot assignment, and the penalty pieces that do not depend
/// on the parameters.
struct SplineProblem {
  Vector t;      // observation times, ascending
  Vector y;      // scores in the same order
  Vector knots;  // strictly increasing, each with at least one observation
  std::vector<int> knot_of_obs;
  Vector h;  // knot gaps, size q-1

  // Pentadiagonal Q^T Q factor and its log determinant (knot geometry only).
  BandedLDLT* qtq_factor() const { return qtq_factor_.get(); }
  double log_det_qtq = 0.0;
  std::shared_ptr<BandedLDLT> qtq_factor_;
};

SplineProblem make_problem(const VectorRef& times, const VectorRef& scores, int max_knots);

struct GmlEval {
  double criterion = 0.0;   // -2 * restricted log-likelihood up to a constant
  double whitened_rss = 0.0;  // w'(I-A)w
  Vector g;      // knot values (only when requested)
  Vector gamma;  // second derivatives at knots (only when requested)
  double edf = 0.0;
  bool ok = false;
  // Direction along which a constant shift of the residual mean moves the
  // fit; used by the residual-centering constraint.
  Vector center_g;
  Vector center_gamma;
};

/// Evaluates the joint GML criterion at (lambda, phi) via the banded
/// augmented system; optionally returns the fitted curve and effective df.
GmlEval evaluate_gml(const SplineProblem& p, double log10_lambda, double phi, bool want_fit);

/// AR(1) precision matrix B = T'T as a tridiagonal band (unit innovation
/// variance scaling).
BandedMatrix ar1_precision(int n, double phi);

}  // namespace detail

}  // namespace skilldecomp
