#include "skilldecomp/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace skilldecomp {

namespace detail {

BandedMatrix ar1_precision(int n, double phi) {
  BandedMatrix b(n, 1);
  if (n == 1) {
    b.set(0, 0, 1.0);
    return b;
  }
  b.set(0, 0, 1.0);
  b.set(n - 1, n - 1, 1.0);
  for (int i = 1; i < n - 1; ++i) b.set(i, i, 1.0 + phi * phi);
  for (int i = 0; i < n - 1; ++i) b.set(i + 1, i, -phi);
  return b;
}

namespace {

// y <- B x for tridiagonal B in band form.
Vector tridiag_apply(const BandedMatrix& b, const Vector& x) {
  int n = static_cast<int>(x.size());
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    double v = b(i, i) * x(i);
    if (i > 0) v += b(i, i - 1) * x(i - 1);
    if (i + 1 < n) v += b(i + 1, i) * x(i + 1);
    y(i) = v;
  }
  return y;
}

inline int pos_g(int j) { return j == 0 ? 0 : 2 * j - 1; }
inline int pos_v(int j) { return 2 * j; }

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace

SplineProblem make_problem(const VectorRef& times, const VectorRef& scores, int max_knots) {
  const int n = static_cast<int>(times.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return times(a) < times(b); });

  SplineProblem p;
  p.t.resize(n);
  p.y.resize(n);
  for (int i = 0; i < n; ++i) {
    p.t(i) = times(order[i]);
    p.y(i) = scores(order[i]);
  }

  std::vector<double> unique_t;
  for (int i = 0; i < n; ++i)
    if (unique_t.empty() || p.t(i) != unique_t.back()) unique_t.push_back(p.t(i));
  int u = static_cast<int>(unique_t.size());

  std::vector<double> knots;
  if (u <= max_knots) {
    knots = unique_t;
  } else {
    // Thin to quantile positions of the unique times; every knot is an
    // observed time, so each keeps at least one observation.
    knots.reserve(max_knots);
    for (int j = 0; j < max_knots; ++j) {
      int idx = static_cast<int>(std::llround(static_cast<double>(j) * (u - 1) /
                                              (max_knots - 1)));
      if (knots.empty() || unique_t[idx] != knots.back()) knots.push_back(unique_t[idx]);
    }
  }
  const int q = static_cast<int>(knots.size());
  p.knots = Eigen::Map<Vector>(knots.data(), q);

  p.knot_of_obs.resize(n);
  for (int i = 0; i < n; ++i) {
    auto it = std::lower_bound(knots.begin(), knots.end(), p.t(i));
    int k;
    if (it == knots.end()) {
      k = q - 1;
    } else {
      k = static_cast<int>(it - knots.begin());
      if (*it != p.t(i) && k > 0 && p.t(i) - knots[k - 1] <= knots[k] - p.t(i)) --k;
    }
    p.knot_of_obs[i] = k;
  }

  if (q >= 2) {
    p.h.resize(q - 1);
    for (int j = 0; j + 1 < q; ++j) p.h(j) = knots[j + 1] - knots[j];
  }

  if (q >= 3) {
    // Q^T Q, pentadiagonal over interior knots.
    int m = q - 2;
    BandedMatrix qtq(m, 2);
    auto qcol = [&](int j, int row) -> double {
      // Column for interior knot j (1-based interior index j = 1..q-2).
      if (row == j - 1) return 1.0 / p.h(j - 1);
      if (row == j) return -1.0 / p.h(j - 1) - 1.0 / p.h(j);
      if (row == j + 1) return 1.0 / p.h(j);
      return 0.0;
    };
    for (int a = 1; a <= m; ++a)
      for (int b = a; b <= std::min(m, a + 2); ++b) {
        double s = 0;
        for (int row = b - 1; row <= a + 1; ++row) s += qcol(a, row) * qcol(b, row);
        qtq.set(a - 1, b - 1, s);
      }
    p.qtq_factor_ = std::make_shared<BandedLDLT>(qtq);
    p.log_det_qtq = p.qtq_factor_->log_abs_det();
  }
  return p;
}

GmlEval evaluate_gml(const SplineProblem& p, double log10_lambda, double phi, bool want_fit) {
  GmlEval out;
  const int n = static_cast<int>(p.t.size());
  const int q = static_cast<int>(p.knots.size());
  const double lambda = std::pow(10.0, log10_lambda);
  if (q < 3 || n < 3) return out;

  BandedMatrix b = ar1_precision(n, phi);
  Vector by = tridiag_apply(b, p.y);
  double yby = p.y.dot(by);

  // A = N' B N over knots; tridiagonal because consecutive observations map
  // to the same or adjacent knots.
  BandedMatrix a(q, 1);
  Vector rhs_g = Vector::Zero(q);
  Vector counts = Vector::Zero(q);
  for (int i = 0; i < n; ++i) {
    int k = p.knot_of_obs[i];
    a.add(k, k, b(i, i));
    rhs_g(k) += by(i);
    counts(k) += 1.0;
    if (i + 1 < n) {
      double v = b(i + 1, i);
      int k2 = p.knot_of_obs[i + 1];
      if (k2 == k)
        a.add(k, k, 2.0 * v);
      else
        a.add(k2, k, v);
    }
  }

  // Augmented system [A, Q; Q', -R/lambda] with knot values and curvature
  // multipliers interleaved; bandwidth 3.
  const int msize = 2 * q - 2;
  BandedMatrix m(msize, 3);
  for (int j = 0; j < q; ++j) {
    m.add(pos_g(j), pos_g(j), a(j, j));
    if (j + 1 < q) m.add(pos_g(j + 1), pos_g(j), a(j + 1, j));
  }
  for (int j = 1; j <= q - 2; ++j) {
    double qm = 1.0 / p.h(j - 1);
    double qp = 1.0 / p.h(j);
    m.add(pos_v(j), pos_g(j - 1), qm);
    m.add(pos_v(j), pos_g(j), -qm - qp);
    m.add(pos_v(j), pos_g(j + 1), qp);
    m.add(pos_v(j), pos_v(j), -(p.h(j - 1) + p.h(j)) / 3.0 / lambda);
    if (j + 1 <= q - 2) m.add(pos_v(j + 1), pos_v(j), -p.h(j) / 6.0 / lambda);
  }

  BandedLDLT fac(m);
  if (!fac.healthy()) return out;

  Vector rhs = Vector::Zero(msize);
  for (int j = 0; j < q; ++j) rhs(pos_g(j)) = rhs_g(j);
  Vector sol = fac.solve(rhs);

  Vector g(q), gamma = Vector::Zero(q);
  for (int j = 0; j < q; ++j) g(j) = sol(pos_g(j));
  for (int j = 1; j <= q - 2; ++j) gamma(j) = sol(pos_v(j)) / lambda;

  double s = yby - rhs_g.dot(g);
  double s_floor = 1e-14 * (std::abs(yby) + 1.0);
  if (s < s_floor) s = s_floor;

  // Determinant pieces of the restricted likelihood. X spans the unpenalized
  // (affine) directions at the knots.
  Eigen::MatrixXd xq(q, 2);
  for (int j = 0; j < q; ++j) {
    xq(j, 0) = 1.0;
    xq(j, 1) = p.knots(j);
  }
  Eigen::MatrixXd z0(q, 2);
  for (int c = 0; c < 2; ++c) z0.col(c) = tridiag_apply(a, xq.col(c));
  Eigen::Matrix2d g0 = xq.transpose() * z0;
  double det_g0 = det2(g0);

  Eigen::MatrixXd w0(q - 2, 2);
  for (int j = 1; j <= q - 2; ++j)
    for (int c = 0; c < 2; ++c)
      w0(j - 1, c) = z0(j - 1, c) / p.h(j - 1) -
                     (1.0 / p.h(j - 1) + 1.0 / p.h(j)) * z0(j, c) + z0(j + 1, c) / p.h(j);
  Eigen::MatrixXd yw = p.qtq_factor()->solve(w0);
  Eigen::Matrix2d c2 = z0.transpose() * z0 - w0.transpose() * yw;
  double det_c2 = det2(c2);
  if (det_g0 <= 0 || det_c2 <= 0) return out;

  out.criterion = (n - 2) * std::log(s) + fac.log_abs_det() + 2.0 * std::log(det_g0) -
                  std::log(det_c2) - p.log_det_qtq - std::log1p(-phi * phi);
  out.whitened_rss = s;
  out.ok = std::isfinite(out.criterion);

  if (want_fit && out.ok) {
    out.g = g;
    out.gamma = gamma;

    Vector crhs = Vector::Zero(msize);
    for (int j = 0; j < q; ++j) crhs(pos_g(j)) = counts(j);
    Vector csol = fac.solve(crhs);
    out.center_g.resize(q);
    out.center_gamma = Vector::Zero(q);
    for (int j = 0; j < q; ++j) out.center_g(j) = csol(pos_g(j));
    for (int j = 1; j <= q - 2; ++j) out.center_gamma(j) = csol(pos_v(j)) / lambda;

    BandedMatrix hinv = fac.band_inverse();
    double edf = 0;
    for (int j = 0; j < q; ++j) {
      edf += hinv(pos_g(j), pos_g(j)) * a(j, j);
      if (j + 1 < q) edf += 2.0 * hinv(pos_g(j + 1), pos_g(j)) * a(j + 1, j);
    }
    out.edf = edf;
  }
  return out;
}

}  // namespace detail

namespace {

struct NelderMeadResult {
  Eigen::Vector2d x;
  double value;
};

NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f,
                                Eigen::Vector2d x0, Eigen::Vector2d step, int max_evals) {
  std::array<Eigen::Vector2d, 3> xs = {x0, x0 + Eigen::Vector2d(step(0), 0.0),
                                       x0 + Eigen::Vector2d(0.0, step(1))};
  std::array<double, 3> fs;
  int evals = 0;
  auto eval = [&](const Eigen::Vector2d& x) {
    ++evals;
    return f(x(0), x(1));
  };
  for (int i = 0; i < 3; ++i) fs[i] = eval(xs[i]);

  while (evals < max_evals) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    int lo = idx[0], mid = idx[1], hi = idx[2];
    if (std::abs(fs[hi] - fs[lo]) < 1e-10 * (1.0 + std::abs(fs[lo]))) break;

    Eigen::Vector2d centroid = 0.5 * (xs[lo] + xs[mid]);
    Eigen::Vector2d xr = centroid + (centroid - xs[hi]);
    double fr = eval(xr);
    if (fr < fs[lo]) {
      Eigen::Vector2d xe = centroid + 2.0 * (centroid - xs[hi]);
      double fe = eval(xe);
      if (fe < fr) {
        xs[hi] = xe;
        fs[hi] = fe;
      } else {
        xs[hi] = xr;
        fs[hi] = fr;
      }
    } else if (fr < fs[mid]) {
      xs[hi] = xr;
      fs[hi] = fr;
    } else {
      Eigen::Vector2d xc = centroid + 0.5 * (xs[hi] - centroid);
      double fc = eval(xc);
      if (fc < fs[hi]) {
        xs[hi] = xc;
        fs[hi] = fc;
      } else {
        xs[mid] = xs[lo] + 0.5 * (xs[mid] - xs[lo]);
        xs[hi] = xs[lo] + 0.5 * (xs[hi] - xs[lo]);
        fs[mid] = eval(xs[mid]);
        fs[hi] = eval(xs[hi]);
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (fs[i] < fs[best]) best = i;
  return {xs[best], fs[best]};
}

double golden_search(const std::function<double(double)>& f, double a, double b, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// Generalized least squares affine fit under AR(1) weighting.
void gls_line(const Vector& t, const Vector& y, double phi, double* intercept, double* slope) {
  int n = static_cast<int>(t.size());
  BandedMatrix b = detail::ar1_precision(n, phi);
  Eigen::MatrixXd x(n, 2);
  x.col(0).setOnes();
  x.col(1) = t;
  Eigen::MatrixXd bx(n, 2);
  for (int c = 0; c < 2; ++c) bx.col(c) = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) {
      double s = b(i, i) * x(i, c);
      if (i > 0) s += b(i, i - 1) * x(i - 1, c);
      if (i + 1 < n) s += b(i + 1, i) * x(i + 1, c);
      v(i) = s;
    }
    return v;
  }();
  Eigen::Matrix2d gram = x.transpose() * bx;
  Eigen::Vector2d rhs = bx.transpose() * y;
  Eigen::Vector2d beta = gram.ldlt().solve(rhs);
  *intercept = beta(0);
  *slope = beta(1);
}

}  // namespace

SplineFit fit_player_spline(const VectorRef& times, const VectorRef& scores,
                            const SplineOptions& options) {
  const int n = static_cast<int>(times.size());
  if (scores.size() != times.size())
    throw Error(ErrorCode::Data, "times and scores differ in length");
  if (n < 2) throw Error(ErrorCode::Data, "need at least 2 observations for a spline fit");
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(times(i)) || !std::isfinite(scores(i)))
      throw Error(ErrorCode::Data, "non-finite input to spline fit");

  detail::SplineProblem p = detail::make_problem(times, scores, options.max_knots);
  const int q = static_cast<int>(p.knots.size());

  SplineFit fit;
  fit.fitted_values.resize(n);

  if (n < 4 || q < 4) {
    // Degenerate sizes: generalized least squares line (or constant).
    double phi = options.fixed_phi.value_or(0.0);
    double b0 = 0, b1 = 0;
    if (q == 1) {
      b0 = p.y.mean();
      b1 = 0;
      fit.knots = Vector::LinSpaced(2, p.knots(0), p.knots(0) + 1.0);
    } else {
      gls_line(p.t, p.y, phi, &b0, &b1);
      if (!options.fixed_phi && n >= 3) {
        Vector resid = p.y - (b0 + b1 * p.t.array()).matrix();
        if ((resid.array() - resid.mean()).abs().maxCoeff() > 1e-12) {
          phi = std::clamp(estimate_ar1(resid), options.phi_min, options.phi_max);
          gls_line(p.t, p.y, phi, &b0, &b1);
        }
      }
      fit.knots = Vector::LinSpaced(2, p.knots(0), p.knots(q - 1));
    }
    if (options.center_residuals) {
      double shift = (p.y - (b0 + b1 * p.t.array()).matrix()).mean();
      b0 += shift;
    }
    fit.values = (b0 + b1 * fit.knots.array()).matrix();
    fit.second_derivs = Vector::Zero(2);
    fit.log10_lambda = options.log10_lambda_max;
    fit.phi = phi;
    fit.effective_df = std::min(2, n);
    fit.linear_flag = true;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a2, int b2) { return times(a2) < times(b2); });
    for (int i = 0; i < n; ++i) fit.fitted_values(order[i]) = b0 + b1 * p.t(i);
    return fit;
  }

  auto objective = [&](double l, double phi) {
    l = std::clamp(l, options.log10_lambda_min, options.log10_lambda_max);
    phi = std::clamp(phi, options.phi_min, options.phi_max);
    detail::GmlEval e = detail::evaluate_gml(p, l, phi, false);
    return e.ok ? e.criterion : std::numeric_limits<double>::infinity();
  };

  std::vector<double> lambda_grid, phi_grid;
  if (options.fixed_log10_lambda) {
    lambda_grid = {*options.fixed_log10_lambda};
  } else if (options.warm_start) {
    for (double d : {-1.0, 0.0, 1.0})
      lambda_grid.push_back(std::clamp(options.warm_start->first + d,
                                       options.log10_lambda_min, options.log10_lambda_max));
  } else {
    for (double l = options.log10_lambda_min; l <= options.log10_lambda_max + 1e-9; l += 1.0)
      lambda_grid.push_back(l);
  }
  if (options.fixed_phi) {
    phi_grid = {*options.fixed_phi};
  } else if (options.warm_start) {
    for (double d : {-0.1, 0.0, 0.1})
      phi_grid.push_back(std::clamp(options.warm_start->second + d, options.phi_min,
                                    options.phi_max));
  } else {
    phi_grid = {-0.6, -0.4, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8};
    for (double& v : phi_grid) v = std::clamp(v, options.phi_min, options.phi_max);
  }

  double best_l = lambda_grid.front(), best_phi = phi_grid.front();
  double best_crit = std::numeric_limits<double>::infinity();
  for (double l : lambda_grid)
    for (double phi : phi_grid) {
      double c = objective(l, phi);
      if (c < best_crit) {
        best_crit = c;
        best_l = l;
        best_phi = phi;
      }
    }
  if (!std::isfinite(best_crit))
    throw Error(ErrorCode::Runtime, "smoothing criterion not finite anywhere on the grid");

  const bool free_l = !options.fixed_log10_lambda;
  const bool free_phi = !options.fixed_phi;
  if (free_l && free_phi) {
    auto r = nelder_mead_2d([&](double l, double phi) { return objective(l, phi); },
                            {best_l, best_phi}, {0.5, 0.05}, options.refine_iters);
    if (r.value < best_crit) {
      best_crit = r.value;
      best_l = std::clamp(r.x(0), options.log10_lambda_min, options.log10_lambda_max);
      best_phi = std::clamp(r.x(1), options.phi_min, options.phi_max);
    }
  } else if (free_l) {
    best_l = golden_search([&](double l) { return objective(l, best_phi); },
                           std::max(options.log10_lambda_min, best_l - 1.5),
                           std::min(options.log10_lambda_max, best_l + 1.5), 40);
  } else if (free_phi) {
    best_phi = golden_search([&](double phi) { return objective(best_l, phi); },
                             std::max(options.phi_min, best_phi - 0.15),
                             std::min(options.phi_max, best_phi + 0.15), 40);
  }

  detail::GmlEval e = detail::evaluate_gml(p, best_l, best_phi, true);
  if (!e.ok) throw Error(ErrorCode::Runtime, "spline fit failed at selected parameters");

  Vector g = e.g, gamma = e.gamma;
  if (options.center_residuals) {
    double fitted_sum = 0;
    double dir_sum = 0;
    for (int i = 0; i < n; ++i) {
      fitted_sum += g(p.knot_of_obs[i]);
      dir_sum += e.center_g(p.knot_of_obs[i]);
    }
    if (dir_sum > 1e-12) {
      double mu = (p.y.sum() - fitted_sum) / dir_sum;
      g += mu * e.center_g;
      gamma += mu * e.center_gamma;
    }
  }

  fit.knots = p.knots;
  fit.values = g;
  fit.second_derivs = gamma;
  fit.log10_lambda = best_l;
  fit.phi = best_phi;
  fit.effective_df = e.edf;
  fit.linear_flag = e.edf <= 2.0 + options.linear_df_tol;
  fit.gml_criterion = best_crit;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a2, int b2) { return times(a2) < times(b2); });
  for (int i = 0; i < n; ++i) fit.fitted_values(order[i]) = g(p.knot_of_obs[i]);
  return fit;
}

double predict_mean(const SplineFit& fit, double t) {
  const Vector& x = fit.knots;
  const Vector& g = fit.values;
  const Vector& c = fit.second_derivs;
  const int q = static_cast<int>(x.size());
  if (q == 0) throw Error(ErrorCode::Runtime, "empty spline fit");
  if (q == 1) return g(0);

  if (t <= x(0)) {
    double h = x(1) - x(0);
    double d = (g(1) - g(0)) / h - h * (2.0 * c(0) + c(1)) / 6.0;
    return g(0) + d * (t - x(0));
  }
  if (t >= x(q - 1)) {
    double h = x(q - 1) - x(q - 2);
    double d = (g(q - 1) - g(q - 2)) / h + h * (c(q - 2) + 2.0 * c(q - 1)) / 6.0;
    return g(q - 1) + d * (t - x(q - 1));
  }
  int j = static_cast<int>(std::upper_bound(x.data(), x.data() + q, t) - x.data()) - 1;
  j = std::clamp(j, 0, q - 2);
  double h = x(j + 1) - x(j);
  double a = (x(j + 1) - t) / h;
  double bb = (t - x(j)) / h;
  return a * g(j) + bb * g(j + 1) +
         ((a * a * a - a) * c(j) + (bb * bb * bb - bb) * c(j + 1)) * h * h / 6.0;
}

double estimate_ar1(const VectorRef& residuals) {
  const int n = static_cast<int>(residuals.size());
  if (n < 3) throw Error(ErrorCode::Data, "need at least 3 residuals for lag-1 autocorrelation");
  double mean = residuals.mean();
  double denom = 0, numer = 0;
  for (int i = 0; i < n; ++i) {
    double d = residuals(i) - mean;
    denom += d * d;
    if (i > 0) numer += d * (residuals(i - 1) - mean);
  }
  if (denom <= 0)
    throw Error(ErrorCode::Data, "zero-variance series has undefined autocorrelation");
  return std::clamp(numer / denom, -0.99, 0.99);
}

double pseudo_r2(const VectorRef& fitted, const VectorRef& observed) {
  if (fitted.size() != observed.size())
    throw Error(ErrorCode::Data, "fitted and observed differ in length");
  if (observed.size() < 2) throw Error(ErrorCode::Data, "need at least 2 observations");
  double mean = observed.mean();
  double mse = (observed - fitted).squaredNorm();
  double mst = (observed.array() - mean).matrix().squaredNorm();
  if (mst <= 0) throw Error(ErrorCode::Data, "zero total variance");
  return 1.0 - mse / mst;
}

FitDiagnostics diagnose(const SplineFit& fit, const VectorRef& observed) {
  FitDiagnostics d;
  double obs_mean = observed.mean();
  double mst = (observed.array() - obs_mean).matrix().squaredNorm();
  double mse = (observed - fit.fitted_values).squaredNorm();
  d.pseudo_r2 = mst > 0 ? 1.0 - mse / mst : (mse <= 1e-20 ? 1.0 : 0.0);
  Vector resid = observed - fit.fitted_values;
  int n = static_cast<int>(resid.size());
  double rmean = resid.mean();
  d.residual_sd = n > 1 ? std::sqrt((resid.array() - rmean).square().sum() / (n - 1)) : 0.0;
  d.linear_flag = fit.linear_flag;
  return d;
}

std::string dump_spline_fit(const SplineFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << "player " << fit.player_id << "\n";
  os << "log10_lambda " << fit.log10_lambda << "\n";
  os << "phi " << fit.phi << "\n";
  os << "effective_df " << fit.effective_df << "\n";
  os << "linear " << (fit.linear_flag ? 1 : 0) << "\n";
  auto vec = [&](const char* name, const Vector& v) {
    os << name << " " << v.size();
    for (int i = 0; i < v.size(); ++i) os << " " << v(i);
    os << "\n";
  };
  vec("knots", fit.knots);
  vec("values", fit.values);
  vec("second_derivs", fit.second_derivs);
  vec("fitted", fit.fitted_values);
  os << "end\n";
  return os.str();
}

SplineFit parse_spline_fit(const std::string& block) {
  std::istringstream is(block);
  SplineFit fit;
  std::string key;
  auto vec = [&](Vector& v) {
    int k = 0;
    is >> k;
    v.resize(k);
    for (int i = 0; i < k; ++i) is >> v(i);
  };
  while (is >> key) {
    if (key == "player")
      is >> fit.player_id;
    else if (key == "log10_lambda")
      is >> fit.log10_lambda;
    else if (key == "phi")
      is >> fit.phi;
    else if (key == "effective_df")
      is >> fit.effective_df;
    else if (key == "linear") {
      int v = 0;
      is >> v;
      fit.linear_flag = v != 0;
    } else if (key == "knots")
      vec(fit.knots);
    else if (key == "values")
      vec(fit.values);
    else if (key == "second_derivs")
      vec(fit.second_derivs);
    else if (key == "fitted")
      vec(fit.fitted_values);
    else if (key == "end")
      break;
    else
      throw Error(ErrorCode::Data, "unknown fit dump key: " + key);
  }
  if (fit.knots.size() == 0) throw Error(ErrorCode::Data, "fit dump missing knots");
  return fit;
}

}  // namespace skilldecomp
