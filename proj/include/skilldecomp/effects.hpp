#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skilldecomp/residuals.hpp"
#include "skilldecomp/spline.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

struct EffectsModel {
  std::map<RoundCourseKey, double> round_course_effects;
  std::map<PlayerCourseKey, double> player_course_effects;
  double var_round_course = 0.0;
  double var_player_course = 0.0;
  double var_residual = 0.0;
  int n_iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct FullModelResult {
  EffectsModel effects;
  std::map<std::string, SplineFit> fits;
  std::map<std::string, ResidualSeries> residuals;
  double model_pseudo_r2 = 0.0;
};

struct ModelOptions {
  double tol = 1e-4;
  int max_iter = 50;
  /// Skip the effect updates entirely; splines fit raw scores.
  bool force_zero_effects = false;
  /// Keep effects at their current (initial) values across passes.
  bool freeze_effects = false;
  std::optional<double> fixed_sigma_round_course;   // bypass moment estimation
  std::optional<double> fixed_sigma_player_course;
  bool pooled_phi = false;
  int threads = 1;
  SplineOptions spline;
};

/// Backfits the additive decomposition score = skill(t) + round-course +
/// player-course + theta: alternating BLUP effect updates (variance
/// components re-estimated each pass by moment matching) with per-player
/// spline refits, until effects and fitted values stabilize.
FullModelResult fit_full_model(const Dataset& dataset, const ModelOptions& options = {});

/// A player's tournament-total deviation: theta + round-course + player-course.
double total_residual(double theta_total, double rc_total, double pc_total);

/// Max minus min of per-player summed round-course effects across the
/// rotation paths of one event. Errors when the event has a single path.
double rotation_spread(const Dataset& dataset, const EffectsModel& effects,
                       const std::string& tournament_id);

void write_effects(const std::filesystem::path& dir, const EffectsModel& effects);
EffectsModel load_effects(const std::filesystem::path& dir);

void write_fits(const std::filesystem::path& path,
                const std::map<std::string, SplineFit>& fits);
std::map<std::string, SplineFit> load_fits(const std::filesystem::path& path);

}  // namespace skilldecomp
