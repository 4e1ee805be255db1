#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "skilldecomp/interaction.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

enum class SkillCurve { Constant, Linear, Quadratic, UShape, CustomKnots };

struct PlayerSkillSpec {
  SkillCurve kind = SkillCurve::Constant;
  double base = 71.0;      // level at t = 0.5
  double slope = 0.0;      // linear component per unit scaled time
  double curvature = 0.0;  // quadratic coefficient on (t - 0.5)^2
  std::vector<double> knot_times;   // CustomKnots only
  std::vector<double> knot_values;

  double value(double t) const;
};

struct InjectionRules {
  double pairing_effect = 0.0;     // added when grouped with the focal player
  int pairing_round = 0;           // restrict the pairing effect to one round (0 = all)
  double contention_effect = 0.0;  // added in final round when within k of lead
  int contention_k = 10;
  double round_shift = 0.0;  // added on `shift_round` of the listed events
  int shift_round = 4;
  std::vector<std::string> shift_events;
};

struct GeneratorConfig {
  int n_players = 50;
  int n_events = 40;
  int rounds_per_event = 4;
  double skill_base_mean = 71.0;
  double skill_base_sd = 1.0;
  double skill_slope_sd = 1.5;
  double skill_curvature = 4.0;
  /// Curve families cycled over players; empty means all four basic kinds.
  std::vector<SkillCurve> curve_mix;
  double sigma_round_course = 1.5;
  double sigma_player_course = 0.03;
  /// Courses are drawn from a reused pool, as on a real tour; player-course
  /// affinities are only identified when courses repeat across events.
  int n_courses = 12;
  double phi = 0.1;
  double sigma_eta = 2.5;
  int rotation_events = 0;   // events using a 3-course rotation on rounds 1-3
  int group_size = 2;
  /// Focal player sits out every k-th event (0 = plays everything); the
  /// focal-in-field regressions need a contrast.
  int focal_absent_every = 0;
  bool enable_cuts = false;
  int cut_keep = 70;
  InjectionRules injections;
  std::uint64_t seed = 1;
};

struct TruthSet {
  // Aligned with Dataset::records.
  std::vector<double> skill;
  std::vector<double> round_course;
  std::vector<double> player_course;
  std::vector<double> theta;
  std::vector<double> lambda;
  std::vector<double> eta;
  std::vector<double> injected;
  std::map<RoundCourseKey, double> true_round_course;
  std::map<PlayerCourseKey, double> true_player_course;
  std::map<std::string, PlayerSkillSpec> skill_specs;
  std::map<std::string, double> true_phi;
  Pairings pairings;
  std::string focal_player;
};

struct SynthResult {
  Dataset dataset;
  TruthSet truth;
};

/// Draws a panel from the generative form of the decomposition with known
/// truth components; deterministic under the seed.
SynthResult generate(const GeneratorConfig& config);

void write_truth(const std::filesystem::path& path, const Dataset& dataset,
                 const TruthSet& truth);

GeneratorConfig generator_config_from_kv(const std::map<std::string, std::string>& kv);

}  // namespace skilldecomp
