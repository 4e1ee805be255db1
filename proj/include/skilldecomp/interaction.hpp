#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "skilldecomp/types.hpp"

namespace skilldecomp {

/// Cumulative state entering each (tournament, round).
struct Standings {
  struct RoundState {
    std::map<std::string, double> entering_total;  // players with complete priors
    double leader_total = 0.0;
  };
  std::map<std::pair<std::string, int>, RoundState> rounds;
  std::map<std::string, int> scheduled_rounds;
  std::map<std::string, int> last_played_round;

  bool shortened(const std::string& tournament) const {
    auto s = scheduled_rounds.find(tournament);
    auto l = last_played_round.find(tournament);
    return s != scheduled_rounds.end() && l != last_played_round.end() &&
           l->second < s->second;
  }
  /// Strokes behind the leader entering the round; 0 means tied or leading.
  double margin(const std::string& tournament, int round, const std::string& player) const;
};

Standings build_standings(const Dataset& dataset,
                          const std::map<std::string, int>& scheduled);

/// Playing groups per (tournament, round), from a
/// `tournament_id,round,group,player_id` CSV.
struct Pairings {
  std::map<std::tuple<std::string, int, std::string>, int> group_of;
  std::map<std::tuple<std::string, int, int>, std::vector<std::string>> members;

  bool together(const std::string& tournament, int round, const std::string& a,
                const std::string& b) const;
  /// Group id containing the leader entering the round, or -1.
  int leader_group(const Standings& standings, const std::string& tournament,
                   int round) const;
};

Pairings load_pairings(const std::filesystem::path& path);
void write_pairings(const std::filesystem::path& path, const Pairings& pairings);

struct RegressionTerm {
  std::string label;
  double coefficient = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

struct RegressionResult {
  std::string name;
  double intercept = 0.0;
  double intercept_p = 1.0;
  std::vector<RegressionTerm> terms;
  int n_obs = 0;
};

/// OLS of y on an intercept plus the dummy columns, with classical
/// homoskedastic two-sided t-test p-values. Rank-deficient designs raise an
/// error naming the offending columns.
RegressionResult run_dummy_regression(const VectorRef& y, const Matrix& dummies,
                                      const std::vector<std::string>& labels,
                                      const std::string& name = {});

/// Expected per-round residual over the remaining career rounds implied by
/// the event's prior rounds summing against a (near) zero career total.
double prior_round_adjustment(const VectorRef& prior_etas_in_event, int total_career_rounds);

enum class SuiteKind { Table3, Table4 };

struct SuiteOptions {
  int final_group_size = 2;
  bool adjust_prior_rounds = false;
  std::vector<int> contention_ks = {10, 8, 6, 4, 2, 0};
};

/// The focal-player interaction regressions: field presence, pairing,
/// round-by-round pairing, final-round splits and the contention variants
/// (Table3), or player-contention-by-k with a final-round pairing dummy
/// (Table4). Weather-shortened events are dropped from the contention
/// samples. The focal player's own rounds never enter.
std::vector<RegressionResult> run_test_suite(const Dataset& dataset, const Roster& roster,
                                             const std::vector<double>& eta_by_record,
                                             const Standings& standings,
                                             const Pairings& pairings,
                                             const std::string& focal_player, SuiteKind kind,
                                             const SuiteOptions& options = {});

}  // namespace skilldecomp
