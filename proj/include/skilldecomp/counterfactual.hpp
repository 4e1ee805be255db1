#pragma once

#include <map>
#include <string>
#include <vector>

#include "skilldecomp/residuals.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

struct CounterfactualRow {
  std::string tournament_id;
  double winning_score = 0.0;
  double actual_score = 0.0;
  double expected_score = 0.0;
  double theta_total = 0.0;
  int actual_place = 0;
  int ties_at_place = 0;
  int place_if_normal = 0;
};

enum class Verdict { Win, Lose };

struct TransplantOutcome {
  std::string tournament_id;
  double transplanted_total = 0.0;
  double winning_score = 0.0;
  Verdict verdict = Verdict::Lose;
};

double expected_total(double actual, double theta_total);

/// 1 + number of field totals strictly below the subject's expected total;
/// exact ties rank the subject ahead.
int place_if_normal(double subject_expected, const std::vector<double>& field_totals);

int wins_if_normal(const std::vector<CounterfactualRow>& rows);

double average_finish(const std::vector<CounterfactualRow>& rows);

TransplantOutcome luck_transplant(double expected, double donor_residual, double winning);

struct RoundMeanTable {
  std::vector<int> rounds;
  std::vector<double> means;
  std::vector<int> counts;
  double overall_mean = 0.0;
  double overall_std_error = 0.0;
};

/// Per-round means of grouped residuals plus the pooled mean and its
/// standard error.
RoundMeanTable mean_residual_by_round(const std::map<int, std::vector<double>>& groups);

/// Assembles Table-1-style rows for one player from a fitted model. Only
/// tournaments where the player completed every played round enter; field
/// totals cover all other players completing the event.
std::vector<CounterfactualRow> build_counterfactual_rows(
    const Dataset& dataset, const std::map<std::string, ResidualSeries>& residuals,
    const std::string& player_id, const std::vector<std::string>& event_filter = {});

/// Applies one tournament's total residual as the donor to every row.
std::vector<TransplantOutcome> transplant_all(const std::vector<CounterfactualRow>& rows,
                                              double donor_residual);

}  // namespace skilldecomp
