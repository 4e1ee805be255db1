#include "skilldecomp/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "skilldecomp/score_data.hpp"

namespace skilldecomp {

double expected_total(double actual, double theta_total) { return actual - theta_total; }

int place_if_normal(double subject_expected, const std::vector<double>& field_totals) {
  if (field_totals.empty()) throw Error(ErrorCode::Data, "empty field");
  int beaten_by = 0;
  for (double v : field_totals)
    if (v < subject_expected) ++beaten_by;
  return 1 + beaten_by;
}

int wins_if_normal(const std::vector<CounterfactualRow>& rows) {
  int wins = 0;
  for (const auto& r : rows)
    if (r.place_if_normal == 1) ++wins;
  return wins;
}

double average_finish(const std::vector<CounterfactualRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::Data, "no rows to average");
  double sum = 0;
  for (const auto& r : rows) sum += r.place_if_normal;
  return sum / static_cast<double>(rows.size());
}

TransplantOutcome luck_transplant(double expected, double donor_residual, double winning) {
  TransplantOutcome out;
  out.transplanted_total = expected + donor_residual;
  out.winning_score = winning;
  out.verdict = out.transplanted_total < winning ? Verdict::Win : Verdict::Lose;
  return out;
}

RoundMeanTable mean_residual_by_round(const std::map<int, std::vector<double>>& groups) {
  RoundMeanTable out;
  double total = 0;
  int count = 0;
  double sq = 0;
  for (const auto& [round, values] : groups) {
    if (values.empty()) throw Error(ErrorCode::Data, "empty residual group");
    double sum = 0;
    for (double v : values) sum += v;
    out.rounds.push_back(round);
    out.means.push_back(sum / static_cast<double>(values.size()));
    out.counts.push_back(static_cast<int>(values.size()));
    total += sum;
    count += static_cast<int>(values.size());
  }
  if (count == 0) throw Error(ErrorCode::Data, "no residuals");
  out.overall_mean = total / count;
  for (const auto& [round, values] : groups)
    for (double v : values) sq += (v - out.overall_mean) * (v - out.overall_mean);
  out.overall_std_error =
      count > 1 ? std::sqrt(sq / (count - 1)) / std::sqrt(static_cast<double>(count)) : 0.0;
  return out;
}

std::vector<CounterfactualRow> build_counterfactual_rows(
    const Dataset& dataset, const std::map<std::string, ResidualSeries>& residuals,
    const std::string& player_id, const std::vector<std::string>& event_filter) {
  Roster roster = build_roster(dataset);
  if (!roster.rounds.count(player_id))
    throw Error(ErrorCode::Data, "unknown player: " + player_id);
  std::vector<double> theta =
      residuals_by_record(dataset, roster, residuals, ResidualComponent::Theta);

  std::map<std::string, int> rounds_of = scheduled_rounds(dataset);

  // Per event: per-player played-round counts, totals and theta totals.
  std::map<std::string, std::map<std::string, std::pair<int, double>>> totals;
  std::map<std::string, std::map<std::string, double>> theta_totals;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& rec = dataset.records[i];
    auto& [count, total] = totals[rec.tournament_id][rec.player_id];
    ++count;
    total += rec.score;
    if (!std::isnan(theta[i])) theta_totals[rec.tournament_id][rec.player_id] += theta[i];
  }

  std::set<std::string> wanted(event_filter.begin(), event_filter.end());

  std::vector<CounterfactualRow> out;
  for (const auto& [event, players] : totals) {
    if (!wanted.empty() && !wanted.count(event)) continue;
    auto pit = players.find(player_id);
    if (pit == players.end()) continue;
    int full = rounds_of[event];
    if (pit->second.first != full) continue;  // subject missed the cut or withdrew

    CounterfactualRow row;
    row.tournament_id = event;
    row.actual_score = pit->second.second;
    row.theta_total = theta_totals[event][player_id];
    row.expected_score = expected_total(row.actual_score, row.theta_total);

    std::vector<double> field;
    double winning = row.actual_score;
    for (const auto& [other, ct] : players) {
      if (other == player_id || ct.first != full) continue;
      field.push_back(ct.second);
      winning = std::min(winning, ct.second);
    }
    row.winning_score = winning;
    if (field.empty()) continue;  // nothing to rank against
    int beaten = 0, tied = 0;
    for (double v : field) {
      if (v < row.actual_score) ++beaten;
      if (v == row.actual_score) ++tied;
    }
    row.actual_place = 1 + beaten;
    row.ties_at_place = 1 + tied;
    row.place_if_normal = place_if_normal(row.expected_score, field);
    out.push_back(row);
  }
  return out;
}

std::vector<TransplantOutcome> transplant_all(const std::vector<CounterfactualRow>& rows,
                                              double donor_residual) {
  std::vector<TransplantOutcome> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    TransplantOutcome o = luck_transplant(r.expected_score, donor_residual, r.winning_score);
    o.tournament_id = r.tournament_id;
    out.push_back(o);
  }
  return out;
}

}  // namespace skilldecomp
