#include "skilldecomp/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "skilldecomp/csv.hpp"
#include "skilldecomp/special_functions.hpp"

namespace skilldecomp {

double Standings::margin(const std::string& tournament, int round,
                         const std::string& player) const {
  auto it = rounds.find({tournament, round});
  if (it == rounds.end())
    throw Error(ErrorCode::Data,
                "no standings for " + tournament + " round " + std::to_string(round));
  auto pit = it->second.entering_total.find(player);
  if (pit == it->second.entering_total.end())
    throw Error(ErrorCode::Data, "player " + player + " lacks prior-round scores in " +
                                     tournament + " round " + std::to_string(round));
  return pit->second - it->second.leader_total;
}

Standings build_standings(const Dataset& dataset,
                          const std::map<std::string, int>& scheduled) {
  Standings st;
  st.scheduled_rounds = scheduled;

  std::map<std::string, std::map<int, std::vector<std::pair<std::string, double>>>> by_event;
  for (const auto& r : dataset.records)
    by_event[r.tournament_id][r.round_number].emplace_back(r.player_id, r.score);

  for (const auto& [event, rounds] : by_event) {
    std::map<std::string, double> total;
    std::map<std::string, int> played;
    int last = rounds.rbegin()->first;
    st.last_played_round[event] = last;
    for (const auto& [round, entries] : rounds) {
      Standings::RoundState state;
      bool have_leader = false;
      for (const auto& [player, score] : entries) {
        int prior = played.count(player) ? played[player] : 0;
        if (prior != round - 1)
          throw Error(ErrorCode::Data, "player " + player + " is missing round " +
                                           std::to_string(prior + 1) + " of " + event);
        double entering = total.count(player) ? total[player] : 0.0;
        state.entering_total[player] = entering;
        if (!have_leader || entering < state.leader_total) {
          state.leader_total = entering;
          have_leader = true;
        }
      }
      for (const auto& [player, score] : entries) {
        total[player] += score;
        played[player] = round;
      }
      st.rounds[{event, round}] = std::move(state);
    }
  }
  return st;
}

bool Pairings::together(const std::string& tournament, int round, const std::string& a,
                        const std::string& b) const {
  auto ia = group_of.find({tournament, round, a});
  auto ib = group_of.find({tournament, round, b});
  return ia != group_of.end() && ib != group_of.end() && ia->second == ib->second;
}

int Pairings::leader_group(const Standings& standings, const std::string& tournament,
                           int round) const {
  auto rit = standings.rounds.find({tournament, round});
  if (rit == standings.rounds.end()) return -1;
  int best_group = -1;
  double best = 0;
  for (const auto& [player, entering] : rit->second.entering_total) {
    auto git = group_of.find({tournament, round, player});
    if (git == group_of.end()) continue;
    if (best_group < 0 || entering < best) {
      best = entering;
      best_group = git->second;
    }
  }
  return best_group;
}

Pairings load_pairings(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  int tc = table.column("tournament_id");
  int rc = table.column("round");
  int gc = table.column("group");
  int pc = table.column("player_id");
  if (tc < 0 || rc < 0 || gc < 0 || pc < 0)
    throw Error(ErrorCode::Data, "pairings file needs tournament_id,round,group,player_id");
  Pairings out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    int round = static_cast<int>(parse_int(row[rc], table.line_numbers[i], "round"));
    int group = static_cast<int>(parse_int(row[gc], table.line_numbers[i], "group"));
    out.group_of[{row[tc], round, row[pc]}] = group;
    out.members[{row[tc], round, group}].push_back(row[pc]);
  }
  return out;
}

void write_pairings(const std::filesystem::path& path, const Pairings& pairings) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, members] : pairings.members)
    for (const auto& player : members)
      rows.push_back({std::get<0>(key), std::to_string(std::get<1>(key)),
                      std::to_string(std::get<2>(key)), player});
  write_csv(path, {"tournament_id", "round", "group", "player_id"}, rows);
}

RegressionResult run_dummy_regression(const VectorRef& y, const Matrix& dummies,
                                      const std::vector<std::string>& labels,
                                      const std::string& name) {
  const int n = static_cast<int>(y.size());
  const int k = static_cast<int>(dummies.cols());
  if (static_cast<int>(labels.size()) != k)
    throw Error(ErrorCode::Usage, "label count does not match dummy columns");
  const int p = k + 1;
  if (n <= p)
    throw Error(ErrorCode::Data, "not enough observations for " + std::to_string(k) +
                                     " dummies");
  Matrix x(n, p);
  x.col(0).setOnes();
  x.rightCols(k) = dummies;

  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    // Name the columns outside the independent pivot set.
    std::vector<bool> independent(p, false);
    for (int i = 0; i < qr.rank(); ++i)
      independent[qr.colsPermutation().indices()(i)] = true;
    std::string bad;
    for (int j = 0; j < p; ++j)
      if (!independent[j]) {
        if (!bad.empty()) bad += ", ";
        bad += j == 0 ? "intercept" : labels[j - 1];
      }
    throw Error(ErrorCode::Data, "collinear dummy columns: " + bad);
  }

  Vector beta = qr.solve(y);
  double rss = (y - x * beta).squaredNorm();
  double sigma2 = rss / (n - p);
  Matrix xtx_inv = (x.transpose() * x).ldlt().solve(Matrix::Identity(p, p));

  RegressionResult out;
  out.name = name;
  out.n_obs = n;
  out.intercept = beta(0);
  {
    double se = std::sqrt(sigma2 * xtx_inv(0, 0));
    out.intercept_p = se > 0 ? t_test_p_value(beta(0) / se, n - p) : 0.0;
  }
  for (int j = 1; j < p; ++j) {
    RegressionTerm term;
    term.label = labels[j - 1];
    term.coefficient = beta(j);
    double se = std::sqrt(sigma2 * xtx_inv(j, j));
    term.t_stat = se > 0 ? beta(j) / se : 0.0;
    term.p_value = se > 0 ? t_test_p_value(term.t_stat, n - p) : 0.0;
    out.terms.push_back(term);
  }
  return out;
}

double prior_round_adjustment(const VectorRef& prior_etas_in_event,
                              int total_career_rounds) {
  const int prior = static_cast<int>(prior_etas_in_event.size());
  if (total_career_rounds <= prior)
    throw Error(ErrorCode::Data, "career rounds must exceed prior rounds in the event");
  return -prior_etas_in_event.sum() / (total_career_rounds - prior);
}

namespace {

struct SuiteData {
  std::vector<int> rows;              // record indices entering the sample
  std::vector<double> eta;            // aligned with rows
  std::vector<bool> in_field;         // focal plays this tournament
  std::vector<bool> paired;           // grouped with the focal player this round
  std::vector<bool> is_final;         // final scheduled round of a fully played event
  std::vector<bool> shortened;        // event ended before its scheduled rounds
  std::vector<double> focal_margin;   // focal strokes behind lead entering round (NaN if absent)
  std::vector<double> player_margin;  // same for the row's player
  std::vector<bool> focal_in_final_group;
  std::vector<int> round_number;
  int max_scheduled = 0;
};

SuiteData collect(const Dataset& dataset, const Roster& roster,
                  const std::vector<double>& eta_by_record, const Standings& standings,
                  const Pairings& pairings, const std::string& focal,
                  const SuiteOptions& options) {
  SuiteData d;
  std::set<std::string> focal_events;
  for (const auto& r : dataset.records)
    if (r.player_id == focal) focal_events.insert(r.tournament_id);
  if (focal_events.empty())
    throw Error(ErrorCode::Data, "focal player " + focal + " absent from dataset");

  std::map<std::string, int> career;
  for (const auto& [player, idx] : roster.rounds) career[player] = static_cast<int>(idx.size());

  // Per (player, event): etas of earlier rounds, for the prior-round adjustment.
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, double>>> event_etas;
  if (options.adjust_prior_rounds)
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
      const auto& r = dataset.records[i];
      event_etas[{r.player_id, r.tournament_id}].emplace_back(r.round_number,
                                                              eta_by_record[i]);
    }

  for (const auto& [event, sched] : standings.scheduled_rounds)
    d.max_scheduled = std::max(d.max_scheduled, sched);

  std::map<std::string, int> final_group_cache;

  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    if (r.player_id == focal) continue;
    if (std::isnan(eta_by_record[i])) continue;

    d.rows.push_back(static_cast<int>(i));
    d.round_number.push_back(r.round_number);

    int sched = standings.scheduled_rounds.at(r.tournament_id);
    bool shortened = standings.shortened(r.tournament_id);
    bool is_final = !shortened && r.round_number == sched;
    d.shortened.push_back(shortened);
    d.is_final.push_back(is_final);

    bool in_field = focal_events.count(r.tournament_id) > 0;
    d.in_field.push_back(in_field);
    bool paired =
        in_field && pairings.together(r.tournament_id, r.round_number, r.player_id, focal);
    d.paired.push_back(paired);

    double eta = eta_by_record[i];
    if (options.adjust_prior_rounds && paired) {
      const auto& hist = event_etas[{r.player_id, r.tournament_id}];
      std::vector<double> prior;
      for (const auto& [round, v] : hist)
        if (round < r.round_number) prior.push_back(v);
      if (!prior.empty()) {
        Vector pv = Eigen::Map<Vector>(prior.data(), static_cast<int>(prior.size()));
        eta -= prior_round_adjustment(pv, career[r.player_id]);
      }
    }
    d.eta.push_back(eta);

    double fm = std::numeric_limits<double>::quiet_NaN();
    double pm = std::numeric_limits<double>::quiet_NaN();
    bool in_final_group = false;
    if (is_final) {
      auto rit = standings.rounds.find({r.tournament_id, r.round_number});
      if (rit != standings.rounds.end()) {
        auto f = rit->second.entering_total.find(focal);
        if (f != rit->second.entering_total.end()) fm = f->second - rit->second.leader_total;
        auto pp = rit->second.entering_total.find(r.player_id);
        if (pp != rit->second.entering_total.end())
          pm = pp->second - rit->second.leader_total;
      }
      if (in_field) {
        auto cit = final_group_cache.find(r.tournament_id);
        if (cit == final_group_cache.end()) {
          int lg = pairings.leader_group(standings, r.tournament_id, r.round_number);
          auto git = pairings.group_of.find({r.tournament_id, r.round_number, focal});
          int v = (lg >= 0 && git != pairings.group_of.end() && git->second == lg) ? 1 : 0;
          cit = final_group_cache.emplace(r.tournament_id, v).first;
        }
        in_final_group = cit->second == 1;
      }
    }
    d.focal_margin.push_back(fm);
    d.player_margin.push_back(pm);
    d.focal_in_final_group.push_back(in_final_group);
  }
  return d;
}

RegressionResult regress(const SuiteData& d, const std::vector<bool>& keep,
                         const std::vector<std::pair<std::string, std::vector<bool>>>& dummies,
                         const std::string& name) {
  int n = 0;
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    if (keep[i]) ++n;
  Vector y(n);
  Matrix x(n, static_cast<int>(dummies.size()));
  std::vector<std::string> labels;
  for (const auto& [label, col] : dummies) labels.push_back(label);
  int row = 0;
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    if (!keep[i]) continue;
    y(row) = d.eta[i];
    for (std::size_t j = 0; j < dummies.size(); ++j)
      x(row, static_cast<int>(j)) = dummies[j].second[i] ? 1.0 : 0.0;
    ++row;
  }
  return run_dummy_regression(y, x, labels, name);
}

}  // namespace

std::vector<RegressionResult> run_test_suite(const Dataset& dataset, const Roster& roster,
                                             const std::vector<double>& eta_by_record,
                                             const Standings& standings,
                                             const Pairings& pairings,
                                             const std::string& focal_player, SuiteKind kind,
                                             const SuiteOptions& options) {
  SuiteData d = collect(dataset, roster, eta_by_record, standings, pairings, focal_player,
                        options);
  const std::size_t m = d.rows.size();
  std::vector<bool> all(m, true);
  std::vector<RegressionResult> out;

  auto mask = [&](auto&& pred) {
    std::vector<bool> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = pred(i);
    return v;
  };

  if (kind == SuiteKind::Table3) {
    out.push_back(regress(d, all, {{"focal_in_field", d.in_field}}, "test1"));
    out.push_back(regress(
        d, all,
        {{"paired_with_focal", d.paired},
         {"in_field_not_paired", mask([&](std::size_t i) { return d.in_field[i] && !d.paired[i]; })}},
        "test2"));
    out.push_back(regress(d, all, {{"paired_with_focal", d.paired}}, "test3"));

    std::vector<std::pair<std::string, std::vector<bool>>> by_round;
    for (int r = 1; r <= d.max_scheduled; ++r)
      by_round.emplace_back("paired_round_" + std::to_string(r),
                            mask([&](std::size_t i) {
                              return d.paired[i] && d.round_number[i] == r;
                            }));
    out.push_back(regress(d, all, by_round, "test4"));

    out.push_back(regress(
        d, all,
        {{"final_round_with_focal",
          mask([&](std::size_t i) { return d.is_final[i] && d.paired[i]; })},
         {"final_round_without_focal",
          mask([&](std::size_t i) { return d.is_final[i] && !d.paired[i]; })}},
        "test5"));

    // Test 6 family: non-final pairing by round plus a split of the
    // final-round pairing dummy.
    auto nonfinal_dummies = [&]() {
      std::vector<std::pair<std::string, std::vector<bool>>> v;
      for (int r = 1; r < d.max_scheduled; ++r)
        v.emplace_back("paired_round_" + std::to_string(r),
                       mask([&](std::size_t i) {
                         return d.paired[i] && !d.is_final[i] && d.round_number[i] == r;
                       }));
      return v;
    };
    {
      auto dummies = nonfinal_dummies();
      dummies.emplace_back("final_paired_focal_in_final_group",
                           mask([&](std::size_t i) {
                             return d.is_final[i] && d.paired[i] && d.focal_in_final_group[i];
                           }));
      dummies.emplace_back("final_paired_focal_not_in_final_group",
                           mask([&](std::size_t i) {
                             return d.is_final[i] && d.paired[i] && !d.focal_in_final_group[i];
                           }));
      out.push_back(regress(d, all, dummies, "test6_final_group"));
    }
    for (int k : options.contention_ks) {
      auto dummies = nonfinal_dummies();
      auto within = [&](std::size_t i) {
        return d.is_final[i] && d.paired[i] && !std::isnan(d.focal_margin[i]) &&
               d.focal_margin[i] <= static_cast<double>(k);
      };
      dummies.emplace_back("final_paired_focal_within_" + std::to_string(k), mask(within));
      dummies.emplace_back("final_paired_focal_not_within_" + std::to_string(k),
                           mask([&](std::size_t i) {
                             return d.is_final[i] && d.paired[i] && !within(i);
                           }));
      out.push_back(regress(d, all, dummies, "test6_within_" + std::to_string(k)));
    }
    return out;
  }

  // Table 4: player contention in the final scheduled round, with a
  // final-round pairing dummy; weather-shortened events leave the sample.
  std::vector<bool> keep = mask([&](std::size_t i) { return !d.shortened[i]; });
  for (int k : options.contention_ks) {
    auto within = [&](std::size_t i) {
      return d.is_final[i] && !std::isnan(d.player_margin[i]) &&
             d.player_margin[i] <= static_cast<double>(k);
    };
    std::vector<std::pair<std::string, std::vector<bool>>> dummies;
    dummies.emplace_back("player_within_" + std::to_string(k), mask(within));
    dummies.emplace_back("player_not_within_" + std::to_string(k),
                         mask([&](std::size_t i) { return d.is_final[i] && !within(i); }));
    dummies.emplace_back("final_paired_with_focal", mask([&](std::size_t i) {
                           return d.is_final[i] && d.paired[i];
                         }));
    out.push_back(regress(d, keep, dummies, "contention_within_" + std::to_string(k)));
  }
  return out;
}

}  // namespace skilldecomp
