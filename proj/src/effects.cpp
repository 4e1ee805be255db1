#include "skilldecomp/effects.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "skilldecomp/csv.hpp"
#include "skilldecomp/score_data.hpp"

namespace skilldecomp {

double total_residual(double theta_total, double rc_total, double pc_total) {
  return theta_total + rc_total + pc_total;
}

namespace {

struct EffectGroup {
  std::vector<int> records;
};

// Moment matching on group means: Var(group mean) ~= sigma_effect^2 +
// noise_variance / unit_count. Units are single observations by default; a
// unit_of vector groups observations into cells first (player-course groups
// use (player, course, event) cells so within-player correlation of the
// spline error cancels out of the noise estimate).
template <typename Key>
void update_effects(const std::map<Key, EffectGroup>& groups,
                    const std::vector<double>& partial, double var_resid,
                    const std::vector<int>* unit_of, std::optional<double> fixed_sigma,
                    bool shrink_singletons_to_zero, std::map<Key, double>* effects,
                    std::map<Key, double>* weights, double* var_out,
                    std::vector<std::string>* warnings, const char* what) {
  const std::size_t G = groups.size();
  std::vector<double> means(G);
  std::vector<int> units(G);
  std::vector<int> sizes(G);
  double within_ss = 0;
  int within_df = 0;

  std::size_t k = 0;
  for (const auto& [key, group] : groups) {
    sizes[k] = static_cast<int>(group.records.size());
    if (unit_of) {
      std::map<int, std::pair<double, int>> cells;
      for (int i : group.records) {
        cells[(*unit_of)[i]].first += partial[i];
        cells[(*unit_of)[i]].second += 1;
      }
      double s = 0;
      for (auto& [cell, acc] : cells) s += acc.first / acc.second;
      means[k] = s / static_cast<double>(cells.size());
      units[k] = static_cast<int>(cells.size());
      for (auto& [cell, acc] : cells) {
        double d = acc.first / acc.second - means[k];
        within_ss += d * d;
      }
      within_df += static_cast<int>(cells.size()) - 1;
    } else {
      double s = 0;
      for (int i : group.records) s += partial[i];
      means[k] = s / static_cast<double>(group.records.size());
      units[k] = sizes[k];
    }
    ++k;
  }

  // Noise variance at the unit level: pooled between-cell variance within
  // groups when cells are defined, otherwise the residual variance.
  double unit_var = var_resid;
  if (unit_of && within_df > 0) unit_var = std::max(1e-10, within_ss / within_df);

  double var_effect;
  if (fixed_sigma) {
    var_effect = *fixed_sigma * *fixed_sigma;
  } else {
    double mean_sq = 0, mean_inv = 0;
    for (k = 0; k < G; ++k) {
      mean_sq += means[k] * means[k];
      mean_inv += 1.0 / units[k];
    }
    mean_sq /= static_cast<double>(G);
    mean_inv /= static_cast<double>(G);
    var_effect = std::max(1e-12, mean_sq - unit_var * mean_inv);
  }
  *var_out = var_effect;

  // BLUP shrinkage with precision-weighted centering; the level moves into
  // the skill curves on the next spline pass.
  double wsum = 0, wmean = 0;
  std::vector<double> raw(G);
  k = 0;
  for (const auto& [key, group] : groups) {
    double mk = static_cast<double>(units[k]);
    double shrink = mk * var_effect / (mk * var_effect + unit_var);
    double value = shrink * means[k];
    if (shrink_singletons_to_zero && sizes[k] < 2) {
      value = 0.0;
      if (warnings)
        warnings->push_back(std::string(what) + " key with <2 observations shrunk to 0");
    }
    raw[k] = value;
    double w = mk / unit_var + 1.0 / var_effect;
    wsum += w;
    wmean += w * value;
    ++k;
  }
  wmean = wsum > 0 ? wmean / wsum : 0.0;
  k = 0;
  for (const auto& [key, group] : groups) {
    (*effects)[key] = raw[k] - wmean;
    if (weights) (*weights)[key] = static_cast<double>(units[k]) / unit_var + 1.0 / var_effect;
    ++k;
  }
}

}  // namespace

FullModelResult fit_full_model(const Dataset& dataset, const ModelOptions& options) {
  if (dataset.empty()) throw Error(ErrorCode::Data, "empty dataset");
  const std::size_t n = dataset.records.size();
  Roster roster = build_roster(dataset);

  std::map<RoundCourseKey, EffectGroup> rc_groups;
  std::map<PlayerCourseKey, EffectGroup> pc_groups;
  std::vector<int> pc_cell_of(n);  // (player, course, tournament) cell index
  {
    std::map<std::tuple<std::string, std::string, std::string>, int> cells;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = dataset.records[i];
      rc_groups[round_course_key(r)].records.push_back(static_cast<int>(i));
      pc_groups[player_course_key(r)].records.push_back(static_cast<int>(i));
      auto cell = std::make_tuple(r.player_id, r.course_id, r.tournament_id);
      auto [it, inserted] = cells.emplace(cell, static_cast<int>(cells.size()));
      pc_cell_of[i] = it->second;
    }
  }

  FullModelResult result;
  EffectsModel& eff = result.effects;
  for (const auto& [key, g] : rc_groups) eff.round_course_effects[key] = 0.0;
  for (const auto& [key, g] : pc_groups) eff.player_course_effects[key] = 0.0;

  std::vector<double> rc_of(n, 0.0), pc_of(n, 0.0), fitted(n, 0.0);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = dataset.records[i].score;

  struct PlayerSlot {
    std::string id;
    std::vector<int> idx;
    Vector times;
    SplineFit fit;
    bool has_fit = false;
  };
  std::vector<PlayerSlot> slots;
  for (const auto& player : roster.players) {
    PlayerSlot s;
    s.id = player;
    s.idx = roster.rounds.at(player);
    if (s.idx.size() >= 2) s.times = scaled_time(roster, player);
    slots.push_back(std::move(s));
  }

  double var_resid = 1.0;
  {
    double mean = 0;
    for (double v : scores) mean += v;
    mean /= static_cast<double>(n);
    double sq = 0;
    for (double v : scores) sq += (v - mean) * (v - mean);
    var_resid = sq / std::max<std::size_t>(1, n - 1);
  }

  auto refit_player = [&](PlayerSlot& slot) {
    if (slot.idx.size() < 2) return 0.0;
    Vector target(static_cast<int>(slot.idx.size()));
    for (std::size_t k = 0; k < slot.idx.size(); ++k) {
      int i = slot.idx[k];
      target(static_cast<int>(k)) = scores[i] - rc_of[i] - pc_of[i];
    }
    SplineOptions sopt = options.spline;
    if (slot.has_fit) sopt.warm_start = {{slot.fit.log10_lambda, slot.fit.phi}};
    SplineFit fit = fit_player_spline(slot.times, target, sopt);
    fit.player_id = slot.id;
    double delta = 0.0;
    if (slot.has_fit)
      delta = (fit.fitted_values - slot.fit.fitted_values).cwiseAbs().maxCoeff();
    else
      delta = std::numeric_limits<double>::infinity();
    slot.fit = std::move(fit);
    slot.has_fit = true;
    for (std::size_t k = 0; k < slot.idx.size(); ++k)
      fitted[slot.idx[k]] = slot.fit.fitted_values(static_cast<int>(k));
    return delta;
  };

  auto refit_all = [&]() {
    double max_delta = 0.0;
    int threads = std::max(1, options.threads);
    if (threads <= 1 || slots.size() < 2) {
      for (auto& slot : slots) max_delta = std::max(max_delta, refit_player(slot));
      return max_delta;
    }
    std::vector<double> deltas(slots.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= slots.size()) break;
        deltas[i] = refit_player(slots[i]);
      }
    };
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t)
      futures.push_back(std::async(std::launch::async, worker));
    for (auto& f : futures) f.get();
    for (double v : deltas) max_delta = std::max(max_delta, v);
    return max_delta;
  };

  refit_all();  // initial spline pass on raw scores

  int pass = 0;
  bool converged = false;
  for (; pass < options.max_iter; ++pass) {
    double effect_delta = 0.0;
    if (!options.force_zero_effects && !options.freeze_effects) {
      // Residual variance from current theta residuals.
      double sq = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double th = scores[i] - fitted[i] - rc_of[i] - pc_of[i];
        sq += th * th;
      }
      var_resid = std::max(1e-8, sq / static_cast<double>(n));
      eff.var_residual = var_resid;

      std::vector<double> partial(n);
      for (std::size_t i = 0; i < n; ++i) partial[i] = scores[i] - fitted[i] - pc_of[i];
      std::map<RoundCourseKey, double> new_rc;
      std::map<RoundCourseKey, double> rc_w;
      eff.warnings.clear();
      update_effects(rc_groups, partial, var_resid, nullptr,
                     options.fixed_sigma_round_course, true, &new_rc, &rc_w,
                     &eff.var_round_course, &eff.warnings, "round-course");
      // The affine-in-date component of the round-course field is weakly
      // identified against the unpenalized affine parts of the skill curves;
      // project it out (same weights as the centering) so it lives in the
      // splines and backfitting converges.
      {
        std::map<RoundCourseKey, double> date_of;
        for (const auto& [key, g] : rc_groups) {
          double d = 0;
          for (int i : g.records) d += static_cast<double>(dataset.records[i].calendar_index);
          date_of[key] = d / static_cast<double>(g.records.size());
        }
        double sw = 0, st = 0, stt = 0, sv = 0, stv = 0;
        for (const auto& [key, v] : new_rc) {
          double w = rc_w[key];
          double d = date_of[key];
          sw += w;
          st += w * d;
          stt += w * d * d;
          sv += w * v;
          stv += w * d * v;
        }
        double tbar = st / sw;
        double denom = stt - sw * tbar * tbar;
        double slope = denom > 1e-9 ? (stv - tbar * sv) / denom : 0.0;
        double mean = sv / sw;
        for (auto& [key, v] : new_rc) v -= mean + slope * (date_of[key] - tbar);
      }
      double rc_delta = 0;
      for (const auto& [key, v] : new_rc) {
        rc_delta = std::max(rc_delta, std::abs(v - eff.round_course_effects[key]));
        eff.round_course_effects[key] = v;
      }
      effect_delta = std::max(effect_delta, rc_delta);

      for (std::size_t i = 0; i < n; ++i) {
        rc_of[i] = eff.round_course_effects[round_course_key(dataset.records[i])];
        partial[i] = scores[i] - fitted[i] - rc_of[i];
      }
      std::map<PlayerCourseKey, double> new_pc;
      std::map<PlayerCourseKey, double> pc_w;
      update_effects(pc_groups, partial, var_resid, &pc_cell_of,
                     options.fixed_sigma_player_course, false, &new_pc, &pc_w,
                     &eff.var_player_course, nullptr, "player-course");
      // A player's mean course affinity is unidentified against his skill
      // level; recenter per player so the level lives in the spline.
      {
        std::map<std::string, std::pair<double, double>> acc;  // player -> (w*v, w)
        for (const auto& [key, v] : new_pc) {
          acc[key.player_id].first += pc_w[key] * v;
          acc[key.player_id].second += pc_w[key];
        }
        for (auto& [key, v] : new_pc)
          v -= acc[key.player_id].first / acc[key.player_id].second;
      }
      double pc_delta = 0;
      for (const auto& [key, v] : new_pc) {
        pc_delta = std::max(pc_delta, std::abs(v - eff.player_course_effects[key]));
        eff.player_course_effects[key] = v;
      }
      effect_delta = std::max(effect_delta, pc_delta);
      for (std::size_t i = 0; i < n; ++i)
        pc_of[i] = eff.player_course_effects[player_course_key(dataset.records[i])];
    }

    double fit_delta = refit_all();
    if (std::getenv("SKILLDECOMP_TRACE"))
      std::fprintf(stderr, "pass %d: fit_delta=%.3g effect_delta=%.3g\n", pass, fit_delta,
                   effect_delta);
    if (std::max(fit_delta, effect_delta) < options.tol) {
      converged = true;
      ++pass;
      break;
    }
  }
  eff.n_iterations = pass;
  eff.converged = converged;

  // Final residual decomposition; phi per player from the spline fit (or
  // pooled across players when requested).
  double pooled_phi = 0.0;
  if (options.pooled_phi) {
    double s = 0;
    int c = 0;
    for (const auto& slot : slots)
      if (slot.has_fit) {
        s += slot.fit.phi;
        ++c;
      }
    pooled_phi = c > 0 ? s / c : 0.0;
  }

  double sq_theta = 0;
  for (auto& slot : slots) {
    if (!slot.has_fit) continue;
    Vector theta(static_cast<int>(slot.idx.size()));
    for (std::size_t k = 0; k < slot.idx.size(); ++k) {
      int i = slot.idx[k];
      theta(static_cast<int>(k)) = scores[i] - fitted[i] - rc_of[i] - pc_of[i];
    }
    sq_theta += theta.squaredNorm();
    double phi = options.pooled_phi ? pooled_phi : slot.fit.phi;
    ResidualSeries series = decompose(theta, phi);
    series.player_id = slot.id;
    result.residuals[slot.id] = std::move(series);
    result.fits[slot.id] = slot.fit;
  }
  if (options.force_zero_effects || options.freeze_effects)
    eff.var_residual = sq_theta / static_cast<double>(n);

  double score_mean = 0;
  for (double v : scores) score_mean += v;
  score_mean /= static_cast<double>(n);
  double mst = 0;
  for (double v : scores) mst += (v - score_mean) * (v - score_mean);
  result.model_pseudo_r2 = mst > 0 ? 1.0 - sq_theta / mst : 0.0;
  return result;
}

double rotation_spread(const Dataset& dataset, const EffectsModel& effects,
                       const std::string& tournament_id) {
  std::map<std::string, double> per_player;
  std::set<std::string> paths_seen;
  std::map<std::string, std::string> path_of;
  bool found = false;
  for (const auto& rec : dataset.records) {
    if (rec.tournament_id != tournament_id) continue;
    found = true;
    auto it = effects.round_course_effects.find(round_course_key(rec));
    double e = it != effects.round_course_effects.end() ? it->second : 0.0;
    per_player[rec.player_id] += e;
    path_of[rec.player_id] += std::to_string(rec.round_number) + ":" + rec.course_id + ";";
  }
  if (!found) throw Error(ErrorCode::Data, "unknown tournament: " + tournament_id);
  for (const auto& [player, path] : path_of) paths_seen.insert(path);
  if (paths_seen.size() < 2)
    throw Error(ErrorCode::Data, tournament_id + " has a single course rotation");
  double lo = per_player.begin()->second, hi = lo;
  for (const auto& [player, total] : per_player) {
    lo = std::min(lo, total);
    hi = std::max(hi, total);
  }
  return hi - lo;
}

void write_effects(const std::filesystem::path& dir, const EffectsModel& effects) {
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, v] : effects.round_course_effects)
      rows.push_back({key.tournament_id, std::to_string(key.round_number), key.course_id,
                      format_full(v)});
    write_csv(dir / "round_course_effects.csv",
              {"tournament_id", "round", "course_id", "effect"}, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, v] : effects.player_course_effects)
      rows.push_back({key.player_id, key.course_id, format_full(v)});
    write_csv(dir / "player_course_effects.csv", {"player_id", "course_id", "effect"}, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"var_round_course", format_full(effects.var_round_course)});
    rows.push_back({"var_player_course", format_full(effects.var_player_course)});
    rows.push_back({"var_residual", format_full(effects.var_residual)});
    rows.push_back({"n_iterations", std::to_string(effects.n_iterations)});
    rows.push_back({"converged", effects.converged ? "1" : "0"});
    write_csv(dir / "model_summary.csv", {"key", "value"}, rows);
  }
}

EffectsModel load_effects(const std::filesystem::path& dir) {
  EffectsModel out;
  {
    CsvTable t = read_csv(dir / "round_course_effects.csv");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      out.round_course_effects[{row[0],
                                static_cast<int>(parse_int(row[1], t.line_numbers[i], "round")),
                                row[2]}] = parse_double(row[3], t.line_numbers[i], "effect");
    }
  }
  {
    CsvTable t = read_csv(dir / "player_course_effects.csv");
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      out.player_course_effects[{t.rows[i][0], t.rows[i][1]}] =
          parse_double(t.rows[i][2], t.line_numbers[i], "effect");
  }
  {
    CsvTable t = read_csv(dir / "model_summary.csv");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row[0] == "var_round_course") out.var_round_course = parse_double(row[1], 0, row[0]);
      if (row[0] == "var_player_course")
        out.var_player_course = parse_double(row[1], 0, row[0]);
      if (row[0] == "var_residual") out.var_residual = parse_double(row[1], 0, row[0]);
      if (row[0] == "n_iterations")
        out.n_iterations = static_cast<int>(parse_int(row[1], 0, row[0]));
      if (row[0] == "converged") out.converged = row[1] == "1";
    }
  }
  return out;
}

void write_fits(const std::filesystem::path& path,
                const std::map<std::string, SplineFit>& fits) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Input, path.string());
  out << "# skill fit dump: per-player blocks of key/value lines; vectors are\n"
      << "# written as '<name> <count> <v1> ... <vN>'; blocks end with 'end'.\n";
  for (const auto& [player, fit] : fits) out << dump_spline_fit(fit);
  if (!out) throw Error(ErrorCode::Input, "write failed: " + path.string());
}

std::map<std::string, SplineFit> load_fits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Input, path.string());
  std::map<std::string, SplineFit> out;
  std::string line, block;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    block += line + "\n";
    if (line == "end") {
      SplineFit fit = parse_spline_fit(block);
      out[fit.player_id] = std::move(fit);
      block.clear();
    }
  }
  return out;
}

}  // namespace skilldecomp
