#include "skilldecomp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "skilldecomp/csv.hpp"

namespace skilldecomp {

double PlayerSkillSpec::value(double t) const {
  switch (kind) {
    case SkillCurve::Constant:
      return base;
    case SkillCurve::Linear:
      return base + slope * (t - 0.5);
    case SkillCurve::Quadratic:
    case SkillCurve::UShape:
      return base + slope * (t - 0.5) + curvature * (t - 0.5) * (t - 0.5);
    case SkillCurve::CustomKnots: {
      if (knot_times.empty()) return base;
      if (t <= knot_times.front()) return knot_values.front();
      if (t >= knot_times.back()) return knot_values.back();
      auto it = std::upper_bound(knot_times.begin(), knot_times.end(), t);
      std::size_t j = static_cast<std::size_t>(it - knot_times.begin()) - 1;
      double w = (t - knot_times[j]) / (knot_times[j + 1] - knot_times[j]);
      return (1.0 - w) * knot_values[j] + w * knot_values[j + 1];
    }
  }
  return base;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  std::seed_seq seq{seed, purpose, index};
  return std::mt19937_64(seq);
}

std::string padded(const char* prefix, int i, int width) {
  std::string num = std::to_string(i);
  while (static_cast<int>(num.size()) < width) num.insert(num.begin(), '0');
  return prefix + num;
}

}  // namespace

SynthResult generate(const GeneratorConfig& cfg) {
  if (cfg.n_players < 1 || cfg.n_events < 1)
    throw Error(ErrorCode::Config, "need at least one player and one event");
  if (cfg.rounds_per_event < 3 || cfg.rounds_per_event > 5)
    throw Error(ErrorCode::Config, "rounds_per_event must be in {3,4,5}");
  if (cfg.sigma_round_course < 0 || cfg.sigma_player_course < 0 || cfg.sigma_eta < 0)
    throw Error(ErrorCode::Config, "sigmas must be non-negative");
  if (std::abs(cfg.phi) >= 1.0) throw Error(ErrorCode::Config, "|phi| must be < 1");
  if (cfg.group_size != 2 && cfg.group_size != 3)
    throw Error(ErrorCode::Config, "group_size must be 2 or 3");
  if (cfg.rotation_events > cfg.n_events)
    throw Error(ErrorCode::Config, "rotation_events exceeds n_events");
  if (cfg.n_courses < 1) throw Error(ErrorCode::Config, "need at least one course");
  if (cfg.rotation_events > 0 && cfg.n_courses < 3)
    throw Error(ErrorCode::Config, "rotations need at least 3 courses in the pool");

  SynthResult out;
  TruthSet& truth = out.truth;

  const int width = cfg.n_players > 1000 ? 4 : 3;
  std::vector<std::string> players(cfg.n_players);
  for (int i = 0; i < cfg.n_players; ++i) players[i] = padded("P", i, width);
  truth.focal_player = players[0];

  std::vector<SkillCurve> mix = cfg.curve_mix;
  if (mix.empty())
    mix = {SkillCurve::UShape, SkillCurve::Linear, SkillCurve::Constant,
           SkillCurve::Quadratic};

  for (int i = 0; i < cfg.n_players; ++i) {
    auto rng = stream(cfg.seed, 1, i);
    std::normal_distribution<double> nd;
    PlayerSkillSpec spec;
    spec.kind = mix[i % mix.size()];
    spec.base = cfg.skill_base_mean + cfg.skill_base_sd * nd(rng);
    switch (spec.kind) {
      case SkillCurve::Linear:
        spec.slope = cfg.skill_slope_sd * nd(rng);
        break;
      case SkillCurve::UShape:
        spec.curvature = cfg.skill_curvature;
        break;
      case SkillCurve::Quadratic:
        spec.slope = 0.5 * cfg.skill_slope_sd * nd(rng);
        spec.curvature = (i % 2 == 0 ? 1.0 : -1.0) * cfg.skill_curvature;
        break;
      default:
        break;
    }
    truth.skill_specs[players[i]] = spec;
    truth.true_phi[players[i]] = cfg.phi;
  }

  auto pool_course = [&](int e, int slot) {
    return padded("C", (e + slot) % cfg.n_courses, 3);
  };

  // Round-course effects for every key the schedule can produce.
  {
    auto rng = stream(cfg.seed, 2, 0);
    std::normal_distribution<double> nd(0.0, cfg.sigma_round_course);
    for (int e = 0; e < cfg.n_events; ++e) {
      bool rotation = e < cfg.rotation_events;
      for (int r = 1; r <= cfg.rounds_per_event; ++r) {
        std::vector<std::string> courses;
        if (rotation && r <= 3)
          for (int slot = 0; slot < 3; ++slot) courses.push_back(pool_course(e, slot));
        else
          courses.push_back(pool_course(e, 0));
        for (const auto& course : courses)
          truth.true_round_course[{padded("E", e, 3), r, course}] =
              cfg.sigma_round_course > 0 ? nd(rng) : 0.0;
      }
    }
  }

  // AR(1) state per player, advanced lazily over played rounds.
  std::vector<std::mt19937_64> theta_rng;
  std::vector<double> theta_state(cfg.n_players, 0.0);
  std::vector<bool> theta_started(cfg.n_players, false);
  for (int i = 0; i < cfg.n_players; ++i) theta_rng.push_back(stream(cfg.seed, 3, i));

  auto pc_rng = stream(cfg.seed, 4, 0);
  std::normal_distribution<double> pc_draw(0.0, cfg.sigma_player_course);

  const int total_rounds = cfg.n_events * cfg.rounds_per_event;

  for (int e = 0; e < cfg.n_events; ++e) {
    std::string event = padded("E", e, 3);
    bool rotation = e < cfg.rotation_events;
    bool shift_event = std::find(cfg.injections.shift_events.begin(),
                                 cfg.injections.shift_events.end(),
                                 event) != cfg.injections.shift_events.end();

    std::vector<int> field;
    bool focal_out = cfg.focal_absent_every > 0 &&
                     (e % cfg.focal_absent_every) == cfg.focal_absent_every - 1;
    for (int i = 0; i < cfg.n_players; ++i)
      if (!(focal_out && i == 0)) field.push_back(i);
    std::map<int, double> event_total;
    for (int i : field) event_total[i] = 0.0;

    for (int r = 1; r <= cfg.rounds_per_event; ++r) {
      // Cut after round 2: lowest cut_keep totals (with ties) survive.
      if (cfg.enable_cuts && r == 3 && static_cast<int>(field.size()) > cfg.cut_keep) {
        std::vector<double> totals;
        for (int i : field) totals.push_back(event_total[i]);
        std::sort(totals.begin(), totals.end());
        double cut_line = totals[cfg.cut_keep - 1];
        std::vector<int> survivors;
        for (int i : field)
          if (event_total[i] <= cut_line) survivors.push_back(i);
        field = survivors;
      }

      // Pairing groups: random (seeded) before the cut, by standings after.
      std::vector<int> order = field;
      if (r <= 2) {
        auto rng = stream(cfg.seed, 5, static_cast<std::uint64_t>(e) * 16 + r);
        std::shuffle(order.begin(), order.end(), rng);
      } else {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          return std::tie(event_total[a], a) < std::tie(event_total[b], b);
        });
      }
      std::vector<std::vector<int>> groups;
      for (std::size_t i = 0; i < order.size(); i += cfg.group_size) {
        std::vector<int> g;
        for (std::size_t j = i; j < std::min(order.size(), i + cfg.group_size); ++j)
          g.push_back(order[j]);
        if (g.size() == 1 && !groups.empty())
          groups.back().push_back(g[0]);
        else
          groups.push_back(g);
      }

      double leader_total = 0.0;
      bool have_leader = false;
      for (int i : field)
        if (!have_leader || event_total[i] < leader_total) {
          leader_total = event_total[i];
          have_leader = true;
        }

      // Deterministic record order within a round: by player id.
      std::vector<std::pair<int, int>> membership;  // (player, group id)
      for (std::size_t g = 0; g < groups.size(); ++g)
        for (int i : groups[g]) membership.emplace_back(i, static_cast<int>(g));
      std::sort(membership.begin(), membership.end());

      for (auto [i, gid] : membership) {
        const std::string& player = players[i];
        std::string course;
        if (rotation && r <= 3) {
          course = pool_course(e, (i + r - 1) % 3);
        } else {
          course = pool_course(e, 0);
        }

        ScoreRecord rec;
        rec.player_id = player;
        rec.tournament_id = event;
        rec.round_number = r;
        rec.course_id = course;
        rec.calendar_index = e * 7 + (r - 1);

        double t = total_rounds > 1
                       ? static_cast<double>(e * cfg.rounds_per_event + r - 1) /
                             (total_rounds - 1)
                       : 0.0;
        double skill = truth.skill_specs[player].value(t);

        double rc = truth.true_round_course[{event, r, course}];
        PlayerCourseKey pck{player, course};
        auto pit = truth.true_player_course.find(pck);
        if (pit == truth.true_player_course.end())
          pit = truth.true_player_course
                    .emplace(pck, cfg.sigma_player_course > 0 ? pc_draw(pc_rng) : 0.0)
                    .first;
        double pc = pit->second;

        std::normal_distribution<double> nd;
        double prev_theta = theta_state[i];
        double theta_ar1;
        if (cfg.sigma_eta == 0.0 && cfg.phi == 0.0) {
          theta_ar1 = 0.0;
        } else if (!theta_started[i]) {
          theta_ar1 = cfg.sigma_eta / std::sqrt(1.0 - cfg.phi * cfg.phi) * nd(theta_rng[i]);
          theta_started[i] = true;
        } else {
          theta_ar1 = cfg.phi * prev_theta + cfg.sigma_eta * nd(theta_rng[i]);
        }

        double injected = 0.0;
        if (cfg.injections.pairing_effect != 0.0 && i != 0 &&
            (cfg.injections.pairing_round == 0 || cfg.injections.pairing_round == r)) {
          const auto& g = groups[gid];
          if (std::find(g.begin(), g.end(), 0) != g.end())
            injected += cfg.injections.pairing_effect;
        }
        if (cfg.injections.contention_effect != 0.0 && r == cfg.rounds_per_event &&
            event_total[i] - leader_total <= cfg.injections.contention_k)
          injected += cfg.injections.contention_effect;
        if (cfg.injections.round_shift != 0.0 && shift_event &&
            r == cfg.injections.shift_round)
          injected += cfg.injections.round_shift;

        double theta = theta_ar1 + injected;
        rec.score = skill + rc + pc + theta;

        out.dataset.records.push_back(rec);
        truth.skill.push_back(skill);
        truth.round_course.push_back(rc);
        truth.player_course.push_back(pc);
        truth.theta.push_back(theta);
        truth.injected.push_back(injected);

        truth.pairings.group_of[{event, r, player}] = gid;
        truth.pairings.members[{event, r, gid}].push_back(player);

        theta_state[i] = theta_ar1;
        event_total[i] += rec.score;
      }
    }
  }

  // lambda/eta from the final thetas, per player in chronological order.
  truth.lambda.assign(truth.theta.size(), 0.0);
  truth.eta.assign(truth.theta.size(), 0.0);
  std::map<std::string, double> prev;
  for (std::size_t k = 0; k < out.dataset.records.size(); ++k) {
    const std::string& player = out.dataset.records[k].player_id;
    auto it = prev.find(player);
    truth.lambda[k] = it == prev.end() ? 0.0 : cfg.phi * it->second;
    truth.eta[k] = truth.theta[k] - truth.lambda[k];
    prev[player] = truth.theta[k];
  }
  return out;
}

void write_truth(const std::filesystem::path& path, const Dataset& dataset,
                 const TruthSet& truth) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    rows.push_back({r.player_id, r.tournament_id, std::to_string(r.round_number), r.course_id,
                    format_full(truth.skill[i]), format_full(truth.round_course[i]),
                    format_full(truth.player_course[i]), format_full(truth.theta[i]),
                    format_full(truth.lambda[i]), format_full(truth.eta[i]),
                    format_full(truth.injected[i])});
  }
  write_csv(path,
            {"player_id", "tournament_id", "round", "course_id", "skill", "round_course",
             "player_course", "theta", "lambda", "eta", "injected"},
            rows);
}

GeneratorConfig generator_config_from_kv(const std::map<std::string, std::string>& kv) {
  GeneratorConfig cfg;
  auto geti = [&](const char* key, int def) {
    auto it = kv.find(key);
    return it == kv.end() ? def : static_cast<int>(parse_int(it->second, 0, key));
  };
  auto getd = [&](const char* key, double def) {
    auto it = kv.find(key);
    return it == kv.end() ? def : parse_double(it->second, 0, key);
  };
  cfg.n_players = geti("generator.n_players", cfg.n_players);
  cfg.n_events = geti("generator.n_events", cfg.n_events);
  cfg.rounds_per_event = geti("generator.rounds_per_event", cfg.rounds_per_event);
  cfg.skill_base_mean = getd("generator.skill_base_mean", cfg.skill_base_mean);
  cfg.skill_base_sd = getd("generator.skill_base_sd", cfg.skill_base_sd);
  cfg.skill_slope_sd = getd("generator.skill_slope_sd", cfg.skill_slope_sd);
  cfg.skill_curvature = getd("generator.skill_curvature", cfg.skill_curvature);
  cfg.sigma_round_course = getd("generator.sigma_round_course", cfg.sigma_round_course);
  cfg.sigma_player_course = getd("generator.sigma_player_course", cfg.sigma_player_course);
  cfg.phi = getd("generator.phi", cfg.phi);
  cfg.sigma_eta = getd("generator.sigma_eta", cfg.sigma_eta);
  cfg.rotation_events = geti("generator.rotation_events", cfg.rotation_events);
  cfg.group_size = geti("generator.group_size", cfg.group_size);
  cfg.focal_absent_every = geti("generator.focal_absent_every", cfg.focal_absent_every);
  cfg.enable_cuts = geti("generator.enable_cuts", cfg.enable_cuts ? 1 : 0) != 0;
  cfg.cut_keep = geti("generator.cut_keep", cfg.cut_keep);
  cfg.injections.pairing_effect =
      getd("injections.pairing_effect", cfg.injections.pairing_effect);
  cfg.injections.pairing_round = geti("injections.pairing_round", cfg.injections.pairing_round);
  cfg.injections.contention_effect =
      getd("injections.contention_effect", cfg.injections.contention_effect);
  cfg.injections.contention_k = geti("injections.contention_k", cfg.injections.contention_k);
  cfg.injections.round_shift = getd("injections.round_shift", cfg.injections.round_shift);
  cfg.injections.shift_round = geti("injections.shift_round", cfg.injections.shift_round);
  if (auto it = kv.find("injections.shift_events"); it != kv.end()) {
    for (const auto& tok : split_csv_line(it->second))
      if (!tok.empty()) cfg.injections.shift_events.push_back(tok);
  }
  if (auto it = kv.find("generator.seed"); it != kv.end())
    cfg.seed = static_cast<std::uint64_t>(parse_int(it->second, 0, "generator.seed"));
  return cfg;
}

}  // namespace skilldecomp
