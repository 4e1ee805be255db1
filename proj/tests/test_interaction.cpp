#include <doctest.h>

#include <random>

#include "skilldecomp/interaction.hpp"
#include "skilldecomp/residuals.hpp"
#include "skilldecomp/effects.hpp"
#include "skilldecomp/score_data.hpp"
#include "skilldecomp/synth.hpp"

using namespace skilldecomp;

TEST_CASE("build_standings margins and errors") {
  Dataset ds;
  // Three players, three rounds; totals after round 3: 200 / 205 / 210.
  std::vector<std::vector<double>> scores = {{66, 67, 67}, {68, 68, 69}, {70, 70, 70}};
  for (int p = 0; p < 3; ++p)
    for (int r = 1; r <= 4; ++r)
      ds.records.push_back({"P" + std::to_string(p), "E1", r, "C", r,
                            r <= 3 ? scores[p][r - 1] : 70.0});
  Standings st = build_standings(ds, scheduled_rounds(ds));
  CHECK(st.margin("E1", 4, "P0") == doctest::Approx(0.0));
  CHECK(st.margin("E1", 4, "P1") == doctest::Approx(5.0));
  CHECK(st.margin("E1", 4, "P2") == doctest::Approx(10.0));

  // Threshold semantics.
  CHECK((st.margin("E1", 4, "P0") <= 0.0));           // tied for lead or better
  CHECK((st.margin("E1", 4, "P1") <= 5.0));
  double m = 4.0;
  CHECK((m <= 4.0));
  CHECK(!(m <= 2.0));

  SUBCASE("missing prior round is an error") {
    Dataset bad = ds;
    bad.records.push_back({"P9", "E1", 3, "C", 3, 70.0});  // never played rounds 1-2
    CHECK_THROWS_AS(build_standings(bad, scheduled_rounds(bad)), Error);
  }
  SUBCASE("unknown round standings error") {
    CHECK_THROWS_AS(st.margin("E1", 9, "P0"), Error);
    CHECK_THROWS_AS(st.margin("E1", 4, "P9"), Error);
  }
}

TEST_CASE("run_dummy_regression") {
  SUBCASE("zero response gives zero coefficients") {
    Vector y = Vector::Zero(50);
    Matrix d(50, 1);
    for (int i = 0; i < 50; ++i) d(i, 0) = i % 2;
    RegressionResult r = run_dummy_regression(y, d, {"half"});
    CHECK(r.terms[0].coefficient == doctest::Approx(0.0));
    CHECK(r.intercept == doctest::Approx(0.0));
  }
  SUBCASE("single dummy recovers the group-mean contrast") {
    int n = 1000;
    Vector y(n);
    Matrix d(n, 1);
    for (int i = 0; i < n; ++i) {
      bool treated = i < 100;
      d(i, 0) = treated ? 1.0 : 0.0;
      y(i) = treated ? 0.5 : 0.1;
    }
    RegressionResult r = run_dummy_regression(y, d, {"treated"});
    CHECK(r.terms[0].coefficient == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.intercept == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("mutually exclusive dummies equal group-mean contrasts") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    int n = 600;
    Vector y(n);
    Matrix d = Matrix::Zero(n, 2);
    double sums[3] = {0, 0, 0};
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
      int g = i % 3;
      if (g > 0) d(i, g - 1) = 1.0;
      y(i) = 0.3 * g + nd(rng);
      sums[g] += y(i);
      ++counts[g];
    }
    RegressionResult r = run_dummy_regression(y, d, {"g1", "g2"});
    double base = sums[0] / counts[0];
    CHECK(r.terms[0].coefficient == doctest::Approx(sums[1] / counts[1] - base).epsilon(1e-10));
    CHECK(r.terms[1].coefficient == doctest::Approx(sums[2] / counts[2] - base).epsilon(1e-10));
  }
  SUBCASE("injected effect is detected with a small p-value") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd(0.0, 2.5);
    int n = 4000;
    Vector y(n);
    Matrix d(n, 1);
    for (int i = 0; i < n; ++i) {
      bool treated = i < 1000;
      d(i, 0) = treated ? 1.0 : 0.0;
      y(i) = nd(rng) + (treated ? 0.5 : 0.0);
    }
    RegressionResult r = run_dummy_regression(y, d, {"paired"});
    CHECK(r.terms[0].coefficient == doctest::Approx(0.5).epsilon(0.3));
    CHECK(std::abs(r.terms[0].coefficient - 0.5) <= 0.15);
    CHECK(r.terms[0].p_value < 0.01);
  }
  SUBCASE("collinear designs raise a named error") {
    Vector y = Vector::Random(30);
    Matrix d(30, 2);
    for (int i = 0; i < 30; ++i) {
      d(i, 0) = i % 2;
      d(i, 1) = 0.0;  // all-zero column
    }
    try {
      run_dummy_regression(y, d, {"ok", "empty"});
      FAIL("expected collinearity error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("empty") != std::string::npos);
    }
  }
}

TEST_CASE("prior_round_adjustment") {
  Vector prior(2);
  prior << -2.0, -3.0;
  CHECK(prior_round_adjustment(prior, 102) == doctest::Approx(0.05).epsilon(1e-12));

  Vector zero(3);
  zero << 1.0, -1.0, 0.0;
  CHECK(prior_round_adjustment(zero, 50) == doctest::Approx(0.0));

  Vector one(1);
  one << 4.0;
  CHECK(prior_round_adjustment(one, 101) == doctest::Approx(-0.04).epsilon(1e-12));

  CHECK_THROWS_AS(prior_round_adjustment(one, 1), Error);

  SUBCASE("prefix formula matches a brute-force recomputation") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Vector etas(6);
    for (int i = 0; i < 6; ++i) etas(i) = nd(rng);
    int career = 90;
    for (int r = 1; r <= 6; ++r) {
      Vector prefix = etas.head(r - 1);
      double direct = 0;
      for (int k = 0; k < r - 1; ++k) direct += etas(k);
      double expected = -direct / (career - (r - 1));
      CHECK(prior_round_adjustment(prefix, career) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

namespace {

struct SuiteFixture {
  SynthResult synth;
  FullModelResult fit;
  Roster roster;
  Standings standings;
  std::vector<double> eta;
};

SuiteFixture make_suite_fixture(GeneratorConfig cfg) {
  SuiteFixture f;
  f.synth = generate(cfg);
  f.fit = fit_full_model(f.synth.dataset, {});
  f.roster = build_roster(f.synth.dataset);
  f.standings = build_standings(f.synth.dataset, scheduled_rounds(f.synth.dataset));
  f.eta = residuals_by_record(f.synth.dataset, f.roster, f.fit.residuals,
                              ResidualComponent::Eta);
  return f;
}

const RegressionResult& find_test(const std::vector<RegressionResult>& rs,
                                  const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("missing test " + name);
}

double coef(const RegressionResult& r, const std::string& label) {
  for (const auto& t : r.terms)
    if (t.label == label) return t.coefficient;
  throw std::runtime_error("missing term " + label);
}

}  // namespace

TEST_CASE("test suite recovers a round-4 pairing injection") {
  GeneratorConfig cfg;
  cfg.n_players = 40;
  cfg.n_events = 120;
  cfg.group_size = 3;
  cfg.sigma_eta = 1.0;
  cfg.sigma_round_course = 1.0;
  cfg.phi = 0.1;
  cfg.focal_absent_every = 5;
  cfg.injections.pairing_effect = 0.86;
  cfg.injections.pairing_round = 4;
  cfg.seed = 21;
  SuiteFixture f = make_suite_fixture(cfg);

  auto results = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                                f.synth.truth.pairings, f.synth.truth.focal_player,
                                SuiteKind::Table3, {});
  const auto& t4 = find_test(results, "test4");
  CHECK(std::abs(coef(t4, "paired_round_4") - 0.86) <= 0.2);
  CHECK(std::abs(coef(t4, "paired_round_1")) <= 0.2);
  CHECK(std::abs(coef(t4, "paired_round_2")) <= 0.2);
  CHECK(std::abs(coef(t4, "paired_round_3")) <= 0.2);

  // Test 5 sees the same effect through the final-round split.
  const auto& t5 = find_test(results, "test5");
  CHECK(std::abs(coef(t5, "final_round_with_focal") - 0.86) <= 0.25);
  CHECK(std::abs(coef(t5, "final_round_without_focal")) <= 0.1);

  // Table 4 regressions include the final-round pairing dummy.
  auto table4 = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                               f.synth.truth.pairings, f.synth.truth.focal_player,
                               SuiteKind::Table4, {});
  CHECK(table4.size() == 6);
  const auto& c10 = find_test(table4, "contention_within_10");
  CHECK(std::abs(coef(c10, "final_paired_with_focal") - 0.86) <= 0.3);
}

TEST_CASE("null suite: no focal effect means small coefficients") {
  GeneratorConfig cfg;
  cfg.n_players = 40;
  cfg.n_events = 120;
  cfg.group_size = 3;
  cfg.sigma_eta = 1.0;
  cfg.sigma_round_course = 1.0;
  cfg.phi = 0.1;
  cfg.focal_absent_every = 5;
  cfg.seed = 22;
  SuiteFixture f = make_suite_fixture(cfg);

  auto results = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                                f.synth.truth.pairings, f.synth.truth.focal_player,
                                SuiteKind::Table3, {});
  const auto& t3 = find_test(results, "test3");
  CHECK(std::abs(coef(t3, "paired_with_focal")) <= 0.15);
  CHECK(t3.terms[0].p_value > 0.01);

  const auto& t1 = find_test(results, "test1");
  CHECK(std::abs(coef(t1, "focal_in_field")) <= 0.1);

  const auto& t2 = find_test(results, "test2");
  CHECK(std::abs(coef(t2, "paired_with_focal")) <= 0.15);
  CHECK(std::abs(coef(t2, "in_field_not_paired")) <= 0.1);
}

TEST_CASE("suite errors when the focal player never appears paired") {
  GeneratorConfig cfg;
  cfg.n_players = 10;
  cfg.n_events = 10;
  cfg.seed = 23;
  SuiteFixture f = make_suite_fixture(cfg);

  // Strip the focal player from the pairing schedule entirely.
  Pairings stripped;
  for (const auto& [key, gid] : f.synth.truth.pairings.group_of)
    if (std::get<2>(key) != f.synth.truth.focal_player) {
      stripped.group_of[key] = gid;
      stripped.members[{std::get<0>(key), std::get<1>(key), gid}].push_back(
          std::get<2>(key));
    }
  try {
    run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings, stripped,
                   f.synth.truth.focal_player, SuiteKind::Table3, {});
    FAIL("expected collinearity error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("paired") != std::string::npos);
  }

  SUBCASE("absent focal player errors") {
    CHECK_THROWS_AS(run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                                   f.synth.truth.pairings, "ghost", SuiteKind::Table3, {}),
                    Error);
  }
}

TEST_CASE("weather-shortened events leave the contention sample") {
  GeneratorConfig cfg;
  cfg.n_players = 20;
  cfg.n_events = 30;
  cfg.group_size = 2;
  cfg.focal_absent_every = 5;
  cfg.seed = 24;
  SuiteFixture f = make_suite_fixture(cfg);

  auto full = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                             f.synth.truth.pairings, f.synth.truth.focal_player,
                             SuiteKind::Table4, {});

  // Declare one event shortened (scheduled 5, played 4).
  auto sched = scheduled_rounds(f.synth.dataset);
  sched["E002"] = 5;
  Standings st2 = build_standings(f.synth.dataset, sched);
  auto excl = run_test_suite(f.synth.dataset, f.roster, f.eta, st2,
                             f.synth.truth.pairings, f.synth.truth.focal_player,
                             SuiteKind::Table4, {});

  int rows_in_e002 = 0;
  for (const auto& rec : f.synth.dataset.records)
    if (rec.tournament_id == "E002" && rec.player_id != f.synth.truth.focal_player)
      ++rows_in_e002;
  CHECK(full[0].n_obs - excl[0].n_obs == rows_in_e002);
}

TEST_CASE("prior-round adjustment barely moves a null suite") {
  GeneratorConfig cfg;
  cfg.n_players = 15;
  cfg.n_events = 40;
  cfg.group_size = 3;
  cfg.sigma_eta = 1.0;
  cfg.focal_absent_every = 4;
  cfg.seed = 25;
  SuiteFixture f = make_suite_fixture(cfg);

  SuiteOptions plain, adjusted;
  adjusted.adjust_prior_rounds = true;
  auto a = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                          f.synth.truth.pairings, f.synth.truth.focal_player,
                          SuiteKind::Table3, plain);
  auto b = run_test_suite(f.synth.dataset, f.roster, f.eta, f.standings,
                          f.synth.truth.pairings, f.synth.truth.focal_player,
                          SuiteKind::Table3, adjusted);
  double ca = coef(find_test(a, "test3"), "paired_with_focal");
  double cb = coef(find_test(b, "test3"), "paired_with_focal");
  CHECK(std::abs(ca - cb) <= 0.1);
}

TEST_CASE("pairings round-trip through files") {
  GeneratorConfig cfg;
  cfg.n_players = 8;
  cfg.n_events = 5;
  cfg.seed = 26;
  SynthResult synth = generate(cfg);
  auto path = std::filesystem::temp_directory_path() / "pairings_rt.csv";
  write_pairings(path, synth.truth.pairings);
  Pairings back = load_pairings(path);
  CHECK(back.group_of == synth.truth.pairings.group_of);
}
