#include "skilldecomp/report.hpp"

#include "skilldecomp/csv.hpp"

namespace skilldecomp {

namespace {

std::string verdict_str(Verdict v) { return v == Verdict::Win ? "Win" : "Lose"; }

}  // namespace

void emit_table1(const std::filesystem::path& path,
                 const std::vector<CounterfactualRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r.tournament_id, format_2f(r.winning_score), format_2f(r.actual_score),
                   format_2f(r.expected_score), format_2f(r.theta_total),
                   std::to_string(r.actual_place), std::to_string(r.ties_at_place),
                   std::to_string(r.place_if_normal)});
  write_csv(path,
            {"tournament_id", "winning", "actual", "expected", "residual", "place", "ties",
             "place_if_normal"},
            out);
}

namespace {

std::string fixed(double v, int places) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

void emit_regressions(const std::filesystem::path& path,
                      const std::vector<RegressionResult>& results) {
  std::vector<std::vector<std::string>> out;
  for (const auto& res : results) {
    out.push_back({res.name, "intercept", fixed(res.intercept, 3), fixed(res.intercept_p, 4),
                   std::to_string(res.n_obs)});
    for (const auto& term : res.terms)
      out.push_back({res.name, term.label, fixed(term.coefficient, 3),
                     fixed(term.p_value, 4), std::to_string(res.n_obs)});
  }
  write_csv(path, {"test", "dummy", "coefficient", "p_value", "n_obs"}, out);
}

}  // namespace

void emit_table3(const std::filesystem::path& path,
                 const std::vector<RegressionResult>& results) {
  emit_regressions(path, results);
}

void emit_table4(const std::filesystem::path& path,
                 const std::vector<RegressionResult>& results) {
  emit_regressions(path, results);
}

void emit_table5(const std::filesystem::path& path,
                 const std::vector<TransplantReportRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (!r.made_cut) {
      out.push_back({r.tournament_id, "", "", "", "", "missed_cut", "", verdict_str(r.donor1_verdict),
                     "", verdict_str(r.donor2_verdict)});
      continue;
    }
    out.push_back({r.tournament_id, format_2f(r.winning), format_2f(r.actual),
                   format_2f(r.expected), format_2f(r.residual), "made_cut",
                   format_2f(r.donor1_total), verdict_str(r.donor1_verdict),
                   format_2f(r.donor2_total), verdict_str(r.donor2_verdict)});
  }
  write_csv(path,
            {"tournament_id", "winning", "actual", "expected", "residual", "cut",
             "donor1_total", "donor1_verdict", "donor2_total", "donor2_verdict"},
            out);
}

void emit_table6(const std::filesystem::path& path, const RoundMeanTable& table) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < table.rounds.size(); ++i)
    out.push_back({"round_" + std::to_string(table.rounds[i]), format_2f(table.means[i]),
                   std::to_string(table.counts[i])});
  int total = 0;
  for (int c : table.counts) total += c;
  out.push_back({"overall", format_2f(table.overall_mean), std::to_string(total)});
  out.push_back({"std_error", format_2f(table.overall_std_error), ""});
  write_csv(path, {"row", "mean_residual", "n"}, out);
}

}  // namespace skilldecomp
