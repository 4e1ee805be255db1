#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "skilldecomp/counterfactual.hpp"
#include "skilldecomp/interaction.hpp"

namespace skilldecomp {

/// Fixed column layouts mirroring the analysis tables; floating values are
/// printed with two decimals, full precision stays internal.
void emit_table1(const std::filesystem::path& path, const std::vector<CounterfactualRow>& rows);

void emit_table3(const std::filesystem::path& path, const std::vector<RegressionResult>& results);
void emit_table4(const std::filesystem::path& path, const std::vector<RegressionResult>& results);

struct TransplantReportRow {
  std::string tournament_id;
  bool made_cut = true;
  double winning = 0.0;
  double actual = 0.0;
  double expected = 0.0;
  double residual = 0.0;
  double donor1_total = 0.0;
  Verdict donor1_verdict = Verdict::Lose;
  double donor2_total = 0.0;
  Verdict donor2_verdict = Verdict::Lose;
};

void emit_table5(const std::filesystem::path& path, const std::vector<TransplantReportRow>& rows);

void emit_table6(const std::filesystem::path& path, const RoundMeanTable& table);

}  // namespace skilldecomp
