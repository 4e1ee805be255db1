#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skilldecomp/types.hpp"

namespace skilldecomp {

struct IngestOptions {
  bool skip_bad_rows = false;
  double score_min = 55.0;
  double score_max = 130.0;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (line, reason)
};

/// Reads the score panel CSV
/// `player_id,tournament_id,round,course_id,calendar_index,score`.
/// Rows violating the record invariants are fatal unless skip_bad_rows is
/// set, in which case they are reported with their line numbers.
Dataset ingest_scores(const std::filesystem::path& path, const IngestOptions& options = {},
                      IngestReport* report = nullptr);

void write_scores(const std::filesystem::path& path, const Dataset& dataset);

struct FilterSummary {
  std::vector<std::pair<std::string, int>> dropped;  // (player, score count)
};

/// Keeps players with strictly more than min_scores recorded scores.
Dataset filter_eligible(const Dataset& dataset, int min_scores,
                        FilterSummary* summary = nullptr);

/// Chronological per-player round ordering (calendar index, ties by
/// tournament then round).
Roster build_roster(const Dataset& dataset);

/// Rank-based golf time: the k-th of n rounds maps to (k-1)/(n-1).
Vector scaled_time(const Roster& roster, const std::string& player_id);

/// Calendar-proportional variant, [0,1]-normalized actual day offsets.
Vector scaled_time_calendar(const Dataset& dataset, const Roster& roster,
                            const std::string& player_id);

/// Scheduled round counts per tournament. Defaults to the observed maximum
/// round; an events metadata CSV (`tournament_id,scheduled_rounds`) overrides
/// it, letting weather-shortened events be recognized.
std::map<std::string, int> scheduled_rounds(const Dataset& dataset);
std::map<std::string, int> scheduled_rounds(const Dataset& dataset,
                                            const std::filesystem::path& events_meta);

}  // namespace skilldecomp
