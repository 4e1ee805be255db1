#include "skilldecomp/score_data.hpp"

#include <algorithm>
#include <cmath>

#include "skilldecomp/csv.hpp"

namespace skilldecomp {

namespace {

const std::vector<std::string> kScoreHeader = {"player_id", "tournament_id", "round",
                                               "course_id", "calendar_index", "score"};

}  // namespace

Dataset ingest_scores(const std::filesystem::path& path, const IngestOptions& options,
                      IngestReport* report) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::Input, path.string());
  CsvTable table = read_csv(path);
  if (table.header != kScoreHeader) {
    std::string got;
    for (std::size_t i = 0; i < table.header.size(); ++i)
      got += (i ? "," : "") + table.header[i];
    throw Error(ErrorCode::Data, "unexpected header '" + got + "' in " + path.string());
  }

  Dataset out;
  IngestReport local;
  std::map<std::tuple<std::string, std::string, int>, std::size_t> seen;  // key -> line
  auto reject = [&](std::size_t line, const std::string& reason) {
    local.rejected.emplace_back(line, reason);
    if (!options.skip_bad_rows)
      throw Error(ErrorCode::Data, "line " + std::to_string(line) + ": " + reason);
  };

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t line = table.line_numbers[r];
    if (row.size() != kScoreHeader.size()) {
      reject(line, "expected 6 fields, got " + std::to_string(row.size()));
      continue;
    }
    ScoreRecord rec;
    rec.player_id = row[0];
    rec.tournament_id = row[1];
    try {
      rec.round_number = static_cast<int>(parse_int(row[2], line, "round"));
      rec.course_id = row[3];
      rec.calendar_index = parse_int(row[4], line, "calendar_index");
      rec.score = parse_double(row[5], line, "score");
    } catch (const Error& e) {
      reject(line, e.what());
      continue;
    }
    if (rec.player_id.empty() || rec.tournament_id.empty() || rec.course_id.empty()) {
      reject(line, "empty identifier");
      continue;
    }
    if (rec.round_number < 1) {
      reject(line, "round must be >= 1");
      continue;
    }
    if (!std::isfinite(rec.score) || rec.score < options.score_min ||
        rec.score > options.score_max) {
      reject(line, "score " + row[5] + " outside [" + format_full(options.score_min) + ", " +
                       format_full(options.score_max) + "]");
      continue;
    }
    auto key = std::make_tuple(rec.player_id, rec.tournament_id, rec.round_number);
    auto [it, inserted] = seen.emplace(key, line);
    if (!inserted) {
      reject(line, "duplicate (player, tournament, round) also on line " +
                       std::to_string(it->second));
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  local.accepted = out.records.size();
  if (report) *report = local;
  return out;
}

void write_scores(const std::filesystem::path& path, const Dataset& dataset) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(dataset.records.size());
  for (const auto& r : dataset.records)
    rows.push_back({r.player_id, r.tournament_id, std::to_string(r.round_number), r.course_id,
                    std::to_string(r.calendar_index), format_full(r.score)});
  write_csv(path, kScoreHeader, rows);
}

Dataset filter_eligible(const Dataset& dataset, int min_scores, FilterSummary* summary) {
  if (min_scores < 0) throw Error(ErrorCode::Usage, "min_scores must be >= 0");
  std::map<std::string, int> counts;
  for (const auto& r : dataset.records) ++counts[r.player_id];

  Dataset out;
  out.records.reserve(dataset.records.size());
  for (const auto& r : dataset.records)
    if (counts[r.player_id] > min_scores) out.records.push_back(r);
  if (summary) {
    summary->dropped.clear();
    for (const auto& [player, count] : counts)
      if (count <= min_scores) summary->dropped.emplace_back(player, count);
  }
  return out;
}

Roster build_roster(const Dataset& dataset) {
  Roster roster;
  for (std::size_t i = 0; i < dataset.records.size(); ++i)
    roster.rounds[dataset.records[i].player_id].push_back(static_cast<int>(i));
  for (auto& [player, idx] : roster.rounds) {
    roster.players.push_back(player);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      const auto& ra = dataset.records[a];
      const auto& rb = dataset.records[b];
      return std::tie(ra.calendar_index, ra.tournament_id, ra.round_number) <
             std::tie(rb.calendar_index, rb.tournament_id, rb.round_number);
    });
  }
  return roster;
}

Vector scaled_time(const Roster& roster, const std::string& player_id) {
  auto it = roster.rounds.find(player_id);
  if (it == roster.rounds.end()) throw Error(ErrorCode::Data, "unknown player: " + player_id);
  const int n = static_cast<int>(it->second.size());
  if (n < 2)
    throw Error(ErrorCode::Data, "player " + player_id + " has a degenerate round sequence");
  Vector t(n);
  for (int k = 0; k < n; ++k) t(k) = static_cast<double>(k) / (n - 1);
  return t;
}

Vector scaled_time_calendar(const Dataset& dataset, const Roster& roster,
                            const std::string& player_id) {
  auto it = roster.rounds.find(player_id);
  if (it == roster.rounds.end()) throw Error(ErrorCode::Data, "unknown player: " + player_id);
  const int n = static_cast<int>(it->second.size());
  if (n < 2)
    throw Error(ErrorCode::Data, "player " + player_id + " has a degenerate round sequence");
  Vector t(n);
  double first = static_cast<double>(dataset.records[it->second.front()].calendar_index);
  double last = static_cast<double>(dataset.records[it->second.back()].calendar_index);
  double span = last - first;
  for (int k = 0; k < n; ++k) {
    double day = static_cast<double>(dataset.records[it->second[k]].calendar_index);
    t(k) = span > 0 ? (day - first) / span : static_cast<double>(k) / (n - 1);
  }
  // Same-day rounds keep rank order.
  for (int k = 1; k < n; ++k)
    if (t(k) <= t(k - 1)) t(k) = t(k - 1) + 1e-9;
  if (t(n - 1) > 0) t /= t(n - 1);
  return t;
}

std::map<std::string, int> scheduled_rounds(const Dataset& dataset) {
  std::map<std::string, int> out;
  for (const auto& r : dataset.records) {
    auto& v = out[r.tournament_id];
    v = std::max(v, r.round_number);
  }
  return out;
}

std::map<std::string, int> scheduled_rounds(const Dataset& dataset,
                                            const std::filesystem::path& events_meta) {
  auto out = scheduled_rounds(dataset);
  CsvTable table = read_csv(events_meta);
  int tcol = table.column("tournament_id");
  int rcol = table.column("scheduled_rounds");
  if (tcol < 0 || rcol < 0)
    throw Error(ErrorCode::Data, "events metadata needs tournament_id,scheduled_rounds");
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    out[table.rows[i][tcol]] = static_cast<int>(
        parse_int(table.rows[i][rcol], table.line_numbers[i], "scheduled_rounds"));
  return out;
}

}  // namespace skilldecomp
