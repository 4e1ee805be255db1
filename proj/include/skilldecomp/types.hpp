#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace skilldecomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Error codes surfaced on the CLI as single-line `E_<CODE>: <detail>` messages.
enum class ErrorCode { Input, Config, Data, Usage, Runtime };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  const char* code_name() const {
    switch (code_) {
      case ErrorCode::Input: return "E_INPUT";
      case ErrorCode::Config: return "E_CONFIG";
      case ErrorCode::Data: return "E_DATA";
      case ErrorCode::Usage: return "E_USAGE";
      case ErrorCode::Runtime: return "E_RUNTIME";
    }
    return "E_RUNTIME";
  }

 private:
  ErrorCode code_;
};

/// One 18-hole score. Real panels carry integer stroke totals; the score field
/// is kept floating so simulated panels can round-trip their generative
/// components exactly.
struct ScoreRecord {
  std::string player_id;
  std::string tournament_id;
  int round_number = 0;        // 1-based within the tournament
  std::string course_id;
  std::int64_t calendar_index = 0;  // days since an arbitrary epoch
  double score = 0.0;
};

/// Identifies one shared playing environment: a specific 18-hole round of a
/// tournament on a specific course. Rotation events produce several keys for
/// the same (tournament, round).
struct RoundCourseKey {
  std::string tournament_id;
  int round_number = 0;
  std::string course_id;

  auto operator<=>(const RoundCourseKey&) const = default;
};

struct PlayerCourseKey {
  std::string player_id;
  std::string course_id;

  auto operator<=>(const PlayerCourseKey&) const = default;
};

struct Dataset {
  std::vector<ScoreRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Per-player chronological view over a dataset: indices into
/// Dataset::records sorted by (calendar_index, tournament_id, round_number).
struct Roster {
  std::vector<std::string> players;                       // sorted ids
  std::map<std::string, std::vector<int>> rounds;          // player -> record indices
};

inline RoundCourseKey round_course_key(const ScoreRecord& r) {
  return {r.tournament_id, r.round_number, r.course_id};
}

inline PlayerCourseKey player_course_key(const ScoreRecord& r) {
  return {r.player_id, r.course_id};
}

}  // namespace skilldecomp
