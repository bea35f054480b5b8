// Copyright 2026 The ctfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded game execution, checksummed game logs, replay and tournaments.

#ifndef CTF_HARNESS_H_
#define CTF_HARNESS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctf/config.h"

namespace ctf {

inline constexpr int kLogSchema = 1;

struct GameSummary {
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  std::array<int, 2> scores{};
  std::array<int, 2> grabs{};
  std::array<int, 2> captures{};
  std::array<int, 2> tags{};  // made by the team
  std::array<int, 2> out_of_bounds{};
  std::array<std::int64_t, 2> own_zone_steps{};  // agent-steps in own zone
};

// Plays one game. When `log` is given, writes the complete game log to it.
GameSummary RunGame(const GameConfig& config, std::ostream* log = nullptr);

// The full log as one string.
std::string RunGameLog(const GameConfig& config);

class LogError : public std::runtime_error {
 public:
  LogError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct GameLogData {
  std::string config_json;
  std::string version;
  std::vector<GameEvent> events;
  std::int64_t steps = 0;
  std::array<int, 2> scores{};
  std::vector<std::string> lines;  // raw lines, checksum included
};

// Parses and checks every record. Throws LogError on a checksum mismatch,
// malformed record or a missing final record.
GameLogData ReadGameLog(std::istream& in);

struct VerifyResult {
  bool ok = false;
  std::string message;
  std::size_t lines_checked = 0;
};

// Re-simulates from the header and compares every line.
VerifyResult VerifyGameLog(std::istream& in);

// ---------------------------------------------------------------------------

struct MetricsRow {
  std::string policy;
  std::string opponent;
  std::string side;
  int games = 0;
  std::int64_t grabs = 0;
  std::int64_t captures = 0;
  std::int64_t tags = 0;
  std::int64_t score = 0;

  double mean_grabs() const { return games ? static_cast<double>(grabs) / games : 0.0; }
  double mean_captures() const {
    return games ? static_cast<double>(captures) / games : 0.0;
  }
  double mean_tags() const { return games ? static_cast<double>(tags) / games : 0.0; }
  double mean_score() const { return games ? static_cast<double>(score) / games : 0.0; }
  // Grab = 1, capture = 2, checked on the integer totals.
  bool ScoreIdentityHolds() const { return score == grabs + 2 * captures; }
};

struct MatchupResult {
  std::string a_name;
  std::string b_name;
  MetricsRow a;  // blue side
  MetricsRow b;  // red side
  std::vector<GameSummary> games;
  std::vector<std::string> log_paths;
  std::string error;  // non-empty when a game failed; rows are then empty

  bool ok() const { return error.empty(); }
};

struct TournamentOptions {
  int jobs = 1;
  std::string out_dir;      // empty: no files
  bool write_logs = false;  // per-game logs under out_dir/logs
};

std::uint64_t MatchupSeed(const GameConfig& base, std::size_t index,
                          const MatchupSpec& m);
std::uint64_t GameSeed(std::uint64_t matchup_seed, int game);

// Results are identical for any `jobs` and any matchup order.
std::vector<MatchupResult> RunTournament(const GameConfig& base,
                                         const std::vector<MatchupSpec>& matchups,
                                         const TournamentOptions& options = {});

// Columns: policy, opponent, side, games, then mean grabs, captures, tags
// and score.
void WriteMetricsCsv(std::ostream& out, const std::vector<MatchupResult>& results);

}  // namespace ctf

#endif  // CTF_HARNESS_H_
