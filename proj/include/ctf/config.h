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

// Game configuration: parsing, validation, serialization and policy
// construction.

#ifndef CTF_CONFIG_H_
#define CTF_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctf/controller.h"
#include "ctf/game_core.h"
#include "ctf/rl_options.h"
#include "ctf/strategies.h"

namespace ctf {

inline constexpr std::string_view kVersion = "0.1.0";

// Carries every problem found, one message per entry.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class PolicyKind {
  kStrategy,       // Pav01, Strategy2..4
  kClassifier,
  kRoles,
  kCustom,
  kOptions,
  kRandomOptions,
  kArchetype,
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kStrategy;
  TeamStrategy strategy = TeamStrategy::kPav01;
  std::string label;  // metrics name; derived from the kind when empty
  std::vector<RoleArchetype> roles;
  std::vector<ModeTree> trees;
  std::string qtable;
  std::uint32_t qtable_crc = 0;  // filled on load, checked on replay
  std::shared_ptr<const QTables> qtables;
  double epsilon = 0.0;
  bool offensive = true;  // archetype only
  bool aggressive = true;

  std::string name() const;
  static PolicySpec Strategy(TeamStrategy s);
};

struct TrainingSection {
  int episodes = 2000;
  double horizon = 300.0;
  double learning_rate = 0.1;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_episodes = 1500;
  TeamStrategy opponent = TeamStrategy::kPav01;
  int eval_episodes = 100;
};

struct MatchupSpec {
  PolicySpec a;  // plays blue
  PolicySpec b;  // plays red
  int games = 50;
  std::optional<std::uint64_t> seed;  // defaults to one derived from the base seed
};

struct GameConfig {
  std::uint64_t seed = 0;
  double horizon = 600.0;
  int agents_per_team = 2;
  double start_jitter = 2.0;
  double actuation_noise_deg = 0.0;
  FieldSpec field;
  VehicleSpec vehicle;
  int heading_bins = 36;
  std::vector<double> speeds = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  RewardTable rewards;
  StrategyCalibration calibration;
  ObservationSpec observation;
  int option_commit = 10;
  PolicySpec blue = PolicySpec::Strategy(TeamStrategy::kStrategy4);
  PolicySpec red = PolicySpec::Strategy(TeamStrategy::kPav01);
  TrainingSection training;
  std::vector<MatchupSpec> tournament;

  GameSpec game_spec() const;
  DecisionDomain domain() const;
  TrainingConfig training_config() const;
  // Semantic checks across sections; every violation is reported.
  std::vector<std::string> Violations() const;
};

// Strict: unknown keys, wrong types and invalid values are all collected
// and thrown together as ConfigError. `seed` is required.
GameConfig ParseConfig(std::string_view json_text);
GameConfig LoadConfig(const std::string& path);

// Fully resolved form; ParseConfig(ConfigToJson(c)) reproduces `c`.
std::string ConfigToJson(const GameConfig& c, int indent = -1);

// Loads q-tables referenced by options policies and records their checksums.
void ResolvePolicyFiles(GameConfig& c);

std::unique_ptr<TeamController> MakeController(const PolicySpec& p, Team team,
                                               const GameConfig& c);

}  // namespace ctf

#endif  // CTF_CONFIG_H_
