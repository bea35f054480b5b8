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

// Sparse event rewards, a discrete observation, six behavior options and
// tabular double Q-learning over those options.

#ifndef CTF_RL_OPTIONS_H_
#define CTF_RL_OPTIONS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctf/controller.h"
#include "ctf/game_core.h"
#include "ctf/random.h"
#include "ctf/strategies.h"

namespace ctf {

// Reward pair per event kind: `own` when the acting agent is on the
// perspective agent's team, `opp` otherwise.
struct RewardTable {
  struct Pair {
    double own = 0.0;
    double opp = 0.0;
  };
  Pair tag_no_flag{100.0, -100.0};
  Pair tag_with_flag{50.0, -100.0};
  Pair grab{50.0, -50.0};
  Pair capture{100.0, -100.0};
  Pair out_of_bounds{-100.0, 0.0};

  const Pair& at(EventKind k) const;
  Pair& at(EventKind k);
  double max_abs() const;
  std::vector<std::string> Violations() const;
};

// Team-perspective reward of one step's events for `agent_id`. Agent ids
// below `agents_per_team` are blue, the rest red.
double ComputeReward(std::span<const GameEvent> events, int agent_id,
                     int agents_per_team, const RewardTable& table);

// ---------------------------------------------------------------------------
// Observation.

struct ObservationSpec {
  int grid_x = 8;
  int grid_y = 4;
  int heading_segments = 8;
  std::vector<double> range_edges = {15.0, 40.0, 80.0};

  int range_buckets() const { return static_cast<int>(range_edges.size()) + 1; }
  std::vector<std::string> Violations() const;
};

struct OtherAgentFeature {
  int bearing_segment = 0;  // relative to own heading
  int range_bucket = 0;
  bool has_flag = false;
  bool tagged = false;
  friend bool operator==(const OtherAgentFeature&, const OtherAgentFeature&) = default;
};

// Everything is expressed in the agent's team frame, so blue and red share
// one table.
struct ObservationFeatures {
  int cell_x = 0;
  int cell_y = 0;
  int heading_segment = 0;
  bool has_flag = false;
  bool tagged = false;
  std::vector<OtherAgentFeature> others;  // teammates first, then opponents
  bool own_flag_home = true;
  bool opponent_flag_home = true;

  friend bool operator==(const ObservationFeatures&,
                         const ObservationFeatures&) = default;
};

int HeadingSegment(double heading, int segments);

ObservationFeatures DiscretizeObservation(const GameState& world, int agent_id,
                                          const FieldSpec& field,
                                          const ObservationSpec& spec);

// Mixed-radix packing; throws if the state space does not fit in 63 bits.
std::uint64_t EncodeObservation(const ObservationFeatures& f,
                                const ObservationSpec& spec);

// ---------------------------------------------------------------------------
// Options.

enum class OptionId {
  kPickupOpponentFlag,
  kGuardOwnFlag,
  kTagOpponent,
  kAvoidOpponents,
  kRetreat,
  kShieldTeammate,
};

inline constexpr int kNumOptions = 6;

std::string_view OptionName(OptionId o);
std::optional<OptionId> OptionFromName(std::string_view name);

// The mode tree each option runs through the helm.
ModeTree OptionTree(OptionId o, const FieldSpec& field,
                    const StrategyCalibration& cal);

// ---------------------------------------------------------------------------
// Double Q-learning.

struct QTables {
  using Row = std::array<double, kNumOptions>;
  struct Entry {
    Row a{};
    Row b{};
  };
  std::unordered_map<std::uint64_t, Entry> table;
  double learning_rate = 0.1;
  double gamma = 0.99;
  int option_commit = 10;

  // Mean of the two tables; zeros for unseen states.
  Row Combined(std::uint64_t key) const;
  std::vector<std::string> Violations() const;
  double MaxAbsValue() const;
  bool operator==(const QTables& o) const;
};

struct Transition {
  std::uint64_t obs = 0;
  OptionId option = OptionId::kPickupOpponentFlag;
  double reward = 0.0;
  std::uint64_t next_obs = 0;
  bool terminal = false;
};

OptionId GreedyOption(const QTables& q, std::uint64_t obs);
OptionId SelectOption(const QTables& q, std::uint64_t obs, double epsilon, Rng& rng);
OptionId SelectOption(const QTables& q, std::uint64_t obs, double epsilon,
                      std::uint64_t rng_seed);

// Updates one table chosen by a fair coin from `rng`.
void DoubleQUpdateInPlace(QTables& q, const Transition& t, Rng& rng);
QTables DoubleQUpdate(QTables q, const Transition& t, Rng& rng);
// Deterministic form: `update_a` picks the table.
void DoubleQUpdateInPlace(QTables& q, const Transition& t, bool update_a);

struct QTableHeader {
  ObservationSpec obs;
  std::uint64_t seed = 0;
};

void WriteQTables(std::ostream& out, const QTables& q, const QTableHeader& h);
QTables ReadQTables(std::istream& in, QTableHeader* header = nullptr);
void SaveQTables(const std::string& path, const QTables& q, const QTableHeader& h);
QTables LoadQTables(const std::string& path, QTableHeader* header = nullptr);

// ---------------------------------------------------------------------------
// Options controller.

enum class OptionMode { kGreedy, kRandom, kLearning };

struct OptionsSettings {
  ObservationSpec obs;
  StrategyCalibration cal;
  RewardTable rewards;
  double epsilon = 0.0;
  int option_commit = 10;
  std::uint64_t seed = 0;
};

// Picks an option per agent every `option_commit` steps or after any game
// event, and runs it through the helm. Greedy mode reads `q` (epsilon still
// applies); random mode ignores it. Use Learner() to feed completed option
// executions back into a table.
class OptionsTeamController : public TeamController {
 public:
  OptionsTeamController(Team team, FieldSpec field, DecisionDomain dom,
                        const QTables* q, OptionMode mode, OptionsSettings settings);
  static OptionsTeamController Learner(Team team, FieldSpec field, DecisionDomain dom,
                                       QTables* q, OptionsSettings settings);

  std::vector<AgentCommand> Decide(const GameState& world) override;
  void Observe(const GameState& world, std::span<const GameEvent> events) override;
  void Finish(const GameState& world) override;

  double team_return() const { return team_return_; }
  std::int64_t own_zone_steps() const { return own_zone_steps_; }
  std::int64_t agent_steps() const { return agent_steps_; }
  const std::array<std::int64_t, kNumOptions>& option_counts() const {
    return option_counts_;
  }

 private:
  struct Slot {
    explicit Slot(int id) : agent(id) {}
    int agent = 0;
    std::optional<OptionId> option;
    int steps_left = 0;
    std::uint64_t obs = 0;
    double reward = 0.0;
  };

  Team team_;
  FieldSpec field_;
  DecisionDomain dom_;
  const QTables* q_;
  QTables* learn_ = nullptr;
  OptionMode mode_;
  OptionsSettings s_;
  Rng rng_;
  std::vector<ModeTree> trees_;
  std::vector<Slot> slots_;
  bool interrupted_ = false;
  double team_return_ = 0.0;
  std::int64_t own_zone_steps_ = 0;
  std::int64_t agent_steps_ = 0;
  std::array<std::int64_t, kNumOptions> option_counts_{};
};

// ---------------------------------------------------------------------------
// Training and evaluation.

struct TrainingConfig {
  int episodes = 2000;
  double horizon = 300.0;
  std::uint64_t seed = 1;
  TeamStrategy opponent = TeamStrategy::kPav01;
  RewardTable rewards;
  ObservationSpec obs;
  StrategyCalibration cal;
  FieldSpec field;
  VehicleSpec vehicle;
  int heading_bins = 36;
  std::vector<double> speeds = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  double learning_rate = 0.1;
  double gamma = 0.99;
  int option_commit = 10;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_episodes = 1500;
  int eval_every = 0;  // 0 disables periodic evaluation

  // Depends only on the episode index, so longer runs extend shorter ones.
  double Epsilon(int episode) const;
  std::vector<std::string> Violations() const;
};

struct EpisodeStats {
  int episode = 0;
  double epsilon = 0.0;
  double team_return = 0.0;
  int grabs = 0;
  int captures = 0;
  int tags = 0;
  int tagged = 0;
  int out_of_bounds = 0;
  int score_for = 0;
  int score_against = 0;
  double own_zone_fraction = 0.0;
};

struct TrainingResult {
  QTables q;
  std::vector<EpisodeStats> curve;
};

// Blue learns against `config.opponent` on red.
TrainingResult Train(const TrainingConfig& config,
                     const std::function<void(const EpisodeStats&)>& progress = {});

// Continues training from `initial`, starting at episode index `first`.
TrainingResult Train(const TrainingConfig& config, QTables initial, int first,
                     const std::function<void(const EpisodeStats&)>& progress = {});

// One episode with a fixed policy mode; no learning.
EpisodeStats RunOptionsEpisode(const TrainingConfig& config, const QTables& q,
                               OptionMode mode, std::uint64_t episode_seed);

struct EvaluationReport {
  int episodes = 0;
  double greedy_mean = 0.0;
  double random_mean = 0.0;
  double mean_difference = 0.0;
  double bootstrap_se = 0.0;
  double greedy_own_zone_fraction = 0.0;
  double greedy_mean_captures = 0.0;
  std::vector<double> greedy_returns;
  std::vector<double> random_returns;
};

// Greedy vs uniform-random options on the same episode seeds.
EvaluationReport EvaluateAgainstRandom(const TrainingConfig& config, const QTables& q,
                                       int episodes, std::uint64_t seed);

// Standard error of the mean of `x` by bootstrap resampling.
double BootstrapStandardError(std::span<const double> x, int resamples,
                              std::uint64_t seed);

}  // namespace ctf

#endif  // CTF_RL_OPTIONS_H_
