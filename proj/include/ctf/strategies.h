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

// Role archetypes, the fixed team strategies and the opponent-classifying
// controller.

#ifndef CTF_STRATEGIES_H_
#define CTF_STRATEGIES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctf/controller.h"
#include "ctf/mode_tree.h"

namespace ctf {

enum class RoleArchetype {
  kEasyAttacker,
  kEasyDefender,
  kMediumAttacker,
  kMediumDefender,
  kStationKeep,  // inert placeholder: holds a post near its own flag
};

std::string_view RoleName(RoleArchetype r);
std::optional<RoleArchetype> RoleFromName(std::string_view name);

// Tunable distances and timings. All lengths in meters, times in seconds.
struct StrategyCalibration {
  // Roles.
  double defender_loiter_offset = 15.0;
  double defender_loiter_radius = 12.0;
  double defender_loiter_speed = 1.5;
  double guard_offset = 30.0;
  double evade_standoff = 12.0;
  double evade_influence = 30.0;
  double evade_weight = 150.0;
  double slot_spacing = 12.0;

  // Opponent classification.
  double observation_window = 120.0;
  double staging_lead = 20.0;
  double staging_depth = 3.0;
  double block_distance = 35.0;
  double approach_tolerance_deg = 15.0;
  double approach_hold = 5.0;
  double block_line_factor = 1.5;
  double circumvent_factor = 2.0;
  double probe_depth = 20.0;
  double probe_pause = 20.0;
  double pursuit_range_factor = 2.0;
  double pursuit_heading_tolerance_deg = 45.0;

  // Counter strategies.
  double attack_timing_distance = 40.0;
  double herd_offset = 8.0;
  double lure_distance = 50.0;
  double retreat_trigger = 25.0;
  double opening_distance = 20.0;
  double wait_depth = 20.0;

  std::vector<std::string> Violations() const;
};

// `slot` is the agent's index within its team; it spreads posts laterally
// for roles that hold a fixed point.
ModeTree MakeRoleTree(RoleArchetype role, const FieldSpec& field,
                      const StrategyCalibration& cal, int slot = 0);

enum class TeamStrategy { kPav01, kStrategy2, kStrategy3, kStrategy4 };

std::string_view TeamStrategyName(TeamStrategy s);
std::optional<TeamStrategy> TeamStrategyFromName(std::string_view name);

// One tree per agent slot (two agents per team).
std::vector<ModeTree> StrategyTrees(TeamStrategy s, const FieldSpec& field,
                                    const StrategyCalibration& cal);

// The baseline: one EasyAttacker and one EasyDefender.
std::vector<ModeTree> Pav01Trees(const FieldSpec& field,
                                 const StrategyCalibration& cal);

// Mode each agent of `team` is in under `s` for the given world.
std::vector<ModeSelection> StrategyModeSwitch(TeamStrategy s, const GameState& world,
                                              const FieldSpec& field, Team team,
                                              const StrategyCalibration& cal);

// ---------------------------------------------------------------------------
// Opponent classification.

enum class Verdict { kUnknown, kTrue, kFalse };

struct OpponentTrack {
  int own_agent = -1;
  int opponent = -1;
  Verdict offensive = Verdict::kUnknown;
  Verdict aggressive = Verdict::kUnknown;

  // Internal evidence.
  bool opponent_in_zone = false;
  std::optional<Vec2> crossing_point;
  std::optional<double> direct_since;
  std::optional<double> probe_started;
  std::optional<double> offensive_at;
  std::optional<double> aggressive_at;

  bool classified() const {
    return offensive != Verdict::kUnknown && aggressive != Verdict::kUnknown;
  }
};

struct OpponentModel {
  Team us = Team::kBlue;
  std::vector<OpponentTrack> tracks;  // one per own agent, in id order
};

// Pairs each own agent with a distinct opponent, greedily by distance.
OpponentModel MakeOpponentModel(const GameState& initial, Team us);

// Folds in one observation. Deterministic given the observation sequence.
OpponentModel ClassifyOpponent(OpponentModel model, const GameState& world,
                               const FieldSpec& field,
                               const StrategyCalibration& cal);

enum class CounterManeuver {
  kTagThenTimedAttack,  // offensive, aggressive
  kHerd,                // offensive, not aggressive
  kProbeAndRetreat,     // not offensive, aggressive
  kAwaitOpening,        // not offensive, not aggressive
};

std::string_view CounterManeuverName(CounterManeuver m);

struct CounterPlan {
  RoleArchetype attacker;
  RoleArchetype defender;
  CounterManeuver maneuver;
};

// Throws std::invalid_argument while either verdict is still unknown.
CounterPlan SelectCounterStrategy(const OpponentTrack& track);

// Slot 0 plays the plan's attacker side, other slots the defender side.
ModeTree CounterTree(CounterManeuver m, const FieldSpec& field,
                     const StrategyCalibration& cal, int slot);

class ClassifierTeamController : public TeamController {
 public:
  ClassifierTeamController(Team team, FieldSpec field, DecisionDomain dom,
                           StrategyCalibration cal);

  std::vector<AgentCommand> Decide(const GameState& world) override;

  const OpponentModel& model() const { return model_; }

 private:
  const ModeTree& TreeFor(const OpponentTrack& t, int slot, double time) const;

  Team team_;
  FieldSpec field_;
  DecisionDomain dom_;
  StrategyCalibration cal_;
  bool started_ = false;
  OpponentModel model_;
  // Per slot: observe, stage, probe, then one per maneuver.
  std::vector<std::vector<ModeTree>> trees_;
};

// Scripted opponents realizing each corner of the offensive x aggressive
// grid. One tree per agent slot.
std::vector<ModeTree> ArchetypeOpponentTrees(bool offensive, bool aggressive,
                                             const FieldSpec& field,
                                             const StrategyCalibration& cal);

}  // namespace ctf

#endif  // CTF_STRATEGIES_H_
