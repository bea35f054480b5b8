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

#ifndef CTF_MODE_TREE_H_
#define CTF_MODE_TREE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctf/helm.h"

namespace ctf {

// Observables a mode condition may test. The set is closed so that trees
// stay declarative and replayable.
enum class Predicate {
  kAlways,
  kSelfTagged,
  kSelfHasFlag,
  kSelfInOwnZone,
  kTeammateHasFlag,
  kOwnFlagAtHome,
  kOpponentFlagAtHome,
  kIntruderInOwnZone,          // any untagged opponent inside our zone
  kNearestIntruderWithin,      // param: meters
  kThreatWithin,               // param: meters; opponent able to tag us
  kAssignedOpponentInOwnZone,
  kAssignedOpponentTagged,
  kAssignedOpponentWithin,     // param: meters
  kAssignedOpponentFarFromFlag,  // param: meters from its own flag home
  kAssignedOpponentHeadingAtOurFlag,  // param: tolerance in degrees
  kTimeAbove,                  // param: seconds of game time
  kSelfBeyond,                 // param: team-frame x coordinate
};

std::string_view PredicateName(Predicate p);
std::optional<Predicate> PredicateFromName(std::string_view name);

struct Condition {
  enum class Op { kAtom, kAll, kAny, kNot };
  Op op = Op::kAtom;
  Predicate predicate = Predicate::kAlways;
  double param = 0.0;
  std::vector<Condition> args;

  static Condition Always() { return {}; }
  static Condition Atom(Predicate p, double param = 0.0) {
    return {Op::kAtom, p, param, {}};
  }
  static Condition All(std::vector<Condition> args) {
    return {Op::kAll, Predicate::kAlways, 0.0, std::move(args)};
  }
  static Condition Any(std::vector<Condition> args) {
    return {Op::kAny, Predicate::kAlways, 0.0, std::move(args)};
  }
  static Condition Not(Condition c) {
    return {Op::kNot, Predicate::kAlways, 0.0, {std::move(c)}};
  }
  bool uses_opponent_state() const;
};

// Where a behavior points. Offsets are in the team frame (+x toward the
// opponent's side), so one tree serves either team.
enum class Anchor {
  kFixed,             // offset is a team-frame field coordinate
  kOwnFlagHome,
  kOpponentFlagHome,
  kOpponentFlag,      // current position, follows a carrier
  kTeammate,
  kNearestIntruder,
  kAssignedOpponent,
  kBlockPoint,        // on the segment own flag -> assigned opponent, param m out
  kHerdPoint,         // assigned opponent's flag side, rotated toward interior
  kShieldPoint,       // midpoint of teammate and its nearest untagged opponent
};

std::string_view AnchorName(Anchor a);
std::optional<Anchor> AnchorFromName(std::string_view name);

struct PointRef {
  Anchor anchor = Anchor::kOwnFlagHome;
  Vec2 offset;
  double param = 0.0;
};

enum class AgentSelector { kNearestIntruder, kAssignedOpponent, kNearestThreat };

std::string_view AgentSelectorName(AgentSelector s);
std::optional<AgentSelector> AgentSelectorFromName(std::string_view name);

// A behavior with symbolic targets, resolved against the world on each
// evaluation. Only the fields relevant to `kind` are read.
struct BehaviorTemplate {
  BehaviorKind kind = BehaviorKind::kStationKeep;
  PointRef point;
  AgentSelector agent = AgentSelector::kNearestIntruder;
  double speed = 0.0;
  double slow_radius = 0.0;
  double radius = 12.0;
  bool clockwise = true;
  int vertices = 8;
  double capture_radius = 4.0;
  double lead_time = 3.0;
  double standoff = 5.0;
  double influence = 10.0;
  bool halt = true;
  bool opponents_only = false;
  bool threats_only = false;
  double margin = 5.0;
  double pull_distance = 10.0;
  std::optional<double> weight;

  double effective_weight() const {
    return weight.value_or(DefaultPriorityWeight(kind));
  }
};

struct ModeNode {
  std::string name;
  Condition when;
  std::vector<BehaviorTemplate> behaviors;  // leaves only
  std::vector<ModeNode> children;

  bool is_leaf() const { return children.empty(); }
};

// Hierarchy of condition-gated modes. Evaluation is depth-first in
// declaration order; the first leaf whose whole ancestor chain holds wins,
// otherwise the fallback leaf. The mandatory behaviors (OpRegion and
// AvoidCollision by default) are appended to every selected leaf.
struct ModeTree {
  std::vector<ModeNode> modes;
  ModeNode fallback;
  std::vector<BehaviorTemplate> mandatory = DefaultMandatoryBehaviors();

  static std::vector<BehaviorTemplate> DefaultMandatoryBehaviors();
  std::vector<std::string> Violations() const;
  std::vector<std::string> leaf_names() const;
  bool uses_opponent_state() const;
};

struct DecisionContext {
  const GameState& world;
  const FieldSpec& field;
  int self = 0;
  std::optional<int> assigned_opponent;

  const AgentState& me() const { return world.agents[self]; }
};

bool Evaluate(const Condition& c, const DecisionContext& ctx);

// Resolves a template; throws std::invalid_argument if its target cannot be
// resolved (e.g. CutRange with no intruder).
BehaviorSpec Resolve(const BehaviorTemplate& t, const DecisionContext& ctx);

struct ModeSelection {
  std::string mode;
  std::vector<BehaviorSpec> behaviors;
};

ModeSelection SelectMode(const ModeTree& tree, const DecisionContext& ctx);

struct HelmDecision {
  std::string mode;
  Action action;
};

// select mode -> rate behaviors -> solve.
HelmDecision RunHelm(const ModeTree& tree, const DecisionContext& ctx,
                     const DecisionDomain& dom);

// Query helpers shared by predicates and controllers.
std::optional<int> NearestIntruder(const DecisionContext& ctx);
std::optional<int> NearestThreat(const DecisionContext& ctx);
std::optional<int> Teammate(const GameState& world, int self);

}  // namespace ctf

#endif  // CTF_MODE_TREE_H_
