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

#include "ctf/strategies.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "ctf/tree_build.h"

namespace ctf {

namespace {

constexpr std::pair<RoleArchetype, std::string_view> kRoleNames[] = {
    {RoleArchetype::kEasyAttacker, "EasyAttacker"},
    {RoleArchetype::kEasyDefender, "EasyDefender"},
    {RoleArchetype::kMediumAttacker, "MediumAttacker"},
    {RoleArchetype::kMediumDefender, "MediumDefender"},
    {RoleArchetype::kStationKeep, "StationKeep"},
};

constexpr std::pair<TeamStrategy, std::string_view> kStrategyNames[] = {
    {TeamStrategy::kPav01, "Pav01"},
    {TeamStrategy::kStrategy2, "Strategy2"},
    {TeamStrategy::kStrategy3, "Strategy3"},
    {TeamStrategy::kStrategy4, "Strategy4"},
};

using P = Predicate;
using build::At;
using build::Chase;
using build::Fixed;
using build::GoTo;
using build::Hold;
using build::Leaf;
using build::Tree;
using build::When;

BehaviorTemplate Evade(const StrategyCalibration& cal) {
  return build::Evade(cal.evade_standoff, cal.evade_influence, cal.evade_weight);
}

double SlotY(const StrategyCalibration& cal, int slot) {
  return (slot == 0 ? -0.5 : 0.5) * cal.slot_spacing;
}

ModeNode ReturnWhenTagged() {
  return Leaf("tagged", When(P::kSelfTagged), {GoTo(At(Anchor::kOwnFlagHome))});
}

ModeNode ReturnWithFlag(const StrategyCalibration* evade) {
  std::vector<BehaviorTemplate> b = {GoTo(At(Anchor::kOwnFlagHome))};
  if (evade) b.push_back(Evade(*evade));
  return Leaf("return", When(P::kSelfHasFlag), std::move(b));
}

ModeNode Attack(const StrategyCalibration* evade, Condition when = {}) {
  std::vector<BehaviorTemplate> b = {GoTo(At(Anchor::kOpponentFlagHome))};
  if (evade) b.push_back(Evade(*evade));
  return Leaf("attack", std::move(when), std::move(b));
}

ModeNode Guard(const StrategyCalibration& cal, int slot) {
  return Leaf("guard", {},
              {Hold(At(Anchor::kOwnFlagHome, {cal.guard_offset, SlotY(cal, slot)}))});
}

// Orbit in front of the own flag; the orbit crosses the base.
ModeNode Patrol(const StrategyCalibration& cal, int slot) {
  return Leaf("patrol", {},
              {build::Orbit(At(Anchor::kOwnFlagHome,
                               {cal.defender_loiter_offset, SlotY(cal, slot)}),
                            cal.defender_loiter_radius, cal.defender_loiter_speed)});
}

ModeNode InterceptNearest() {
  return Leaf("intercept", When(P::kIntruderInOwnZone),
              {Chase(AgentSelector::kNearestIntruder)});
}

ModeNode InterceptAssigned() {
  return Leaf("intercept", When(P::kAssignedOpponentInOwnZone),
              {Chase(AgentSelector::kAssignedOpponent)});
}

ModeTree Strategy4Tree(const StrategyCalibration& cal) {
  return Tree({ReturnWhenTagged(), InterceptNearest(), ReturnWithFlag(&cal)},
              Attack(&cal));
}

}  // namespace

std::string_view RoleName(RoleArchetype r) {
  for (const auto& [v, n] : kRoleNames) {
    if (v == r) return n;
  }
  return "unknown";
}

std::optional<RoleArchetype> RoleFromName(std::string_view name) {
  for (const auto& [v, n] : kRoleNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::string_view TeamStrategyName(TeamStrategy s) {
  for (const auto& [v, n] : kStrategyNames) {
    if (v == s) return n;
  }
  return "unknown";
}

std::optional<TeamStrategy> TeamStrategyFromName(std::string_view name) {
  for (const auto& [v, n] : kStrategyNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::string_view CounterManeuverName(CounterManeuver m) {
  switch (m) {
    case CounterManeuver::kTagThenTimedAttack: return "tag_then_timed_attack";
    case CounterManeuver::kHerd: return "herd";
    case CounterManeuver::kProbeAndRetreat: return "probe_and_retreat";
    case CounterManeuver::kAwaitOpening: return "await_opening";
  }
  return "unknown";
}

std::vector<std::string> StrategyCalibration::Violations() const {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.push_back(std::string("calibration.") + name + " must be > 0");
    }
  };
  auto non_negative = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      out.push_back(std::string("calibration.") + name + " must be >= 0");
    }
  };
  non_negative(defender_loiter_offset, "defender_loiter_offset");
  positive(defender_loiter_radius, "defender_loiter_radius");
  positive(defender_loiter_speed, "defender_loiter_speed");
  non_negative(guard_offset, "guard_offset");
  positive(evade_standoff, "evade_standoff");
  positive(evade_influence, "evade_influence");
  if (evade_influence < evade_standoff) {
    out.push_back("calibration.evade_influence must be >= evade_standoff");
  }
  non_negative(evade_weight, "evade_weight");
  non_negative(slot_spacing, "slot_spacing");
  positive(observation_window, "observation_window");
  non_negative(staging_lead, "staging_lead");
  if (staging_lead > observation_window) {
    out.push_back("calibration.staging_lead must be <= observation_window");
  }
  non_negative(staging_depth, "staging_depth");
  positive(block_distance, "block_distance");
  positive(approach_tolerance_deg, "approach_tolerance_deg");
  non_negative(approach_hold, "approach_hold");
  positive(block_line_factor, "block_line_factor");
  positive(circumvent_factor, "circumvent_factor");
  positive(probe_depth, "probe_depth");
  positive(probe_pause, "probe_pause");
  positive(pursuit_range_factor, "pursuit_range_factor");
  positive(pursuit_heading_tolerance_deg, "pursuit_heading_tolerance_deg");
  non_negative(attack_timing_distance, "attack_timing_distance");
  positive(herd_offset, "herd_offset");
  non_negative(lure_distance, "lure_distance");
  positive(retreat_trigger, "retreat_trigger");
  non_negative(opening_distance, "opening_distance");
  positive(wait_depth, "wait_depth");
  return out;
}

ModeTree MakeRoleTree(RoleArchetype role, const FieldSpec& field,
                      const StrategyCalibration& cal, int slot) {
  (void)field;
  switch (role) {
    case RoleArchetype::kEasyAttacker:
      return Tree({ReturnWhenTagged(), ReturnWithFlag(nullptr)}, Attack(nullptr));
    case RoleArchetype::kMediumAttacker:
      return Tree({ReturnWhenTagged(), ReturnWithFlag(&cal)}, Attack(&cal));
    case RoleArchetype::kEasyDefender:
      return Tree({}, Patrol(cal, slot));
    case RoleArchetype::kMediumDefender:
      return Tree({ReturnWhenTagged(), InterceptNearest()}, Patrol(cal, slot));
    case RoleArchetype::kStationKeep:
      return Tree({}, Leaf("hold", {},
                           {Hold(At(Anchor::kOwnFlagHome, {0.0, SlotY(cal, slot)}))}));
  }
  throw std::invalid_argument("unknown role");
}

std::vector<ModeTree> Pav01Trees(const FieldSpec& field,
                                 const StrategyCalibration& cal) {
  return {MakeRoleTree(RoleArchetype::kEasyAttacker, field, cal, 0),
          MakeRoleTree(RoleArchetype::kEasyDefender, field, cal, 1)};
}

std::vector<ModeTree> StrategyTrees(TeamStrategy s, const FieldSpec& field,
                                    const StrategyCalibration& cal) {
  switch (s) {
    case TeamStrategy::kPav01:
      return Pav01Trees(field, cal);
    case TeamStrategy::kStrategy2:
      return {MakeRoleTree(RoleArchetype::kEasyAttacker, field, cal, 0),
              MakeRoleTree(RoleArchetype::kMediumDefender, field, cal, 1)};
    case TeamStrategy::kStrategy3:
      return {MakeRoleTree(RoleArchetype::kMediumAttacker, field, cal, 0),
              MakeRoleTree(RoleArchetype::kMediumDefender, field, cal, 1)};
    case TeamStrategy::kStrategy4:
      return {Strategy4Tree(cal), Strategy4Tree(cal)};
  }
  throw std::invalid_argument("unknown strategy");
}

std::vector<ModeSelection> StrategyModeSwitch(TeamStrategy s, const GameState& world,
                                              const FieldSpec& field, Team team,
                                              const StrategyCalibration& cal) {
  std::vector<ModeTree> trees = StrategyTrees(s, field, cal);
  std::vector<int> ids = world.team_members(team);
  if (ids.size() != trees.size()) {
    throw std::invalid_argument("strategy expects " + std::to_string(trees.size()) +
                                " agents per team");
  }
  std::vector<ModeSelection> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    DecisionContext ctx{world, field, ids[k], std::nullopt};
    out.push_back(SelectMode(trees[k], ctx));
  }
  return out;
}

OpponentModel MakeOpponentModel(const GameState& initial, Team us) {
  std::vector<int> own = initial.team_members(us);
  std::vector<int> opp = initial.team_members(Opponent(us));
  std::vector<std::tuple<double, int, int>> pairs;
  for (int a : own) {
    for (int b : opp) {
      pairs.emplace_back(
          Distance(initial.agents[a].position, initial.agents[b].position), a, b);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  OpponentModel m;
  m.us = us;
  std::vector<int> taken_own, taken_opp;
  std::vector<OpponentTrack> tracks;
  for (const auto& [d, a, b] : pairs) {
    if (std::find(taken_own.begin(), taken_own.end(), a) != taken_own.end()) continue;
    if (std::find(taken_opp.begin(), taken_opp.end(), b) != taken_opp.end()) continue;
    taken_own.push_back(a);
    taken_opp.push_back(b);
    OpponentTrack t;
    t.own_agent = a;
    t.opponent = b;
    tracks.push_back(t);
  }
  std::sort(tracks.begin(), tracks.end(),
            [](const OpponentTrack& x, const OpponentTrack& y) {
              return x.own_agent < y.own_agent;
            });
  m.tracks = std::move(tracks);
  return m;
}

OpponentModel ClassifyOpponent(OpponentModel model, const GameState& world,
                               const FieldSpec& field,
                               const StrategyCalibration& cal) {
  const Team us = model.us;
  const Team them = Opponent(us);
  const double t = world.time;
  const Vec2 flag = field.flag_home(us);
  for (OpponentTrack& tr : model.tracks) {
    const AgentState& me = world.agents.at(tr.own_agent);
    const AgentState& o = world.agents.at(tr.opponent);
    const bool in_zone = field.InZone(o.position, us);
    if (in_zone && !tr.opponent_in_zone) tr.crossing_point = o.position;
    tr.opponent_in_zone = in_zone;

    if (tr.offensive == Verdict::kUnknown) {
      if (in_zone) {
        tr.offensive = Verdict::kTrue;
        tr.offensive_at = t;
      } else if (t >= cal.observation_window - 1e-9) {
        tr.offensive = Verdict::kFalse;
        tr.offensive_at = t;
      }
    }
    if (tr.aggressive != Verdict::kUnknown) continue;

    if (tr.offensive == Verdict::kTrue) {
      if (!in_zone || o.tagged) {
        tr.direct_since.reset();
        continue;
      }
      double lateral = DistanceToSegment(o.position, *tr.crossing_point, flag);
      if (lateral > cal.circumvent_factor * field.tag_radius) {
        tr.aggressive = Verdict::kFalse;
        tr.aggressive_at = t;
        continue;
      }
      bool heading_at_flag =
          std::abs(HeadingDelta(o.heading, BearingTo(o.position, flag))) <=
          cal.approach_tolerance_deg;
      bool blocked = !me.tagged &&
                     DistanceToSegment(me.position, o.position, flag) <=
                         cal.block_line_factor * field.tag_radius;
      if (heading_at_flag && blocked) {
        if (!tr.direct_since) tr.direct_since = t;
        if (t - *tr.direct_since >= cal.approach_hold - 1e-9) {
          tr.aggressive = Verdict::kTrue;
          tr.aggressive_at = t;
        }
      } else {
        tr.direct_since.reset();
      }
    } else if (tr.offensive == Verdict::kFalse) {
      if (!tr.probe_started && field.InZone(me.position, them)) tr.probe_started = t;
      if (!tr.probe_started) continue;
      // Chasing any of our probing agents counts, not only the assigned one.
      bool pursued = false;
      for (const AgentState& a : world.agents) {
        if (a.team != us || !field.InZone(a.position, them)) continue;
        pursued |= !o.tagged &&
                   Distance(o.position, a.position) <=
                       cal.pursuit_range_factor * field.tag_radius &&
                   std::abs(HeadingDelta(o.heading, BearingTo(o.position, a.position))) <=
                       cal.pursuit_heading_tolerance_deg;
      }
      if (pursued) {
        tr.aggressive = Verdict::kTrue;
        tr.aggressive_at = t;
      } else if (t - *tr.probe_started >= cal.probe_pause - 1e-9) {
        tr.aggressive = Verdict::kFalse;
        tr.aggressive_at = t;
      }
    }
  }
  return model;
}

CounterPlan SelectCounterStrategy(const OpponentTrack& track) {
  if (!track.classified()) {
    throw std::invalid_argument("opponent classification incomplete");
  }
  bool off = track.offensive == Verdict::kTrue;
  bool agg = track.aggressive == Verdict::kTrue;
  if (off && agg) {
    return {RoleArchetype::kMediumAttacker, RoleArchetype::kMediumDefender,
            CounterManeuver::kTagThenTimedAttack};
  }
  if (off) {
    return {RoleArchetype::kEasyAttacker, RoleArchetype::kMediumDefender,
            CounterManeuver::kHerd};
  }
  if (agg) {
    return {RoleArchetype::kMediumAttacker, RoleArchetype::kMediumDefender,
            CounterManeuver::kProbeAndRetreat};
  }
  return {RoleArchetype::kEasyAttacker, RoleArchetype::kMediumDefender,
          CounterManeuver::kAwaitOpening};
}

ModeTree CounterTree(CounterManeuver m, const FieldSpec& field,
                     const StrategyCalibration& cal, int slot) {
  const bool attacker_side = slot == 0;
  const double mid = field.midfield_x();
  const double cy = field.depth / 2.0 + SlotY(cal, slot);
  switch (m) {
    case CounterManeuver::kTagThenTimedAttack: {
      Condition timed = Condition::Any(
          {When(P::kAssignedOpponentTagged),
           When(P::kAssignedOpponentFarFromFlag, cal.attack_timing_distance)});
      return Tree({ReturnWhenTagged(), ReturnWithFlag(&cal), InterceptAssigned(),
                   Attack(&cal, timed)},
                  Guard(cal, slot));
    }
    case CounterManeuver::kHerd: {
      if (attacker_side) {
        return MakeRoleTree(RoleArchetype::kEasyAttacker, field, cal, slot);
      }
      ModeNode herd = Leaf("herd", When(P::kAssignedOpponentInOwnZone),
                           {GoTo(At(Anchor::kHerdPoint, {}, cal.herd_offset))});
      return Tree({ReturnWhenTagged(), herd, InterceptNearest()}, Guard(cal, slot));
    }
    case CounterManeuver::kProbeAndRetreat: {
      if (!attacker_side) {
        return MakeRoleTree(RoleArchetype::kMediumDefender, field, cal, slot);
      }
      ModeNode retreat =
          Leaf("retreat",
               Condition::All({Condition::Not(When(P::kSelfInOwnZone)),
                               When(P::kAssignedOpponentWithin, cal.retreat_trigger)}),
               {GoTo(Fixed(mid - cal.probe_depth, cy))});
      Condition lured = Condition::All(
          {When(P::kAssignedOpponentFarFromFlag, cal.lure_distance),
           Condition::Not(When(P::kAssignedOpponentWithin, cal.retreat_trigger))});
      return Tree({ReturnWhenTagged(), ReturnWithFlag(&cal), retreat,
                   Attack(&cal, lured)},
                  Leaf("probe", {}, {GoTo(Fixed(mid + cal.probe_depth, cy))}));
    }
    case CounterManeuver::kAwaitOpening: {
      if (!attacker_side) {
        return MakeRoleTree(RoleArchetype::kMediumDefender, field, cal, slot);
      }
      Condition opening = Condition::All(
          {Condition::Not(When(P::kSelfInOwnZone)),
           Condition::Any(
               {When(P::kAssignedOpponentFarFromFlag, cal.opening_distance),
                When(P::kSelfBeyond, field.width - 2.0 * cal.wait_depth)})});
      return Tree({ReturnWhenTagged(), ReturnWithFlag(nullptr),
                   Attack(nullptr, opening)},
                  Leaf("wait", {}, {Hold(Fixed(mid + cal.wait_depth, cy))}));
    }
  }
  throw std::invalid_argument("unknown counter maneuver");
}

std::vector<ModeTree> ArchetypeOpponentTrees(bool offensive, bool aggressive,
                                             const FieldSpec& field,
                                             const StrategyCalibration& cal) {
  std::vector<ModeTree> out;
  for (int slot = 0; slot < 2; ++slot) {
    if (offensive && aggressive) {
      out.push_back(MakeRoleTree(RoleArchetype::kEasyAttacker, field, cal, slot));
    } else if (offensive) {
      // Cross near the centerline, then swing wide along a sideline before
      // turning in on the flag.
      const double mid = field.midfield_x();
      const double side_y = slot == 0 ? 10.0 : field.depth - 10.0;
      ModeNode final_run = Leaf("final", When(P::kSelfBeyond, field.width - 35.0),
                                {GoTo(At(Anchor::kOpponentFlagHome))});
      ModeNode sideline = Leaf("sideline", When(P::kSelfBeyond, mid + 20.0),
                               {GoTo(Fixed(field.width - 30.0, side_y))});
      ModeNode flank = Leaf("flank", When(P::kSelfBeyond, mid),
                            {GoTo(Fixed(mid + 25.0, side_y))});
      out.push_back(Tree({ReturnWhenTagged(), ReturnWithFlag(nullptr),
                          final_run, sideline, flank},
          Leaf("cross", {},
               {GoTo(Fixed(mid + 8.0, field.depth / 2.0 + SlotY(cal, slot)))})));
    } else if (aggressive) {
      out.push_back(MakeRoleTree(RoleArchetype::kMediumDefender, field, cal, slot));
    } else {
      out.push_back(MakeRoleTree(RoleArchetype::kEasyDefender, field, cal, slot));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {
enum TreeIndex { kObserve = 0, kStage = 1, kProbe = 2, kCounter0 = 3 };
}  // namespace

ClassifierTeamController::ClassifierTeamController(Team team, FieldSpec field,
                                                   DecisionDomain dom,
                                                   StrategyCalibration cal)
    : team_(team), field_(field), dom_(std::move(dom)), cal_(cal) {
  auto problems = cal_.Violations();
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  const double mid = field_.midfield_x();
  for (int slot = 0; slot < 2; ++slot) {
    const double cy = field_.depth / 2.0 + SlotY(cal_, slot);
    std::vector<ModeTree> v;
    v.push_back(Tree({ReturnWhenTagged()},
                     Leaf("observe", {},
                          {GoTo(At(Anchor::kBlockPoint, {}, cal_.block_distance),
                                0.0, 8.0)})));
    v.push_back(Tree({ReturnWhenTagged()},
                     Leaf("stage", {},
                          {GoTo(Fixed(mid - cal_.staging_depth, cy), 0.0, 4.0)})));
    ModeNode pause = Leaf("pause", Condition::Not(When(P::kSelfInOwnZone)),
                          {Hold(Fixed(mid + cal_.probe_depth, cy))});
    v.push_back(Tree({ReturnWhenTagged(), pause},
                     Leaf("cross", {}, {GoTo(Fixed(mid + cal_.probe_depth, cy))})));
    for (CounterManeuver m :
         {CounterManeuver::kTagThenTimedAttack, CounterManeuver::kHerd,
          CounterManeuver::kProbeAndRetreat, CounterManeuver::kAwaitOpening}) {
      v.push_back(CounterTree(m, field_, cal_, slot));
    }
    trees_.push_back(std::move(v));
  }
}

const ModeTree& ClassifierTeamController::TreeFor(const OpponentTrack& t, int slot,
                                                  double time) const {
  const auto& v = trees_[slot];
  if (t.classified()) {
    return v[kCounter0 + static_cast<int>(SelectCounterStrategy(t).maneuver)];
  }
  if (t.offensive == Verdict::kTrue) return v[kObserve];
  if (t.offensive == Verdict::kFalse) return v[kProbe];
  return time >= cal_.observation_window - cal_.staging_lead ? v[kStage]
                                                            : v[kObserve];
}

std::vector<AgentCommand> ClassifierTeamController::Decide(const GameState& world) {
  if (!started_) {
    if (world.agents_per_team() != 2) {
      throw std::invalid_argument("classifier supports two agents per team");
    }
    model_ = MakeOpponentModel(world, team_);
    started_ = true;
  }
  model_ = ClassifyOpponent(std::move(model_), world, field_, cal_);
  std::vector<AgentCommand> out;
  for (std::size_t k = 0; k < model_.tracks.size(); ++k) {
    const OpponentTrack& t = model_.tracks[k];
    const ModeTree& tree = TreeFor(t, static_cast<int>(k), world.time);
    DecisionContext ctx{world, field_, t.own_agent, t.opponent};
    HelmDecision d = RunHelm(tree, ctx, dom_);
    out.push_back({d.action, std::move(d.mode)});
  }
  return out;
}

}  // namespace ctf
