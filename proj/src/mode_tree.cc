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

#include "ctf/mode_tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace ctf {

namespace {

constexpr std::pair<Predicate, std::string_view> kPredicateNames[] = {
    {Predicate::kAlways, "always"},
    {Predicate::kSelfTagged, "self_tagged"},
    {Predicate::kSelfHasFlag, "self_has_flag"},
    {Predicate::kSelfInOwnZone, "self_in_own_zone"},
    {Predicate::kTeammateHasFlag, "teammate_has_flag"},
    {Predicate::kOwnFlagAtHome, "own_flag_at_home"},
    {Predicate::kOpponentFlagAtHome, "opponent_flag_at_home"},
    {Predicate::kIntruderInOwnZone, "intruder_in_own_zone"},
    {Predicate::kNearestIntruderWithin, "nearest_intruder_within"},
    {Predicate::kThreatWithin, "threat_within"},
    {Predicate::kAssignedOpponentInOwnZone, "assigned_opponent_in_own_zone"},
    {Predicate::kAssignedOpponentTagged, "assigned_opponent_tagged"},
    {Predicate::kAssignedOpponentWithin, "assigned_opponent_within"},
    {Predicate::kAssignedOpponentFarFromFlag, "assigned_opponent_far_from_flag"},
    {Predicate::kAssignedOpponentHeadingAtOurFlag,
     "assigned_opponent_heading_at_our_flag"},
    {Predicate::kTimeAbove, "time_above"},
    {Predicate::kSelfBeyond, "self_beyond"},
};

constexpr std::pair<Anchor, std::string_view> kAnchorNames[] = {
    {Anchor::kFixed, "fixed"},
    {Anchor::kOwnFlagHome, "own_flag_home"},
    {Anchor::kOpponentFlagHome, "opponent_flag_home"},
    {Anchor::kOpponentFlag, "opponent_flag"},
    {Anchor::kTeammate, "teammate"},
    {Anchor::kNearestIntruder, "nearest_intruder"},
    {Anchor::kAssignedOpponent, "assigned_opponent"},
    {Anchor::kBlockPoint, "block_point"},
    {Anchor::kHerdPoint, "herd_point"},
    {Anchor::kShieldPoint, "shield_point"},
};

constexpr std::pair<AgentSelector, std::string_view> kSelectorNames[] = {
    {AgentSelector::kNearestIntruder, "nearest_intruder"},
    {AgentSelector::kAssignedOpponent, "assigned_opponent"},
    {AgentSelector::kNearestThreat, "nearest_threat"},
};

template <typename E, std::size_t N>
std::string_view NameOf(const std::pair<E, std::string_view> (&table)[N], E e) {
  for (const auto& [v, name] : table) {
    if (v == e) return name;
  }
  return "unknown";
}

template <typename E, std::size_t N>
std::optional<E> FromName(const std::pair<E, std::string_view> (&table)[N],
                          std::string_view name) {
  for (const auto& [v, n] : table) {
    if (n == name) return v;
  }
  return std::nullopt;
}

bool PredicateUsesOpponents(Predicate p) {
  switch (p) {
    case Predicate::kIntruderInOwnZone:
    case Predicate::kNearestIntruderWithin:
    case Predicate::kThreatWithin:
    case Predicate::kAssignedOpponentInOwnZone:
    case Predicate::kAssignedOpponentTagged:
    case Predicate::kAssignedOpponentWithin:
    case Predicate::kAssignedOpponentFarFromFlag:
    case Predicate::kAssignedOpponentHeadingAtOurFlag:
      return true;
    default:
      return false;
  }
}

Vec2 TeamOffset(Vec2 offset, Team t) {
  return t == Team::kBlue ? offset : Vec2{-offset.x, offset.y};
}

bool IsIntruder(const AgentState& other, Team us, const FieldSpec& field) {
  return other.team != us && !other.tagged && field.InZone(other.position, us);
}

std::optional<int> NearestMatching(const DecisionContext& ctx, auto&& pred) {
  const AgentState& me = ctx.me();
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const AgentState& a : ctx.world.agents) {
    if (!pred(a)) continue;
    double d = Distance(me.position, a.position);
    if (d < best_d) {
      best_d = d;
      best = a.id;
    }
  }
  return best;
}

const AgentState* Assigned(const DecisionContext& ctx) {
  if (!ctx.assigned_opponent) return nullptr;
  int id = *ctx.assigned_opponent;
  if (id < 0 || id >= static_cast<int>(ctx.world.agents.size())) return nullptr;
  return &ctx.world.agents[id];
}

const AgentState& RequireAgent(const DecisionContext& ctx, std::optional<int> id,
                               std::string_view what) {
  if (!id) {
    throw std::invalid_argument(std::string("no ") + std::string(what) +
                                " to target");
  }
  return ctx.world.agents.at(*id);
}

Vec2 Unit(Vec2 v, Vec2 fallback) {
  double n = Norm(v);
  return n > 1e-9 ? v * (1.0 / n) : fallback;
}

Vec2 Rotate(Vec2 v, double deg) {
  // Compass rotation: positive turns clockwise.
  double r = deg * kDegToRad;
  return {v.x * std::cos(r) + v.y * std::sin(r),
          -v.x * std::sin(r) + v.y * std::cos(r)};
}

Vec2 ResolvePoint(const PointRef& p, const DecisionContext& ctx) {
  const AgentState& me = ctx.me();
  const Team us = me.team;
  const Team them = Opponent(us);
  const FieldSpec& f = ctx.field;
  const Vec2 off = TeamOffset(p.offset, us);
  switch (p.anchor) {
    case Anchor::kFixed:
      return f.FromTeamFrame(p.offset, us);
    case Anchor::kOwnFlagHome:
      return f.flag_home(us) + off;
    case Anchor::kOpponentFlagHome:
      return f.flag_home(them) + off;
    case Anchor::kOpponentFlag:
      return ctx.world.flag(them).position + off;
    case Anchor::kTeammate: {
      auto mate = Teammate(ctx.world, me.id);
      return (mate ? ctx.world.agents[*mate].position : me.position) + off;
    }
    case Anchor::kNearestIntruder:
      return RequireAgent(ctx, NearestIntruder(ctx), "intruder").position + off;
    case Anchor::kAssignedOpponent:
      return RequireAgent(ctx, ctx.assigned_opponent, "assigned opponent")
                 .position +
             off;
    case Anchor::kBlockPoint: {
      Vec2 flag = f.flag_home(us);
      const AgentState* opp = Assigned(ctx);
      if (!opp) return flag + off;
      Vec2 to = opp->position - flag;
      double along = std::min(p.param, Norm(to));
      return flag + Unit(to, TeamOffset({1.0, 0.0}, us)) * along + off;
    }
    case Anchor::kHerdPoint: {
      const AgentState& opp =
          RequireAgent(ctx, ctx.assigned_opponent, "assigned opponent");
      Vec2 to_flag = Unit(f.flag_home(us) - opp.position, {0.0, 1.0});
      double inward = f.depth / 2.0 - opp.position.y;
      Vec2 a = Rotate(to_flag, 30.0);
      Vec2 b = Rotate(to_flag, -30.0);
      Vec2 r = (a.y * inward >= b.y * inward) ? a : b;
      return opp.position + r * p.param + off;
    }
    case Anchor::kShieldPoint: {
      auto mate = Teammate(ctx.world, me.id);
      if (!mate) return me.position + off;
      const AgentState& t = ctx.world.agents[*mate];
      const AgentState* nearest = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (const AgentState& a : ctx.world.agents) {
        if (a.team == us || a.tagged) continue;
        double d = Distance(a.position, t.position);
        if (d < best) {
          best = d;
          nearest = &a;
        }
      }
      if (!nearest) return t.position + off;
      return (t.position + nearest->position) * 0.5 + off;
    }
  }
  return me.position;
}

void CheckTemplate(const BehaviorTemplate& t, const std::string& where,
                   std::vector<std::string>& out) {
  if (t.weight && !(*t.weight >= 0.0)) out.push_back(where + ": weight must be >= 0");
  switch (t.kind) {
    case BehaviorKind::kLoiter:
      if (!(t.radius > 0.0)) out.push_back(where + ": loiter radius must be > 0");
      if (t.vertices < 3) out.push_back(where + ": loiter needs >= 3 vertices");
      if (!(t.capture_radius > 0.0)) {
        out.push_back(where + ": loiter capture_radius must be > 0");
      }
      break;
    case BehaviorKind::kAvoidCollision:
      if (!(t.standoff > 0.0)) out.push_back(where + ": standoff must be > 0");
      if (!(t.influence >= t.standoff)) {
        out.push_back(where + ": influence must be >= standoff");
      }
      break;
    case BehaviorKind::kStationKeep:
      if (!(t.pull_distance > 0.0)) {
        out.push_back(where + ": pull_distance must be > 0");
      }
      break;
    case BehaviorKind::kOpRegion:
      if (!(t.margin >= 0.0)) out.push_back(where + ": margin must be >= 0");
      break;
    default:
      break;
  }
}

void CheckNode(const ModeNode& n, const std::string& path,
               std::vector<std::string>& out, std::set<std::string>& names) {
  std::string where = path.empty() ? n.name : path + "/" + n.name;
  if (n.name.empty()) out.push_back("mode under '" + path + "' has no name");
  if (n.is_leaf()) {
    if (!names.insert(where).second) out.push_back("duplicate mode '" + where + "'");
    if (n.behaviors.empty()) out.push_back("leaf '" + where + "' has no behaviors");
  } else if (!n.behaviors.empty()) {
    out.push_back("inner mode '" + where + "' must not carry behaviors");
  }
  for (const auto& b : n.behaviors) CheckTemplate(b, where, out);
  for (const auto& c : n.children) CheckNode(c, where, out, names);
}

bool ConditionUses(const Condition& c) {
  if (c.op == Condition::Op::kAtom) return PredicateUsesOpponents(c.predicate);
  return std::any_of(c.args.begin(), c.args.end(), ConditionUses);
}

bool NodeUses(const ModeNode& n) {
  return ConditionUses(n.when) ||
         std::any_of(n.children.begin(), n.children.end(), NodeUses);
}

const ModeNode* FindLeaf(const ModeNode& n, const DecisionContext& ctx,
                         std::string& path) {
  if (!Evaluate(n.when, ctx)) return nullptr;
  std::string here = path.empty() ? n.name : path + "/" + n.name;
  if (n.is_leaf()) {
    path = here;
    return &n;
  }
  for (const ModeNode& c : n.children) {
    std::string p = here;
    if (const ModeNode* leaf = FindLeaf(c, ctx, p)) {
      path = p;
      return leaf;
    }
  }
  return nullptr;
}

}  // namespace

std::string_view PredicateName(Predicate p) { return NameOf(kPredicateNames, p); }
std::optional<Predicate> PredicateFromName(std::string_view n) {
  return FromName(kPredicateNames, n);
}
std::string_view AnchorName(Anchor a) { return NameOf(kAnchorNames, a); }
std::optional<Anchor> AnchorFromName(std::string_view n) {
  return FromName(kAnchorNames, n);
}
std::string_view AgentSelectorName(AgentSelector s) {
  return NameOf(kSelectorNames, s);
}
std::optional<AgentSelector> AgentSelectorFromName(std::string_view n) {
  return FromName(kSelectorNames, n);
}

bool Condition::uses_opponent_state() const { return ConditionUses(*this); }

std::vector<BehaviorTemplate> ModeTree::DefaultMandatoryBehaviors() {
  BehaviorTemplate op;
  op.kind = BehaviorKind::kOpRegion;
  BehaviorTemplate avoid;
  avoid.kind = BehaviorKind::kAvoidCollision;
  return {op, avoid};
}

std::vector<std::string> ModeTree::Violations() const {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& m : modes) CheckNode(m, "", out, names);
  if (!fallback.is_leaf()) out.push_back("fallback mode must be a leaf");
  CheckNode(fallback, "", out, names);
  bool has_op = false, has_avoid = false;
  for (const auto& b : mandatory) {
    has_op |= b.kind == BehaviorKind::kOpRegion;
    has_avoid |= b.kind == BehaviorKind::kAvoidCollision;
    CheckTemplate(b, "mandatory", out);
  }
  if (!has_op) out.push_back("mandatory behaviors must include OpRegion");
  if (!has_avoid) out.push_back("mandatory behaviors must include AvoidCollision");
  return out;
}

std::vector<std::string> ModeTree::leaf_names() const {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const ModeNode& n, const std::string& path) -> void {
    std::string here = path.empty() ? n.name : path + "/" + n.name;
    if (n.is_leaf()) {
      out.push_back(here);
      return;
    }
    for (const auto& c : n.children) self(self, c, here);
  };
  for (const auto& m : modes) walk(walk, m, "");
  out.push_back(fallback.name);
  return out;
}

bool ModeTree::uses_opponent_state() const {
  return std::any_of(modes.begin(), modes.end(), NodeUses);
}

std::optional<int> NearestIntruder(const DecisionContext& ctx) {
  Team us = ctx.me().team;
  return NearestMatching(ctx, [&](const AgentState& a) {
    return IsIntruder(a, us, ctx.field);
  });
}

std::optional<int> NearestThreat(const DecisionContext& ctx) {
  const AgentState& me = ctx.me();
  return NearestMatching(ctx, [&](const AgentState& a) {
    return a.team != me.team && !a.tagged &&
           ctx.field.InZone(a.position, a.team) &&
           ctx.field.InZone(me.position, a.team);
  });
}

std::optional<int> Teammate(const GameState& world, int self) {
  Team us = world.agents[self].team;
  for (const AgentState& a : world.agents) {
    if (a.team == us && a.id != self) return a.id;
  }
  return std::nullopt;
}

bool Evaluate(const Condition& c, const DecisionContext& ctx) {
  switch (c.op) {
    case Condition::Op::kAll:
      return std::all_of(c.args.begin(), c.args.end(),
                         [&](const Condition& a) { return Evaluate(a, ctx); });
    case Condition::Op::kAny:
      return std::any_of(c.args.begin(), c.args.end(),
                         [&](const Condition& a) { return Evaluate(a, ctx); });
    case Condition::Op::kNot:
      return !c.args.empty() && !Evaluate(c.args.front(), ctx);
    case Condition::Op::kAtom:
      break;
  }
  const AgentState& me = ctx.me();
  const Team us = me.team;
  const FieldSpec& f = ctx.field;
  const AgentState* opp = Assigned(ctx);
  switch (c.predicate) {
    case Predicate::kAlways:
      return true;
    case Predicate::kSelfTagged:
      return me.tagged;
    case Predicate::kSelfHasFlag:
      return me.has_flag;
    case Predicate::kSelfInOwnZone:
      return f.InZone(me.position, us);
    case Predicate::kTeammateHasFlag: {
      auto mate = Teammate(ctx.world, me.id);
      return mate && ctx.world.agents[*mate].has_flag;
    }
    case Predicate::kOwnFlagAtHome:
      return ctx.world.flag(us).at_home;
    case Predicate::kOpponentFlagAtHome:
      return ctx.world.flag(Opponent(us)).at_home;
    case Predicate::kIntruderInOwnZone:
      return NearestIntruder(ctx).has_value();
    case Predicate::kNearestIntruderWithin: {
      auto id = NearestIntruder(ctx);
      return id && Distance(ctx.world.agents[*id].position, me.position) <= c.param;
    }
    case Predicate::kThreatWithin: {
      auto id = NearestThreat(ctx);
      return id && Distance(ctx.world.agents[*id].position, me.position) <= c.param;
    }
    case Predicate::kAssignedOpponentInOwnZone:
      return opp && !opp->tagged && f.InZone(opp->position, us);
    case Predicate::kAssignedOpponentTagged:
      return opp && opp->tagged;
    case Predicate::kAssignedOpponentWithin:
      return opp && Distance(opp->position, me.position) <= c.param;
    case Predicate::kAssignedOpponentFarFromFlag:
      return opp && Distance(opp->position, f.flag_home(opp->team)) > c.param;
    case Predicate::kAssignedOpponentHeadingAtOurFlag: {
      if (!opp) return false;
      double b = BearingTo(opp->position, f.flag_home(us));
      return std::abs(HeadingDelta(opp->heading, b)) <= c.param;
    }
    case Predicate::kTimeAbove:
      return ctx.world.time > c.param;
    case Predicate::kSelfBeyond:
      return f.FromTeamFrame(me.position, us).x > c.param;
  }
  return false;
}

BehaviorSpec Resolve(const BehaviorTemplate& t, const DecisionContext& ctx) {
  BehaviorSpec b;
  switch (t.kind) {
    case BehaviorKind::kWaypoint:
      b.params = WaypointParams{ResolvePoint(t.point, ctx), t.speed, t.slow_radius};
      break;
    case BehaviorKind::kLoiter:
      b.params = LoiterParams{ResolvePoint(t.point, ctx), t.radius, t.clockwise,
                              t.vertices, t.capture_radius, t.speed};
      break;
    case BehaviorKind::kCutRange: {
      std::optional<int> id;
      switch (t.agent) {
        case AgentSelector::kNearestIntruder: id = NearestIntruder(ctx); break;
        case AgentSelector::kAssignedOpponent: id = ctx.assigned_opponent; break;
        case AgentSelector::kNearestThreat: id = NearestThreat(ctx); break;
      }
      if (!id) {
        throw std::invalid_argument(std::string("CutRange has no ") +
                                    std::string(AgentSelectorName(t.agent)));
      }
      b.params = CutRangeParams{*id, t.lead_time};
      break;
    }
    case BehaviorKind::kAvoidCollision:
      b.params = AvoidCollisionParams{t.standoff, t.influence, t.halt,
                                      t.opponents_only, t.threats_only};
      break;
    case BehaviorKind::kOpRegion:
      b.params = OpRegionParams{{0.0, 0.0},
                                {ctx.field.width, ctx.field.depth},
                                t.margin};
      break;
    case BehaviorKind::kStationKeep:
      b.params = StationKeepParams{ResolvePoint(t.point, ctx), t.pull_distance};
      break;
  }
  b.weight = t.effective_weight();
  return b;
}

ModeSelection SelectMode(const ModeTree& tree, const DecisionContext& ctx) {
  const ModeNode* leaf = nullptr;
  std::string path;
  for (const ModeNode& m : tree.modes) {
    std::string p;
    if ((leaf = FindLeaf(m, ctx, p))) {
      path = p;
      break;
    }
  }
  if (!leaf) {
    leaf = &tree.fallback;
    path = tree.fallback.name;
  }
  ModeSelection sel;
  sel.mode = std::move(path);
  sel.behaviors.reserve(leaf->behaviors.size() + tree.mandatory.size());
  for (const auto& t : leaf->behaviors) sel.behaviors.push_back(Resolve(t, ctx));
  for (const auto& t : tree.mandatory) sel.behaviors.push_back(Resolve(t, ctx));
  return sel;
}

HelmDecision RunHelm(const ModeTree& tree, const DecisionContext& ctx,
                     const DecisionDomain& dom) {
  ModeSelection sel = SelectMode(tree, ctx);
  std::vector<ActiveBehavior> active;
  active.reserve(sel.behaviors.size());
  HelmWorld env{ctx.world, ctx.field};
  for (auto& b : sel.behaviors) {
    ObjectiveSurface s = BehaviorObjective(b, ctx.me(), env, dom);
    active.push_back({std::move(b), std::move(s)});
  }
  return {std::move(sel.mode), SolveHelm(active, dom)};
}

}  // namespace ctf
