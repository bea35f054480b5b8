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

#include <algorithm>
#include <set>
#include <vector>

#include "ctf/controller.h"
#include "ctf/random.h"
#include "ctf/strategies.h"
#include "doctest.h"

namespace ctf {
namespace {

GameState Blank() { return MakeInitialState(FieldSpec{}, 2, 0, 0.0); }

std::vector<std::string> Modes(TeamStrategy s, const GameState& w) {
  std::vector<std::string> out;
  for (auto& m : StrategyModeSwitch(s, w, FieldSpec{}, Team::kBlue, StrategyCalibration{})) {
    out.push_back(m.mode);
  }
  return out;
}

bool OnlyKinds(const ModeNode& leaf, std::set<BehaviorKind> allowed) {
  return std::all_of(leaf.behaviors.begin(), leaf.behaviors.end(),
                     [&](const BehaviorTemplate& b) { return allowed.count(b.kind); });
}

TEST_CASE("role archetype structure") {
  FieldSpec f;
  StrategyCalibration cal;
  ModeTree ea = MakeRoleTree(RoleArchetype::kEasyAttacker, f, cal);
  CHECK_FALSE(ea.uses_opponent_state());
  ModeTree ed = MakeRoleTree(RoleArchetype::kEasyDefender, f, cal);
  CHECK(ed.modes.empty());
  CHECK(OnlyKinds(ed.fallback, {BehaviorKind::kLoiter}));
  ModeTree ma = MakeRoleTree(RoleArchetype::kMediumAttacker, f, cal);
  CHECK(std::any_of(ma.fallback.behaviors.begin(), ma.fallback.behaviors.end(),
                    [](auto& b) { return b.kind == BehaviorKind::kAvoidCollision; }));
  ModeTree md = MakeRoleTree(RoleArchetype::kMediumDefender, f, cal);
  bool cut = false;
  for (auto& m : md.modes) {
    for (auto& b : m.behaviors) cut |= b.kind == BehaviorKind::kCutRange;
  }
  CHECK(cut);
  for (RoleArchetype r : {RoleArchetype::kEasyAttacker, RoleArchetype::kEasyDefender,
                          RoleArchetype::kMediumAttacker, RoleArchetype::kMediumDefender,
                          RoleArchetype::kStationKeep}) {
    CHECK(MakeRoleTree(r, f, cal).Violations().empty());
    CHECK(RoleFromName(RoleName(r)) == r);
  }
  CHECK_FALSE(RoleFromName("Goalie").has_value());
}

TEST_CASE("pav01 is a static attacker/defender pair") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    GameState w = Blank();
    for (auto& a : w.agents) a.position = {UniformRange(rng, 1, 159), UniformRange(rng, 1, 79)};
    w.agents[2].tagged = UniformInt(rng, 2);
    auto m = Modes(TeamStrategy::kPav01, w);
    CHECK(m[1] == "patrol");
    CHECK((m[0] == "attack" || m[0] == "tagged" || m[0] == "return"));
  }
  GameState w = Blank();
  w.agents[0].has_flag = true;
  w.agents[0].position = {140, 40};
  auto sel = StrategyModeSwitch(TeamStrategy::kPav01, w, FieldSpec{}, Team::kBlue,
                                StrategyCalibration{});
  CHECK(sel[0].mode == "return");
  auto& wp = std::get<WaypointParams>(sel[0].behaviors.front().params);
  CHECK(wp.target == FieldSpec{}.flag_home(Team::kBlue));
  // The easy defender ignores a nearby intruder.
  GameState near = Blank();
  near.agents[2].position = {near.agents[1].position.x + 5, near.agents[1].position.y};
  CHECK(Modes(TeamStrategy::kPav01, near)[1] == "patrol");
}

TEST_CASE("strategy 2 defender chases, attacker carries on") {
  GameState w = Blank();
  CHECK(Modes(TeamStrategy::kStrategy2, w) == std::vector<std::string>{"attack", "patrol"});
  w.agents[3].position = {60, 50};
  CHECK(Modes(TeamStrategy::kStrategy2, w) == std::vector<std::string>{"attack", "intercept"});
  CHECK(Modes(TeamStrategy::kStrategy3, w) == std::vector<std::string>{"attack", "intercept"});
}

TEST_CASE("strategy 4 pursues with both agents or neither") {
  FieldSpec f;
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    GameState w = Blank();
    for (auto& a : w.agents) {
      a.position = {UniformRange(rng, 1, 159), UniformRange(rng, 1, 79)};
      a.tagged = UniformInt(rng, 4) == 0;
    }
    bool intruder = false;
    for (int id : {2, 3}) {
      intruder |= !w.agents[id].tagged && f.InZone(w.agents[id].position, Team::kBlue);
    }
    auto m = Modes(TeamStrategy::kStrategy4, w);
    // Every untagged agent pursues exactly when an intruder is in.
    int pursuing = 0, eligible = 0;
    for (int k = 0; k < 2; ++k) {
      pursuing += m[k] == "intercept";
      eligible += !w.agents[k].tagged;
    }
    CHECK(pursuing == (intruder ? eligible : 0));
  }
}

GameState Snapshot(double t, Vec2 opp, double opp_heading, Vec2 own = {40, 40}) {
  GameState w = Blank();
  w.time = t;
  w.agents[2].position = opp;
  w.agents[2].heading = opp_heading;
  w.agents[0].position = own;
  w.agents[1].position = {10, 70};
  w.agents[3].position = {150, 70};
  return w;
}

TEST_CASE("opponent assignment is distinct and nearest first") {
  GameState w = Blank();
  OpponentModel m = MakeOpponentModel(w, Team::kBlue);
  REQUIRE(m.tracks.size() == 2);
  CHECK(m.tracks[0].own_agent == 0);
  CHECK(m.tracks[1].own_agent == 1);
  CHECK(m.tracks[0].opponent != m.tracks[1].opponent);
  // Symmetric layout: ties fall to the lower ids.
  CHECK(m.tracks[0].opponent == 2);
}

TEST_CASE("classifier: offensive on crossing, defensive after the window") {
  FieldSpec f;
  StrategyCalibration cal;
  OpponentModel m = MakeOpponentModel(Snapshot(0, {150, 40}, 270), Team::kBlue);
  for (double t = 0; t < 30; t += 1) {
    m = ClassifyOpponent(m, Snapshot(t, {150 - 2.3 * t, 40}, 270), f, cal);
  }
  const OpponentTrack* tr = nullptr;
  for (auto& x : m.tracks) if (x.opponent == 2) tr = &x;
  REQUIRE(tr);
  CHECK(tr->offensive == Verdict::kUnknown);
  m = ClassifyOpponent(m, Snapshot(30, {79, 40}, 270), f, cal);
  for (auto& x : m.tracks) if (x.opponent == 2) tr = &x;
  CHECK(tr->offensive == Verdict::kTrue);
  CHECK(*tr->offensive_at == doctest::Approx(30));

  OpponentModel q = MakeOpponentModel(Snapshot(0, {150, 40}, 270), Team::kBlue);
  for (double t = 0; t <= 120; t += 0.5) {
    q = ClassifyOpponent(q, Snapshot(t, {140, 40}, 270), f, cal);
    for (auto& x : q.tracks) {
      if (t < 120) CHECK(x.offensive == Verdict::kUnknown);
    }
  }
  for (auto& x : q.tracks) CHECK(x.offensive == Verdict::kFalse);
}

TEST_CASE("classifier: straight at the flag past a blocker is aggressive") {
  FieldSpec f;
  StrategyCalibration cal;
  OpponentModel m = MakeOpponentModel(Snapshot(0, {150, 40}, 270), Team::kBlue);
  // Cross at t = 20 and drive straight along y = 40 toward the flag while
  // our agent sits on that line.
  double t = 0;
  for (; t < 40; t += 0.5) {
    double x = std::max(150 - 3.5 * t, 30.0);
    m = ClassifyOpponent(m, Snapshot(t, {x, 40}, 270, {35, 42}), f, cal);
  }
  for (auto& x : m.tracks) {
    if (x.opponent != 2) continue;
    CHECK(x.offensive == Verdict::kTrue);
    CHECK(x.aggressive == Verdict::kTrue);
  }
}

TEST_CASE("classifier: a wide detour is non-aggressive") {
  FieldSpec f;
  StrategyCalibration cal;
  OpponentModel m = MakeOpponentModel(Snapshot(0, {150, 40}, 270), Team::kBlue);
  m = ClassifyOpponent(m, Snapshot(10, {79, 40}, 225), f, cal);
  for (double t = 10; t < 30; t += 0.5) {
    m = ClassifyOpponent(m, Snapshot(t, {79 - (t - 10), 40 - 2 * (t - 10)}, 225), f, cal);
  }
  for (auto& x : m.tracks) {
    if (x.opponent == 2) CHECK(x.aggressive == Verdict::kFalse);
  }
}

TEST_CASE("classifier verdicts never return to unknown") {
  FieldSpec f;
  StrategyCalibration cal;
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    OpponentModel m = MakeOpponentModel(Blank(), Team::kBlue);
    auto prev = m;
    for (int k = 0; k < 400; ++k) {
      GameState w = Blank();
      w.time = 0.5 * k;
      for (auto& a : w.agents) {
        a.position = {UniformRange(rng, 1, 159), UniformRange(rng, 1, 79)};
        a.heading = UniformRange(rng, 0, 360);
        a.tagged = UniformInt(rng, 5) == 0;
      }
      m = ClassifyOpponent(m, w, f, cal);
      for (std::size_t i = 0; i < m.tracks.size(); ++i) {
        if (prev.tracks[i].offensive != Verdict::kUnknown) {
          CHECK(m.tracks[i].offensive == prev.tracks[i].offensive);
        }
        if (prev.tracks[i].aggressive != Verdict::kUnknown) {
          CHECK(m.tracks[i].aggressive == prev.tracks[i].aggressive);
        }
      }
      prev = m;
    }
  }
}

TEST_CASE("counter strategy table") {
  OpponentTrack t;
  CHECK_THROWS_AS(SelectCounterStrategy(t), std::invalid_argument);
  t.offensive = Verdict::kTrue;
  CHECK_THROWS_AS(SelectCounterStrategy(t), std::invalid_argument);
  struct Row {
    Verdict off, agg;
    RoleArchetype att, def;
    CounterManeuver m;
  };
  const Row rows[] = {
      {Verdict::kTrue, Verdict::kTrue, RoleArchetype::kMediumAttacker,
       RoleArchetype::kMediumDefender, CounterManeuver::kTagThenTimedAttack},
      {Verdict::kTrue, Verdict::kFalse, RoleArchetype::kEasyAttacker,
       RoleArchetype::kMediumDefender, CounterManeuver::kHerd},
      {Verdict::kFalse, Verdict::kTrue, RoleArchetype::kMediumAttacker,
       RoleArchetype::kMediumDefender, CounterManeuver::kProbeAndRetreat},
      {Verdict::kFalse, Verdict::kFalse, RoleArchetype::kEasyAttacker,
       RoleArchetype::kMediumDefender, CounterManeuver::kAwaitOpening},
  };
  FieldSpec f;
  StrategyCalibration cal;
  for (const Row& r : rows) {
    t.offensive = r.off;
    t.aggressive = r.agg;
    CounterPlan p = SelectCounterStrategy(t);
    CHECK(p.attacker == r.att);
    CHECK(p.defender == r.def);
    CHECK(p.maneuver == r.m);
    for (int slot = 0; slot < 2; ++slot) CHECK(CounterTree(r.m, f, cal, slot).Violations().empty());
  }
}

TEST_CASE("calibration validation") {
  StrategyCalibration cal;
  CHECK(cal.Violations().empty());
  cal.observation_window = -1;
  cal.probe_pause = 0;
  CHECK(cal.Violations().size() >= 2);
}

}  // namespace
}  // namespace ctf
