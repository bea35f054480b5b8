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

#include <cmath>
#include <sstream>
#include <vector>

#include "ctf/random.h"
#include "ctf/rl_options.h"
#include "doctest.h"

namespace ctf {
namespace {

GameState Blank() { return MakeInitialState(FieldSpec{}, 2, 0, 0.0); }

const EventKind kKinds[] = {EventKind::kTagNoFlag, EventKind::kTagWithFlag,
                            EventKind::kGrab, EventKind::kCapture,
                            EventKind::kOutOfBounds};

GameEvent Ev(EventKind k, int actor) {
  GameEvent e{k, actor, std::nullopt, 0.0};
  if (e.is_tag()) e.victim = actor < 2 ? 2 : 0;
  return e;
}

// The reward table, spelled out cell by cell.
TEST_CASE("reward table: own team perspective") {
  RewardTable t;
  std::vector<GameEvent> e;
  e = {Ev(EventKind::kTagNoFlag, 1)};
  CHECK(ComputeReward(e, 0, 2, t) == 100.0);
  e = {Ev(EventKind::kTagWithFlag, 1)};
  CHECK(ComputeReward(e, 0, 2, t) == 50.0);
  e = {Ev(EventKind::kGrab, 0)};
  CHECK(ComputeReward(e, 0, 2, t) == 50.0);
  e = {Ev(EventKind::kCapture, 1)};
  CHECK(ComputeReward(e, 0, 2, t) == 100.0);
  e = {Ev(EventKind::kOutOfBounds, 0)};
  CHECK(ComputeReward(e, 0, 2, t) == -100.0);
}

TEST_CASE("reward table: opposing team perspective") {
  RewardTable t;
  std::vector<GameEvent> e;
  e = {Ev(EventKind::kTagNoFlag, 2)};
  CHECK(ComputeReward(e, 0, 2, t) == -100.0);
  e = {Ev(EventKind::kTagWithFlag, 3)};
  CHECK(ComputeReward(e, 1, 2, t) == -100.0);
  e = {Ev(EventKind::kGrab, 2)};
  CHECK(ComputeReward(e, 0, 2, t) == -50.0);
  e = {Ev(EventKind::kCapture, 3)};
  CHECK(ComputeReward(e, 0, 2, t) == -100.0);
  e = {Ev(EventKind::kOutOfBounds, 3)};
  CHECK(ComputeReward(e, 0, 2, t) == 0.0);
}

TEST_CASE("reward is additive over every event multiset of size <= 2") {
  RewardTable t;
  CHECK(ComputeReward({}, 0, 2, t) == 0.0);
  // Independent expectation: literal values, not the table accessors.
  auto literal = [](EventKind k, bool own) {
    switch (k) {
      case EventKind::kTagNoFlag: return own ? 100.0 : -100.0;
      case EventKind::kTagWithFlag: return own ? 50.0 : -100.0;
      case EventKind::kGrab: return own ? 50.0 : -50.0;
      case EventKind::kCapture: return own ? 100.0 : -100.0;
      case EventKind::kOutOfBounds: return own ? -100.0 : 0.0;
    }
    return 0.0;
  };
  int cases = 0;
  for (int viewer = 0; viewer < 4; ++viewer) {
    for (EventKind a : kKinds) {
      for (int actor_a = 0; actor_a < 4; ++actor_a) {
        std::vector<GameEvent> one{Ev(a, actor_a)};
        double ea = literal(a, (actor_a < 2) == (viewer < 2));
        CHECK(ComputeReward(one, viewer, 2, t) == ea);
        for (EventKind b : kKinds) {
          for (int actor_b = 0; actor_b < 4; ++actor_b) {
            std::vector<GameEvent> two{Ev(a, actor_a), Ev(b, actor_b)};
            double eb = literal(b, (actor_b < 2) == (viewer < 2));
            CHECK(ComputeReward(two, viewer, 2, t) == ea + eb);
            ++cases;
          }
        }
      }
    }
  }
  CHECK(cases == 4 * 20 * 20);
  // Own carrier tagged plus a teammate leaving the field.
  std::vector<GameEvent> combo{Ev(EventKind::kTagWithFlag, 2),
                               Ev(EventKind::kOutOfBounds, 1)};
  CHECK(ComputeReward(combo, 0, 2, t) == -200.0);
}

TEST_CASE("observation anchors") {
  FieldSpec f;
  ObservationSpec spec;
  GameState w = Blank();
  w.agents[0].position = f.flag_home(Team::kBlue);
  w.agents[0].heading = 0;
  auto o = DiscretizeObservation(w, 0, f, spec);
  CHECK(o.cell_x == 0);
  CHECK(o.cell_y == 2);
  CHECK(o.heading_segment == 0);
  CHECK(o.others.size() == 3);
  CHECK(HeadingSegment(359.9, 36) == 35);
  CHECK(HeadingSegment(0.0, 36) == 0);
  CHECK(HeadingSegment(-0.1, 8) == 7);
  // Mirrored red agent sees the same features.
  GameState m = Blank();
  m.agents[2].position = f.flag_home(Team::kRed);
  m.agents[2].heading = 0;
  auto r = DiscretizeObservation(m, 2, f, spec);
  CHECK(r.cell_x == 0);
  CHECK(r.heading_segment == 0);
}

double Margin(double v, double width) {
  double r = std::fmod(v, width);
  if (r < 0) r += width;
  return std::min(r, width - r);
}

TEST_CASE("sub-bucket jitter leaves observations unchanged") {
  FieldSpec f;
  ObservationSpec spec;
  Rng rng(1234);
  int tested = 0;
  const double jitter = 0.2;
  for (int trial = 0; trial < 4000 && tested < 500; ++trial) {
    GameState w = Blank();
    for (auto& a : w.agents) {
      a.position = {UniformRange(rng, 1, 159), UniformRange(rng, 1, 79)};
      a.heading = UniformRange(rng, 0, 360);
    }
    // Skip worlds where some continuous quantity sits near a bucket edge.
    const AgentState& me = w.agents[0];
    bool safe = Margin(me.position.x, f.width / spec.grid_x) > 2 * jitter &&
                Margin(me.position.y, f.depth / spec.grid_y) > 2 * jitter &&
                Margin(me.heading, 360.0 / spec.heading_segments) > 1.0;
    for (int k = 1; k < 4 && safe; ++k) {
      double d = Distance(me.position, w.agents[k].position);
      for (double e : spec.range_edges) safe &= std::abs(d - e) > 3 * jitter;
      double bearing = BearingTo(me.position, w.agents[k].position) - me.heading;
      double slack = (2 * jitter / std::max(d, 1e-9)) * kRadToDeg + 0.5;
      safe &= d > 10 * jitter && Margin(bearing, 360.0 / spec.heading_segments) > slack;
    }
    if (!safe) continue;
    GameState j = w;
    for (auto& a : j.agents) {
      double th = UniformRange(rng, 0, 360);
      a.position = a.position + HeadingVector(th) * UniformRange(rng, 0, jitter);
    }
    j.agents[0].position = w.agents[0].position;  // own cell margin handled above
    CHECK(DiscretizeObservation(w, 0, f, spec) == DiscretizeObservation(j, 0, f, spec));
    ++tested;
  }
  CHECK(tested == 500);
}

TEST_CASE("observation encoding") {
  FieldSpec f;
  ObservationSpec spec;
  Rng rng(3);
  std::vector<std::pair<ObservationFeatures, std::uint64_t>> seen;
  for (int i = 0; i < 300; ++i) {
    GameState w = Blank();
    for (auto& a : w.agents) {
      a.position = {UniformRange(rng, 1, 159), UniformRange(rng, 1, 79)};
      a.heading = UniformRange(rng, 0, 360);
      a.tagged = UniformInt(rng, 3) == 0;
    }
    auto o = DiscretizeObservation(w, UniformInt(rng, 4), f, spec);
    seen.emplace_back(o, EncodeObservation(o, spec));
  }
  for (std::size_t a = 0; a < seen.size(); ++a) {
    for (std::size_t b = a + 1; b < seen.size(); ++b) {
      CHECK((seen[a].first == seen[b].first) == (seen[a].second == seen[b].second));
    }
  }
  ObservationSpec huge;
  huge.grid_x = 1 << 20;
  huge.grid_y = 1 << 20;
  huge.heading_segments = 1 << 20;
  auto o = DiscretizeObservation(Blank(), 0, f, huge);
  CHECK_THROWS_AS(EncodeObservation(o, huge), std::invalid_argument);
}

TEST_CASE("option selection") {
  QTables q;
  CHECK(GreedyOption(q, 7) == OptionId::kPickupOpponentFlag);
  q.table[7].a[3] = 2.0;
  q.table[7].b[3] = 0.0;
  q.table[7].a[1] = 0.5;
  q.table[7].b[1] = 1.0;  // mean 0.75 < 1.0
  CHECK(GreedyOption(q, 7) == OptionId::kAvoidOpponents);
  CHECK(SelectOption(q, 7, 0.0, std::uint64_t{99}) == OptionId::kAvoidOpponents);

  // Uniform under epsilon = 1: chi-square, 5 dof, critical 20.52 at p = 0.001.
  Rng rng(42);
  int counts[kNumOptions] = {};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(SelectOption(q, 7, 1.0, rng))];
  double chi = 0.0;
  for (int c : counts) chi += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
  CHECK(chi < 20.52);
  for (int i = 0; i < kNumOptions; ++i) {
    auto id = static_cast<OptionId>(i);
    CHECK(OptionFromName(OptionName(id)) == id);
  }
}

TEST_CASE("double q update rules") {
  QTables q;
  q.learning_rate = 0.1;
  q.gamma = 0.9;
  DoubleQUpdateInPlace(q, {1, OptionId::kGuardOwnFlag, 0.0, 2, false}, true);
  CHECK(q.MaxAbsValue() == 0.0);

  // Repeated terminal transition: v_n = r (1 - (1 - a)^n).
  QTables c;
  c.learning_rate = 0.25;
  const double r = 40.0;
  for (int n = 1; n <= 200; ++n) {
    DoubleQUpdateInPlace(c, {5, OptionId::kRetreat, r, 0, true}, true);
    double expect = r * (1.0 - std::pow(1.0 - 0.25, n));
    CHECK(c.table[5].a[4] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(c.table[5].a[4] == doctest::Approx(r));
  CHECK(c.table[5].b[4] == 0.0);

  // The updated table picks the argmax, the other one prices it.
  QTables d;
  d.learning_rate = 1.0;
  d.gamma = 0.5;
  d.table[9].a = {0, 10, 0, 0, 0, 0};
  d.table[9].b = {100, 2, 0, 0, 0, 0};
  DoubleQUpdateInPlace(d, {8, OptionId::kTagOpponent, 1.0, 9, false}, true);
  CHECK(d.table[8].a[2] == doctest::Approx(1.0 + 0.5 * 2.0));
  DoubleQUpdateInPlace(d, {8, OptionId::kTagOpponent, 1.0, 9, false}, false);
  CHECK(d.table[8].b[2] == doctest::Approx(1.0 + 0.5 * 0.0));

  QTables z;
  z.learning_rate = 0.0;
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    z = DoubleQUpdate(z, {static_cast<std::uint64_t>(i), OptionId::kShieldTeammate,
                          UniformRange(rng, -100, 100), 3, i % 2 == 0},
                      rng);
  }
  QTables empty;
  empty.learning_rate = 0.0;
  CHECK(z == empty);
}

TEST_CASE("q table text round trip") {
  QTables q;
  q.learning_rate = 0.125;
  q.table[3].a = {1.5, -2.25, 0, 0, 1e-17, 7};
  q.table[1].b = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  ObservationSpec spec;
  std::stringstream ss;
  WriteQTables(ss, q, {spec, 77});
  QTableHeader h;
  QTables back = ReadQTables(ss, &h);
  CHECK(back == q);
  CHECK(h.seed == 77);
  CHECK(h.obs.range_edges == spec.range_edges);
  std::stringstream bad("not a table\n");
  CHECK_THROWS(ReadQTables(bad));
}

TrainingConfig SmallTraining(int episodes) {
  TrainingConfig c;
  c.episodes = episodes;
  c.horizon = 40.0;
  c.seed = 5;
  return c;
}

TEST_CASE("training: zero episodes, prefix determinism, bounded values") {
  TrainingConfig c = SmallTraining(0);
  QTables init;
  init.table[4].a[0] = 3.0;
  auto r0 = Train(c, init, 0);
  CHECK(r0.q == init);
  CHECK(r0.curve.empty());

  auto r3 = Train(SmallTraining(3));
  auto r6 = Train(SmallTraining(6));
  REQUIRE(r6.curve.size() == 6);
  for (int e = 0; e < 3; ++e) {
    CHECK(r3.curve[e].team_return == r6.curve[e].team_return);
    CHECK(r3.curve[e].grabs == r6.curve[e].grabs);
    CHECK(r3.curve[e].epsilon == r6.curve[e].epsilon);
  }
  auto again = Train(SmallTraining(3));
  CHECK(again.q == r3.q);
  // Continuing from the 3-episode table reproduces the 6-episode run.
  auto cont = Train(SmallTraining(3), r3.q, 3);
  CHECK(cont.q == r6.q);
  double bound = c.rewards.max_abs() * 4 / (1.0 - c.gamma);
  CHECK(r6.q.MaxAbsValue() <= bound);
  CHECK(r6.q.Violations().empty());
}

TEST_CASE("options controller emits grid actions") {
  FieldSpec f;
  DecisionDomain dom;
  QTables q;
  OptionsSettings s;
  s.epsilon = 1.0;
  s.seed = 3;
  OptionsTeamController blue(Team::kBlue, f, dom, &q, OptionMode::kGreedy, s);
  GameState w = MakeInitialState(f, 2, 9);
  GameSpec spec;
  for (int k = 0; k < 300; ++k) {
    auto cmds = blue.Decide(w);
    REQUIRE(cmds.size() == 2);
    std::vector<Action> joint;
    for (auto& c : cmds) {
      CHECK(c.action.desired_speed <= dom.max_speed());
      CHECK(c.mode.find(':') != std::string::npos);
      joint.push_back(c.action);
    }
    joint.resize(4);
    auto ev = StepGameInPlace(w, joint, spec);
    blue.Observe(w, ev);
  }
  std::int64_t total = 0;
  for (auto c : blue.option_counts()) total += c;
  CHECK(total > 0);
}

}  // namespace
}  // namespace ctf
