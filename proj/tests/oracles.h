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

// Independent reference implementations used by unit tests and the
// acceptance runner. They are written from the rules directly and share no
// code with the library beyond plain data types.

#ifndef CTF_TESTS_ORACLES_H_
#define CTF_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "ctf/game_core.h"
#include "ctf/helm.h"

namespace ctf::oracle {

inline bool InsideField(const FieldSpec& f, Vec2 p) {
  return p.x >= 0.0 && p.x <= f.width && p.y >= 0.0 && p.y <= f.depth;
}

// Half-field membership; blue owns the left half, red the right.
inline bool OnSide(const FieldSpec& f, Vec2 p, Team t) {
  if (!InsideField(f, p)) return false;
  return t == Team::kBlue ? p.x < f.width / 2.0 : p.x >= f.width / 2.0;
}

inline Vec2 Home(const FieldSpec& f, Team t) {
  return t == Team::kBlue ? Vec2{f.base_offset, f.depth / 2.0}
                          : Vec2{f.width - f.base_offset, f.depth / 2.0};
}

inline double Dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Tag rule as a conjunction of five independent clauses.
inline bool CanTag(const AgentState& tagger, const AgentState& target,
                   const FieldSpec& f) {
  const bool opposing = tagger.team != target.team;
  const bool tagger_free = !tagger.tagged;
  const bool target_free = !target.tagged;
  const bool tagger_home_side = OnSide(f, tagger.position, tagger.team);
  const bool target_on_tagger_side = OnSide(f, target.position, tagger.team);
  const bool close = Dist(tagger.position, target.position) <= f.tag_radius;
  return opposing && tagger_free && target_free && tagger_home_side &&
         target_on_tagger_side && close;
}

struct Outcome {
  GameState state;
  std::vector<GameEvent> events;
};

// Applies the five rule phases to a snapshot whose positions are already
// integrated. Each phase reads the snapshot produced by the previous one.
inline Outcome ResolveReference(GameState s, const FieldSpec& f) {
  std::vector<GameEvent> ev;
  const int n = static_cast<int>(s.agents.size());
  auto flag_of = [&](Team owner) -> FlagState& { return s.flags[TeamIndex(owner)]; };
  auto drop = [&](AgentState& a) {
    if (!a.has_flag) return;
    a.has_flag = false;
    FlagState& fl = flag_of(Opponent(a.team));
    fl.carrier.reset();
    fl.at_home = true;
    fl.position = Home(f, Opponent(a.team));
  };
  for (auto& fl : s.flags) {
    if (fl.carrier) fl.position = s.agents[*fl.carrier].position;
  }

  // Phase 1: boundary.
  for (int i = 0; i < n; ++i) {
    AgentState& a = s.agents[i];
    const bool out = !InsideField(f, a.position);
    if (out && !a.oob) {
      ev.push_back({EventKind::kOutOfBounds, i, std::nullopt, s.time});
      if (!a.tagged) {
        a.tagged = true;
        drop(a);
      }
    }
    a.oob = out;
  }

  // Phase 2: each target is taken by the lowest-id eligible tagger; all
  // pairs are judged against the same snapshot.
  const GameState snap = s;
  std::vector<std::pair<int, int>> pairs;  // (tagger, target)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (CanTag(snap.agents[i], snap.agents[j], f)) {
        pairs.emplace_back(i, j);
        break;
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto [i, j] : pairs) {
    const bool carrying = s.agents[j].has_flag;
    s.agents[j].tagged = true;
    drop(s.agents[j]);
    ev.push_back({carrying ? EventKind::kTagWithFlag : EventKind::kTagNoFlag, i, j,
                  s.time});
  }

  // Phase 3: untag at home.
  for (AgentState& a : s.agents) {
    if (a.tagged && Dist(a.position, Home(f, a.team)) <= f.base_radius) {
      a.tagged = false;
    }
  }

  // Phase 4: grabs, first come by id.
  for (int i = 0; i < n; ++i) {
    AgentState& a = s.agents[i];
    FlagState& target = flag_of(Opponent(a.team));
    if (a.tagged || a.has_flag || !target.at_home) continue;
    if (Dist(a.position, Home(f, Opponent(a.team))) > f.grab_radius) continue;
    target.at_home = false;
    target.carrier = i;
    target.position = a.position;
    a.has_flag = true;
    s.scores[TeamIndex(a.team)] += 1;
    ev.push_back({EventKind::kGrab, i, std::nullopt, s.time});
  }

  // Phase 5: captures inside the own base.
  for (int i = 0; i < n; ++i) {
    AgentState& a = s.agents[i];
    if (!a.has_flag || Dist(a.position, Home(f, a.team)) > f.base_radius) continue;
    drop(a);
    s.scores[TeamIndex(a.team)] += 2;
    ev.push_back({EventKind::kCapture, i, std::nullopt, s.time});
  }
  return {std::move(s), std::move(ev)};
}

inline bool SameOutcome(const GameState& a, const std::vector<GameEvent>& ea,
                        const GameState& b, const std::vector<GameEvent>& eb) {
  return a.agents == b.agents && a.flags == b.flags && a.scores == b.scores &&
         ea == eb;
}

// Enumerates the joint rule-configuration grid: every agent picks one of
// three positions from its own list and a status (free, tagged, carrying),
// with at most one carrier per team. 72 per team, 5184 in total.
inline std::vector<GameState> RuleGrid(const FieldSpec& f) {
  const double cy = f.depth / 2.0;
  const double mid = f.width / 2.0;
  const Vec2 blue_home{f.base_offset + 2.0, cy};
  const Vec2 red_home{f.width - f.base_offset - 2.0, cy};
  const Vec2 blue_mid{mid - 4.0, cy};
  const Vec2 red_mid{mid + 4.0, cy + 3.0};
  const std::vector<std::vector<Vec2>> spots = {
      {blue_home, blue_mid, red_mid},
      {red_mid, red_home, {f.width + 3.0, cy}},
      {red_home, red_mid, blue_mid},
      {blue_mid, blue_home, {-3.0, cy}},
  };
  enum Status { kFree, kTagged, kCarrying };
  std::vector<GameState> out;
  GameState base = MakeInitialState(f, 2, 0, 0.0);
  for (int code = 0; code < 9 * 9 * 9 * 9; ++code) {
    int c = code;
    GameState s = base;
    int carriers[2] = {0, 0};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      int v = c % 9;
      c /= 9;
      AgentState& a = s.agents[i];
      a.position = spots[i][v % 3];
      Status st = static_cast<Status>(v / 3);
      a.tagged = st == kTagged;
      a.has_flag = st == kCarrying;
      a.oob = false;
      if (a.has_flag) {
        if (++carriers[TeamIndex(a.team)] > 1) ok = false;
        FlagState& fl = s.flags[TeamIndex(Opponent(a.team))];
        fl.at_home = false;
        fl.carrier = i;
        fl.position = a.position;
      }
    }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

// Exhaustive argmax of the weighted sum; ties keep the first cell in
// heading-major order.
inline HelmCell ScanHelm(std::span<const ActiveBehavior> active,
                         const DecisionDomain& dom) {
  HelmCell best{0, 0, -1.0};
  bool first = true;
  for (int k = 0; k < dom.heading_bins(); ++k) {
    for (int j = 0; j < dom.speed_bins(); ++j) {
      double v = 0.0;
      for (const ActiveBehavior& b : active) v += b.spec.weight * b.surface.at(k, j);
      if (first || v > best.value) {
        best = {k, j, v};
        first = false;
      }
    }
  }
  return best;
}

}  // namespace ctf::oracle

#endif  // CTF_TESTS_ORACLES_H_
