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

// Shorthand for assembling mode trees in code.

#ifndef CTF_TREE_BUILD_H_
#define CTF_TREE_BUILD_H_

#include <string>
#include <utility>
#include <vector>

#include "ctf/mode_tree.h"

namespace ctf::build {

inline Condition When(Predicate p, double param = 0.0) {
  return Condition::Atom(p, param);
}

inline ModeNode Leaf(std::string name, Condition when,
                     std::vector<BehaviorTemplate> behaviors) {
  ModeNode n;
  n.name = std::move(name);
  n.when = std::move(when);
  n.behaviors = std::move(behaviors);
  return n;
}

inline PointRef At(Anchor a, Vec2 offset = {}, double param = 0.0) {
  return {a, offset, param};
}

inline PointRef Fixed(double x, double y) { return {Anchor::kFixed, {x, y}, 0.0}; }

inline BehaviorTemplate GoTo(PointRef p, double speed = 0.0,
                             double slow_radius = 0.0) {
  BehaviorTemplate t;
  t.kind = BehaviorKind::kWaypoint;
  t.point = p;
  t.speed = speed;
  t.slow_radius = slow_radius;
  return t;
}

inline BehaviorTemplate Hold(PointRef p) {
  BehaviorTemplate t;
  t.kind = BehaviorKind::kStationKeep;
  t.point = p;
  return t;
}

inline BehaviorTemplate Orbit(PointRef center, double radius, double speed) {
  BehaviorTemplate t;
  t.kind = BehaviorKind::kLoiter;
  t.point = center;
  t.radius = radius;
  t.speed = speed;
  return t;
}

inline BehaviorTemplate Chase(AgentSelector who) {
  BehaviorTemplate t;
  t.kind = BehaviorKind::kCutRange;
  t.agent = who;
  return t;
}

// Soft avoidance of opponents able to tag us.
inline BehaviorTemplate Evade(double standoff, double influence, double weight) {
  BehaviorTemplate t;
  t.kind = BehaviorKind::kAvoidCollision;
  t.standoff = standoff;
  t.influence = influence;
  t.halt = false;
  t.threats_only = true;
  t.weight = weight;
  return t;
}

inline ModeTree Tree(std::vector<ModeNode> modes, ModeNode fallback) {
  ModeTree t;
  t.modes = std::move(modes);
  t.fallback = std::move(fallback);
  return t;
}

}  // namespace ctf::build

#endif  // CTF_TREE_BUILD_H_
