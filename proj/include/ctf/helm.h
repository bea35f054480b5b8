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

#ifndef CTF_HELM_H_
#define CTF_HELM_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctf/dynamics.h"
#include "ctf/game_state.h"

namespace ctf {

// Candidate (heading, speed) grid the helm optimizes over. Heading bin k is
// centered on k * 360 / K degrees and spans half a bin width either side.
class DecisionDomain {
 public:
  DecisionDomain();
  // Throws std::invalid_argument if heading_bins < 4 or speeds is empty,
  // unsorted or negative.
  DecisionDomain(int heading_bins, std::vector<double> speeds);

  int heading_bins() const { return heading_bins_; }
  int speed_bins() const { return static_cast<int>(speeds_.size()); }
  int cells() const { return heading_bins() * speed_bins(); }
  const std::vector<double>& speeds() const { return speeds_; }
  double speed(int j) const { return speeds_[j]; }
  double max_speed() const { return speeds_.back(); }
  double heading(int k) const { return k * 360.0 / heading_bins_; }
  Vec2 heading_vector(int k) const { return unit_[k]; }
  // Index of the first strictly positive speed, or -1.
  int lowest_moving_speed() const;

  std::vector<std::string> Violations(double vehicle_max_speed) const;

 private:
  int heading_bins_;
  std::vector<double> speeds_;
  std::vector<Vec2> unit_;
};

// Utility in [0, 100] per (heading bin, speed bin) cell, heading-major.
class ObjectiveSurface {
 public:
  ObjectiveSurface() = default;
  ObjectiveSurface(const DecisionDomain& dom, double fill);
  ObjectiveSurface(int heading_bins, int speed_bins, double fill);

  int heading_bins() const { return heading_bins_; }
  int speed_bins() const { return speed_bins_; }
  double at(int k, int j) const { return values_[k * speed_bins_ + j]; }
  double& at(int k, int j) { return values_[k * speed_bins_ + j]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  bool IsValid() const;

 private:
  int heading_bins_ = 0;
  int speed_bins_ = 0;
  std::vector<double> values_;
};

enum class BehaviorKind {
  kWaypoint,
  kLoiter,
  kCutRange,
  kAvoidCollision,
  kOpRegion,
  kStationKeep,
};

std::string_view BehaviorKindName(BehaviorKind k);
double DefaultPriorityWeight(BehaviorKind k);

struct WaypointParams {
  Vec2 target;
  double speed = 0.0;        // cruise speed; 0 means the domain maximum
  double slow_radius = 0.0;  // ramp speed down inside this range
};

// Orbit as a polygon of `vertices` points; clockwise means increasing
// compass bearing around the center.
struct LoiterParams {
  Vec2 center;
  double radius = 12.0;
  bool clockwise = true;
  int vertices = 8;
  double capture_radius = 4.0;
  double speed = 0.0;
};

struct CutRangeParams {
  int target_agent = -1;
  double lead_time = 3.0;
};

// Within `standoff` of a vehicle whose range is closing, `halt` forces the
// speed-0 cells. Within `influence`, cells closing on a vehicle are scaled
// down by proximity. `threats_only` restricts attention to untagged
// opponents able to tag us (they are in their own zone and so are we).
struct AvoidCollisionParams {
  double standoff = 5.0;
  double influence = 10.0;
  bool halt = true;
  bool opponents_only = false;
  bool threats_only = false;
};

struct OpRegionParams {
  Vec2 lo;
  Vec2 hi;
  double margin = 5.0;
};

struct StationKeepParams {
  Vec2 hold;
  double pull_distance = 10.0;
};

using BehaviorParams =
    std::variant<WaypointParams, LoiterParams, CutRangeParams,
                 AvoidCollisionParams, OpRegionParams, StationKeepParams>;

struct BehaviorSpec {
  BehaviorParams params;
  double weight = 0.0;

  BehaviorKind kind() const { return static_cast<BehaviorKind>(params.index()); }
  static BehaviorSpec With(BehaviorParams p);  // default weight for the kind
  std::vector<std::string> Violations() const;
};

struct HelmWorld {
  const GameState& world;
  const FieldSpec& field;
};

// Rates every cell of `dom` for one behavior. Throws std::invalid_argument
// when a CutRange target does not exist.
ObjectiveSurface BehaviorObjective(const BehaviorSpec& b, const AgentState& self,
                                   const HelmWorld& env,
                                   const DecisionDomain& dom);

struct ActiveBehavior {
  BehaviorSpec spec;
  ObjectiveSurface surface;
};

struct HelmCell {
  int heading_bin = 0;
  int speed_bin = 0;
  double value = 0.0;
};

// Argmax of the weight-sum of surfaces. Ties go to the lowest heading bin,
// then the lowest speed bin. Throws std::invalid_argument on an empty set.
HelmCell SolveHelmCell(std::span<const ActiveBehavior> active,
                       const DecisionDomain& dom);
Action SolveHelm(std::span<const ActiveBehavior> active,
                 const DecisionDomain& dom);

}  // namespace ctf

#endif  // CTF_HELM_H_
