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

#ifndef CTF_DYNAMICS_H_
#define CTF_DYNAMICS_H_

#include <string>
#include <vector>

#include "ctf/game_state.h"

namespace ctf {

// Kinematic limits of a surface vehicle. First-order unicycle: heading is
// rate-limited, speed relaxes toward the command with a first-order lag.
struct VehicleSpec {
  double max_speed = 2.5;         // m/s
  double max_turn_rate = 40.0;    // deg/s
  double speed_response = 0.5;    // 1/s
  double dt = 0.1;                // s
  double tagged_speed_factor = 0.5;

  std::vector<std::string> Violations() const;
};

struct Action {
  double desired_speed = 0.0;    // m/s, >= 0
  double desired_heading = 0.0;  // degrees
  friend bool operator==(const Action&, const Action&) = default;
};

// Clamps speed into [0, max_speed] and wraps heading into [0, 360).
// Throws std::invalid_argument on non-finite input or negative speed.
Action ClampAction(const Action& a, const VehicleSpec& spec);

// Advances one step of length spec.dt. `a` must already be clamped.
AgentState IntegrateMotion(const AgentState& s, const Action& a,
                           const VehicleSpec& spec);

}  // namespace ctf

#endif  // CTF_DYNAMICS_H_
