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

#include "ctf/dynamics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctf {

std::vector<std::string> VehicleSpec::Violations() const {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.push_back(std::string("vehicle.") + name + " must be > 0");
    }
  };
  positive(max_speed, "max_speed");
  positive(max_turn_rate, "max_turn_rate");
  positive(speed_response, "speed_response");
  positive(dt, "dt");
  if (!(tagged_speed_factor > 0.0 && tagged_speed_factor <= 1.0)) {
    out.push_back("vehicle.tagged_speed_factor must be in (0, 1]");
  }
  if (max_turn_rate * dt >= 180.0) {
    out.push_back("vehicle.max_turn_rate * dt must be < 180");
  }
  return out;
}

Action ClampAction(const Action& a, const VehicleSpec& spec) {
  if (!std::isfinite(a.desired_speed) || !std::isfinite(a.desired_heading)) {
    throw std::invalid_argument("action has non-finite component");
  }
  if (a.desired_speed < 0.0) {
    throw std::invalid_argument("action speed must be non-negative");
  }
  return {std::min(a.desired_speed, spec.max_speed),
          NormalizeHeading(a.desired_heading)};
}

AgentState IntegrateMotion(const AgentState& s, const Action& a,
                           const VehicleSpec& spec) {
  AgentState next = s;
  double max_turn = spec.max_turn_rate * spec.dt;
  double turn = std::clamp(HeadingDelta(s.heading, a.desired_heading),
                           -max_turn, max_turn);
  next.heading = NormalizeHeading(s.heading + turn);

  double cap = s.tagged ? spec.max_speed * spec.tagged_speed_factor
                        : spec.max_speed;
  double target = std::min(a.desired_speed, cap);
  double alpha = std::min(1.0, spec.speed_response * spec.dt);
  next.speed = std::clamp(s.speed + (target - s.speed) * alpha, 0.0, cap);

  next.position = s.position + HeadingVector(next.heading) * (next.speed * spec.dt);
  return next;
}

}  // namespace ctf
