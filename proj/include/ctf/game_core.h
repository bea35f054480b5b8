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

#ifndef CTF_GAME_CORE_H_
#define CTF_GAME_CORE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctf/dynamics.h"
#include "ctf/game_state.h"

namespace ctf {

// Static parameters of the transition function.
struct GameSpec {
  FieldSpec field;
  VehicleSpec vehicle;
  double horizon = 600.0;  // seconds
  // Optional seeded heading noise on commanded actions (std-dev, degrees).
  double actuation_noise_deg = 0.0;
  std::uint64_t noise_seed = 0;

  double dt() const { return vehicle.dt; }
  std::vector<std::string> Violations() const;
};

// True iff the tagger is untagged and in its own zone, the target is untagged
// and in the tagger's zone, and they are within tag_radius (inclusive).
// Agents on the same team are never eligible.
bool CheckTagEligibility(const AgentState& tagger, const AgentState& target,
                         const FieldSpec& field);

// Applies out-of-bounds, tags, untags, grabs and captures, in that order,
// ties by ascending agent id. Each target is tagged at most once per step,
// by the lowest-id eligible tagger. Returns the events in emission order;
// scores are updated alongside. Does not append to state.event_history.
std::vector<GameEvent> ResolveEventsInPlace(GameState& state,
                                            const FieldSpec& field);

struct StepResult {
  GameState state;
  std::vector<GameEvent> events;
};

StepResult ResolveEvents(GameState state, const FieldSpec& field);

// One transition: clamps and integrates every agent's action, advances the
// clock, resolves events and appends them to state.event_history.
// Throws std::invalid_argument when actions.size() != agents.size().
std::vector<GameEvent> StepGameInPlace(GameState& state,
                                       std::span<const Action> actions,
                                       const GameSpec& spec);

StepResult StepGame(GameState state, std::span<const Action> actions,
                    const GameSpec& spec);

bool IsTerminal(const GameState& state, double horizon);

}  // namespace ctf

#endif  // CTF_GAME_CORE_H_
