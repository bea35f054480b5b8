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

#include "ctf/game_core.h"

#include <cmath>
#include <stdexcept>

#include "ctf/random.h"

namespace ctf {

std::vector<std::string> GameSpec::Violations() const {
  std::vector<std::string> out = field.Violations();
  for (auto& v : vehicle.Violations()) out.push_back(std::move(v));
  if (!(horizon > 0.0)) out.push_back("horizon must be > 0");
  if (!(actuation_noise_deg >= 0.0)) {
    out.push_back("actuation_noise_deg must be >= 0");
  }
  return out;
}

bool CheckTagEligibility(const AgentState& tagger, const AgentState& target,
                         const FieldSpec& field) {
  if (tagger.team == target.team) return false;
  if (tagger.tagged || target.tagged) return false;
  if (!field.InZone(tagger.position, tagger.team)) return false;
  if (!field.InZone(target.position, tagger.team)) return false;
  return Distance(tagger.position, target.position) <= field.tag_radius;
}

namespace {

void SyncCarriedFlags(GameState& s) {
  for (FlagState& f : s.flags) {
    if (f.carrier) f.position = s.agents[*f.carrier].position;
  }
}

void ReturnFlagHome(GameState& s, Team owner, const FieldSpec& field) {
  FlagState& f = s.flag(owner);
  f.carrier.reset();
  f.at_home = true;
  f.position = field.flag_home(owner);
}

// Marks the agent tagged; a carried flag goes back to its home.
void ApplyTag(GameState& s, AgentState& a, const FieldSpec& field) {
  a.tagged = true;
  if (a.has_flag) {
    a.has_flag = false;
    ReturnFlagHome(s, Opponent(a.team), field);
  }
}

}  // namespace

std::vector<GameEvent> ResolveEventsInPlace(GameState& s,
                                            const FieldSpec& field) {
  std::vector<GameEvent> events;
  const double t = s.time;
  const int n = static_cast<int>(s.agents.size());
  SyncCarriedFlags(s);

  // Leaving the field tags the agent; the event fires on the transition.
  for (AgentState& a : s.agents) {
    bool outside = !field.InBounds(a.position);
    if (outside && !a.oob) {
      events.push_back({EventKind::kOutOfBounds, a.id, std::nullopt, t});
      if (!a.tagged) ApplyTag(s, a, field);
    }
    a.oob = outside;
  }

  // Eligibility is judged on the post-boundary snapshot. A tagger is always
  // in its own zone, so it can never be a target in the same step.
  std::vector<bool> hit(n, false);
  std::vector<GameEvent> tags;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (hit[j]) continue;
      if (CheckTagEligibility(s.agents[i], s.agents[j], field)) {
        hit[j] = true;
        EventKind kind = s.agents[j].has_flag ? EventKind::kTagWithFlag
                                              : EventKind::kTagNoFlag;
        tags.push_back({kind, i, j, t});
      }
    }
  }
  for (const GameEvent& e : tags) {
    ApplyTag(s, s.agents[*e.victim], field);
    events.push_back(e);
  }

  for (AgentState& a : s.agents) {
    if (a.tagged && Distance(a.position, field.flag_home(a.team)) <=
                        field.base_radius) {
      a.tagged = false;
    }
  }

  for (AgentState& a : s.agents) {
    if (a.tagged || a.has_flag) continue;
    Team other = Opponent(a.team);
    FlagState& f = s.flag(other);
    if (!f.at_home) continue;
    if (Distance(a.position, field.flag_home(other)) <= field.grab_radius) {
      f.at_home = false;
      f.carrier = a.id;
      f.position = a.position;
      a.has_flag = true;
      s.scores[TeamIndex(a.team)] += 1;
      events.push_back({EventKind::kGrab, a.id, std::nullopt, t});
    }
  }

  for (AgentState& a : s.agents) {
    if (!a.has_flag || !field.InBase(a.position, a.team)) continue;
    a.has_flag = false;
    ReturnFlagHome(s, Opponent(a.team), field);
    s.scores[TeamIndex(a.team)] += 2;
    events.push_back({EventKind::kCapture, a.id, std::nullopt, t});
  }
  return events;
}

StepResult ResolveEvents(GameState state, const FieldSpec& field) {
  auto events = ResolveEventsInPlace(state, field);
  return {std::move(state), std::move(events)};
}

std::vector<GameEvent> StepGameInPlace(GameState& s,
                                       std::span<const Action> actions,
                                       const GameSpec& spec) {
  if (actions.size() != s.agents.size()) {
    throw std::invalid_argument("joint action arity " +
                                std::to_string(actions.size()) +
                                " != agent count " +
                                std::to_string(s.agents.size()));
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    Action a = ClampAction(actions[i], spec.vehicle);
    if (spec.actuation_noise_deg > 0.0) {
      Rng rng(DeriveSeed(spec.noise_seed,
                         static_cast<std::uint64_t>(s.step_index) * 64 + i));
      a.desired_heading = NormalizeHeading(
          a.desired_heading + spec.actuation_noise_deg * StandardNormal(rng));
    }
    s.agents[i] = IntegrateMotion(s.agents[i], a, spec.vehicle);
  }
  s.step_index += 1;
  s.time = static_cast<double>(s.step_index) * spec.dt();
  auto events = ResolveEventsInPlace(s, spec.field);
  s.event_history.insert(s.event_history.end(), events.begin(), events.end());
  return events;
}

StepResult StepGame(GameState state, std::span<const Action> actions,
                    const GameSpec& spec) {
  auto events = StepGameInPlace(state, actions, spec);
  return {std::move(state), std::move(events)};
}

bool IsTerminal(const GameState& state, double horizon) {
  return state.time >= horizon - 1e-9;
}

}  // namespace ctf
