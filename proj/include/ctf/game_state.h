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

#ifndef CTF_GAME_STATE_H_
#define CTF_GAME_STATE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctf/geometry.h"

namespace ctf {

enum class Team : std::uint8_t { kBlue = 0, kRed = 1 };

inline Team Opponent(Team t) { return t == Team::kBlue ? Team::kRed : Team::kBlue; }
inline int TeamIndex(Team t) { return static_cast<int>(t); }
std::string_view TeamName(Team t);

// Rectangular field [0, width] x [0, depth]. Blue owns the half x < width/2,
// red owns x >= width/2. Bases are circles on the field's long axis, offset
// from each back line; flag homes sit at the base centers.
struct FieldSpec {
  double width = 160.0;
  double depth = 80.0;
  double base_radius = 10.0;
  double base_offset = 10.0;
  double tag_radius = 10.0;
  double grab_radius = 10.0;

  double midfield_x() const { return width / 2.0; }
  Vec2 base_center(Team t) const;
  Vec2 flag_home(Team t) const { return base_center(t); }

  bool InBounds(Vec2 p) const;
  // Zones partition the in-bounds rectangle; out-of-bounds points are in no zone.
  bool InZone(Vec2 p, Team t) const;
  bool InBase(Vec2 p, Team t) const;
  // Distance from an in-bounds point to the nearest boundary line; negative
  // outside.
  double BoundaryClearance(Vec2 p) const;
  // Maps a team-relative point (x measured from the team's own back line)
  // to field coordinates.
  Vec2 FromTeamFrame(Vec2 p, Team t) const;

  // Returns one message per violated invariant; empty when valid.
  std::vector<std::string> Violations() const;
};

struct AgentState {
  int id = 0;
  Team team = Team::kBlue;
  Vec2 position;
  double heading = 0.0;  // continuous, [0, 360)
  double speed = 0.0;    // realized m/s
  bool has_flag = false;
  bool tagged = false;
  bool oob = false;

  Vec2 velocity() const { return HeadingVector(heading) * speed; }
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct FlagState {
  Team team = Team::kBlue;  // owning team
  Vec2 position;
  std::optional<int> carrier;
  bool at_home = true;
  friend bool operator==(const FlagState&, const FlagState&) = default;
};

enum class EventKind : std::uint8_t {
  kTagNoFlag,
  kTagWithFlag,
  kGrab,
  kCapture,
  kOutOfBounds,
};

std::string_view EventKindName(EventKind k);
std::optional<EventKind> EventKindFromName(std::string_view name);

struct GameEvent {
  EventKind kind = EventKind::kGrab;
  int actor = 0;
  std::optional<int> victim;  // set for tags only
  double time = 0.0;

  bool is_tag() const {
    return kind == EventKind::kTagNoFlag || kind == EventKind::kTagWithFlag;
  }
  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

struct GameState {
  double time = 0.0;
  std::int64_t step_index = 0;
  // Blue agents first (ids 0..n-1), then red (ids n..2n-1); agents[i].id == i.
  std::vector<AgentState> agents;
  std::array<FlagState, 2> flags;  // indexed by owning team
  std::array<int, 2> scores = {0, 0};
  std::vector<GameEvent> event_history;

  int agents_per_team() const { return static_cast<int>(agents.size()) / 2; }
  const FlagState& flag(Team t) const { return flags[TeamIndex(t)]; }
  FlagState& flag(Team t) { return flags[TeamIndex(t)]; }
  int score(Team t) const { return scores[TeamIndex(t)]; }
  Team team_of(int id) const { return agents.at(id).team; }
  std::vector<int> team_members(Team t) const;
};

// Initial state: every agent sits inside its home base facing the opposing
// side. `seed` jitters start positions (within `jitter` meters) and headings;
// seed 0 with jitter 0 yields the nominal layout.
GameState MakeInitialState(const FieldSpec& field, int agents_per_team,
                           std::uint64_t seed, double jitter = 2.0);

}  // namespace ctf

#endif  // CTF_GAME_STATE_H_
