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

#include "ctf/game_state.h"

#include <cmath>
#include <utility>

#include "ctf/random.h"

namespace ctf {

std::string_view TeamName(Team t) {
  return t == Team::kBlue ? "blue" : "red";
}

Vec2 FieldSpec::base_center(Team t) const {
  double x = t == Team::kBlue ? base_offset : width - base_offset;
  return {x, depth / 2.0};
}

bool FieldSpec::InBounds(Vec2 p) const {
  return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= depth;
}

bool FieldSpec::InZone(Vec2 p, Team t) const {
  if (!InBounds(p)) return false;
  return t == Team::kBlue ? p.x < midfield_x() : p.x >= midfield_x();
}

bool FieldSpec::InBase(Vec2 p, Team t) const {
  return Distance(p, base_center(t)) <= base_radius;
}

double FieldSpec::BoundaryClearance(Vec2 p) const {
  double inside = std::min({p.x, width - p.x, p.y, depth - p.y});
  if (inside >= 0.0) return inside;
  double dx = std::max({-p.x, p.x - width, 0.0});
  double dy = std::max({-p.y, p.y - depth, 0.0});
  return -std::hypot(dx, dy);
}

Vec2 FieldSpec::FromTeamFrame(Vec2 p, Team t) const {
  return t == Team::kBlue ? p : Vec2{width - p.x, p.y};
}

std::vector<std::string> FieldSpec::Violations() const {
  std::vector<std::string> out;
  if (!(width > 0.0)) out.push_back("field.width must be > 0");
  if (!(depth > 0.0)) out.push_back("field.depth must be > 0");
  if (!(tag_radius > 0.0 && tag_radius < depth / 2.0)) {
    out.push_back("field.tag_radius must be in (0, depth/2)");
  }
  if (!(grab_radius > 0.0 && grab_radius < depth / 2.0)) {
    out.push_back("field.grab_radius must be in (0, depth/2)");
  }
  if (!(base_radius > 0.0)) out.push_back("field.base_radius must be > 0");
  // Base disc must sit inside its half-field.
  if (!(base_offset >= base_radius && base_offset + base_radius < width / 2.0 &&
        base_radius <= depth / 2.0)) {
    out.push_back("field.base must lie entirely inside its team zone");
  }
  return out;
}

std::vector<int> GameState::team_members(Team t) const {
  std::vector<int> ids;
  for (const auto& a : agents) {
    if (a.team == t) ids.push_back(a.id);
  }
  return ids;
}

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::kTagNoFlag, "tag"},
    {EventKind::kTagWithFlag, "tag_with_flag"},
    {EventKind::kGrab, "grab"},
    {EventKind::kCapture, "capture"},
    {EventKind::kOutOfBounds, "out_of_bounds"},
};

}  // namespace

std::string_view EventKindName(EventKind k) {
  for (const auto& [kind, name] : kEventNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<EventKind> EventKindFromName(std::string_view name) {
  for (const auto& [kind, n] : kEventNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

GameState MakeInitialState(const FieldSpec& field, int agents_per_team,
                           std::uint64_t seed, double jitter) {
  GameState s;
  Rng rng(DeriveSeed(seed, 0x5747));
  const double spread = std::min(12.0, field.base_radius * 1.2);
  for (Team team : {Team::kBlue, Team::kRed}) {
    Vec2 base = field.base_center(team);
    double facing = team == Team::kBlue ? 90.0 : 270.0;
    for (int k = 0; k < agents_per_team; ++k) {
      AgentState a;
      a.id = static_cast<int>(s.agents.size());
      a.team = team;
      double off = agents_per_team == 1
                       ? 0.0
                       : -spread / 2.0 + spread * k / (agents_per_team - 1);
      a.position = base + Vec2{0.0, off};
      a.heading = facing;
      if (jitter > 0.0) {
        double r = jitter * std::sqrt(UniformUnit(rng));
        double th = UniformRange(rng, 0.0, 360.0);
        a.position = a.position + HeadingVector(th) * r;
        a.heading = NormalizeHeading(facing + UniformRange(rng, -15.0, 15.0));
      }
      s.agents.push_back(a);
    }
  }
  for (Team team : {Team::kBlue, Team::kRed}) {
    FlagState& f = s.flag(team);
    f.team = team;
    f.position = field.flag_home(team);
    f.at_home = true;
  }
  return s;
}

}  // namespace ctf
