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

#include "ctf/helm.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctf {

DecisionDomain::DecisionDomain()
    : DecisionDomain(36, {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) {}

DecisionDomain::DecisionDomain(int heading_bins, std::vector<double> speeds)
    : heading_bins_(heading_bins), speeds_(std::move(speeds)) {
  auto problems = Violations(speeds_.empty() ? 0.0 : speeds_.back());
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  unit_.reserve(heading_bins_);
  for (int k = 0; k < heading_bins_; ++k) unit_.push_back(HeadingVector(heading(k)));
}

int DecisionDomain::lowest_moving_speed() const {
  for (int j = 0; j < speed_bins(); ++j) {
    if (speeds_[j] > 0.0) return j;
  }
  return -1;
}

std::vector<std::string> DecisionDomain::Violations(
    double vehicle_max_speed) const {
  std::vector<std::string> out;
  if (heading_bins_ < 4) out.push_back("domain.heading_bins must be >= 4");
  if (speeds_.empty()) {
    out.push_back("domain.speeds must be non-empty");
    return out;
  }
  if (!std::is_sorted(speeds_.begin(), speeds_.end())) {
    out.push_back("domain.speeds must be sorted ascending");
  }
  for (double s : speeds_) {
    if (!std::isfinite(s) || s < 0.0 || s > vehicle_max_speed + 1e-12) {
      out.push_back("domain.speeds must lie within [0, max_speed]");
      break;
    }
  }
  return out;
}

ObjectiveSurface::ObjectiveSurface(const DecisionDomain& dom, double fill)
    : ObjectiveSurface(dom.heading_bins(), dom.speed_bins(), fill) {}

ObjectiveSurface::ObjectiveSurface(int heading_bins, int speed_bins, double fill)
    : heading_bins_(heading_bins),
      speed_bins_(speed_bins),
      values_(static_cast<std::size_t>(heading_bins) * speed_bins, fill) {}

bool ObjectiveSurface::IsValid() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 100.0;
  });
}

std::string_view BehaviorKindName(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::kWaypoint: return "Waypoint";
    case BehaviorKind::kLoiter: return "Loiter";
    case BehaviorKind::kCutRange: return "CutRange";
    case BehaviorKind::kAvoidCollision: return "AvoidCollision";
    case BehaviorKind::kOpRegion: return "OpRegion";
    case BehaviorKind::kStationKeep: return "StationKeep";
  }
  return "unknown";
}

double DefaultPriorityWeight(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::kWaypoint:
    case BehaviorKind::kLoiter:
    case BehaviorKind::kCutRange: return 100.0;
    case BehaviorKind::kAvoidCollision: return 200.0;
    case BehaviorKind::kOpRegion: return 300.0;
    case BehaviorKind::kStationKeep: return 50.0;
  }
  return 0.0;
}

BehaviorSpec BehaviorSpec::With(BehaviorParams p) {
  BehaviorSpec b{std::move(p), 0.0};
  b.weight = DefaultPriorityWeight(b.kind());
  return b;
}

std::vector<std::string> BehaviorSpec::Violations() const {
  std::vector<std::string> out;
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    out.push_back("behavior weight must be finite and >= 0");
  }
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LoiterParams>) {
          if (!(p.radius > 0.0)) out.push_back("loiter radius must be > 0");
          if (p.vertices < 3) out.push_back("loiter needs >= 3 vertices");
          if (!(p.capture_radius > 0.0)) {
            out.push_back("loiter capture_radius must be > 0");
          }
        } else if constexpr (std::is_same_v<P, AvoidCollisionParams>) {
          if (!(p.standoff > 0.0)) out.push_back("avoid standoff must be > 0");
          if (!(p.influence >= p.standoff)) {
            out.push_back("avoid influence must be >= standoff");
          }
        } else if constexpr (std::is_same_v<P, OpRegionParams>) {
          if (!(p.hi.x > p.lo.x && p.hi.y > p.lo.y)) {
            out.push_back("op region box is degenerate");
          }
          if (!(p.margin >= 0.0)) out.push_back("op region margin must be >= 0");
        } else if constexpr (std::is_same_v<P, StationKeepParams>) {
          if (!(p.pull_distance > 0.0)) {
            out.push_back("station-keep pull_distance must be > 0");
          }
        } else if constexpr (std::is_same_v<P, CutRangeParams>) {
          if (!(p.lead_time >= 0.0)) out.push_back("cut-range lead_time must be >= 0");
        } else if constexpr (std::is_same_v<P, WaypointParams>) {
          if (!(p.speed >= 0.0)) out.push_back("waypoint speed must be >= 0");
        }
      },
      params);
  return out;
}

namespace {

// Pursuit surface toward `target`: heading score (1 + cos error) / 2,
// speed score peaks at the desired speed.
ObjectiveSurface PursuitSurface(Vec2 self, Vec2 target, double desired,
                                const DecisionDomain& dom) {
  ObjectiveSurface out(dom, 0.0);
  Vec2 to = target - self;
  double d = Norm(to);
  Vec2 u = d > 1e-9 ? to * (1.0 / d) : Vec2{0.0, 0.0};
  double vmax = dom.max_speed();
  for (int k = 0; k < dom.heading_bins(); ++k) {
    double hs = d > 1e-9 ? 0.5 * (1.0 + Dot(dom.heading_vector(k), u)) : 0.5;
    for (int j = 0; j < dom.speed_bins(); ++j) {
      double s = dom.speed(j);
      double ss = vmax > 0.0 ? 1.0 - std::abs(s - desired) / vmax : 1.0;
      out.at(k, j) = s > 0.0 ? 100.0 * hs * ss : 100.0 * ss;
    }
  }
  return out;
}

double CruiseSpeed(double requested, const DecisionDomain& dom) {
  return requested > 0.0 ? std::min(requested, dom.max_speed()) : dom.max_speed();
}

ObjectiveSurface WaypointSurface(const WaypointParams& p, const AgentState& self,
                                 const DecisionDomain& dom) {
  double desired = CruiseSpeed(p.speed, dom);
  double d = Distance(self.position, p.target);
  if (p.slow_radius > 0.0 && d < p.slow_radius) desired *= d / p.slow_radius;
  return PursuitSurface(self.position, p.target, desired, dom);
}

Vec2 LoiterTarget(const LoiterParams& p, Vec2 self) {
  const int n = p.vertices;
  const double step = 360.0 / n;
  auto vertex = [&](int m) {
    m = ((m % n) + n) % n;
    return p.center + HeadingVector(m * step) * p.radius;
  };
  double phi = Distance(self, p.center) > 1e-9 ? BearingTo(p.center, self) : 0.0;
  int next = p.clockwise ? static_cast<int>(std::floor(phi / step)) + 1
                         : static_cast<int>(std::ceil(phi / step)) - 1;
  if (Distance(self, vertex(next)) <= p.capture_radius) {
    next += p.clockwise ? 1 : -1;
  }
  return vertex(next);
}

ObjectiveSurface CutRangeSurface(const CutRangeParams& p, const AgentState& self,
                                 const GameState& world,
                                 const DecisionDomain& dom) {
  if (p.target_agent < 0 ||
      p.target_agent >= static_cast<int>(world.agents.size())) {
    throw std::invalid_argument("CutRange target agent " +
                                std::to_string(p.target_agent) +
                                " does not exist");
  }
  const AgentState& tgt = world.agents[p.target_agent];
  double d = Distance(self.position, tgt.position);
  double lead = std::min(p.lead_time, d / std::max(dom.max_speed(), 1e-9));
  Vec2 intercept = tgt.position + tgt.velocity() * lead;
  return PursuitSurface(self.position, intercept, dom.max_speed(), dom);
}

bool IsThreat(const AgentState& self, const AgentState& other,
              const FieldSpec& field) {
  return other.team != self.team && !other.tagged &&
         field.InZone(other.position, other.team) &&
         field.InZone(self.position, other.team);
}

ObjectiveSurface AvoidSurface(const AvoidCollisionParams& p,
                              const AgentState& self, const HelmWorld& env,
                              const DecisionDomain& dom) {
  ObjectiveSurface out(dom, 100.0);
  const double vmax = dom.max_speed();
  for (const AgentState& other : env.world.agents) {
    if (other.id == self.id) continue;
    if (p.opponents_only && other.team == self.team) continue;
    if (p.threats_only && !IsThreat(self, other, env.field)) continue;
    Vec2 rel = other.position - self.position;
    double d = Norm(rel);
    if (d > p.influence) continue;
    Vec2 u = d > 1e-9 ? rel * (1.0 / d) : HeadingVector(self.heading);
    double range_rate = Dot(other.velocity() - self.velocity(), u);
    if (p.halt && d <= p.standoff && range_rate < -0.05) {
      for (int k = 0; k < dom.heading_bins(); ++k) {
        for (int j = 0; j < dom.speed_bins(); ++j) {
          out.at(k, j) = dom.speed(j) > 0.0 ? 0.0 : 100.0;
        }
      }
      return out;
    }
    double prox = p.influence > p.standoff
                      ? std::clamp((p.influence - d) / (p.influence - p.standoff),
                                   0.0, 1.0)
                      : 1.0;
    for (int k = 0; k < dom.heading_bins(); ++k) {
      double toward = std::max(0.0, Dot(dom.heading_vector(k), u));
      for (int j = 0; j < dom.speed_bins(); ++j) {
        double s = dom.speed(j);
        if (s <= 0.0 || vmax <= 0.0) continue;
        out.at(k, j) *= 1.0 - prox * toward * (s / vmax);
      }
    }
  }
  return out;
}

ObjectiveSurface OpRegionSurface(const OpRegionParams& p, const AgentState& self,
                                 const DecisionDomain& dom) {
  Vec2 pos = self.position;
  double clearance = std::min({pos.x - p.lo.x, p.hi.x - pos.x, pos.y - p.lo.y,
                               p.hi.y - pos.y});
  if (clearance >= p.margin) return ObjectiveSurface(dom, 100.0);

  double mx = std::min(p.margin, (p.hi.x - p.lo.x) / 2.0);
  double my = std::min(p.margin, (p.hi.y - p.lo.y) / 2.0);
  Vec2 inner{std::clamp(pos.x, p.lo.x + mx, p.hi.x - mx),
             std::clamp(pos.y, p.lo.y + my, p.hi.y - my)};
  if (Distance(inner, pos) < 1e-9) {
    inner = {(p.lo.x + p.hi.x) / 2.0, (p.lo.y + p.hi.y) / 2.0};
  }
  Vec2 u = inner - pos;
  u = u * (1.0 / std::max(Norm(u), 1e-12));

  ObjectiveSurface out(dom, 0.0);
  const int slow = dom.lowest_moving_speed();
  const double s_low = slow >= 0 ? dom.speed(slow) : 0.0;
  const double span = dom.max_speed() - s_low;
  for (int k = 0; k < dom.heading_bins(); ++k) {
    double hs = std::max(0.0, Dot(dom.heading_vector(k), u));
    for (int j = 0; j < dom.speed_bins(); ++j) {
      double s = dom.speed(j);
      if (s <= 0.0) {
        out.at(k, j) = 60.0;
      } else {
        double taper = span > 0.0 ? 1.0 - 0.6 * (s - s_low) / span : 1.0;
        out.at(k, j) = 100.0 * hs * taper;
      }
    }
  }
  return out;
}

ObjectiveSurface StationKeepSurface(const StationKeepParams& p,
                                    const AgentState& self,
                                    const DecisionDomain& dom) {
  double d = Distance(self.position, p.hold);
  double pull = std::clamp(d / p.pull_distance, 0.0, 1.0);
  ObjectiveSurface out =
      PursuitSurface(self.position, p.hold, dom.max_speed() * pull, dom);
  for (int k = 0; k < dom.heading_bins(); ++k) {
    for (int j = 0; j < dom.speed_bins(); ++j) {
      out.at(k, j) =
          dom.speed(j) > 0.0 ? out.at(k, j) * pull : 100.0 * (1.0 - pull);
    }
  }
  return out;
}

}  // namespace

ObjectiveSurface BehaviorObjective(const BehaviorSpec& b, const AgentState& self,
                                   const HelmWorld& env,
                                   const DecisionDomain& dom) {
  return std::visit(
      [&](const auto& p) -> ObjectiveSurface {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, WaypointParams>) {
          return WaypointSurface(p, self, dom);
        } else if constexpr (std::is_same_v<P, LoiterParams>) {
          WaypointParams wp{LoiterTarget(p, self.position), p.speed, 0.0};
          return WaypointSurface(wp, self, dom);
        } else if constexpr (std::is_same_v<P, CutRangeParams>) {
          return CutRangeSurface(p, self, env.world, dom);
        } else if constexpr (std::is_same_v<P, AvoidCollisionParams>) {
          return AvoidSurface(p, self, env, dom);
        } else if constexpr (std::is_same_v<P, OpRegionParams>) {
          return OpRegionSurface(p, self, dom);
        } else {
          return StationKeepSurface(p, self, dom);
        }
      },
      b.params);
}

HelmCell SolveHelmCell(std::span<const ActiveBehavior> active,
                       const DecisionDomain& dom) {
  if (active.empty()) throw std::invalid_argument("helm has no active behaviors");
  std::vector<double> total(dom.cells(), 0.0);
  for (const ActiveBehavior& b : active) {
    const auto& v = b.surface.values();
    if (static_cast<int>(v.size()) != dom.cells()) {
      throw std::invalid_argument("objective surface does not match domain");
    }
    if (b.spec.weight == 0.0) continue;
    for (int c = 0; c < dom.cells(); ++c) total[c] += b.spec.weight * v[c];
  }
  int best = 0;
  for (int c = 1; c < dom.cells(); ++c) {
    if (total[c] > total[best]) best = c;
  }
  return {best / dom.speed_bins(), best % dom.speed_bins(), total[best]};
}

Action SolveHelm(std::span<const ActiveBehavior> active,
                 const DecisionDomain& dom) {
  HelmCell c = SolveHelmCell(active, dom);
  return {dom.speed(c.speed_bin), dom.heading(c.heading_bin)};
}

}  // namespace ctf
