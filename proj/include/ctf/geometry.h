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

#ifndef CTF_GEOMETRY_H_
#define CTF_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double Dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double Norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double Distance(Vec2 a, Vec2 b) { return Norm(a - b); }

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Headings are compass degrees: 0 points along +y, 90 along +x.
inline double NormalizeHeading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

// Signed shortest rotation from `from` to `to`, in (-180, 180].
inline double HeadingDelta(double from, double to) {
  double d = NormalizeHeading(to - from);
  return d > 180.0 ? d - 360.0 : d;
}

inline Vec2 HeadingVector(double deg) {
  double r = deg * kDegToRad;
  return {std::sin(r), std::cos(r)};
}

inline double BearingTo(Vec2 from, Vec2 to) {
  Vec2 d = to - from;
  return NormalizeHeading(std::atan2(d.x, d.y) * kRadToDeg);
}

// Perpendicular distance from `p` to the segment [a, b].
inline double DistanceToSegment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = Dot(ab, ab);
  if (len2 == 0.0) return Distance(p, a);
  double t = std::clamp(Dot(p - a, ab) / len2, 0.0, 1.0);
  return Distance(p, a + ab * t);
}

}  // namespace ctf

#endif  // CTF_GEOMETRY_H_
