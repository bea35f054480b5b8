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

#include "ctf/config.h"

#include <zlib.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ctf {

using json = nlohmann::ordered_json;

namespace {

using Errors = std::vector<std::string>;

std::string Join(const Errors& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += "; ";
    s += e[i];
  }
  return s;
}

// Walks one JSON object, recording type errors and unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path, Errors& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) {
      errors_.push_back(Where("") + "must be an object");
      ok_ = false;
    }
  }

  std::string Where(std::string_view key) const {
    if (key.empty()) return path_.empty() ? std::string("config: ") : path_ + ": ";
    return (path_.empty() ? std::string(key) : path_ + "." + std::string(key)) + ": ";
  }
  std::string Path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* Get(std::string_view key) {
    if (!ok_) return nullptr;
    seen_.insert(std::string(key));
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool Has(std::string_view key) const {
    return ok_ && j_.find(key) != j_.end();
  }

  void Double(std::string_view key, double& out) {
    if (const json* v = Get(key)) {
      if (v->is_number()) {
        out = v->get<double>();
        if (!std::isfinite(out)) errors_.push_back(Where(key) + "must be finite");
      } else {
        errors_.push_back(Where(key) + "expected a number");
      }
    }
  }

  void Int(std::string_view key, int& out) {
    if (const json* v = Get(key)) {
      if (v->is_number_integer()) {
        auto x = v->get<std::int64_t>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
          errors_.push_back(Where(key) + "out of range");
        } else {
          out = static_cast<int>(x);
        }
      } else {
        errors_.push_back(Where(key) + "expected an integer");
      }
    }
  }

  void U64(std::string_view key, std::uint64_t& out, bool required) {
    const json* v = Get(key);
    if (!v) {
      if (required && ok_) errors_.push_back(Where(key) + "is required");
      return;
    }
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
    } else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<std::int64_t>());
    } else {
      errors_.push_back(Where(key) + "expected a non-negative integer");
    }
  }

  void Bool(std::string_view key, bool& out) {
    if (const json* v = Get(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        errors_.push_back(Where(key) + "expected true or false");
      }
    }
  }

  void String(std::string_view key, std::string& out) {
    if (const json* v = Get(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        errors_.push_back(Where(key) + "expected a string");
      }
    }
  }

  void Doubles(std::string_view key, std::vector<double>& out) {
    if (const json* v = Get(key)) {
      if (!v->is_array()) {
        errors_.push_back(Where(key) + "expected an array of numbers");
        return;
      }
      std::vector<double> r;
      for (const auto& x : *v) {
        if (!x.is_number()) {
          errors_.push_back(Where(key) + "expected an array of numbers");
          return;
        }
        r.push_back(x.get<double>());
      }
      out = std::move(r);
    }
  }

  void Finish() {
    if (!ok_) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        errors_.push_back(Where(it.key()) + "unknown key");
      }
    }
  }

  bool ok() const { return ok_; }
  Errors& errors() { return errors_; }

 private:
  const json& j_;
  std::string path_;
  Errors& errors_;
  std::set<std::string> seen_;
  bool ok_ = true;
};

template <typename S>
struct DoubleField {
  const char* name;
  double S::*member;
};

constexpr DoubleField<FieldSpec> kFieldFields[] = {
    {"width", &FieldSpec::width},
    {"depth", &FieldSpec::depth},
    {"base_radius", &FieldSpec::base_radius},
    {"base_offset", &FieldSpec::base_offset},
    {"tag_radius", &FieldSpec::tag_radius},
    {"grab_radius", &FieldSpec::grab_radius},
};

constexpr DoubleField<VehicleSpec> kVehicleFields[] = {
    {"max_speed", &VehicleSpec::max_speed},
    {"max_turn_rate", &VehicleSpec::max_turn_rate},
    {"speed_response", &VehicleSpec::speed_response},
    {"dt", &VehicleSpec::dt},
    {"tagged_speed_factor", &VehicleSpec::tagged_speed_factor},
};

using Cal = StrategyCalibration;
constexpr DoubleField<Cal> kCalibrationFields[] = {
    {"defender_loiter_offset", &Cal::defender_loiter_offset},
    {"defender_loiter_radius", &Cal::defender_loiter_radius},
    {"defender_loiter_speed", &Cal::defender_loiter_speed},
    {"guard_offset", &Cal::guard_offset},
    {"evade_standoff", &Cal::evade_standoff},
    {"evade_influence", &Cal::evade_influence},
    {"evade_weight", &Cal::evade_weight},
    {"slot_spacing", &Cal::slot_spacing},
    {"observation_window", &Cal::observation_window},
    {"staging_lead", &Cal::staging_lead},
    {"staging_depth", &Cal::staging_depth},
    {"block_distance", &Cal::block_distance},
    {"approach_tolerance_deg", &Cal::approach_tolerance_deg},
    {"approach_hold", &Cal::approach_hold},
    {"block_line_factor", &Cal::block_line_factor},
    {"circumvent_factor", &Cal::circumvent_factor},
    {"probe_depth", &Cal::probe_depth},
    {"probe_pause", &Cal::probe_pause},
    {"pursuit_range_factor", &Cal::pursuit_range_factor},
    {"pursuit_heading_tolerance_deg", &Cal::pursuit_heading_tolerance_deg},
    {"attack_timing_distance", &Cal::attack_timing_distance},
    {"herd_offset", &Cal::herd_offset},
    {"lure_distance", &Cal::lure_distance},
    {"retreat_trigger", &Cal::retreat_trigger},
    {"opening_distance", &Cal::opening_distance},
    {"wait_depth", &Cal::wait_depth},
};

constexpr EventKind kEventKinds[] = {EventKind::kTagNoFlag, EventKind::kTagWithFlag,
                                     EventKind::kGrab, EventKind::kCapture,
                                     EventKind::kOutOfBounds};

template <typename S, std::size_t N>
void ReadFields(Reader& r, const DoubleField<S> (&fields)[N], S& out) {
  for (const auto& f : fields) r.Double(f.name, out.*(f.member));
  r.Finish();
}

template <typename S, std::size_t N>
json WriteFields(const DoubleField<S> (&fields)[N], const S& in) {
  json j = json::object();
  for (const auto& f : fields) j[f.name] = in.*(f.member);
  return j;
}

std::optional<BehaviorKind> BehaviorKindFromName(std::string_view n) {
  for (int i = 0; i <= static_cast<int>(BehaviorKind::kStationKeep); ++i) {
    auto k = static_cast<BehaviorKind>(i);
    if (BehaviorKindName(k) == n) return k;
  }
  return std::nullopt;
}

// --- mode trees -------------------------------------------------------------

Condition ReadCondition(const json& j, const std::string& path, Errors& errs) {
  if (j.is_string()) {
    auto p = PredicateFromName(j.get<std::string>());
    if (!p) errs.push_back(path + ": unknown predicate '" + j.get<std::string>() + "'");
    return Condition::Atom(p.value_or(Predicate::kAlways));
  }
  Reader r(j, path, errs);
  if (!r.ok()) return {};
  Condition c;
  int forms = r.Has("predicate") + r.Has("all") + r.Has("any") + r.Has("not");
  if (forms != 1) {
    errs.push_back(path + ": condition needs exactly one of predicate, all, any, not");
    return c;
  }
  if (const json* p = r.Get("predicate")) {
    auto pred = p->is_string() ? PredicateFromName(p->get<std::string>()) : std::nullopt;
    if (!pred) errs.push_back(path + ".predicate: unknown predicate");
    c = Condition::Atom(pred.value_or(Predicate::kAlways));
    r.Double("param", c.param);
  }
  for (const char* key : {"all", "any"}) {
    if (const json* a = r.Get(key)) {
      if (!a->is_array()) {
        errs.push_back(r.Path(key) + ": expected an array");
        continue;
      }
      std::vector<Condition> args;
      for (std::size_t i = 0; i < a->size(); ++i) {
        args.push_back(
            ReadCondition((*a)[i], r.Path(key) + "[" + std::to_string(i) + "]", errs));
      }
      c = std::string_view(key) == "all" ? Condition::All(std::move(args))
                                         : Condition::Any(std::move(args));
    }
  }
  if (const json* n = r.Get("not")) c = Condition::Not(ReadCondition(*n, r.Path("not"), errs));
  r.Finish();
  return c;
}

json WriteCondition(const Condition& c) {
  switch (c.op) {
    case Condition::Op::kAtom: {
      json j = {{"predicate", PredicateName(c.predicate)}};
      if (c.param != 0.0) j["param"] = c.param;
      return j;
    }
    case Condition::Op::kAll:
    case Condition::Op::kAny: {
      json a = json::array();
      for (const auto& x : c.args) a.push_back(WriteCondition(x));
      return {{c.op == Condition::Op::kAll ? "all" : "any", a}};
    }
    case Condition::Op::kNot:
      return {{"not", WriteCondition(c.args.at(0))}};
  }
  return json::object();
}

PointRef ReadPoint(const json& j, const std::string& path, Errors& errs) {
  PointRef p;
  Reader r(j, path, errs);
  std::string anchor = std::string(AnchorName(p.anchor));
  r.String("anchor", anchor);
  if (auto a = AnchorFromName(anchor)) {
    p.anchor = *a;
  } else {
    errs.push_back(path + ".anchor: unknown anchor '" + anchor + "'");
  }
  std::vector<double> off = {0.0, 0.0};
  r.Doubles("offset", off);
  if (off.size() != 2) {
    errs.push_back(path + ".offset: expected [x, y]");
  } else {
    p.offset = {off[0], off[1]};
  }
  r.Double("param", p.param);
  r.Finish();
  return p;
}

json WritePoint(const PointRef& p) {
  json j = {{"anchor", AnchorName(p.anchor)}, {"offset", {p.offset.x, p.offset.y}}};
  if (p.param != 0.0) j["param"] = p.param;
  return j;
}

BehaviorTemplate ReadBehavior(const json& j, const std::string& path, Errors& errs) {
  BehaviorTemplate t;
  Reader r(j, path, errs);
  if (!r.ok()) return t;
  std::string kind;
  r.String("kind", kind);
  auto k = BehaviorKindFromName(kind);
  if (!k) {
    errs.push_back(path + ".kind: unknown behavior '" + kind + "'");
    r.Finish();
    return t;
  }
  t.kind = *k;
  if (r.Has("weight")) {
    double w = 0.0;
    r.Double("weight", w);
    t.weight = w;
  }
  auto point = [&] {
    if (const json* p = r.Get("point")) t.point = ReadPoint(*p, r.Path("point"), errs);
  };
  switch (t.kind) {
    case BehaviorKind::kWaypoint:
      point();
      r.Double("speed", t.speed);
      r.Double("slow_radius", t.slow_radius);
      break;
    case BehaviorKind::kLoiter:
      point();
      r.Double("radius", t.radius);
      r.Bool("clockwise", t.clockwise);
      r.Int("vertices", t.vertices);
      r.Double("capture_radius", t.capture_radius);
      r.Double("speed", t.speed);
      break;
    case BehaviorKind::kCutRange: {
      std::string who = std::string(AgentSelectorName(t.agent));
      r.String("agent", who);
      if (auto s = AgentSelectorFromName(who)) {
        t.agent = *s;
      } else {
        errs.push_back(path + ".agent: unknown selector '" + who + "'");
      }
      r.Double("lead_time", t.lead_time);
      break;
    }
    case BehaviorKind::kAvoidCollision:
      r.Double("standoff", t.standoff);
      r.Double("influence", t.influence);
      r.Bool("halt", t.halt);
      r.Bool("opponents_only", t.opponents_only);
      r.Bool("threats_only", t.threats_only);
      break;
    case BehaviorKind::kOpRegion:
      r.Double("margin", t.margin);
      break;
    case BehaviorKind::kStationKeep:
      point();
      r.Double("pull_distance", t.pull_distance);
      break;
  }
  r.Finish();
  return t;
}

json WriteBehavior(const BehaviorTemplate& t) {
  json j = {{"kind", BehaviorKindName(t.kind)}};
  if (t.weight) j["weight"] = *t.weight;
  switch (t.kind) {
    case BehaviorKind::kWaypoint:
      j["point"] = WritePoint(t.point);
      j["speed"] = t.speed;
      j["slow_radius"] = t.slow_radius;
      break;
    case BehaviorKind::kLoiter:
      j["point"] = WritePoint(t.point);
      j["radius"] = t.radius;
      j["clockwise"] = t.clockwise;
      j["vertices"] = t.vertices;
      j["capture_radius"] = t.capture_radius;
      j["speed"] = t.speed;
      break;
    case BehaviorKind::kCutRange:
      j["agent"] = AgentSelectorName(t.agent);
      j["lead_time"] = t.lead_time;
      break;
    case BehaviorKind::kAvoidCollision:
      j["standoff"] = t.standoff;
      j["influence"] = t.influence;
      j["halt"] = t.halt;
      j["opponents_only"] = t.opponents_only;
      j["threats_only"] = t.threats_only;
      break;
    case BehaviorKind::kOpRegion:
      j["margin"] = t.margin;
      break;
    case BehaviorKind::kStationKeep:
      j["point"] = WritePoint(t.point);
      j["pull_distance"] = t.pull_distance;
      break;
  }
  return j;
}

std::vector<BehaviorTemplate> ReadBehaviors(const json* j, const std::string& path,
                                            Errors& errs) {
  std::vector<BehaviorTemplate> out;
  if (!j) return out;
  if (!j->is_array()) {
    errs.push_back(path + ": expected an array");
    return out;
  }
  for (std::size_t i = 0; i < j->size(); ++i) {
    out.push_back(ReadBehavior((*j)[i], path + "[" + std::to_string(i) + "]", errs));
  }
  return out;
}

ModeNode ReadNode(const json& j, const std::string& path, Errors& errs) {
  ModeNode n;
  Reader r(j, path, errs);
  if (!r.ok()) return n;
  r.String("name", n.name);
  if (const json* w = r.Get("when")) n.when = ReadCondition(*w, r.Path("when"), errs);
  n.behaviors = ReadBehaviors(r.Get("behaviors"), r.Path("behaviors"), errs);
  if (const json* c = r.Get("children")) {
    if (!c->is_array()) {
      errs.push_back(r.Path("children") + ": expected an array");
    } else {
      for (std::size_t i = 0; i < c->size(); ++i) {
        n.children.push_back(ReadNode(
            (*c)[i], r.Path("children") + "[" + std::to_string(i) + "]", errs));
      }
    }
  }
  r.Finish();
  return n;
}

json WriteNode(const ModeNode& n) {
  json j = {{"name", n.name}};
  if (!(n.when.op == Condition::Op::kAtom && n.when.predicate == Predicate::kAlways)) {
    j["when"] = WriteCondition(n.when);
  }
  if (!n.behaviors.empty()) {
    json b = json::array();
    for (const auto& t : n.behaviors) b.push_back(WriteBehavior(t));
    j["behaviors"] = b;
  }
  if (!n.children.empty()) {
    json c = json::array();
    for (const auto& x : n.children) c.push_back(WriteNode(x));
    j["children"] = c;
  }
  return j;
}

ModeTree ReadTree(const json& j, const std::string& path, Errors& errs) {
  ModeTree t;
  Reader r(j, path, errs);
  if (!r.ok()) return t;
  if (const json* m = r.Get("modes")) {
    if (!m->is_array()) {
      errs.push_back(r.Path("modes") + ": expected an array");
    } else {
      for (std::size_t i = 0; i < m->size(); ++i) {
        t.modes.push_back(
            ReadNode((*m)[i], r.Path("modes") + "[" + std::to_string(i) + "]", errs));
      }
    }
  }
  if (const json* f = r.Get("fallback")) {
    t.fallback = ReadNode(*f, r.Path("fallback"), errs);
  } else {
    errs.push_back(r.Path("fallback") + ": is required");
  }
  if (r.Has("mandatory")) {
    t.mandatory = ReadBehaviors(r.Get("mandatory"), r.Path("mandatory"), errs);
  }
  r.Finish();
  for (const auto& v : t.Violations()) errs.push_back(path + ": " + v);
  return t;
}

json WriteTree(const ModeTree& t) {
  json m = json::array();
  for (const auto& n : t.modes) m.push_back(WriteNode(n));
  json man = json::array();
  for (const auto& b : t.mandatory) man.push_back(WriteBehavior(b));
  return {{"modes", m}, {"fallback", WriteNode(t.fallback)}, {"mandatory", man}};
}

// --- policies ---------------------------------------------------------------

constexpr std::pair<PolicyKind, std::string_view> kPolicyKindNames[] = {
    {PolicyKind::kClassifier, "Classifier"},
    {PolicyKind::kRoles, "Roles"},
    {PolicyKind::kCustom, "Custom"},
    {PolicyKind::kOptions, "Options"},
    {PolicyKind::kRandomOptions, "RandomOptions"},
    {PolicyKind::kArchetype, "Archetype"},
};

std::string StrategyFieldName(const PolicySpec& p) {
  if (p.kind == PolicyKind::kStrategy) return std::string(TeamStrategyName(p.strategy));
  for (const auto& [k, n] : kPolicyKindNames) {
    if (k == p.kind) return std::string(n);
  }
  return "unknown";
}

PolicySpec ReadPolicy(const json& j, const std::string& path, Errors& errs) {
  PolicySpec p;
  Reader r(j, path, errs);
  if (!r.ok()) return p;
  std::string name;
  if (!r.Has("strategy")) errs.push_back(path + ".strategy: is required");
  r.String("strategy", name);
  if (auto s = TeamStrategyFromName(name)) {
    p.kind = PolicyKind::kStrategy;
    p.strategy = *s;
  } else {
    bool found = false;
    for (const auto& [k, n] : kPolicyKindNames) {
      if (n == name) {
        p.kind = k;
        found = true;
      }
    }
    if (!found && !name.empty()) {
      errs.push_back(path + ".strategy: unknown strategy '" + name + "'");
    }
  }
  r.String("label", p.label);
  auto only_for = [&](std::string_view key, bool allowed) {
    if (r.Has(key) && !allowed) {
      errs.push_back(r.Path(key) + ": not valid for strategy '" + name + "'");
    }
  };
  only_for("roles", p.kind == PolicyKind::kRoles);
  only_for("trees", p.kind == PolicyKind::kCustom);
  only_for("qtable", p.kind == PolicyKind::kOptions);
  only_for("qtable_crc", p.kind == PolicyKind::kOptions);
  only_for("epsilon", p.kind == PolicyKind::kOptions);
  only_for("offensive", p.kind == PolicyKind::kArchetype);
  only_for("aggressive", p.kind == PolicyKind::kArchetype);

  if (const json* roles = r.Get("roles")) {
    if (!roles->is_array()) {
      errs.push_back(r.Path("roles") + ": expected an array of role names");
    } else {
      for (const auto& x : *roles) {
        auto role = x.is_string() ? RoleFromName(x.get<std::string>()) : std::nullopt;
        if (!role) {
          errs.push_back(r.Path("roles") + ": unknown role " + x.dump());
        } else {
          p.roles.push_back(*role);
        }
      }
    }
  } else if (p.kind == PolicyKind::kRoles) {
    errs.push_back(r.Path("roles") + ": is required for strategy Roles");
  }
  if (const json* trees = r.Get("trees")) {
    if (!trees->is_array()) {
      errs.push_back(r.Path("trees") + ": expected an array of mode trees");
    } else {
      for (std::size_t i = 0; i < trees->size(); ++i) {
        p.trees.push_back(ReadTree((*trees)[i],
                                   r.Path("trees") + "[" + std::to_string(i) + "]", errs));
      }
    }
  } else if (p.kind == PolicyKind::kCustom) {
    errs.push_back(r.Path("trees") + ": is required for strategy Custom");
  }
  r.String("qtable", p.qtable);
  if (p.kind == PolicyKind::kOptions && p.qtable.empty()) {
    errs.push_back(r.Path("qtable") + ": is required for strategy Options");
  }
  std::uint64_t crc = 0;
  r.U64("qtable_crc", crc, false);
  p.qtable_crc = static_cast<std::uint32_t>(crc);
  r.Double("epsilon", p.epsilon);
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) {
    errs.push_back(r.Path("epsilon") + ": must be in [0, 1]");
  }
  r.Bool("offensive", p.offensive);
  r.Bool("aggressive", p.aggressive);
  r.Finish();
  return p;
}

json WritePolicy(const PolicySpec& p) {
  json j = {{"strategy", StrategyFieldName(p)}};
  if (!p.label.empty()) j["label"] = p.label;
  switch (p.kind) {
    case PolicyKind::kRoles: {
      json a = json::array();
      for (auto r : p.roles) a.push_back(RoleName(r));
      j["roles"] = a;
      break;
    }
    case PolicyKind::kCustom: {
      json a = json::array();
      for (const auto& t : p.trees) a.push_back(WriteTree(t));
      j["trees"] = a;
      break;
    }
    case PolicyKind::kOptions:
      j["qtable"] = p.qtable;
      j["qtable_crc"] = p.qtable_crc;
      j["epsilon"] = p.epsilon;
      break;
    case PolicyKind::kArchetype:
      j["offensive"] = p.offensive;
      j["aggressive"] = p.aggressive;
      break;
    default:
      break;
  }
  return j;
}

int PolicyAgentCount(const PolicySpec& p) {
  switch (p.kind) {
    case PolicyKind::kRoles: return static_cast<int>(p.roles.size());
    case PolicyKind::kCustom: return static_cast<int>(p.trees.size());
    case PolicyKind::kOptions:
    case PolicyKind::kRandomOptions: return -1;  // any
    default: return 2;
  }
}

std::uint32_t FileCrc(const std::string& path, std::string* contents) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  *contents = ss.str();
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(contents->data()),
            static_cast<uInt>(contents->size())));
}

// Keeps the table alive for the lifetime of the controller.
class OwningOptionsController : public TeamController {
 public:
  OwningOptionsController(std::shared_ptr<const QTables> q, Team team, FieldSpec field,
                          DecisionDomain dom, OptionMode mode, OptionsSettings s)
      : q_(std::move(q)), inner_(team, field, std::move(dom), q_.get(), mode, s) {}

  std::vector<AgentCommand> Decide(const GameState& w) override {
    return inner_.Decide(w);
  }
  void Observe(const GameState& w, std::span<const GameEvent> e) override {
    inner_.Observe(w, e);
  }
  void Finish(const GameState& w) override { inner_.Finish(w); }

 private:
  std::shared_ptr<const QTables> q_;
  OptionsTeamController inner_;
};

}  // namespace

// ---------------------------------------------------------------------------

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument(Join(errors)), errors_(std::move(errors)) {}

PolicySpec PolicySpec::Strategy(TeamStrategy s) {
  PolicySpec p;
  p.kind = PolicyKind::kStrategy;
  p.strategy = s;
  return p;
}

std::string PolicySpec::name() const {
  if (!label.empty()) return label;
  if (kind == PolicyKind::kArchetype) {
    return std::string("Archetype-") + (offensive ? "O" : "N") + (aggressive ? "A" : "N");
  }
  return StrategyFieldName(*this);
}

GameSpec GameConfig::game_spec() const {
  GameSpec s;
  s.field = field;
  s.vehicle = vehicle;
  s.horizon = horizon;
  s.actuation_noise_deg = actuation_noise_deg;
  s.noise_seed = DeriveSeed(seed, 0x4E01);
  return s;
}

DecisionDomain GameConfig::domain() const { return DecisionDomain(heading_bins, speeds); }

TrainingConfig GameConfig::training_config() const {
  TrainingConfig t;
  t.episodes = training.episodes;
  t.horizon = training.horizon;
  t.seed = seed;
  t.opponent = training.opponent;
  t.rewards = rewards;
  t.obs = observation;
  t.cal = calibration;
  t.field = field;
  t.vehicle = vehicle;
  t.heading_bins = heading_bins;
  t.speeds = speeds;
  t.learning_rate = training.learning_rate;
  t.gamma = training.gamma;
  t.option_commit = option_commit;
  t.epsilon_start = training.epsilon_start;
  t.epsilon_end = training.epsilon_end;
  t.epsilon_decay_episodes = training.epsilon_decay_episodes;
  return t;
}

std::vector<std::string> GameConfig::Violations() const {
  Errors out;
  auto add = [&](const std::string& prefix, const std::vector<std::string>& v) {
    for (const auto& s : v) out.push_back(prefix + s);
  };
  if (!(horizon > 0.0)) out.push_back("horizon: must be > 0");
  if (agents_per_team < 1) out.push_back("agents_per_team: must be >= 1");
  if (!(start_jitter >= 0.0)) out.push_back("start_jitter: must be >= 0");
  if (!(actuation_noise_deg >= 0.0)) out.push_back("actuation_noise_deg: must be >= 0");
  add("", field.Violations());
  add("", vehicle.Violations());
  if (heading_bins < 1 || speeds.empty()) {
    out.push_back("domain: needs at least one heading bin and one speed");
  } else {
    std::vector<std::string> dv;
    try {
      dv = DecisionDomain(heading_bins, speeds).Violations(vehicle.max_speed);
    } catch (const std::exception& e) {
      dv = {e.what()};
    }
    add("", dv);
  }
  add("", rewards.Violations());
  add("", calibration.Violations());
  add("", observation.Violations());
  if (option_commit < 1) out.push_back("option_commit: must be >= 1");
  auto check_side = [&](const PolicySpec& side, const std::string& who) {
    int need = PolicyAgentCount(side);
    if (need >= 0 && need != agents_per_team) {
      out.push_back(who + ": policy '" + side.name() + "' controls " +
                    std::to_string(need) + " agents but agents_per_team is " +
                    std::to_string(agents_per_team));
    }
  };
  check_side(blue, "blue");
  check_side(red, "red");
  for (std::size_t i = 0; i < tournament.size(); ++i) {
    std::string at = "tournament.matchups[" + std::to_string(i) + "]";
    check_side(tournament[i].a, at + ".a");
    check_side(tournament[i].b, at + ".b");
    if (tournament[i].games < 1) out.push_back(at + ".games: must be >= 1");
  }
  const TrainingSection& t = training;
  if (t.episodes < 0) out.push_back("training.episodes: must be >= 0");
  if (!(t.horizon > 0.0)) out.push_back("training.horizon: must be > 0");
  if (!(t.learning_rate >= 0.0 && t.learning_rate <= 1.0)) {
    out.push_back("training.learning_rate: must be in [0, 1]");
  }
  if (!(t.gamma > 0.0 && t.gamma < 1.0)) out.push_back("training.gamma: must be in (0, 1)");
  if (!(t.epsilon_start >= 0.0 && t.epsilon_start <= 1.0)) {
    out.push_back("training.epsilon_start: must be in [0, 1]");
  }
  if (!(t.epsilon_end >= 0.0 && t.epsilon_end <= 1.0)) {
    out.push_back("training.epsilon_end: must be in [0, 1]");
  }
  if (t.epsilon_decay_episodes < 0) {
    out.push_back("training.epsilon_decay_episodes: must be >= 0");
  }
  if (t.eval_episodes < 1) out.push_back("training.eval_episodes: must be >= 1");
  return out;
}

GameConfig ParseConfig(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: invalid JSON: ") + e.what()});
  }
  Errors errs;
  GameConfig c;
  Reader r(j, "", errs);
  if (!r.ok()) throw ConfigError(errs);
  r.U64("seed", c.seed, true);
  r.Double("horizon", c.horizon);
  r.Int("agents_per_team", c.agents_per_team);
  r.Double("start_jitter", c.start_jitter);
  r.Double("actuation_noise_deg", c.actuation_noise_deg);
  r.Int("option_commit", c.option_commit);
  if (const json* f = r.Get("field")) {
    Reader fr(*f, "field", errs);
    if (fr.ok()) ReadFields(fr, kFieldFields, c.field);
  }
  if (const json* v = r.Get("vehicle")) {
    Reader vr(*v, "vehicle", errs);
    if (vr.ok()) ReadFields(vr, kVehicleFields, c.vehicle);
  }
  if (const json* d = r.Get("domain")) {
    Reader dr(*d, "domain", errs);
    dr.Int("heading_bins", c.heading_bins);
    dr.Doubles("speeds", c.speeds);
    dr.Finish();
  }
  if (const json* rw = r.Get("rewards")) {
    Reader rr(*rw, "rewards", errs);
    for (EventKind k : kEventKinds) {
      if (const json* pair = rr.Get(EventKindName(k))) {
        Reader pr(*pair, rr.Path(EventKindName(k)), errs);
        pr.Double("own", c.rewards.at(k).own);
        pr.Double("opp", c.rewards.at(k).opp);
        pr.Finish();
      }
    }
    rr.Finish();
  }
  if (const json* cal = r.Get("calibration")) {
    Reader cr(*cal, "calibration", errs);
    if (cr.ok()) ReadFields(cr, kCalibrationFields, c.calibration);
  }
  if (const json* o = r.Get("observation")) {
    Reader orr(*o, "observation", errs);
    std::vector<double> grid = {static_cast<double>(c.observation.grid_x),
                                static_cast<double>(c.observation.grid_y)};
    orr.Doubles("grid", grid);
    if (grid.size() != 2 || grid[0] != std::floor(grid[0]) ||
        grid[1] != std::floor(grid[1])) {
      errs.push_back("observation.grid: expected [nx, ny] integers");
    } else {
      c.observation.grid_x = static_cast<int>(grid[0]);
      c.observation.grid_y = static_cast<int>(grid[1]);
    }
    orr.Int("heading_segments", c.observation.heading_segments);
    orr.Doubles("range_edges", c.observation.range_edges);
    orr.Finish();
  }
  if (const json* t = r.Get("training")) {
    Reader tr(*t, "training", errs);
    TrainingSection& s = c.training;
    tr.Int("episodes", s.episodes);
    tr.Double("horizon", s.horizon);
    tr.Double("learning_rate", s.learning_rate);
    tr.Double("gamma", s.gamma);
    tr.Double("epsilon_start", s.epsilon_start);
    tr.Double("epsilon_end", s.epsilon_end);
    tr.Int("epsilon_decay_episodes", s.epsilon_decay_episodes);
    tr.Int("eval_episodes", s.eval_episodes);
    std::string opp(TeamStrategyName(s.opponent));
    tr.String("opponent", opp);
    if (auto st = TeamStrategyFromName(opp)) {
      s.opponent = *st;
    } else {
      errs.push_back("training.opponent: unknown strategy '" + opp + "'");
    }
    tr.Finish();
  }
  if (const json* b = r.Get("blue")) c.blue = ReadPolicy(*b, "blue", errs);
  if (const json* b = r.Get("red")) c.red = ReadPolicy(*b, "red", errs);
  if (const json* t = r.Get("tournament")) {
    Reader tr(*t, "tournament", errs);
    if (const json* ms = tr.Get("matchups")) {
      if (!ms->is_array()) {
        errs.push_back("tournament.matchups: expected an array");
      } else {
        for (std::size_t i = 0; i < ms->size(); ++i) {
          std::string path = "tournament.matchups[" + std::to_string(i) + "]";
          Reader mr((*ms)[i], path, errs);
          if (!mr.ok()) continue;
          MatchupSpec m;
          if (const json* a = mr.Get("a")) {
            m.a = ReadPolicy(*a, path + ".a", errs);
          } else {
            errs.push_back(path + ".a: is required");
          }
          if (const json* b = mr.Get("b")) {
            m.b = ReadPolicy(*b, path + ".b", errs);
          } else {
            errs.push_back(path + ".b: is required");
          }
          mr.Int("games", m.games);
          if (mr.Has("seed")) {
            std::uint64_t sd = 0;
            mr.U64("seed", sd, true);
            m.seed = sd;
          }
          mr.Finish();
          c.tournament.push_back(std::move(m));
        }
      }
    }
    tr.Finish();
  }
  r.Finish();
  for (auto& v : c.Violations()) errs.push_back(v);
  if (!errs.empty()) throw ConfigError(errs);
  return c;
}

GameConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string ConfigToJson(const GameConfig& c, int indent) {
  json j;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["agents_per_team"] = c.agents_per_team;
  j["start_jitter"] = c.start_jitter;
  j["actuation_noise_deg"] = c.actuation_noise_deg;
  j["option_commit"] = c.option_commit;
  j["field"] = WriteFields(kFieldFields, c.field);
  j["vehicle"] = WriteFields(kVehicleFields, c.vehicle);
  j["domain"] = {{"heading_bins", c.heading_bins}, {"speeds", c.speeds}};
  json rw = json::object();
  for (EventKind k : kEventKinds) {
    rw[std::string(EventKindName(k))] = {{"own", c.rewards.at(k).own},
                                         {"opp", c.rewards.at(k).opp}};
  }
  j["rewards"] = rw;
  j["calibration"] = WriteFields(kCalibrationFields, c.calibration);
  j["observation"] = {{"grid", {c.observation.grid_x, c.observation.grid_y}},
                      {"heading_segments", c.observation.heading_segments},
                      {"range_edges", c.observation.range_edges}};
  const TrainingSection& t = c.training;
  j["training"] = {{"episodes", t.episodes},
                   {"horizon", t.horizon},
                   {"learning_rate", t.learning_rate},
                   {"gamma", t.gamma},
                   {"epsilon_start", t.epsilon_start},
                   {"epsilon_end", t.epsilon_end},
                   {"epsilon_decay_episodes", t.epsilon_decay_episodes},
                   {"eval_episodes", t.eval_episodes},
                   {"opponent", TeamStrategyName(t.opponent)}};
  j["blue"] = WritePolicy(c.blue);
  j["red"] = WritePolicy(c.red);
  if (!c.tournament.empty()) {
    json ms = json::array();
    for (const auto& m : c.tournament) {
      json mj = {{"a", WritePolicy(m.a)}, {"b", WritePolicy(m.b)}, {"games", m.games}};
      if (m.seed) mj["seed"] = *m.seed;
      ms.push_back(mj);
    }
    j["tournament"] = {{"matchups", ms}};
  }
  return j.dump(indent);
}

void ResolvePolicyFiles(GameConfig& c) {
  Errors errs;
  std::vector<PolicySpec*> policies = {&c.blue, &c.red};
  for (auto& m : c.tournament) {
    policies.push_back(&m.a);
    policies.push_back(&m.b);
  }
  for (PolicySpec* p : policies) {
    if (p->kind != PolicyKind::kOptions || p->qtables) continue;
    try {
      std::string contents;
      std::uint32_t crc = FileCrc(p->qtable, &contents);
      if (p->qtable_crc != 0 && crc != p->qtable_crc) {
        errs.push_back("q-table '" + p->qtable + "' changed since the log was written");
        continue;
      }
      std::istringstream in(contents);
      p->qtables = std::make_shared<const QTables>(ReadQTables(in));
      p->qtable_crc = crc;
    } catch (const std::exception& e) {
      errs.push_back(std::string("q-table: ") + e.what());
    }
  }
  if (!errs.empty()) throw ConfigError(errs);
}

std::unique_ptr<TeamController> MakeController(const PolicySpec& p, Team team,
                                               const GameConfig& c) {
  const StrategyCalibration& cal = c.calibration;
  switch (p.kind) {
    case PolicyKind::kStrategy:
      return std::make_unique<TreeTeamController>(
          team, StrategyTrees(p.strategy, c.field, cal), c.field, c.domain());
    case PolicyKind::kClassifier:
      return std::make_unique<ClassifierTeamController>(team, c.field, c.domain(), cal);
    case PolicyKind::kRoles: {
      std::vector<ModeTree> trees;
      for (std::size_t i = 0; i < p.roles.size(); ++i) {
        trees.push_back(MakeRoleTree(p.roles[i], c.field, cal, static_cast<int>(i)));
      }
      return std::make_unique<TreeTeamController>(team, std::move(trees), c.field,
                                                  c.domain());
    }
    case PolicyKind::kCustom:
      return std::make_unique<TreeTeamController>(team, p.trees, c.field, c.domain());
    case PolicyKind::kArchetype:
      return std::make_unique<TreeTeamController>(
          team, ArchetypeOpponentTrees(p.offensive, p.aggressive, c.field, cal), c.field,
          c.domain());
    case PolicyKind::kOptions:
    case PolicyKind::kRandomOptions: {
      OptionsSettings s{c.observation, cal, c.rewards, p.epsilon, c.option_commit,
                        DeriveSeed(c.seed, 0x0A00 + TeamIndex(team))};
      std::shared_ptr<const QTables> q = p.qtables;
      if (p.kind == PolicyKind::kOptions && !q) {
        throw std::invalid_argument("options policy q-table not loaded");
      }
      if (!q) q = std::make_shared<const QTables>();
      return std::make_unique<OwningOptionsController>(
          q, team, c.field, c.domain(),
          p.kind == PolicyKind::kOptions ? OptionMode::kGreedy : OptionMode::kRandom, s);
    }
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace ctf
