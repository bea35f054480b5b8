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

#include "ctf/rl_options.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ctf/tree_build.h"

namespace ctf {

namespace {

constexpr std::string_view kOptionNames[kNumOptions] = {
    "PickupOpponentFlag", "GuardOwnFlag", "TagOpponent",
    "AvoidOpponents",     "Retreat",      "ShieldTeammate",
};

constexpr char kQTableMagic[] = "ctfsim-qtable";
constexpr int kQTableVersion = 1;

Team TeamOfId(int id, int agents_per_team) {
  return id < agents_per_team ? Team::kBlue : Team::kRed;
}

double TeamFrameHeading(double heading, Team t) {
  return t == Team::kBlue ? NormalizeHeading(heading)
                          : NormalizeHeading(360.0 - heading);
}

int Cell(double v, double extent, int n) {
  int c = static_cast<int>(std::floor(v / extent * n));
  return std::clamp(c, 0, n - 1);
}

int RangeBucket(double d, const std::vector<double>& edges) {
  int b = 0;
  for (double e : edges) {
    if (d >= e) ++b;
  }
  return b;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double ParseDouble(std::string_view s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw std::runtime_error("qtable: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<std::string> ExpectLine(std::istream& in, std::string_view key,
                                    std::size_t min_values) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("qtable: missing '" + std::string(key) + "' line");
  }
  auto t = Tokens(line);
  if (t.empty() || t[0] != key || t.size() < min_values + 1) {
    throw std::runtime_error("qtable: expected '" + std::string(key) + "', got '" +
                             line + "'");
  }
  t.erase(t.begin());
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

const RewardTable::Pair& RewardTable::at(EventKind k) const {
  switch (k) {
    case EventKind::kTagNoFlag: return tag_no_flag;
    case EventKind::kTagWithFlag: return tag_with_flag;
    case EventKind::kGrab: return grab;
    case EventKind::kCapture: return capture;
    case EventKind::kOutOfBounds: return out_of_bounds;
  }
  throw std::invalid_argument("unknown event kind");
}

RewardTable::Pair& RewardTable::at(EventKind k) {
  return const_cast<Pair&>(static_cast<const RewardTable&>(*this).at(k));
}

double RewardTable::max_abs() const {
  double m = 0.0;
  for (const Pair* p : {&tag_no_flag, &tag_with_flag, &grab, &capture, &out_of_bounds}) {
    m = std::max({m, std::abs(p->own), std::abs(p->opp)});
  }
  return m;
}

std::vector<std::string> RewardTable::Violations() const {
  std::vector<std::string> out;
  for (EventKind k : {EventKind::kTagNoFlag, EventKind::kTagWithFlag, EventKind::kGrab,
                      EventKind::kCapture, EventKind::kOutOfBounds}) {
    const Pair& p = at(k);
    if (!std::isfinite(p.own) || !std::isfinite(p.opp)) {
      out.push_back("rewards." + std::string(EventKindName(k)) + " must be finite");
    }
  }
  return out;
}

double ComputeReward(std::span<const GameEvent> events, int agent_id,
                     int agents_per_team, const RewardTable& table) {
  const Team us = TeamOfId(agent_id, agents_per_team);
  double r = 0.0;
  for (const GameEvent& e : events) {
    const RewardTable::Pair& p = table.at(e.kind);
    r += TeamOfId(e.actor, agents_per_team) == us ? p.own : p.opp;
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::string> ObservationSpec::Violations() const {
  std::vector<std::string> out;
  if (grid_x < 1 || grid_y < 1) out.push_back("observation grid must be >= 1x1");
  if (heading_segments < 1) out.push_back("observation heading_segments must be >= 1");
  for (std::size_t i = 0; i < range_edges.size(); ++i) {
    if (!(range_edges[i] > 0.0) || !std::isfinite(range_edges[i])) {
      out.push_back("observation range_edges must be positive and finite");
      break;
    }
    if (i > 0 && !(range_edges[i] > range_edges[i - 1])) {
      out.push_back("observation range_edges must be strictly increasing");
      break;
    }
  }
  return out;
}

int HeadingSegment(double heading, int segments) {
  double h = NormalizeHeading(heading);
  int s = static_cast<int>(std::floor(h / (360.0 / segments)));
  return std::clamp(s, 0, segments - 1);
}

ObservationFeatures DiscretizeObservation(const GameState& world, int agent_id,
                                          const FieldSpec& field,
                                          const ObservationSpec& spec) {
  const AgentState& me = world.agents.at(agent_id);
  const Team us = me.team;
  const Vec2 p = field.FromTeamFrame(me.position, us);
  const double h = TeamFrameHeading(me.heading, us);
  ObservationFeatures f;
  f.cell_x = Cell(p.x, field.width, spec.grid_x);
  f.cell_y = Cell(p.y, field.depth, spec.grid_y);
  f.heading_segment = HeadingSegment(h, spec.heading_segments);
  f.has_flag = me.has_flag;
  f.tagged = me.tagged;
  auto add = [&](const AgentState& o) {
    Vec2 q = field.FromTeamFrame(o.position, us);
    OtherAgentFeature of;
    of.range_bucket = RangeBucket(Distance(p, q), spec.range_edges);
    // Bearing to an agent in the outermost range bucket is not resolved.
    of.bearing_segment =
        of.range_bucket + 1 == spec.range_buckets()
            ? 0
            : HeadingSegment(BearingTo(p, q) - h, spec.heading_segments);
    of.has_flag = o.has_flag;
    of.tagged = o.tagged;
    f.others.push_back(of);
  };
  for (const AgentState& o : world.agents) {
    if (o.team == us && o.id != agent_id) add(o);
  }
  const std::size_t first_opponent = f.others.size();
  for (const AgentState& o : world.agents) {
    if (o.team != us) add(o);
  }
  // Opponents are interchangeable, so list them in a canonical order.
  std::sort(f.others.begin() + first_opponent, f.others.end(),
            [](const OtherAgentFeature& a, const OtherAgentFeature& b) {
              return std::tie(a.range_bucket, a.bearing_segment, a.has_flag, a.tagged) <
                     std::tie(b.range_bucket, b.bearing_segment, b.has_flag, b.tagged);
            });
  f.own_flag_home = world.flag(us).at_home;
  f.opponent_flag_home = world.flag(Opponent(us)).at_home;
  return f;
}

std::uint64_t EncodeObservation(const ObservationFeatures& f,
                                const ObservationSpec& spec) {
  const auto kLimit = static_cast<unsigned __int128>(1) << 63;
  unsigned __int128 key = 0, span = 1;
  auto push = [&](int value, int radix) {
    if (value < 0 || value >= radix) {
      throw std::invalid_argument("observation feature out of range");
    }
    key += span * static_cast<unsigned>(value);
    span *= static_cast<unsigned>(radix);
    if (span > kLimit) throw std::invalid_argument("observation space exceeds 63 bits");
  };
  push(f.cell_x, spec.grid_x);
  push(f.cell_y, spec.grid_y);
  push(f.heading_segment, spec.heading_segments);
  push(f.has_flag, 2);
  push(f.tagged, 2);
  for (const auto& o : f.others) {
    push(o.bearing_segment, spec.heading_segments);
    push(o.range_bucket, spec.range_buckets());
    push(o.has_flag, 2);
    push(o.tagged, 2);
  }
  push(f.own_flag_home, 2);
  push(f.opponent_flag_home, 2);
  return static_cast<std::uint64_t>(key);
}

// ---------------------------------------------------------------------------

std::string_view OptionName(OptionId o) { return kOptionNames[static_cast<int>(o)]; }

std::optional<OptionId> OptionFromName(std::string_view name) {
  for (int i = 0; i < kNumOptions; ++i) {
    if (kOptionNames[i] == name) return static_cast<OptionId>(i);
  }
  return std::nullopt;
}

ModeTree OptionTree(OptionId o, const FieldSpec& field,
                    const StrategyCalibration& cal) {
  using namespace build;
  using P = Predicate;
  ModeNode tagged =
      Leaf("tagged", When(P::kSelfTagged), {GoTo(At(Anchor::kOwnFlagHome))});
  BehaviorTemplate evade =
      Evade(cal.evade_standoff, cal.evade_influence, cal.evade_weight);
  switch (o) {
    case OptionId::kPickupOpponentFlag:
      return Tree({tagged, Leaf("return", When(P::kSelfHasFlag),
                                {GoTo(At(Anchor::kOwnFlagHome)), evade})},
                  Leaf("pickup", {}, {GoTo(At(Anchor::kOpponentFlagHome)), evade}));
    case OptionId::kGuardOwnFlag:
      return Tree({tagged},
                  Leaf("guard", {},
                       {Orbit(At(Anchor::kOwnFlagHome, {cal.defender_loiter_offset, 0.0}),
                              cal.defender_loiter_radius, 0.0)}));
    case OptionId::kTagOpponent:
      return Tree({tagged, Leaf("intercept", When(P::kIntruderInOwnZone),
                                {Chase(AgentSelector::kNearestIntruder)})},
                  Leaf("post", {},
                       {Hold(At(Anchor::kOwnFlagHome, {cal.guard_offset, 0.0}))}));
    case OptionId::kAvoidOpponents:
      return Tree({tagged},
                  Leaf("avoid", {},
                       {GoTo(Fixed(field.midfield_x() / 2.0, field.depth / 2.0), 0.0,
                             8.0),
                        evade}));
    case OptionId::kRetreat:
      return Tree({tagged}, Leaf("retreat", {}, {GoTo(At(Anchor::kOwnFlagHome))}));
    case OptionId::kShieldTeammate:
      return Tree({tagged},
                  Leaf("shield", {}, {GoTo(At(Anchor::kShieldPoint), 0.0, 5.0)}));
  }
  throw std::invalid_argument("unknown option");
}

// ---------------------------------------------------------------------------

QTables::Row QTables::Combined(std::uint64_t key) const {
  Row r{};
  auto it = table.find(key);
  if (it == table.end()) return r;
  for (int i = 0; i < kNumOptions; ++i) {
    r[i] = 0.5 * (it->second.a[i] + it->second.b[i]);
  }
  return r;
}

std::vector<std::string> QTables::Violations() const {
  std::vector<std::string> out;
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    out.push_back("learning_rate must be in [0, 1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) out.push_back("gamma must be in (0, 1)");
  if (option_commit < 1) out.push_back("option_commit must be >= 1");
  for (const auto& [k, e] : table) {
    for (int i = 0; i < kNumOptions; ++i) {
      if (!std::isfinite(e.a[i]) || !std::isfinite(e.b[i])) {
        out.push_back("q-values must be finite");
        return out;
      }
    }
  }
  return out;
}

double QTables::MaxAbsValue() const {
  double m = 0.0;
  for (const auto& [k, e] : table) {
    for (int i = 0; i < kNumOptions; ++i) {
      m = std::max({m, std::abs(e.a[i]), std::abs(e.b[i])});
    }
  }
  return m;
}

bool QTables::operator==(const QTables& o) const {
  if (learning_rate != o.learning_rate || gamma != o.gamma ||
      option_commit != o.option_commit || table.size() != o.table.size()) {
    return false;
  }
  for (const auto& [k, e] : table) {
    auto it = o.table.find(k);
    if (it == o.table.end() || it->second.a != e.a || it->second.b != e.b) return false;
  }
  return true;
}

OptionId GreedyOption(const QTables& q, std::uint64_t obs) {
  QTables::Row r = q.Combined(obs);
  int best = 0;
  for (int i = 1; i < kNumOptions; ++i) {
    if (r[i] > r[best]) best = i;
  }
  return static_cast<OptionId>(best);
}

OptionId SelectOption(const QTables& q, std::uint64_t obs, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && UniformUnit(rng) < epsilon) {
    return static_cast<OptionId>(UniformInt(rng, kNumOptions));
  }
  return GreedyOption(q, obs);
}

OptionId SelectOption(const QTables& q, std::uint64_t obs, double epsilon,
                      std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return SelectOption(q, obs, epsilon, rng);
}

void DoubleQUpdateInPlace(QTables& q, const Transition& t, bool update_a) {
  if (q.learning_rate == 0.0) return;
  QTables::Entry& cur = q.table[t.obs];
  double target = t.reward;
  if (!t.terminal) {
    auto it = q.table.find(t.next_obs);
    if (it != q.table.end()) {
      const QTables::Row& pick = update_a ? it->second.a : it->second.b;
      const QTables::Row& eval = update_a ? it->second.b : it->second.a;
      int best = 0;
      for (int i = 1; i < kNumOptions; ++i) {
        if (pick[i] > pick[best]) best = i;
      }
      target += q.gamma * eval[best];
    }
  }
  QTables::Row& row = update_a ? cur.a : cur.b;
  double& v = row[static_cast<int>(t.option)];
  v += q.learning_rate * (target - v);
}

void DoubleQUpdateInPlace(QTables& q, const Transition& t, Rng& rng) {
  DoubleQUpdateInPlace(q, t, UniformUnit(rng) < 0.5);
}

QTables DoubleQUpdate(QTables q, const Transition& t, Rng& rng) {
  DoubleQUpdateInPlace(q, t, rng);
  return q;
}

void WriteQTables(std::ostream& out, const QTables& q, const QTableHeader& h) {
  out << kQTableMagic << ' ' << kQTableVersion << '\n';
  out << "grid " << h.obs.grid_x << ' ' << h.obs.grid_y << '\n';
  out << "heading_segments " << h.obs.heading_segments << '\n';
  out << "range_edges";
  for (double e : h.obs.range_edges) out << ' ' << FormatDouble(e);
  out << '\n';
  out << "options";
  for (auto n : kOptionNames) out << ' ' << n;
  out << '\n';
  out << "seed " << h.seed << '\n';
  out << "learning_rate " << FormatDouble(q.learning_rate) << '\n';
  out << "gamma " << FormatDouble(q.gamma) << '\n';
  out << "option_commit " << q.option_commit << '\n';
  out << "entries " << q.table.size() << '\n';
  std::map<std::uint64_t, const QTables::Entry*> sorted;
  for (const auto& [k, e] : q.table) sorted.emplace(k, &e);
  for (const auto& [k, e] : sorted) {
    out << k;
    for (double v : e->a) out << ' ' << FormatDouble(v);
    for (double v : e->b) out << ' ' << FormatDouble(v);
    out << '\n';
  }
}

QTables ReadQTables(std::istream& in, QTableHeader* header) {
  auto magic = Tokens([&] {
    std::string l;
    if (!std::getline(in, l)) throw std::runtime_error("qtable: empty input");
    return l;
  }());
  if (magic.size() != 2 || magic[0] != kQTableMagic) {
    throw std::runtime_error("qtable: not a q-table file");
  }
  if (magic[1] != std::to_string(kQTableVersion)) {
    throw std::runtime_error("qtable: unsupported version " + magic[1]);
  }
  QTableHeader h;
  auto grid = ExpectLine(in, "grid", 2);
  h.obs.grid_x = std::stoi(grid[0]);
  h.obs.grid_y = std::stoi(grid[1]);
  h.obs.heading_segments = std::stoi(ExpectLine(in, "heading_segments", 1)[0]);
  h.obs.range_edges.clear();
  for (const auto& s : ExpectLine(in, "range_edges", 0)) {
    h.obs.range_edges.push_back(ParseDouble(s));
  }
  auto opts = ExpectLine(in, "options", kNumOptions);
  for (int i = 0; i < kNumOptions; ++i) {
    if (opts[i] != kOptionNames[i]) throw std::runtime_error("qtable: option mismatch");
  }
  h.seed = std::stoull(ExpectLine(in, "seed", 1)[0]);
  QTables q;
  q.learning_rate = ParseDouble(ExpectLine(in, "learning_rate", 1)[0]);
  q.gamma = ParseDouble(ExpectLine(in, "gamma", 1)[0]);
  q.option_commit = std::stoi(ExpectLine(in, "option_commit", 1)[0]);
  std::size_t n = std::stoull(ExpectLine(in, "entries", 1)[0]);
  q.table.reserve(n);
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("qtable: truncated");
    auto t = Tokens(line);
    if (t.size() != 1 + 2 * kNumOptions) {
      throw std::runtime_error("qtable: malformed entry at row " + std::to_string(i));
    }
    QTables::Entry e;
    for (int j = 0; j < kNumOptions; ++j) {
      e.a[j] = ParseDouble(t[1 + j]);
      e.b[j] = ParseDouble(t[1 + kNumOptions + j]);
    }
    q.table.emplace(std::stoull(t[0]), e);
  }
  if (header) *header = h;
  return q;
}

void SaveQTables(const std::string& path, const QTables& q, const QTableHeader& h) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  WriteQTables(out, q, h);
  if (!out) throw std::runtime_error("write failed: " + path);
}

QTables LoadQTables(const std::string& path, QTableHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return ReadQTables(in, header);
}

// ---------------------------------------------------------------------------

OptionsTeamController::OptionsTeamController(Team team, FieldSpec field,
                                             DecisionDomain dom, const QTables* q,
                                             OptionMode mode, OptionsSettings settings)
    : team_(team),
      field_(field),
      dom_(std::move(dom)),
      q_(q),
      mode_(mode),
      s_(std::move(settings)),
      rng_(DeriveSeed(s_.seed, 0x0971)) {
  if (mode_ == OptionMode::kGreedy && q_ == nullptr) {
    throw std::invalid_argument("greedy options policy needs q-tables");
  }
  if (s_.option_commit < 1) throw std::invalid_argument("option_commit must be >= 1");
  for (int i = 0; i < kNumOptions; ++i) {
    trees_.push_back(OptionTree(static_cast<OptionId>(i), field_, s_.cal));
  }
}

OptionsTeamController OptionsTeamController::Learner(Team team, FieldSpec field,
                                                     DecisionDomain dom, QTables* q,
                                                     OptionsSettings settings) {
  if (q == nullptr) throw std::invalid_argument("learner needs q-tables");
  OptionsTeamController c(team, field, std::move(dom), q, OptionMode::kGreedy,
                          std::move(settings));
  c.learn_ = q;
  c.mode_ = OptionMode::kLearning;
  return c;
}

std::vector<AgentCommand> OptionsTeamController::Decide(const GameState& world) {
  if (slots_.empty()) {
    for (int id : world.team_members(team_)) slots_.emplace_back(id);
  }
  std::vector<AgentCommand> out;
  out.reserve(slots_.size());
  for (Slot& s : slots_) {
    if (!s.option || s.steps_left <= 0 || interrupted_) {
      std::uint64_t obs = EncodeObservation(
          DiscretizeObservation(world, s.agent, field_, s_.obs), s_.obs);
      if (learn_ && s.option) {
        DoubleQUpdateInPlace(*learn_, {s.obs, *s.option, s.reward, obs, false}, rng_);
      }
      s.option = mode_ == OptionMode::kRandom
                     ? static_cast<OptionId>(UniformInt(rng_, kNumOptions))
                     : SelectOption(*q_, obs, s_.epsilon, rng_);
      s.obs = obs;
      s.reward = 0.0;
      s.steps_left = s_.option_commit;
    }
    --s.steps_left;
    ++option_counts_[static_cast<int>(*s.option)];
    ++agent_steps_;
    if (field_.InZone(world.agents[s.agent].position, team_)) ++own_zone_steps_;
    DecisionContext ctx{world, field_, s.agent, std::nullopt};
    HelmDecision d = RunHelm(trees_[static_cast<int>(*s.option)], ctx, dom_);
    out.push_back({d.action, std::string(OptionName(*s.option)) + ":" + d.mode});
  }
  interrupted_ = false;
  return out;
}

void OptionsTeamController::Observe(const GameState& world,
                                    std::span<const GameEvent> events) {
  if (events.empty() || slots_.empty()) return;
  const int n = world.agents_per_team();
  for (Slot& s : slots_) s.reward += ComputeReward(events, s.agent, n, s_.rewards);
  team_return_ += ComputeReward(events, slots_.front().agent, n, s_.rewards);
  interrupted_ = true;
}

void OptionsTeamController::Finish(const GameState& world) {
  if (!learn_) return;
  for (Slot& s : slots_) {
    if (!s.option) continue;
    std::uint64_t obs = EncodeObservation(
        DiscretizeObservation(world, s.agent, field_, s_.obs), s_.obs);
    DoubleQUpdateInPlace(*learn_, {s.obs, *s.option, s.reward, obs, true}, rng_);
    s.option.reset();
  }
}

// ---------------------------------------------------------------------------

double TrainingConfig::Epsilon(int episode) const {
  if (epsilon_decay_episodes <= 0 || episode >= epsilon_decay_episodes) {
    return epsilon_end;
  }
  double f = static_cast<double>(episode) / epsilon_decay_episodes;
  return epsilon_start + (epsilon_end - epsilon_start) * f;
}

std::vector<std::string> TrainingConfig::Violations() const {
  std::vector<std::string> out;
  if (episodes < 0) out.push_back("training.episodes must be >= 0");
  if (!(horizon > 0.0)) out.push_back("training.horizon must be > 0");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    out.push_back("training.learning_rate must be in [0, 1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) out.push_back("training.gamma must be in (0, 1)");
  if (option_commit < 1) out.push_back("training.option_commit must be >= 1");
  for (double e : {epsilon_start, epsilon_end}) {
    if (!(e >= 0.0 && e <= 1.0)) {
      out.push_back("training epsilon must be in [0, 1]");
      break;
    }
  }
  if (epsilon_decay_episodes < 0) {
    out.push_back("training.epsilon_decay_episodes must be >= 0");
  }
  for (auto& v : rewards.Violations()) out.push_back(v);
  for (auto& v : obs.Violations()) out.push_back(v);
  for (auto& v : cal.Violations()) out.push_back(v);
  for (auto& v : field.Violations()) out.push_back(v);
  for (auto& v : vehicle.Violations()) out.push_back(v);
  return out;
}

namespace {

GameSpec SpecFor(const TrainingConfig& c) {
  GameSpec spec;
  spec.field = c.field;
  spec.vehicle = c.vehicle;
  spec.horizon = c.horizon;
  return spec;
}

EpisodeStats PlayEpisode(const TrainingConfig& c, const QTables* q, QTables* learn,
                         OptionMode mode, double epsilon, std::uint64_t episode_seed) {
  DecisionDomain dom(c.heading_bins, c.speeds);
  OptionsSettings s{c.obs, c.cal, c.rewards, epsilon, c.option_commit,
                    DeriveSeed(episode_seed, 0x51)};
  OptionsTeamController blue =
      learn ? OptionsTeamController::Learner(Team::kBlue, c.field, dom, learn, s)
            : OptionsTeamController(Team::kBlue, c.field, dom, q, mode, s);
  TreeTeamController red(Team::kRed, StrategyTrees(c.opponent, c.field, c.cal),
                         c.field, dom);
  GameState start = MakeInitialState(c.field, 2, episode_seed);
  GameState end = RunMatch(SpecFor(c), std::move(start), blue, red);
  EpisodeStats st;
  st.epsilon = epsilon;
  st.team_return = blue.team_return();
  for (const GameEvent& e : end.event_history) {
    bool ours = end.team_of(e.actor) == Team::kBlue;
    switch (e.kind) {
      case EventKind::kGrab: st.grabs += ours; break;
      case EventKind::kCapture: st.captures += ours; break;
      case EventKind::kTagNoFlag:
      case EventKind::kTagWithFlag:
        (ours ? st.tags : st.tagged) += 1;
        break;
      case EventKind::kOutOfBounds: st.out_of_bounds += ours; break;
    }
  }
  st.score_for = end.score(Team::kBlue);
  st.score_against = end.score(Team::kRed);
  st.own_zone_fraction =
      blue.agent_steps() ? static_cast<double>(blue.own_zone_steps()) / blue.agent_steps()
                         : 0.0;
  return st;
}

}  // namespace

TrainingResult Train(const TrainingConfig& config,
                     const std::function<void(const EpisodeStats&)>& progress) {
  QTables q;
  q.learning_rate = config.learning_rate;
  q.gamma = config.gamma;
  q.option_commit = config.option_commit;
  return Train(config, std::move(q), 0, progress);
}

TrainingResult Train(const TrainingConfig& config, QTables initial, int first,
                     const std::function<void(const EpisodeStats&)>& progress) {
  auto problems = config.Violations();
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  TrainingResult r{std::move(initial), {}};
  for (int e = first; e < first + config.episodes; ++e) {
    double eps = config.Epsilon(e);
    EpisodeStats st = PlayEpisode(config, &r.q, &r.q, OptionMode::kLearning, eps,
                                  DeriveSeed(config.seed, static_cast<std::uint64_t>(e)));
    st.episode = e;
    r.curve.push_back(st);
    if (progress) progress(st);
  }
  return r;
}

EpisodeStats RunOptionsEpisode(const TrainingConfig& config, const QTables& q,
                               OptionMode mode, std::uint64_t episode_seed) {
  if (mode == OptionMode::kLearning) {
    throw std::invalid_argument("RunOptionsEpisode does not learn");
  }
  return PlayEpisode(config, &q, nullptr, mode, 0.0, episode_seed);
}

double BootstrapStandardError(std::span<const double> x, int resamples,
                              std::uint64_t seed) {
  if (x.size() < 2 || resamples < 2) return 0.0;
  Rng rng(seed);
  const int n = static_cast<int>(x.size());
  std::vector<double> means;
  means.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[UniformInt(rng, n)];
    means.push_back(s / n);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= resamples;
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  return std::sqrt(var / (resamples - 1));
}

EvaluationReport EvaluateAgainstRandom(const TrainingConfig& config, const QTables& q,
                                       int episodes, std::uint64_t seed) {
  EvaluationReport r;
  r.episodes = episodes;
  std::vector<double> diff;
  double zone = 0.0, captures = 0.0;
  for (int i = 0; i < episodes; ++i) {
    std::uint64_t s = DeriveSeed(seed, 0xE0A1u + static_cast<std::uint64_t>(i));
    EpisodeStats g = RunOptionsEpisode(config, q, OptionMode::kGreedy, s);
    EpisodeStats u = RunOptionsEpisode(config, q, OptionMode::kRandom, s);
    r.greedy_returns.push_back(g.team_return);
    r.random_returns.push_back(u.team_return);
    diff.push_back(g.team_return - u.team_return);
    zone += g.own_zone_fraction;
    captures += g.captures;
  }
  if (episodes > 0) {
    for (double v : r.greedy_returns) r.greedy_mean += v;
    for (double v : r.random_returns) r.random_mean += v;
    r.greedy_mean /= episodes;
    r.random_mean /= episodes;
    r.mean_difference = r.greedy_mean - r.random_mean;
    r.greedy_own_zone_fraction = zone / episodes;
    r.greedy_mean_captures = captures / episodes;
  }
  r.bootstrap_se = BootstrapStandardError(diff, 2000, DeriveSeed(seed, 0xB007));
  return r;
}

}  // namespace ctf
