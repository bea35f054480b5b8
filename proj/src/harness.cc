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

#include "ctf/harness.h"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ctf {

using json = nlohmann::ordered_json;

namespace {

std::uint32_t Crc(std::string_view s) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

void WriteRecord(std::ostream& out, const json& j) {
  std::string payload = j.dump();
  char hex[9];
  std::snprintf(hex, sizeof(hex), "%08x", Crc(payload));
  out << hex << ' ' << payload << '\n';
}

json AgentJson(const AgentState& a) {
  return {{"id", a.id},         {"x", a.position.x},     {"y", a.position.y},
          {"h", a.heading},     {"v", a.speed},          {"has_flag", a.has_flag},
          {"tagged", a.tagged}, {"oob", a.oob}};
}

json FlagsJson(const GameState& w) {
  json f = json::array();
  for (const FlagState& fl : w.flags) {
    json j = {{"team", TeamName(fl.team)},
              {"x", fl.position.x},
              {"y", fl.position.y},
              {"at_home", fl.at_home}};
    j["carrier"] = fl.carrier ? json(*fl.carrier) : json(nullptr);
    f.push_back(j);
  }
  return f;
}

json EventJson(const GameEvent& e) {
  json j = {{"type", "event"}, {"t", e.time}, {"kind", EventKindName(e.kind)},
            {"actor", e.actor}};
  if (e.victim) j["victim"] = *e.victim;
  return j;
}

void Tally(GameSummary& s, const GameState& w, std::span<const GameEvent> events) {
  for (const GameEvent& e : events) {
    int t = TeamIndex(w.team_of(e.actor));
    switch (e.kind) {
      case EventKind::kGrab: ++s.grabs[t]; break;
      case EventKind::kCapture: ++s.captures[t]; break;
      case EventKind::kTagNoFlag:
      case EventKind::kTagWithFlag: ++s.tags[t]; break;
      case EventKind::kOutOfBounds: ++s.out_of_bounds[t]; break;
    }
  }
}

std::string Sanitize(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

}  // namespace

GameSummary RunGame(const GameConfig& config, std::ostream* log) {
  auto problems = config.Violations();
  if (!problems.empty()) throw ConfigError(problems);
  GameConfig c = config;
  ResolvePolicyFiles(c);

  GameSpec spec = c.game_spec();
  GameState world = MakeInitialState(c.field, c.agents_per_team, c.seed, c.start_jitter);
  auto blue = MakeController(c.blue, Team::kBlue, c);
  auto red = MakeController(c.red, Team::kRed, c);

  GameSummary s;
  s.seed = c.seed;
  if (log) {
    WriteRecord(*log, {{"type", "header"},
                       {"schema", kLogSchema},
                       {"version", kVersion},
                       {"config", json::parse(ConfigToJson(c))}});
    json agents = json::array();
    for (const auto& a : world.agents) agents.push_back(AgentJson(a));
    WriteRecord(*log, {{"type", "start"},
                       {"t", world.time},
                       {"agents", agents},
                       {"flags", FlagsJson(world)}});
  }
  auto on_step = [&](const GameState& w, std::span<const AgentCommand> cmds,
                     std::span<const GameEvent> events) {
    Tally(s, w, events);
    for (const AgentState& a : w.agents) {
      if (c.field.InZone(a.position, a.team)) ++s.own_zone_steps[TeamIndex(a.team)];
    }
    if (!log) return;
    json agents = json::array();
    for (std::size_t i = 0; i < w.agents.size(); ++i) {
      json a = AgentJson(w.agents[i]);
      a["mode"] = cmds[i].mode;
      a["cmd"] = {cmds[i].action.desired_speed, cmds[i].action.desired_heading};
      agents.push_back(std::move(a));
    }
    WriteRecord(*log, {{"type", "step"},
                       {"k", w.step_index},
                       {"t", w.time},
                       {"agents", agents},
                       {"flags", FlagsJson(w)},
                       {"scores", {w.scores[0], w.scores[1]}}});
    for (const GameEvent& e : events) WriteRecord(*log, EventJson(e));
  };
  GameState end = RunMatch(spec, std::move(world), *blue, *red, on_step);
  s.steps = end.step_index;
  s.scores = end.scores;
  if (log) {
    WriteRecord(*log, {{"type", "final"},
                       {"steps", end.step_index},
                       {"t", end.time},
                       {"events", end.event_history.size()},
                       {"scores", {end.scores[0], end.scores[1]}}});
  }
  return s;
}

std::string RunGameLog(const GameConfig& config) {
  std::ostringstream out;
  RunGame(config, &out);
  return out.str();
}

LogError::LogError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

GameLogData ReadGameLog(std::istream& in) {
  GameLogData d;
  std::string line;
  std::size_t n = 0;
  bool final_seen = false;
  while (std::getline(in, line)) {
    ++n;
    if (final_seen) throw LogError(n, "record after final record");
    if (line.size() < 10 || line[8] != ' ') throw LogError(n, "malformed record");
    std::string_view payload(line.data() + 9, line.size() - 9);
    unsigned long want = 0;
    try {
      std::size_t used = 0;
      want = std::stoul(line.substr(0, 8), &used, 16);
      if (used != 8) throw std::invalid_argument("hex");
    } catch (const std::exception&) {
      throw LogError(n, "malformed checksum");
    }
    if (Crc(payload) != want) throw LogError(n, "checksum mismatch");
    json j;
    try {
      j = json::parse(payload);
    } catch (const json::parse_error&) {
      throw LogError(n, "malformed JSON");
    }
    std::string type = j.value("type", "");
    if (n == 1) {
      if (type != "header") throw LogError(n, "first record must be the header");
      if (j.value("schema", 0) != kLogSchema) throw LogError(n, "unsupported schema");
      d.version = j.value("version", "");
      d.config_json = j.at("config").dump();
    } else if (type == "event") {
      GameEvent e;
      auto kind = EventKindFromName(j.at("kind").get<std::string>());
      if (!kind) throw LogError(n, "unknown event kind");
      e.kind = *kind;
      e.actor = j.at("actor").get<int>();
      if (j.contains("victim")) e.victim = j.at("victim").get<int>();
      e.time = j.at("t").get<double>();
      d.events.push_back(e);
    } else if (type == "step") {
      d.steps = j.at("k").get<std::int64_t>();
    } else if (type == "final") {
      final_seen = true;
      d.scores = {j.at("scores")[0].get<int>(), j.at("scores")[1].get<int>()};
      if (j.at("steps").get<std::int64_t>() != d.steps) {
        throw LogError(n, "final step count disagrees with step records");
      }
      if (j.at("events").get<std::size_t>() != d.events.size()) {
        throw LogError(n, "final event count disagrees with event records");
      }
    } else if (type != "start") {
      throw LogError(n, "unknown record type '" + type + "'");
    }
    d.lines.push_back(std::move(line));
  }
  if (n == 0) throw LogError(0, "empty log");
  if (!final_seen) throw LogError(n, "truncated: no final record");
  return d;
}

VerifyResult VerifyGameLog(std::istream& in) {
  VerifyResult r;
  GameLogData d;
  try {
    d = ReadGameLog(in);
  } catch (const LogError& e) {
    r.message = e.what();
    return r;
  }
  std::string replayed;
  try {
    replayed = RunGameLog(ParseConfig(d.config_json));
  } catch (const std::exception& e) {
    r.message = std::string("re-simulation failed: ") + e.what();
    return r;
  }
  std::istringstream rs(replayed);
  std::string line;
  std::size_t i = 0;
  while (std::getline(rs, line)) {
    if (i >= d.lines.size()) {
      r.message = "line " + std::to_string(i + 1) + ": log ends early";
      return r;
    }
    if (line != d.lines[i]) {
      r.message = "line " + std::to_string(i + 1) + ": differs from re-simulation";
      r.lines_checked = i;
      return r;
    }
    ++i;
  }
  if (i != d.lines.size()) {
    r.message = "line " + std::to_string(i + 1) + ": extra records";
    return r;
  }
  r.ok = true;
  r.lines_checked = i;
  r.message = "ok";
  return r;
}

// ---------------------------------------------------------------------------

std::uint64_t MatchupSeed(const GameConfig& base, std::size_t index,
                          const MatchupSpec& m) {
  return m.seed ? *m.seed : DeriveSeed(base.seed, 0x7000 + index);
}

std::uint64_t GameSeed(std::uint64_t matchup_seed, int game) {
  return DeriveSeed(matchup_seed, static_cast<std::uint64_t>(game));
}

std::vector<MatchupResult> RunTournament(const GameConfig& base,
                                         const std::vector<MatchupSpec>& matchups,
                                         const TournamentOptions& options) {
  GameConfig resolved = base;
  resolved.tournament = matchups;
  ResolvePolicyFiles(resolved);

  struct Job {
    std::size_t matchup;
    int game;
  };
  std::vector<Job> jobs;
  std::vector<MatchupResult> results(matchups.size());
  std::vector<std::vector<std::string>> errors(matchups.size());
  for (std::size_t m = 0; m < matchups.size(); ++m) {
    if (matchups[m].games < 1) throw std::invalid_argument("matchup needs >= 1 game");
    results[m].games.resize(matchups[m].games);
    errors[m].resize(matchups[m].games);
    if (options.write_logs) results[m].log_paths.resize(matchups[m].games);
    for (int g = 0; g < matchups[m].games; ++g) jobs.push_back({m, g});
  }
  std::filesystem::path log_dir;
  if (options.write_logs) {
    if (options.out_dir.empty()) throw std::invalid_argument("write_logs needs out_dir");
    log_dir = std::filesystem::path(options.out_dir) / "logs";
    std::filesystem::create_directories(log_dir);
  }

  auto run_job = [&](const Job& job) {
    const MatchupSpec& m = resolved.tournament[job.matchup];
    GameConfig c = resolved;
    c.tournament.clear();
    c.blue = m.a;
    c.red = m.b;
    c.seed = GameSeed(MatchupSeed(base, job.matchup, matchups[job.matchup]), job.game);
    try {
      if (options.write_logs) {
        std::ostringstream name;
        name << "m" << std::setw(2) << std::setfill('0') << job.matchup << "_"
             << Sanitize(m.a.name()) << "_vs_" << Sanitize(m.b.name()) << "_g"
             << std::setw(3) << std::setfill('0') << job.game << ".jsonl";
        std::filesystem::path p = log_dir / name.str();
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        results[job.matchup].games[job.game] = RunGame(c, &out);
        results[job.matchup].log_paths[job.game] = p.string();
      } else {
        results[job.matchup].games[job.game] = RunGame(c, nullptr);
      }
    } catch (const std::exception& e) {
      errors[job.matchup][job.game] =
          "game " + std::to_string(job.game) + " (seed " + std::to_string(c.seed) +
          "): " + e.what();
    }
  };

  const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  if (workers == 1) {
    for (const Job& j : jobs) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
      });
    }
  }

  for (std::size_t m = 0; m < matchups.size(); ++m) {
    MatchupResult& r = results[m];
    r.a_name = matchups[m].a.name();
    r.b_name = matchups[m].b.name();
    for (const auto& e : errors[m]) {
      if (!e.empty()) {
        r.error = e;
        break;
      }
    }
    r.a = {r.a_name, r.b_name, "blue"};
    r.b = {r.b_name, r.a_name, "red"};
    if (!r.ok()) continue;
    for (const GameSummary& g : r.games) {
      for (int t = 0; t < 2; ++t) {
        MetricsRow& row = t == 0 ? r.a : r.b;
        ++row.games;
        row.grabs += g.grabs[t];
        row.captures += g.captures[t];
        row.tags += g.tags[t];
        row.score += g.scores[t];
      }
    }
  }
  return results;
}

void WriteMetricsCsv(std::ostream& out, const std::vector<MatchupResult>& results) {
  out << "policy,opponent,side,games,mean_grabs,mean_captures,mean_tags,mean_score\n";
  auto row = [&](const MetricsRow& r) {
    out << r.policy << ',' << r.opponent << ',' << r.side << ',' << r.games << ','
        << std::fixed << std::setprecision(4) << r.mean_grabs() << ','
        << r.mean_captures() << ',' << r.mean_tags() << ',' << r.mean_score() << '\n';
    out.unsetf(std::ios::floatfield);
  };
  for (const auto& m : results) {
    if (!m.ok()) continue;
    row(m.a);
    row(m.b);
  }
}

}  // namespace ctf
