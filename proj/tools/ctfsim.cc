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

// ctfsim: play, tourney, train, replay, validate.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ctf/config.h"
#include "ctf/harness.h"
#include "ctf/rl_options.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;

int ReportConfigError(const ctf::ConfigError& e) {
  json j = {{"errors", e.errors()}};
  std::cerr << j.dump(2) << "\n";
  return kExitInvalid;
}

ctf::GameConfig Load(const std::string& path, const std::optional<std::uint64_t>& seed) {
  ctf::GameConfig c = ctf::LoadConfig(path);
  if (seed) c.seed = *seed;
  return c;
}

fs::path EnsureDir(const std::string& d) {
  fs::path p = d.empty() ? fs::path(".") : fs::path(d);
  fs::create_directories(p);
  return p;
}

json SummaryJson(const ctf::GameSummary& s) {
  auto pair = [](const auto& a) { return json::array({a[0], a[1]}); };
  return {{"seed", s.seed},         {"steps", s.steps},
          {"scores", pair(s.scores)}, {"grabs", pair(s.grabs)},
          {"captures", pair(s.captures)}, {"tags", pair(s.tags)},
          {"out_of_bounds", pair(s.out_of_bounds)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maritime capture-the-flag simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int games = 50;
  int jobs = 1;
  bool no_logs = false;
  std::optional<int> episodes;
  std::string log_path;
  bool verify = false;
  bool show_events = false;

  auto* play = app.add_subcommand("play", "Play one game and write its log");
  play->add_option("--config", config_path, "Config file")->required();
  play->add_option("--seed", seed, "Override the config seed");
  play->add_option("--out-dir", out_dir, "Directory for game.jsonl");

  auto* tourney = app.add_subcommand("tourney", "Run a seeded tournament");
  tourney->add_option("--config", config_path, "Config file")->required();
  tourney->add_option("--seed", seed, "Override the base seed");
  tourney->add_option("--games", games,
                      "Games per matchup when the config lists no matchups");
  tourney->add_option("--out-dir", out_dir, "Directory for metrics.csv and logs");
  tourney->add_option("--jobs", jobs, "Parallel games")->check(CLI::PositiveNumber);
  tourney->add_flag("--no-logs", no_logs, "Skip per-game logs");

  auto* train = app.add_subcommand("train", "Train the options policy");
  train->add_option("--config", config_path, "Config file")->required();
  train->add_option("--seed", seed, "Override the config seed");
  train->add_option("--episodes", episodes, "Override training.episodes");
  train->add_option("--out-dir", out_dir, "Directory for q-table and curves");

  auto* replay = app.add_subcommand("replay", "Check, print or re-simulate a game log");
  replay->add_option("log", log_path, "Game log")->required();
  replay->add_flag("--verify", verify, "Re-simulate from the header and compare");
  replay->add_flag("--events", show_events, "Print the recorded events");

  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      ctf::GameConfig c = ctf::LoadConfig(config_path);
      ctf::ResolvePolicyFiles(c);
      std::cout << "ok\n";
      return 0;
    }

    if (*play) {
      ctf::GameConfig c = Load(config_path, seed);
      fs::path dir = EnsureDir(out_dir);
      fs::path log = dir / "game.jsonl";
      std::ofstream out(log, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + log.string());
      auto t0 = std::chrono::steady_clock::now();
      ctf::GameSummary s = ctf::RunGame(c, &out);
      double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json j = SummaryJson(s);
      j["log"] = log.string();
      j["wall_seconds"] = secs;
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*tourney) {
      ctf::GameConfig c = Load(config_path, seed);
      std::vector<ctf::MatchupSpec> matchups = c.tournament;
      if (matchups.empty()) matchups.push_back({c.blue, c.red, games, std::nullopt});
      ctf::TournamentOptions opt;
      opt.jobs = jobs;
      opt.out_dir = EnsureDir(out_dir).string();
      opt.write_logs = !no_logs;
      auto results = ctf::RunTournament(c, matchups, opt);
      std::ofstream csv(fs::path(opt.out_dir) / "metrics.csv", std::ios::binary);
      ctf::WriteMetricsCsv(csv, results);
      ctf::WriteMetricsCsv(std::cout, results);
      int failed = 0;
      for (const auto& r : results) {
        if (!r.ok()) {
          ++failed;
          std::cerr << "matchup " << r.a_name << " vs " << r.b_name
                    << " failed: " << r.error << "\n";
        }
      }
      return failed ? kExitError : 0;
    }

    if (*train) {
      ctf::GameConfig c = Load(config_path, seed);
      if (episodes) c.training.episodes = *episodes;
      ctf::TrainingConfig tc = c.training_config();
      fs::path dir = EnsureDir(out_dir);
      std::ofstream curve(dir / "learning_curve.csv", std::ios::binary);
      curve << "episode,epsilon,return,grabs,captures,tags,tagged,out_of_bounds,"
               "score_for,score_against,own_zone_fraction\n";
      auto t0 = std::chrono::steady_clock::now();
      auto result = ctf::Train(tc, [&](const ctf::EpisodeStats& e) {
        curve << e.episode << ',' << e.epsilon << ',' << e.team_return << ',' << e.grabs
              << ',' << e.captures << ',' << e.tags << ',' << e.tagged << ','
              << e.out_of_bounds << ',' << e.score_for << ',' << e.score_against << ','
              << e.own_zone_fraction << '\n';
        if ((e.episode + 1) % 100 == 0) {
          std::cerr << "episode " << e.episode + 1 << " eps " << e.epsilon
                    << " return " << e.team_return << "\n";
        }
      });
      double train_secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ctf::SaveQTables((dir / "qtable.txt").string(), result.q,
                       {tc.obs, tc.seed});
      auto report = ctf::EvaluateAgainstRandom(tc, result.q, c.training.eval_episodes,
                                               ctf::DeriveSeed(tc.seed, 0xEEE));
      json j = {{"seed", tc.seed},
                {"episodes", tc.episodes},
                {"states", result.q.table.size()},
                {"train_seconds", train_secs},
                {"greedy_mean_return", report.greedy_mean},
                {"random_mean_return", report.random_mean},
                {"mean_difference", report.mean_difference},
                {"bootstrap_se", report.bootstrap_se},
                {"greedy_own_zone_fraction", report.greedy_own_zone_fraction},
                {"greedy_mean_captures", report.greedy_mean_captures},
                {"qtable", (dir / "qtable.txt").string()}};
      std::ofstream(dir / "evaluation.json") << j.dump(2) << "\n";
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*replay) {
      std::ifstream in(log_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot read " + log_path);
      if (verify) {
        ctf::VerifyResult v = ctf::VerifyGameLog(in);
        std::cout << (v.ok ? "verified " : "FAILED ") << v.lines_checked << " lines: "
                  << v.message << "\n";
        return v.ok ? 0 : kExitError;
      }
      ctf::GameLogData d = ctf::ReadGameLog(in);
      if (show_events) {
        for (const auto& e : d.events) {
          std::cout << std::fixed << std::setprecision(1) << e.time << ' '
                    << ctf::EventKindName(e.kind) << " actor=" << e.actor;
          if (e.victim) std::cout << " victim=" << *e.victim;
          std::cout << "\n";
        }
      }
      std::cout << "steps " << d.steps << " events " << d.events.size() << " score "
                << d.scores[0] << "-" << d.scores[1] << "\n";
      return 0;
    }
  } catch (const ctf::ConfigError& e) {
    return ReportConfigError(e);
  } catch (const ctf::LogError& e) {
    std::cerr << "log error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
