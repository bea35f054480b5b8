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

// Python bindings. Configs cross the boundary as JSON text.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "ctf/config.h"
#include "ctf/game_core.h"
#include "ctf/harness.h"
#include "ctf/helm.h"
#include "ctf/rl_options.h"

namespace py = pybind11;

namespace ctf {
namespace {

py::dict SummaryDict(const GameSummary& s) {
  py::dict d;
  d["seed"] = s.seed;
  d["steps"] = s.steps;
  d["scores"] = s.scores;
  d["grabs"] = s.grabs;
  d["captures"] = s.captures;
  d["tags"] = s.tags;
  d["out_of_bounds"] = s.out_of_bounds;
  d["own_zone_steps"] = s.own_zone_steps;
  return d;
}

py::dict RowDict(const MetricsRow& r) {
  py::dict d;
  d["policy"] = r.policy;
  d["opponent"] = r.opponent;
  d["side"] = r.side;
  d["games"] = r.games;
  d["mean_grabs"] = r.mean_grabs();
  d["mean_captures"] = r.mean_captures();
  d["mean_tags"] = r.mean_tags();
  d["mean_score"] = r.mean_score();
  return d;
}

py::dict EpisodeDict(const EpisodeStats& e) {
  py::dict d;
  d["episode"] = e.episode;
  d["epsilon"] = e.epsilon;
  d["return"] = e.team_return;
  d["grabs"] = e.grabs;
  d["captures"] = e.captures;
  d["tags"] = e.tags;
  d["tagged"] = e.tagged;
  d["own_zone_fraction"] = e.own_zone_fraction;
  return d;
}

}  // namespace
}  // namespace ctf

PYBIND11_MODULE(_core, m) {
  using namespace ctf;  // NOLINT
  m.doc() = "Capture-the-flag simulation core";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<LogError>(m, "LogError", PyExc_ValueError);

  py::enum_<Team>(m, "Team").value("BLUE", Team::kBlue).value("RED", Team::kRed);
  py::enum_<EventKind>(m, "EventKind")
      .value("TAG", EventKind::kTagNoFlag)
      .value("TAG_WITH_FLAG", EventKind::kTagWithFlag)
      .value("GRAB", EventKind::kGrab)
      .value("CAPTURE", EventKind::kCapture)
      .value("OUT_OF_BOUNDS", EventKind::kOutOfBounds);

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
      });

  py::class_<FieldSpec>(m, "FieldSpec")
      .def(py::init<>())
      .def_readwrite("width", &FieldSpec::width)
      .def_readwrite("depth", &FieldSpec::depth)
      .def_readwrite("base_radius", &FieldSpec::base_radius)
      .def_readwrite("tag_radius", &FieldSpec::tag_radius)
      .def_readwrite("grab_radius", &FieldSpec::grab_radius)
      .def("flag_home", &FieldSpec::flag_home)
      .def("in_bounds", &FieldSpec::InBounds)
      .def("in_zone", &FieldSpec::InZone);

  py::class_<VehicleSpec>(m, "VehicleSpec")
      .def(py::init<>())
      .def_readwrite("max_speed", &VehicleSpec::max_speed)
      .def_readwrite("max_turn_rate", &VehicleSpec::max_turn_rate)
      .def_readwrite("dt", &VehicleSpec::dt);

  py::class_<GameSpec>(m, "GameSpec")
      .def(py::init<>())
      .def_readwrite("field", &GameSpec::field)
      .def_readwrite("vehicle", &GameSpec::vehicle)
      .def_readwrite("horizon", &GameSpec::horizon);

  py::class_<Action>(m, "Action")
      .def(py::init([](double speed, double heading) { return Action{speed, heading}; }),
           py::arg("speed"), py::arg("heading"))
      .def_readwrite("speed", &Action::desired_speed)
      .def_readwrite("heading", &Action::desired_heading);

  py::class_<AgentState>(m, "AgentState")
      .def(py::init<>())
      .def_readwrite("id", &AgentState::id)
      .def_readwrite("team", &AgentState::team)
      .def_readwrite("position", &AgentState::position)
      .def_readwrite("heading", &AgentState::heading)
      .def_readwrite("speed", &AgentState::speed)
      .def_readwrite("has_flag", &AgentState::has_flag)
      .def_readwrite("tagged", &AgentState::tagged)
      .def_readwrite("oob", &AgentState::oob);

  py::class_<FlagState>(m, "FlagState")
      .def_readwrite("team", &FlagState::team)
      .def_readwrite("position", &FlagState::position)
      .def_readwrite("carrier", &FlagState::carrier)
      .def_readwrite("at_home", &FlagState::at_home);

  py::class_<GameEvent>(m, "GameEvent")
      .def(py::init([](EventKind k, int actor, std::optional<int> victim, double t) {
             return GameEvent{k, actor, victim, t};
           }),
           py::arg("kind"), py::arg("actor"), py::arg("victim") = py::none(),
           py::arg("time") = 0.0)
      .def_readonly("kind", &GameEvent::kind)
      .def_readonly("actor", &GameEvent::actor)
      .def_readonly("victim", &GameEvent::victim)
      .def_readonly("time", &GameEvent::time)
      .def("__repr__", [](const GameEvent& e) {
        return std::string(EventKindName(e.kind)) + "(" + std::to_string(e.actor) + ")";
      });

  py::class_<GameState>(m, "GameState")
      .def_readwrite("time", &GameState::time)
      .def_readwrite("step_index", &GameState::step_index)
      .def_readwrite("agents", &GameState::agents)
      .def_readwrite("flags", &GameState::flags)
      .def_readwrite("scores", &GameState::scores)
      .def_readonly("event_history", &GameState::event_history);

  m.def("make_initial_state", &MakeInitialState, py::arg("field"),
        py::arg("agents_per_team") = 2, py::arg("seed") = 0, py::arg("jitter") = 2.0);
  m.def(
      "step_game",
      [](const GameState& s, const std::vector<Action>& actions, const GameSpec& spec) {
        StepResult r = StepGame(s, actions, spec);
        return py::make_tuple(r.state, r.events);
      },
      py::arg("state"), py::arg("actions"), py::arg("spec") = GameSpec{});
  m.def(
      "resolve_events",
      [](const GameState& s, const FieldSpec& f) {
        StepResult r = ResolveEvents(s, f);
        return py::make_tuple(r.state, r.events);
      },
      py::arg("state"), py::arg("field") = FieldSpec{});
  m.def("is_terminal", &IsTerminal);
  m.def(
      "compute_reward",
      [](const std::vector<GameEvent>& events, int agent, int agents_per_team) {
        return ComputeReward(events, agent, agents_per_team, RewardTable{});
      },
      py::arg("events"), py::arg("agent_id"), py::arg("agents_per_team") = 2);
  m.def(
      "encode_observation",
      [](const GameState& s, int agent) {
        ObservationSpec spec;
        return EncodeObservation(DiscretizeObservation(s, agent, FieldSpec{}, spec), spec);
      },
      py::arg("state"), py::arg("agent_id"));

  m.def(
      "normalize_config",
      [](const std::string& text) { return ConfigToJson(ParseConfig(text)); },
      py::arg("config_json"), "Validates a config and returns its resolved form.");
  m.def(
      "run_game",
      [](const std::string& text) {
        GameConfig c = ParseConfig(text);
        ResolvePolicyFiles(c);
        py::gil_scoped_release nogil;
        GameSummary s = RunGame(c);
        py::gil_scoped_acquire gil;
        return SummaryDict(s);
      },
      py::arg("config_json"));
  m.def(
      "game_log",
      [](const std::string& text) {
        GameConfig c = ParseConfig(text);
        ResolvePolicyFiles(c);
        return py::bytes(RunGameLog(c));
      },
      py::arg("config_json"));
  m.def(
      "verify_log",
      [](const std::string& log) {
        std::istringstream in(log);
        VerifyResult v = VerifyGameLog(in);
        return py::make_tuple(v.ok, v.message);
      },
      py::arg("log"));
  m.def(
      "log_events",
      [](const std::string& log) {
        std::istringstream in(log);
        return ReadGameLog(in).events;
      },
      py::arg("log"));
  m.def(
      "run_tournament",
      [](const std::string& text, int jobs) {
        GameConfig c = ParseConfig(text);
        ResolvePolicyFiles(c);
        TournamentOptions o;
        o.jobs = jobs;
        std::vector<MatchupResult> results;
        {
          py::gil_scoped_release nogil;
          results = RunTournament(c, c.tournament, o);
        }
        py::list out;
        for (const auto& r : results) {
          if (!r.ok()) throw std::runtime_error(r.error);
          out.append(RowDict(r.a));
          out.append(RowDict(r.b));
        }
        return out;
      },
      py::arg("config_json"), py::arg("jobs") = 1);
  m.def(
      "train",
      [](const std::string& text, std::optional<int> episodes,
         const std::string& qtable_path) {
        GameConfig c = ParseConfig(text);
        if (episodes) c.training.episodes = *episodes;
        TrainingConfig tc = c.training_config();
        TrainingResult r;
        {
          py::gil_scoped_release nogil;
          r = Train(tc);
        }
        if (!qtable_path.empty()) SaveQTables(qtable_path, r.q, {tc.obs, tc.seed});
        py::list curve;
        for (const auto& e : r.curve) curve.append(EpisodeDict(e));
        py::dict d;
        d["states"] = r.q.table.size();
        d["curve"] = curve;
        return d;
      },
      py::arg("config_json"), py::arg("episodes") = py::none(),
      py::arg("qtable_path") = "");
}
