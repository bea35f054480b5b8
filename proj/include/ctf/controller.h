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

#ifndef CTF_CONTROLLER_H_
#define CTF_CONTROLLER_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ctf/dynamics.h"
#include "ctf/game_core.h"
#include "ctf/game_state.h"
#include "ctf/helm.h"
#include "ctf/mode_tree.h"

namespace ctf {

struct AgentCommand {
  Action action;
  std::string mode;  // active mode path or option name, for the log
};

// Decides for every agent of one team. One instance per team per game.
class TeamController {
 public:
  virtual ~TeamController() = default;

  // One command per team member, in ascending agent id.
  virtual std::vector<AgentCommand> Decide(const GameState& world) = 0;
  // Called after each transition with that step's events.
  virtual void Observe(const GameState& /*world*/,
                       std::span<const GameEvent> /*events*/) {}
  virtual void Finish(const GameState& /*world*/) {}
};

// Runs one fixed mode tree per agent through the helm.
class TreeTeamController : public TeamController {
 public:
  TreeTeamController(Team team, std::vector<ModeTree> trees, FieldSpec field,
                     DecisionDomain dom);

  std::vector<AgentCommand> Decide(const GameState& world) override;

 private:
  Team team_;
  std::vector<ModeTree> trees_;
  FieldSpec field_;
  DecisionDomain dom_;
};

// Called after every transition with the post-step world, all commands
// (indexed by agent id) and the step's events.
using StepObserver = std::function<void(
    const GameState&, std::span<const AgentCommand>, std::span<const GameEvent>)>;

// Plays from `world` until the horizon. Returns the terminal state.
GameState RunMatch(const GameSpec& spec, GameState world, TeamController& blue,
                   TeamController& red, const StepObserver& on_step = {});

}  // namespace ctf

#endif  // CTF_CONTROLLER_H_
