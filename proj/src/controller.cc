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

#include "ctf/controller.h"

#include <stdexcept>

namespace ctf {

TreeTeamController::TreeTeamController(Team team, std::vector<ModeTree> trees,
                                       FieldSpec field, DecisionDomain dom)
    : team_(team), trees_(std::move(trees)), field_(field), dom_(std::move(dom)) {
  for (const auto& t : trees_) {
    auto problems = t.Violations();
    if (!problems.empty()) throw std::invalid_argument(problems.front());
  }
}

std::vector<AgentCommand> TreeTeamController::Decide(const GameState& world) {
  std::vector<int> ids = world.team_members(team_);
  if (ids.size() != trees_.size()) {
    throw std::invalid_argument("team has " + std::to_string(ids.size()) +
                                " agents but " + std::to_string(trees_.size()) +
                                " mode trees");
  }
  std::vector<AgentCommand> out;
  out.reserve(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    DecisionContext ctx{world, field_, ids[k], std::nullopt};
    HelmDecision d = RunHelm(trees_[k], ctx, dom_);
    out.push_back({d.action, std::move(d.mode)});
  }
  return out;
}

GameState RunMatch(const GameSpec& spec, GameState world, TeamController& blue,
                   TeamController& red, const StepObserver& on_step) {
  const std::size_t n = world.agents.size();
  std::vector<AgentCommand> commands;
  std::vector<Action> actions;
  commands.reserve(n);
  actions.reserve(n);
  while (!IsTerminal(world, spec.horizon)) {
    commands = blue.Decide(world);
    std::vector<AgentCommand> r = red.Decide(world);
    commands.insert(commands.end(), std::make_move_iterator(r.begin()),
                    std::make_move_iterator(r.end()));
    if (commands.size() != n) {
      throw std::logic_error("controllers returned " +
                             std::to_string(commands.size()) + " commands for " +
                             std::to_string(n) + " agents");
    }
    actions.clear();
    for (const auto& c : commands) actions.push_back(c.action);
    std::vector<GameEvent> events = StepGameInPlace(world, actions, spec);
    blue.Observe(world, events);
    red.Observe(world, events);
    if (on_step) on_step(world, commands, events);
  }
  blue.Finish(world);
  red.Finish(world);
  return world;
}

}  // namespace ctf
