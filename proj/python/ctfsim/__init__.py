# Copyright 2026 The ctfsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Capture-the-flag simulator.

Configs may be given as dicts or JSON text; they are validated strictly.
"""

import json as _json

from ctfsim import _core
from ctfsim._core import (  # noqa: F401
    Action,
    AgentState,
    EventKind,
    FieldSpec,
    GameEvent,
    GameSpec,
    GameState,
    LogError,
    Team,
    Vec2,
    VehicleSpec,
    compute_reward,
    encode_observation,
    is_terminal,
    make_initial_state,
    resolve_events,
    step_game,
    verify_log,
)

__version__ = _core.__version__


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def normalize_config(config):
    """Returns the fully resolved config as a dict."""
    return _json.loads(_core.normalize_config(_text(config)))


def run_game(config):
    return _core.run_game(_text(config))


def game_log(config):
    """The complete game log as bytes."""
    return _core.game_log(_text(config))


def log_events(log):
    return _core.log_events(log if isinstance(log, str) else log.decode())


def run_tournament(config, jobs=1):
    return _core.run_tournament(_text(config), jobs)


def train(config, episodes=None, qtable_path=""):
    return _core.train(_text(config), episodes, qtable_path)
