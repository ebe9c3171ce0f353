# Copyright (C) 2026 The hybridnav Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hybrid obstacle avoidance with learned perception."""

from ._core import (
    Config,
    Covering,
    Error,
    PotentialField,
    arc_csv,
    demo_stuck,
    load_config,
    parse_config,
    run_scenario,
    verify,
)

__all__ = [
    "Config",
    "Covering",
    "Error",
    "PotentialField",
    "arc_csv",
    "demo_stuck",
    "load_config",
    "parse_config",
    "run_scenario",
    "verify",
]
