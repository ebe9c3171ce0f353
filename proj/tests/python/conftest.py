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

import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def scenario_dir():
    return Path(os.environ.get("HYBRIDNAV_SCENARIO_DIR", ROOT / "scenarios"))


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("HYBRIDNAV_CLI")
    if not path:
        pytest.skip("HYBRIDNAV_CLI not set")
    return path
