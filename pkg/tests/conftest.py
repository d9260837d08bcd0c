from __future__ import annotations

import pytest

from autorecipe import presets
from autorecipe.prompts import default_registry
from autorecipe.taxonomy import parse_taxonomy

THREE_PART_DOC = """Part 1: asset description
An electric motor converts electrical energy into mechanical torque.

Part 2: KPI explanation
Asset health summarizes remaining useful capability of the motor.

Part 3: sensors and measurements
- vibration: accelerometer on the drive end.
"""


@pytest.fixture(scope="session")
def health_tax():
    return parse_taxonomy(presets.ASSET_HEALTH_TAXONOMY)


@pytest.fixture(scope="session")
def sustainability_tax():
    return parse_taxonomy(presets.ASSET_SUSTAINABILITY_TAXONOMY)


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def three_part_doc():
    return THREE_PART_DOC
