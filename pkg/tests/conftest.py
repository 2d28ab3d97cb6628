import math
import pathlib

import pytest

import rydlink as rl

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
DEFAULT_CONFIG = REPO_ROOT / "configs" / "default.toml"

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def config_path() -> pathlib.Path:
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def scenario() -> rl.ScenarioConfig:
    return rl.load_config(str(DEFAULT_CONFIG))


@pytest.fixture(scope="session")
def default_decays() -> rl.DecaySpec:
    # gamma_2..gamma_5 of the shipped scenario
    return rl.DecaySpec(
        gamma=(0.0, TWO_PI * 6e6, TWO_PI * 3e3, TWO_PI * 2e3, TWO_PI * 2e3)
    )
