import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from app.state import RunState  # noqa: E402
from utils.app_init import initialize_engine, load_config  # noqa: E402


@pytest.fixture
def config():
    return load_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def state(config):
    run_state = RunState()
    initialize_engine(run_state, config)
    return run_state
