import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.fock_core import build_hermite_table, make_fock_config  # noqa: E402


@pytest.fixture(scope="session")
def cfg4():
    return make_fock_config(4)


@pytest.fixture(scope="session")
def cfg8():
    return make_fock_config(8)


@pytest.fixture(scope="session")
def table4(cfg4):
    return build_hermite_table(3, cfg4.x_grid)
