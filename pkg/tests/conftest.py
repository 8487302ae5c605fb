import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fchpearl import (WellSpec, RadialGrid, compute_u0, assemble_L0,
                      coefficient_table)


@pytest.fixture(scope="session")
def well():
    return WellSpec()


@pytest.fixture(scope="session")
def grid_fast(well):
    """Coarser working grid for module tests (coefficients good to ~6 digits)."""
    return RadialGrid.default(well, n=8193)


@pytest.fixture(scope="session")
def bilayer_fast(well, grid_fast):
    return compute_u0(well, grid_fast)


@pytest.fixture(scope="session")
def op_fast(bilayer_fast):
    return assemble_L0(bilayer_fast)


@pytest.fixture(scope="session")
def table_fast(well, bilayer_fast, op_fast):
    return coefficient_table(well, gamma=1.0, eta1=2.0, eta_d=0.0,
                             bilayer=bilayer_fast, op=op_fast)


@pytest.fixture(scope="session")
def grid_default(well):
    return RadialGrid.default(well)


@pytest.fixture(scope="session")
def bilayer_default(well, grid_default):
    return compute_u0(well, grid_default)


@pytest.fixture(scope="session")
def op_default(bilayer_default):
    return assemble_L0(bilayer_default)
