import numpy as np
import pytest

from twosquares.arith import FactorTable, build_factor_table, r2_lattice_range


@pytest.fixture(scope="session")
def ftab() -> FactorTable:
    """Factor table large enough for every windowed experiment in the suite."""
    return build_factor_table(250_000)


@pytest.fixture(scope="session")
def r2_1e5() -> np.ndarray:
    return r2_lattice_range(10**5 + 8)


@pytest.fixture(scope="session")
def r2_1e7() -> np.ndarray:
    """Shared r_2 range table for the large arithmetic-progression runs."""
    return r2_lattice_range(10**7 + 8)
