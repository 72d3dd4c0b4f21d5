import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from liequant.bfamily import solve_bfamily          # noqa: E402
from liequant.liealg import borel2, build_double    # noqa: E402


@pytest.fixture(scope="session")
def B4():
    """The degree-4 normalized family with lambda = 1/2."""
    return solve_bfamily(Fraction(1, 2), 4, "paper3")


@pytest.fixture(scope="session")
def B4_rref():
    return solve_bfamily(Fraction(1, 2), 4, "rref-zero")


@pytest.fixture(scope="session")
def borel():
    return borel2()


@pytest.fixture(scope="session")
def dbl(borel):
    return build_double(borel)
