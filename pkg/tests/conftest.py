import pytest

from etaq.zeros import refine_zero


@pytest.fixture(scope="session")
def first_zero():
    """Refined ordinate of the first critical-line zero, found in-tool."""
    return refine_zero(14.13, window=0.05, tol=1e-9)
