import pytest

from polarmorse.fields import rat
from polarmorse.poly import parse_poly
from polarmorse.polar import LinearForm

VARS = ("x", "y")


@pytest.fixture(scope="session")
def ell_xy():
    return LinearForm(rat(1), rat(1))


@pytest.fixture(scope="session")
def cubic_tail():
    """f = x + x^2*y: empty singular locus, everything escapes."""
    return parse_poly("x + x^2*y", VARS)


@pytest.fixture(scope="session")
def quintic_node():
    """f = xy + x^3*y^2/3: one singular point at the origin."""
    return parse_poly("x*y + 1/3*x^3*y^2", VARS)


@pytest.fixture(scope="session")
def sextic_eight():
    """f = xy + x^3*y^2/3 + x^6: eight isolated singular points."""
    return parse_poly("x*y + 1/3*x^3*y^2 + x^6", VARS)
