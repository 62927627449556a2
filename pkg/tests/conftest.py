import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import pytest

from branchmap.field import FieldCtx
from branchmap.mpoly import PolyRing

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def ctx():
    return FieldCtx(32003)


@pytest.fixture(scope="session")
def ctx7():
    return FieldCtx(7)


@pytest.fixture(scope="session")
def ring_xyz(ctx):
    return PolyRing(ctx, ("x", "y", "z"))


@pytest.fixture(scope="session")
def ring_stu(ctx):
    return PolyRing(ctx, ("s", "t", "u"))


@pytest.fixture(scope="session")
def nodal_cubic(ring_xyz):
    from branchmap.curves import PlaneCurve
    return PlaneCurve(ring_xyz.parse("y^2*z - x^2*z - x^3"))


@pytest.fixture(scope="session")
def forward_d2():
    from branchmap.pipeline import forward_generate
    return forward_generate(2, seed=5)


@pytest.fixture(scope="session")
def forward_d3():
    from branchmap.pipeline import forward_generate
    return forward_generate(3, seed=17)


@pytest.fixture(scope="session")
def d3_normalized(forward_d3):
    """Shared d=3 pipeline front end: singular locus, adjoint, forms."""
    from branchmap.curves import singular_radical
    from branchmap.linnorm import adjoint_element, linear_normalization
    _f, _r, b = forward_d3
    sing = singular_radical(b, seed=3)
    g, _dg = adjoint_element(b, sing, seed=1)
    pc = linear_normalization(b, sing, g=g, expected_d=3)
    return b, sing, pc
