import numpy as np
import pytest

from htriang.gluing import (derived_values, full_point, quad_class, residual, shape_assignment, solve_numeric)
from htriang.monomial import OneElementRing, parse_monomial as P

import fuzz
from htriang.isomap import setup
from htriang.complex import TriangulationError


def test_quad_classes():
    assert quad_class(0, 1) == quad_class(3, 2) == 0
    assert quad_class(2, 0) == quad_class(1, 3) == 1
    assert quad_class(0, 3) == quad_class(1, 2) == 2


@pytest.mark.parametrize("z", [0.3 + 0.8j, -2 + 0.1j, 5j])
def test_tet_relations(z):
    a, b, c = derived_values(z)
    assert abs(a * b * c + 1) < 1e-12
    assert abs(b - a * b - 1) < 1e-12


def test_fig8_names(setups):
    sa = setups["fig8"].sa
    assert sa.names == (("z1", "z3", "z2"), ("w1", "w3", "w2"))


def test_shape_name_completion(setups):
    assert setups["s2xs1"].sa.names == (("z", "z'", "z''"), ("w", "w'", "w''"))
    assert setups["l31"].sa.names == (("z", "t", "z''"), ("w", "w'", "u"))


def test_fig8_points(setups):
    gs = setups["fig8"].gs
    pts = solve_numeric(gs, seed=1, retries=6)
    assert pts.flag == "ok"
    for p in pts:
        assert residual(gs, p.values) < 1e-9
        # no cusp equation: the variety is a curve through every point
        assert not p.isolated
        z1, w3 = p.values["z1"], p.values["w3"]
        assert abs(z1 * (1 - z1) * w3 * (1 - w3) - 1) < 1e-9


def test_complete_structure_lies_on_the_fig8_curve(setups):
    gs = setups["fig8"].gs
    w = np.exp(1j * np.pi / 3)
    assert residual(gs, {"z1": w, "w1": w}) < 1e-12


def test_solver_is_deterministic(setups):
    gs = setups["s2xs1"].gs
    a = solve_numeric(gs, seed=7)
    b = solve_numeric(gs, seed=7)
    assert [p.values for p in a] == [p.values for p in b]


def test_s2xs1_curve_is_not_isolated(setups):
    gs = setups["s2xs1"].gs
    pts = solve_numeric(gs, seed=0)
    assert pts.points and not any(p.isolated for p in pts)


def test_residual_fills_derived_values(setups):
    gs = setups["s2xs1"].gs
    z = 0.4 + 0.2j
    assert residual(gs, {"z": z, "w": 1 / z}) == pytest.approx(
        residual(gs, full_point(gs, [z, 1 / z])))


def test_degenerate_system():
    for tr in fuzz.enumerate_particular(3):
        try:
            st = setup(tr)
        except TriangulationError:
            continue
        if st.gs.degenerate:
            assert isinstance(st.ri, OneElementRing)
            with pytest.raises(ValueError):
                solve_numeric(st.gs)
            return
    pytest.fail("no degenerate input among n = 3")


def test_ri_skeleton_relations(setups):
    ri = setups["s2xs1"].ri
    assert ri.is_identity(P("z*w"))
    assert ri.is_identity(P("z'*w''"))
    assert ri.equal(P("z*z'*z''"), P("-1"))
