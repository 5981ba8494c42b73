"""Hypothesis property tests over bundled and generated particular H-triangulations."""
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

import fuzz
import props
from htriang.cli import bundled_examples
from htriang.complex import TriangulationError, parse_htriangulation
from htriang.homology import IntMatrix, homology, smith_normal_form
from htriang.isomap import f_map, g_map, setup, verify_iso
from htriang.monomial import OneElementRing, SignedAbelianGroup, SignedMonomial

CORPUS = ([parse_htriangulation(e.text) for e in bundled_examples()]
          + list(fuzz.enumerate_particular(2)) + list(fuzz.enumerate_particular(3)))
DEGENERATE = []
for _tr in CORPUS:
    try:
        if setup(_tr).gs.degenerate:
            DEGENERATE.append(_tr)
    except TriangulationError:
        pass

SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def inputs(draw, pool=CORPUS):
    tr = draw(st.sampled_from(pool))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return fuzz.random_relabel(tr, random.Random(seed))


matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)))


# ---------------------------------------------------------------- combinatorics

@settings(max_examples=60, deadline=None)
@given(inputs())
def test_pairing_involution(tr):
    props.pairing_involution(tr)


@settings(max_examples=60, deadline=None)
@given(inputs())
def test_edge_incidence_covers_6n(tr):
    props.edge_incidence(tr)


@settings(max_examples=60, deadline=None)
@given(inputs())
def test_edge_orbits_n_plus_one(tr):
    props.edge_orbit_count(tr)


@settings(max_examples=40, deadline=None)
@given(inputs())
def test_boundary_of_boundary(tr):
    props.boundary_squares(tr)


@settings(max_examples=40, deadline=None)
@given(inputs())
def test_check_and_reverse_involutions(tr):
    props.edge_involutions(tr)


@settings(max_examples=30, deadline=None)
@given(inputs(), st.integers(0, 2 ** 32 - 1))
def test_homology_invariant_under_relabelling(tr, seed):
    other = fuzz.random_relabel(tr, random.Random(seed))
    for k in (1, 2):
        assert str(homology(tr, k)) == str(homology(other, k))


# ---------------------------------------------------------------- SNF

@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_certificate(rows):
    props.snf_identity(IntMatrix(rows))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_sympy(rows):
    ours = [d for d in smith_normal_form(IntMatrix(rows)).diagonal if d]
    theirs = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ) if d]
    assert ours == theirs


@settings(max_examples=30, deadline=None)
@given(inputs())
def test_boundary_snf(tr):
    props.boundary_snf(tr)


# ---------------------------------------------------------------- gluing and rings

def _setup_or_skip(tr):
    try:
        return setup(tr)
    except TriangulationError:
        return None


@SLOW
@given(inputs())
def test_column_sums(tr):
    s = _setup_or_skip(tr)
    if s is not None:
        props.column_sums(s.gs)


@st.composite
def monomials(draw, gens):
    exps = draw(st.dictionaries(st.sampled_from(gens), st.integers(-6, 6), max_size=4))
    return SignedMonomial(exps, draw(st.sampled_from((1, -1))))


@SLOW
@given(st.data())
def test_normal_form_idempotent(data):
    tr = data.draw(inputs())
    s = _setup_or_skip(tr)
    if s is None:
        return
    for group in (s.ri, s.rh):
        if isinstance(group, OneElementRing):
            continue
        ms = [data.draw(monomials(list(group.generators))) for _ in range(4)]
        props.normal_form_idempotent(group, ms)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.dictionaries(st.sampled_from("abcd"), st.integers(-5, 5), max_size=3), max_size=4),
       st.dictionaries(st.sampled_from("abcd"), st.integers(-9, 9), max_size=4))
def test_normal_form_on_small_groups(rels, m):
    group = SignedAbelianGroup("abcd", [SignedMonomial(r) for r in rels])
    props.normal_form_idempotent(group, [SignedMonomial(m), SignedMonomial(m, -1)])
    for r in group.relations:
        assert group.is_identity(r)


@SLOW
@given(inputs())
def test_simplify_idempotent_and_preserves_skeleton(tr):
    s = _setup_or_skip(tr)
    if s is not None:
        props.simplify_properties(s.pres, s.rh)


@pytest.mark.skipif(not DEGENERATE, reason="no degenerate input generated")
@settings(max_examples=15, deadline=None)
@given(inputs(DEGENERATE))
def test_degenerate_inputs_give_one_element_rings(tr):
    props.degenerate_one_element(tr)
    s = setup(tr)
    rep = verify_iso(s, f_map(s.corr, s.tc, s.sa, s.pres), None)
    assert rep.ok and rep.status == "proven-instance"


@SLOW
@given(inputs())
def test_theorem_on_generated_inputs(tr):
    """When H_1 vanishes, f and g are mutually inverse on the skeletons."""
    s = _setup_or_skip(tr)
    if s is None or not homology(tr, 1).trivial:
        return
    f = f_map(s.corr, s.tc, s.sa, s.pres)
    if s.ri_one_element or s.rh_one_element:
        rep = verify_iso(s, f, None)
    else:
        rep = verify_iso(s, f, g_map(s), alternatives=False)
    assert rep.ok, rep.failures()
