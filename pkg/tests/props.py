"""Structural properties checked on every bundled and generated input.

Each check raises AssertionError with a message; they are shared by the
hypothesis suite and the acceptance script.
"""
from __future__ import annotations

import itertools

from htriang.complex import TriangulationError, edge_orbits, vertex_orbits
from htriang.gluing import gluing_system, ri_skeleton, shape_assignment
from htriang.homology import IntMatrix, boundary_matrices, smith_normal_form
from htriang.isomap import degenerate_witness, f_map, setup
from htriang.kashaev import simplify
from htriang.monomial import OneElementRing, SignedMonomial
from htriang.trunc import check_edge, reverse, truncate


def pairing_involution(tr):
    for t in range(tr.n):
        for f in range(4):
            (t2, f2), p = tr.glued(t, f)
            (t3, f3), q = tr.glued(t2, f2)
            assert (t3, f3) == (t, f), f"slot {(t, f)} does not pair back"
            assert all(q[p[x]] == x for x in range(4)), f"gluing at {(t, f)} is not inverted"


def edge_incidence(tr):
    seen = []
    for o in edge_orbits(tr):
        seen += [(t, min(a, b), max(a, b)) for t, a, b, _, _ in o.walk]
    assert len(seen) == 6 * tr.n, f"{len(seen)} incidences, expected {6 * tr.n}"
    assert len(set(seen)) == len(seen), "an edge incidence is visited twice"


def edge_orbit_count(tr):
    if len(vertex_orbits(tr)) == 1:
        k = len(edge_orbits(tr))
        assert k == tr.n + 1, f"{k} edge orbits for n = {tr.n}"


def boundary_squares(tr):
    d1, d2, d3 = boundary_matrices(tr)
    assert (d1 @ d2).is_zero(), "d1 d2 != 0"
    assert (d2 @ d3).is_zero(), "d2 d3 != 0"


def snf_identity(A: IntMatrix):
    s = smith_normal_form(A)
    assert s.verify(A), f"SNF certificate fails for {A}"


def boundary_snf(tr):
    for d in boundary_matrices(tr):
        snf_identity(d)


def edge_involutions(tr):
    tc = truncate(tr)
    for e in tc.short_lifts:
        assert reverse(reverse(e)) == e
        assert check_edge(check_edge(e)) == e, f"check is not an involution at {e}"
        assert tc.partner(tc.partner(e)) == e


def column_sums(gs):
    if gs is None:
        return
    M = gs.exponent_matrix()
    for j, name in enumerate(gs.params):
        col = sum(row[j] for row in M)
        assert col == 2, f"parameter {name} appears {col} times"


def normal_form_idempotent(group, monomials):
    for m in monomials:
        r = group.nf_monomial(m)
        assert group.equal(r, m), f"nf({m}) = {r} is not equal to {m}"
        assert group.nf_monomial(r) == r, f"nf is not idempotent at {m}"


def simplify_properties(pres, rh):
    r = simplify(pres)
    assert simplify(r) == r, "simplify is not idempotent"
    if r.one_element:
        return r
    sk = r.skeleton()
    assert str(sk.invariants()) == str(rh.invariants()), (
        f"skeleton changed: {sk.invariants()} vs {rh.invariants()}")
    table = {g: r.substitutions.get(g, SignedMonomial({g: 1})) for g in rh.generators}
    for g, img in table.items():
        assert set(img.exps) <= set(r.generators), f"{g} not eliminated into survivors"
    for rel in rh.relations:
        assert sk.is_identity(rel.substitute(table)), f"relation {rel} = 1 lost by simplify"
    return r


def degenerate_one_element(tr):
    st = setup(tr)
    if not st.gs.degenerate:
        return
    assert isinstance(ri_skeleton(st.gs), OneElementRing)
    fmap = f_map(st.corr, st.tc, st.sa, st.pres)
    assert degenerate_witness(st, fmap) is not None, "R_H not shown to have one element"


def sample_monomials(group, k=6):
    gens = list(group.generators)
    out = [SignedMonomial({g: 1}) for g in gens[:k]]
    for a, b in itertools.islice(itertools.combinations(gens, 2), k):
        out.append(SignedMonomial({a: 2, b: -3}, -1))
    return out


def run_all(tr):
    """All checks on one input; returns the names checked."""
    done = []
    for fn in (pairing_involution, edge_incidence, edge_orbit_count, boundary_squares, boundary_snf,
               edge_involutions):
        fn(tr)
        done.append(fn.__name__)
    try:
        st = setup(tr)
    except TriangulationError:
        return done
    column_sums(st.gs)
    done.append("column_sums")
    if not isinstance(st.ri, OneElementRing):
        normal_form_idempotent(st.ri, sample_monomials(st.ri))
    normal_form_idempotent(st.rh, sample_monomials(st.rh))
    done.append("normal_form_idempotent")
    simplify_properties(st.pres, st.rh)
    done.append("simplify")
    degenerate_one_element(tr)
    done.append("degenerate_one_element")
    return done
