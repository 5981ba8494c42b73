import pytest

from htriang.gluing import solve_numeric
from htriang.isomap import (GChoices, NoIntegerSolution, check_sgn, f_candidates, f_map, g_map, image_kernel,
                            numeric_transport, parallel_transport_word, section, sgn_decomposition, verify_f,
                            verify_iso)
from htriang.monomial import SignedMonomial, parse_monomial as P


@pytest.fixture(scope="module")
def fig8(setups):
    st = setups["fig8"]
    return st, f_map(st.corr, st.tc, st.sa, st.pres), g_map(st)


def test_f_is_well_defined_everywhere(setups):
    for st in setups.values():
        f = f_map(st.corr, st.tc, st.sa, st.pres)
        rep = verify_f(f, st.gs, st.rh, st.pres, st.corr)
        assert rep.ok, rep.failures()


def test_f_candidates_agree(fig8):
    st, f, _ = fig8
    for t in st.corr.tet_map:
        cands = f_candidates(st.pres, t, 0, 1)
        assert len(cands) == 8
        assert all(st.rh.equal(cands[0], c) for c in cands)


def test_fig8_transport_word(fig8):
    st, f, g = fig8
    e1 = st.tc.by_name["1"].rep
    e14 = st.tc.by_name["14"].rep
    w = parallel_transport_word(st, e1, e14)
    assert st.ri.equal(w, P("w1*w2^2*z2*z3"))
    assert st.rh.equal(f(w), P("u1*u14^-1"))


def test_g_of_u1(fig8):
    st, f, g = fig8
    assert st.ri.equal(g.image("u1"), P("z2*z3*w1*w2^2*w3"))


def test_sgn_decompositions(fig8):
    st, _, _ = fig8
    for o in st.tc.orbits:
        if o.index == st.tc.k_orbit:
            continue
        for alt in (False, True):
            assert check_sgn(st.tc, sgn_decomposition(st.tc, o.index, alternative=alt))


def test_sections_avoid_the_book(fig8):
    st, _, _ = fig8
    for alt in (False, True):
        for (t, _), sign in section(st.tc, alt).values():
            assert not st.tc.is_distinguished_tet(t) and sign in (1, -1)


def test_iso_and_choices(fig8):
    st, f, g = fig8
    rep = verify_iso(st, f, g)
    assert rep.ok and rep.status == "proven-instance"
    alt = g_map(st, GChoices(True, True, True))
    assert all(st.ri.equal(alt.image(u), g.image(u)) for u in st.rh.generators)


def test_g_refuses_nonzero_h1(setups):
    with pytest.raises(NoIntegerSolution):
        g_map(setups["s2xs1"])


def test_s2xs1_diagnostics(setups):
    st = setups["s2xs1"]
    f = f_map(st.corr, st.tc, st.sa, st.pres)
    d = image_kernel(st, f)
    assert st.rh.equal(f.image("w"), P("u2"))
    assert str(d.kernel) == "Z" and str(d.cokernel) == "Z"
    assert any(st.ri.equal(w, P("w^3")) or st.ri.equal(w, P("w^-3")) for w in d.kernel_witnesses) \
        or d.in_kernel(P("w^3"), f)
    assert not d.in_image(P("u1"))


def test_l31_diagnostics(setups):
    st = setups["l31"]
    f = f_map(st.corr, st.tc, st.sa, st.pres)
    d = image_kernel(st, f)
    assert str(d.kernel) == "0" and str(d.cokernel) == "Z/3"


def test_numeric_transport(fig8):
    st, f, g = fig8
    pt = solve_numeric(st.gs, seed=3)[0].values
    rep = numeric_transport(st, g, pt)
    assert rep.ok(1e-9), sorted(rep.residuals, key=lambda r: -r[1])[:3]
    names = {n for n, _ in rep.residuals}
    assert {"v_p = 0", "u_l = u_m", "u_p = v_m^-1 v_l"} <= names
    # u values are nonzero at the point
    assert all(abs(v) > 0 for k, v in rep.rh_point.items() if k.startswith("u"))


def test_ring_map_rejects_unknown(fig8):
    _, f, _ = fig8
    with pytest.raises(KeyError):
        f(SignedMonomial({"nope": 1}))
