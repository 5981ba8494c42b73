import pytest

from htriang.kashaev import NonUnitError, ZERO, gl2_verify, lemma1, presentation, rh_skeleton, simplify
from htriang.monomial import parse_monomial as P
from htriang.trunc import ShortEdge


def test_presentation_sizes(setups):
    for name, st in setups.items():
        pres = st.pres
        assert len(pres.generators) == len(st.tc.S)
        assert all(len(cyc) == 3 for cyc in pres.triangles)
        assert len(pres.triangles) == len(st.tc.T)


def test_lemma_on_fig8(setups):
    tc = setups["fig8"].tc
    lem = lemma1(tc)
    assert lem.v_p_zero
    pres, rh = setups["fig8"].pres, setups["fig8"].rh
    assert rh.equal(pres.u_of(tc.frame["l"]), pres.u_of(tc.frame["m"]))
    assert len(lem.equations) == 4
    assert setups["fig8"].pres.v_of(tc.frame["p"]) is ZERO


def test_u_of_outside_S_raises(setups):
    st = setups["fig8"]
    outside = next(e for e in st.tc.short_lifts if not st.tc.in_S(e))
    with pytest.raises(NonUnitError):
        st.pres.u_of(outside)


def test_fig8_skeleton(setups):
    rh = setups["fig8"].rh
    assert str(rh.invariants()) == "Z + Z + Z + Z/2"


def test_s2xs1_reduces_to_a_cube_root_of_one(setups):
    st = setups["s2xs1"]
    r = simplify(st.pres)
    sk = r.skeleton()
    assert sk.is_identity(P("u2^3")) and not sk.is_identity(P("u2"))
    assert {"u1", "u2"} <= set(r.generators)
    # everything else left over is fixed by an additive relation
    assert set(r.generators) - {"u1", "u2"} <= set(r.determined)
    assert str(st.rh.invariants()) == "Z + Z + Z/6"


def test_simplify_idempotent_on_bundled(setups):
    for st in setups.values():
        r = simplify(st.pres)
        assert simplify(r) == r


def test_without_lemma_skeleton_is_coarser(setups):
    st = setups["fig8"]
    full = rh_skeleton(st.pres)
    bare = rh_skeleton(presentation(st.tc, with_lemma=False), derived=False)
    assert bare.invariants().free_rank >= full.invariants().free_rank


def test_gl2_requires_a_point(setups):
    with pytest.raises(ValueError):
        gl2_verify(setups["fig8"].pres, None)


def test_relation_text(setups):
    lines = setups["fig8"].pres.relation_lines()
    assert any(l.startswith("hexagonal:") for l in lines)
    assert any(l.startswith("triangular:") and "= 0" in l for l in lines)
    js = setups["fig8"].pres.to_json()
    assert js["abelian"] and len(js["generators"]) == 16
