from hypothesis import given, strategies as st

from htriang.homology import AbelianGroupDesc
from htriang.monomial import (Additive, SignedAbelianGroup, SignedMonomial, additive_closure, hom_kernel,
                              parse_monomial)

names = st.sampled_from(["a", "b", "u1", "u14", "z'", "w''"])
monos = st.builds(SignedMonomial, st.dictionaries(names, st.integers(-7, 7), max_size=4),
                  st.sampled_from((1, -1)))


@given(monos)
def test_str_round_trip(m):
    assert parse_monomial(str(m)) == m


@given(monos, monos)
def test_group_laws(a, b):
    assert a * b == b * a
    assert (a * a.inverse()).is_one()
    assert (a / b) * b == a
    assert (a ** 3) == a * a * a


def test_sign_handling():
    m = SignedMonomial({"x": 1}, -1)
    assert str(m) == "-x"
    assert (m ** 2).sign == 1
    assert -m == SignedMonomial({"x": 1})


def test_group_with_torsion():
    G = SignedAbelianGroup(["x", "y"], [SignedMonomial({"x": 3}, -1)])
    assert G.invariants() == AbelianGroupDesc(1, (6,))
    x = SignedMonomial({"x": 1})
    assert G.equal(x ** 3, SignedMonomial.minus_one())
    assert not G.is_identity(x ** 3)
    assert G.is_identity(x ** 6)
    assert G.contains([x ** 2], x ** 4)
    assert not G.contains([x ** 2], SignedMonomial({"y": 1}))


def test_hom_kernel_multiplication_by_three():
    src = SignedAbelianGroup(["a"], [])
    tgt = SignedAbelianGroup(["b"], [SignedMonomial({"b": 3})])
    desc, wit = hom_kernel(src, tgt, {"a": SignedMonomial({"b": 1})})
    assert desc.free_rank == 1
    assert any(src.equal(w, SignedMonomial({"a": 3})) for w in wit)


def test_additive_closure_finds_binomial():
    # x + y = 0 scaled against itself: y = -x
    x, y = SignedMonomial({"x": 1}), SignedMonomial({"y": 1})
    derived, vanishing = additive_closure(["x", "y"], [], [Additive((x, y))])
    G = SignedAbelianGroup(["x", "y"], derived)
    assert G.equal(y, -x) and not vanishing


def test_additive_closure_detects_vanishing():
    x, y = SignedMonomial({"x": 1}), SignedMonomial({"y": 1})
    # with x = y, the relation x - y + x = 0 leaves a single term
    _, vanishing = additive_closure(["x", "y"], [x / y], [Additive((x, -y, x))])
    assert vanishing


def test_additive_text():
    a = Additive((SignedMonomial({"u": 1}), SignedMonomial({"v": 1}, -1)))
    assert str(a) == "u - v = 0"
    assert Additive((SignedMonomial({"u": 1}), SignedMonomial({"u": 1}, -1))).collect().terms == ()
