"""Kashaev's ring of a particular H-triangulation, in its abelianized form.

Each short edge e in S (disjoint from the knot) carries the matrix
[[u_e, v_e], [0, 1]].  The relations are

* orientation: u_rev(e) = 1/u_e, v_rev(e) = -v_e/u_e;
* hexagonal:   u_check(e) = v_e and v_check(e) = u_e, when both edges are in S;
* triangular:  the three matrices around a triangle multiply to the identity.

All computation happens in the commutative quotient; monomial identities are
decided in the unit skeleton, additive ones are checked numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .monomial import Additive, SignedAbelianGroup, SignedMonomial, combine_terms, pair_binomials
from .trunc import (ShortEdge, TruncatedComplex, check_edge, hexagon_cycle, reverse,
                    triangle_cycle)


class NonUnitError(ValueError):
    pass


ZERO = None  # v-value of an edge known to vanish


def u_name(cls) -> str:
    return "u" + cls.name


def v_name(cls) -> str:
    return "v" + cls.name


@dataclass
class KashaevPresentation:
    tc: TruncatedComplex
    generators: list            # (u name, v name) per class in S
    hexagonal: list             # pairs of oriented lifts (e, check(e)), both in S
    triangles: list             # triangle cycles (3 oriented lifts) for triangles in T
    abelian: bool = True
    lemma: "Lemma1Result | None" = None

    @property
    def u_generators(self) -> list[str]:
        return [u for u, _ in self.generators]

    # -------------------------------------------------- skeleton values of lifts
    def u_of(self, e: ShortEdge) -> SignedMonomial:
        cls, s = self.tc.short_class(e)
        if not cls.in_S:
            raise NonUnitError(f"short edge {e} meets the knot")
        return SignedMonomial({u_name(cls): s})

    def v_of(self, e: ShortEdge):
        """Skeleton value of v_e, ZERO for the knot-parallel class where v vanishes."""
        if not self.tc.in_S(e):
            raise NonUnitError(f"short edge {e} meets the knot")
        c = check_edge(e)
        if self.tc.in_S(c):
            return self.u_of(c)
        if self.lemma is not None and self.tc.short_class(e)[0] == self.tc.short_class(self.lemma.p)[0]:
            return ZERO
        raise NonUnitError(f"v of {e}: its check edge {c} meets the knot and no lemma value is known")

    def v_symbol(self, e: ShortEdge):
        """v_e as a formal symbol: (sign, name of v of the class, power of u of the class)."""
        cls, s = self.tc.short_class(e)
        if s == 1:
            return SignedMonomial({v_name(cls): 1})
        return SignedMonomial({v_name(cls): 1, u_name(cls): -1}, -1)

    def u_symbol(self, e: ShortEdge):
        cls, s = self.tc.short_class(e)
        return SignedMonomial({u_name(cls): s})

    # -------------------------------------------------- relations as text
    def relation_lines(self) -> list[str]:
        out = []
        for u, v in self.generators:
            out.append(f"orientation: u_rev({u[1:]}) = {u}^-1, v_rev({u[1:]}) = -{u}^-1*{v}")
        for e, c in self.hexagonal:
            ue, ve = self.u_symbol(e), self.v_symbol(e)
            uc, vc = self.u_symbol(c), self.v_symbol(c)
            out.append(f"hexagonal: {uc} = {ve}, {vc} = {ue}")
        for cyc in self.triangles:
            u1, u2, u3 = (self.u_symbol(e) for e in cyc)
            v1, v2, v3 = (self.v_symbol(e) for e in cyc)
            out.append(f"triangular: {u1 * u2 * u3} = 1")
            out.append("triangular: " + str(Additive((u1 * u2 * v3, u1 * v2, v1))))
        return out

    def to_json(self):
        return {"generators": [list(g) for g in self.generators],
                "relations": self.relation_lines(),
                "abelian": self.abelian}


def presentation(tc: TruncatedComplex, with_lemma: bool = True) -> KashaevPresentation:
    gens = [(u_name(c), v_name(c)) for c in tc.S]
    hexes = []
    seen = set()
    for c in tc.S:
        for e in (c.rep, reverse(c.rep)):
            ch = check_edge(e)
            if not tc.in_S(ch):
                continue
            key = frozenset([tc.lift_class[e], tc.lift_class[ch]])
            if key in seen:
                continue
            seen.add(key)
            hexes.append((e, ch))
    tris = [triangle_cycle(t, v) for t, v in tc.T]
    pres = KashaevPresentation(tc, gens, hexes, tris)
    if with_lemma and tc.dist is not None:
        pres.lemma = lemma1(tc)
    return pres


# ---------------------------------------------------------------- the knot lemma

@dataclass
class Lemma1Result:
    p: ShortEdge
    equations: list             # the two frame triangles, monomial and additive, as text
    u_l_eq_u_m: tuple           # (u_l, u_m) skeleton symbols
    u_p_value: SignedMonomial   # u_p in terms of v_m, v_l (formal symbols)
    v_p_zero: bool
    derived: bool = True
    symbols: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        s = self.symbols
        return [f"u_l = u_m   ({s['u_l']} = {s['u_m']})",
                f"u_p = v_m^-1 v_l   ({s['u_p']} = {self.u_p_value})",
                f"v_p = 0   ({s['v_p']} = 0)"]


def _frame_uv(tc, frame):
    """u, v of the frame edges i1, i2, j1, j2, p as formal symbols in l, m, p."""
    sym = {k: (SignedMonomial({f"u_{k}": 1}), SignedMonomial({f"v_{k}": 1})) for k in ("l", "m", "p")}

    def via(x):
        e = frame[x]
        c = check_edge(e)
        for k in ("l", "m"):
            if c == frame[k] or tc.short_class(c) == tc.short_class(frame[k]):
                u, v = sym[k]
                return v, u  # u_x = v_k, v_x = u_k
            if reverse(c) == frame[k] or tc.short_class(reverse(c)) == tc.short_class(frame[k]):
                u, v = sym[k]
                # u_x = v_rev(k) = -v_k/u_k and v_x = u_rev(k) = 1/u_k
                return -(v / u), u.inverse()
        raise ValueError(f"frame edge {x} is not hexagonally paired with l or m")

    out = dict(sym)
    for x in ("i1", "i2", "j1", "j2"):
        out[x] = via(x)
    return out


def _cycle_terms(tc, frame, uv, vertex):
    """Monomial and additive relation of the triangle at a bottom vertex of T^K."""
    # i2, p, rev(i1) at the right vertex and j2, p, rev(j1) at the left one;
    # both cycles cross the knot-parallel edge in the same direction
    if vertex == frame.right:
        cyc = [frame["i2"], ShortEdge(frame["p"].tet, vertex, frame.mid, frame.top), reverse(frame["i1"])]
    else:
        cyc = [frame["j2"], frame["p"], reverse(frame["j1"])]

    def symbols(e):
        for name in ("p", "i1", "i2", "j1", "j2"):
            fe = frame[name]
            if tc.short_class(e) == tc.short_class(fe):
                return uv[name]
            if tc.short_class(e)[0] == tc.short_class(fe)[0]:
                u, v = uv[name]
                return u.inverse(), -(v / u)
        raise ValueError(f"edge {e} not in the frame")

    (u1, v1), (u2, v2), (u3, v3) = (symbols(e) for e in cyc)
    return u1 * u2 * u3, (u1 * u2 * v3, u1 * v2, v1)


def lemma1(tc: TruncatedComplex) -> Lemma1Result:
    frame = tc.frame
    uv = _frame_uv(tc, frame)
    m1, a2 = _cycle_terms(tc, frame, uv, frame.right)
    m3, a4 = _cycle_terms(tc, frame, uv, frame.left)
    eqs = [f"R mono: 1 = {m1}", "R add: " + str(Additive(a2)), f"L mono: 1 = {m3}", "L add: " + str(Additive(a4))]
    ul, um = SignedMonomial({"u_l": 1}), SignedMonomial({"u_m": 1})
    ratio = m3 / m1
    if ratio not in (ul / um, um / ul):
        raise ArithmeticError(f"the monomial triangle relations do not give u_l = u_m: ratio {ratio}")
    up = SignedMonomial({"u_p": 1})
    e = m1.exps.get("u_p", 0)
    if abs(e) != 1:
        raise ArithmeticError("u_p does not occur linearly in the right triangle")
    rest = m1 / (up ** e)
    up_val = rest.inverse() ** e
    # substitute into the right additive relation: the terms free of v_p cancel, leaving a unit times v_p
    table = {"u_p": up_val, "u_l": um}
    v_p_zero = True
    for terms in (a2, a4):
        sub = Additive(terms).substitute(table).collect()
        left = [t for t in sub.terms if "v_p" in t.exps]
        rest_terms = [t for t in sub.terms if "v_p" not in t.exps]
        if rest_terms or len(left) != 1 or left[0].exps["v_p"] != 1:
            v_p_zero = False
    if not v_p_zero:
        raise ArithmeticError("the additive triangle relations do not force v_p = 0")
    symbols = {"u_l": u_name(tc.short_class(frame["l"])[0]),
               "u_m": u_name(tc.short_class(frame["m"])[0]),
               "u_p": u_name(tc.short_class(frame["p"])[0]),
               "v_p": v_name(tc.short_class(frame["p"])[0])}
    return Lemma1Result(frame["p"], eqs, (ul, um), up_val, True, True, symbols)


def lemma_monomials(pres: KashaevPresentation) -> list[SignedMonomial]:
    """The knot lemma's monomial relations in the u-generators (each = 1)."""
    lem = pres.lemma
    tc = pres.tc
    fr = tc.frame
    if lem is None:
        return []
    out = [pres.u_of(fr["l"]) / pres.u_of(fr["m"])]
    sub = {"v_m": pres.v_of(fr["m"]), "v_l": pres.v_of(fr["l"])}
    out.append(pres.u_of(fr["p"]) / lem.u_p_value.substitute(sub))
    return out


# ---------------------------------------------------------------- skeleton

def skeleton_relations(pres: KashaevPresentation) -> list[SignedMonomial]:
    tc = pres.tc
    rels = []
    for cyc in pres.triangles:
        m = SignedMonomial()
        for e in cyc:
            m = m * pres.u_of(e)
        rels.append(m)
    # u_check(rev e) = v_rev(e) = -u_e^-1 v_e = -u_e^-1 u_check(e)
    for c in tc.S:
        for e in (c.rep, reverse(c.rep)):
            a, b = check_edge(reverse(e)), check_edge(e)
            if tc.in_S(a) and tc.in_S(b):
                rels.append(-(pres.u_of(a) * pres.u_of(e) / pres.u_of(b)))
    rels.extend(lemma_monomials(pres))
    return rels


def rh_skeleton(pres: KashaevPresentation, lemma_relations=None, derived: bool = True) -> SignedAbelianGroup:
    """Unit skeleton: monomial relations, plus the monomial consequences of additive ones."""
    rels = skeleton_relations(pres)
    if lemma_relations:
        rels.extend(lemma_relations)
    if derived and pres.abelian:
        rels.extend(simplify(pres).derived)
    return SignedAbelianGroup(pres.u_generators, _dedup(rels))


def _dedup(rels):
    seen, out = set(), []
    for r in rels:
        k = r if r.sign == 1 or r.exps else r
        if k.is_one() or k in seen or k.inverse() in seen:
            continue
        seen.add(k)
        out.append(k)
    return out


def additive_relations(pres: KashaevPresentation) -> list[Additive]:
    """Triangular additive relations with v folded into u (zero terms removed)."""
    out = []
    for cyc in pres.triangles:
        u1, u2, u3 = (pres.u_of(e) for e in cyc)
        v1, v2, v3 = (pres.v_of(e) for e in cyc)
        terms = []
        for coeff, v in ((u1 * u2, v3), (u1, v2), (SignedMonomial(), v1)):
            if v is not ZERO:
                terms.append(coeff * v)
        out.append(Additive(tuple(terms)))
    return out


# ---------------------------------------------------------------- simplification

@dataclass
class ReducedPresentation:
    generators: list
    monomial_relations: list
    additive_relations: list
    substitutions: dict          # eliminated generator -> monomial in survivors
    preferred: tuple = ()
    vanishing: tuple = ()        # units forced to be zero: the ring has one element
    determined: dict = field(default_factory=dict)   # generator -> additive expression for it
    derived: tuple = ()          # monomial relations obtained from additive ones

    @property
    def one_element(self) -> bool:
        return bool(self.vanishing)

    def skeleton(self) -> SignedAbelianGroup:
        return SignedAbelianGroup(self.generators, self.monomial_relations)

    def lines(self) -> list[str]:
        out = ["generators: " + ", ".join(self.generators)]
        out += [f"{r} = 1" for r in self.monomial_relations]
        out += [str(a) for a in self.additive_relations]
        out += [f"{g} := {m}" for g, m in self.substitutions.items()]
        out += [f"{g}: {text}" for g, text in self.determined.items()]
        return out

    def to_json(self):
        return {"generators": list(self.generators),
                "monomial_relations": [str(r) + " = 1" for r in self.monomial_relations],
                "additive_relations": [str(a) for a in self.additive_relations],
                "substitutions": {g: str(m) for g, m in self.substitutions.items()},
                "determined": dict(self.determined)}

    def __eq__(self, other):
        return (isinstance(other, ReducedPresentation)
                and self.generators == other.generators
                and self.monomial_relations == other.monomial_relations
                and [a.terms for a in self.additive_relations] == [a.terms for a in other.additive_relations])


def _normalize(r: SignedMonomial) -> SignedMonomial:
    if r.exps and next(iter(r.exps.values())) < 0:
        return r.inverse()
    return r


def _determined(gens, mono, add, preferred):
    """Generators solvable from one additive relation as a Laurent polynomial in the rest."""
    out = {}
    used = {g for r in mono for g in r.exps}
    for g in gens:
        if g in preferred or g in used:
            continue
        for a in add:
            hits = [t for t in a.terms if g in t.exps]
            if len(hits) == 1 and abs(hits[0].exps[g]) == 1:
                t = hits[0]
                e = t.exps[g]
                coeff = t / SignedMonomial({g: e})
                rest = [-(x / coeff) for x in a.terms if x is not t]
                expr = " + ".join(str(x) for x in rest).replace("+ -", "- ")
                out[g] = f"{g}^{e} = {expr}" if e != 1 else f"{g} = {expr}"
                break
    return out


def simplify(pres) -> ReducedPresentation:
    """Eliminate generators that occur with exponent +-1 in some monomial relation."""
    if isinstance(pres, ReducedPresentation):
        gens = list(pres.generators)
        mono = list(pres.monomial_relations)
        add = list(pres.additive_relations)
        table = dict(pres.substitutions)
        preferred = pres.preferred
        derived0 = pres.derived
    else:
        if not pres.abelian:
            raise ValueError("simplify works on the abelianized presentation")
        gens = list(pres.u_generators)
        mono = _dedup(skeleton_relations(pres))
        add = additive_relations(pres)
        table = {}
        derived0 = ()
        preferred = tuple(u_name(c) for c in pres.tc.S if not c.name.startswith("s"))

    def cost(g):
        # unlabelled generators go first, later ones before earlier ones
        return (g in preferred, -gens.index(g))

    vanishing = []
    derived = list(derived0)
    while True:
        while True:
            best = None
            for i, r in enumerate(mono):
                for g, e in r.exps.items():
                    if abs(e) == 1:
                        key = (cost(g), r.degree())
                        if best is None or key < best[0]:
                            best = (key, i, g, e)
            if best is None:
                break
            _, i, g, e = best
            r = mono.pop(i)
            # g^e * rest = 1  ->  g = rest^-e
            rest = r / SignedMonomial({g: e})
            val = rest.inverse() if e == 1 else rest
            sub = {g: val}
            table = {k: v.substitute(sub) for k, v in table.items()}
            table[g] = val
            mono = _dedup([x.substitute(sub) for x in mono])
            add = [a.substitute(sub).collect() for a in add]
            gens.remove(g)
        # terms equal in the unit skeleton combine; a surviving binomial is a monomial relation
        group = SignedAbelianGroup(gens, mono)
        new_mono, kept = [], []
        for a in add:
            terms = combine_terms(group, a.terms)
            if len(terms) == 2:
                new_mono.append(-(terms[0] / terms[1]))
            elif len(terms) == 1:
                vanishing.append(terms[0])
            elif terms:
                kept.append(Additive(tuple(terms)))
        add = kept
        new_mono.extend(pair_binomials(group, add))
        new_mono = _dedup([r for r in new_mono if not group.is_identity(r)])
        if not new_mono:
            break
        derived.extend(new_mono)
        mono = _dedup(mono + new_mono)
    mono = sorted({_normalize(r) for r in mono if not r.is_one()}, key=lambda r: (r.degree(), str(r)))
    add = [a for a in (x.collect() for x in add) if a.terms]
    uniq = []
    for a in add:
        if all(set(a.terms) != set(b.terms) for b in uniq):
            uniq.append(a)
    return ReducedPresentation(gens, mono, uniq, table, preferred, tuple(vanishing),
                               _determined(gens, mono, uniq, preferred), tuple(derived))


# ---------------------------------------------------------------- GL(2)

J_SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def edge_matrix(pres: KashaevPresentation, point: dict, e: ShortEdge) -> np.ndarray:
    cls, s = pres.tc.short_class(e)
    u = point[u_name(cls)]
    v = point[v_name(cls)]
    M = np.array([[u, v], [0, 1]], dtype=complex)
    return M if s == 1 else np.linalg.inv(M)


@dataclass
class GL2Report:
    triangle_residuals: list
    hexagon_residuals: list

    @property
    def max_residual(self) -> float:
        vals = [r for _, r in self.triangle_residuals + self.hexagon_residuals]
        return max(vals) if vals else 0.0

    def ok(self, tol=1e-9) -> bool:
        return self.max_residual < tol


def gl2_verify(pres: KashaevPresentation, rh_point: dict | None) -> GL2Report:
    """Triangle products are the identity; hexagon boundaries close up with the swap matrix."""
    if rh_point is None:
        raise ValueError("no point of R_H available")
    I = np.eye(2)
    tri = []
    for cyc in pres.triangles:
        M = I.astype(complex)
        for e in cyc:
            M = M @ edge_matrix(pres, rh_point, e)
        tri.append((cyc[0].tet, float(np.max(np.abs(M - I)))))
    hexes = []
    for e, c in pres.hexagonal:
        # u_check = v_e, v_check = u_e: M_check equals M_e J with the bottom row reset
        Me = edge_matrix(pres, rh_point, e)
        Mc = edge_matrix(pres, rh_point, c)
        top = (Me @ J_SWAP)[0]
        hexes.append((str(e), float(np.max(np.abs(Mc[0] - top)))))
    return GL2Report(tri, hexes)
