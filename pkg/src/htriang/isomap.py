"""The map f: R_I -> R_H, its inverse g when H_1 = 0, and diagnostics otherwise.

Everything is computed on unit skeletons: f and g send generators to signed
monomials, and compositions are compared by normal forms.  Additive identities
are checked numerically at a solved point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .complex import Triangulation, ccw_next, ccw_prev, completion, face_orbits
from .gluing import GluingSystem, ShapeAssignment, gluing_system, ri_skeleton, shape_assignment
from .homology import (AbelianGroupDesc, boundary_matrices, face_slot_sign, homology, integer_kernel,
                       solve_integer_linear)
from .kashaev import (ZERO, KashaevPresentation, NonUnitError, additive_relations, presentation,
                      rh_skeleton, simplify, u_name, v_name, gl2_verify)
from .monomial import OneElementRing, SignedAbelianGroup, SignedMonomial, hom_kernel
from .trunc import (CellCorrespondence, LongEdge, ShortEdge, TruncatedComplex, check_edge, collapse,
                    r_map, reverse, triangle_cycle, truncate)


@dataclass
class RingMap:
    direction: str              # "RI->RH" or "RH->RI"
    assignment: dict            # source generator -> SignedMonomial in target generators

    def __call__(self, m: SignedMonomial) -> SignedMonomial:
        missing = [g for g in m.exps if g not in self.assignment]
        if missing:
            raise KeyError(f"generators without image: {missing}")
        return m.substitute(self.assignment)

    def image(self, g: str) -> SignedMonomial:
        return self.assignment[g]

    def to_json(self):
        return {"direction": self.direction,
                "assignment": {g: str(m) for g, m in self.assignment.items()}}


@dataclass
class IsoReport:
    checks: list = field(default_factory=list)    # (name, ok, detail)
    status: str = "unknown"
    witnesses: list = field(default_factory=list)
    cokernel: AbelianGroupDesc | None = None
    kernel: AbelianGroupDesc | None = None

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c[1]]

    def lines(self) -> list[str]:
        out = [f"status: {self.status}"]
        for name, ok, detail in self.checks:
            out.append(f"[{'ok' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        if self.kernel is not None:
            out.append(f"kernel: {self.kernel}")
        if self.cokernel is not None:
            out.append(f"cokernel: {self.cokernel}")
        out += [f"witness: {w}" for w in self.witnesses]
        return out

    def to_json(self):
        return {"status": self.status,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
                "kernel": str(self.kernel) if self.kernel is not None else None,
                "cokernel": str(self.cokernel) if self.cokernel is not None else None,
                "witnesses": [str(w) for w in self.witnesses]}


# ---------------------------------------------------------------- context

@dataclass
class Setup:
    """Everything derived from one particular H-triangulation."""
    tr: Triangulation
    tc: TruncatedComplex
    it: Triangulation
    corr: CellCorrespondence
    sa: ShapeAssignment
    gs: GluingSystem
    pres: KashaevPresentation

    @cached_property
    def ri(self):
        return ri_skeleton(self.gs)

    @cached_property
    def rh(self) -> SignedAbelianGroup:
        return rh_skeleton(self.pres)

    @cached_property
    def reduced(self):
        return simplify(self.pres)

    @property
    def ri_one_element(self) -> bool:
        return isinstance(self.ri, OneElementRing)

    @property
    def rh_one_element(self) -> bool:
        return self.reduced.one_element

    def param(self, t: int, a: int, b: int) -> str:
        return self.sa.param(self.corr.tet_map[t], a, b)


def setup(tr: Triangulation) -> Setup:
    tc = truncate(tr)
    it, corr = collapse(tr)
    sa = shape_assignment(it)
    gs = gluing_system(it, sa)
    return Setup(tr, tc, it, corr, sa, gs, presentation(tc))


# ---------------------------------------------------------------- f

def _f_at_corner(pres: KashaevPresentation, t: int, a: int, b: int) -> SignedMonomial:
    """f of the parameter of edge ab of tet t, read at the corner where ab meets the link of a."""
    vi = pres.v_of(ShortEdge(t, a, b, ccw_prev(a, b)))
    vj = pres.v_of(ShortEdge(t, a, b, ccw_next(a, b)))
    if vi is ZERO or vj is ZERO:
        raise NonUnitError(f"f at corner ({t}: {a},{b}) needs a vanishing v")
    return vi / vj


def _f_parallel(pres: KashaevPresentation, t: int, a: int, b: int) -> SignedMonomial:
    """The same value as u_p u_q^-1 with p, q the short edges parallel to a->b."""
    c, d = completion(a, b)
    return pres.u_of(ShortEdge(t, c, a, b)) / pres.u_of(ShortEdge(t, d, a, b))


def f_candidates(pres: KashaevPresentation, t: int, a: int, b: int) -> list[SignedMonomial]:
    """All computations of f for the parameter on edge ab: both endpoints of both opposite edges."""
    c, d = completion(a, b)
    out = []
    for x, y in ((a, b), (b, a), (c, d), (d, c)):
        out.append(_f_at_corner(pres, t, x, y))
        out.append(_f_parallel(pres, t, x, y))
    return out


def f_map(corr: CellCorrespondence, tc: TruncatedComplex, sa: ShapeAssignment,
          pres: KashaevPresentation | None = None) -> RingMap:
    pres = pres or presentation(tc)
    assign = {}
    for t, i in corr.tet_map.items():
        for a, b in ((0, 1), (0, 2), (0, 3)):
            assign[sa.param(i, a, b)] = _f_at_corner(pres, t, a, b)
    return RingMap("RI->RH", assign)


def verify_f(fmap: RingMap, gs: GluingSystem, rh: SignedAbelianGroup,
             pres: KashaevPresentation | None = None, corr: CellCorrespondence | None = None) -> IsoReport:
    rep = IsoReport()
    for z, z1, z2 in gs.sa.names:
        m = fmap(SignedMonomial({z: 1, z1: 1, z2: 1}))
        rep.add(f"f({z})f({z1})f({z2}) = -1", rh.is_identity(-m), str(rh.nf_monomial(m)))
    for eq in gs.equations:
        rep.add(f"f(edge {eq.orbit}) = 1", rh.is_identity(fmap(eq.monomial)), str(eq))
    if pres is not None and corr is not None:
        for t, i in corr.tet_map.items():
            for a, b in ((0, 1), (0, 2), (0, 3)):
                cands = f_candidates(pres, t, a, b)
                same = all(rh.equal(cands[0], c) for c in cands[1:])
                rep.add(f"f({gs.sa.param(i, a, b)}) independent of the boundary point", same)
    rep.status = "well-defined" if rep.ok else "failed"
    return rep


# ---------------------------------------------------------------- sgn

@dataclass(frozen=True)
class SgnDecomposition:
    edge: int
    coefficients: dict          # face orbit index -> integer

    def nonzero(self):
        return {f: c for f, c in self.coefficients.items() if c}


class NoIntegerSolution(ValueError):
    pass


def _reduced_boundary(tc: TruncatedComplex):
    d1, d2, d3 = boundary_matrices(tc.tr)
    faces = face_orbits(tc.tr)
    d = tc.dist
    fk = next(i for i, slots in enumerate(faces) if (d.tet, d.face) in slots)
    rows = [r for r in range(d2.rows) if r != tc.k_orbit]
    cols = [c for c in range(d2.cols) if c != fk]
    return d2.submatrix(rows, cols), rows, cols


def sgn_decomposition(tc: TruncatedComplex, A: int, alternative: bool = False) -> SgnDecomposition:
    """Integer face coefficients whose boundary is the edge class A (K and F^K removed)."""
    M, rows, cols = _reduced_boundary(tc)
    if A not in rows:
        raise ValueError("the knot edge has no decomposition")
    b = [int(r == A) for r in rows]
    x = solve_integer_linear(M, b)
    if x is None:
        raise NoIntegerSolution(f"no integer solution for edge class {A}: it is nonzero in H_1")
    if alternative:
        ker = integer_kernel(M)
        if ker:
            x = [xi + ki for xi, ki in zip(x, ker[0])]
    return SgnDecomposition(A, {c: x[k] for k, c in enumerate(cols)})


def check_sgn(tc: TruncatedComplex, sd: SgnDecomposition) -> bool:
    M, rows, cols = _reduced_boundary(tc)
    x = [sd.coefficients.get(c, 0) for c in cols]
    return M.apply(x) == [int(r == sd.edge) for r in rows]


# ---------------------------------------------------------------- parallel transport

def _pair(a, b):
    """(c, d) with (a, b, c, d) even: f(param of ab) = u_(c,a>b) / u_(d,a>b)."""
    return completion(a, b)


def _tet_factor(st: Setup, t: int, a: int, b: int):
    """R_I value of stepping from (c,a>b) to (d,a>b) in tet t; None at a barrier."""
    if st.tc.is_distinguished_tet(t):
        fr = st.tc.frame
        if {a, b} == {fr.left, fr.right}:
            return SignedMonomial()   # u_l = u_m
        return None
    return SignedMonomial({st.param(t, a, b): 1})


def _walk(st: Setup, e: ShortEdge, target, forward: bool, limit: int):
    tc = st.tc
    cur = e
    word = SignedMonomial()
    for _ in range(limit):
        if tc.lift_class[cur] == target:
            return word
        t, x, a, b = cur
        c, d = _pair(a, b)
        here_start = c if forward else d
        if x != here_start:
            cur = tc.partner(cur)
            if tc.lift_class[cur] == target:
                return word
            t, x, a, b = cur
            c, d = _pair(a, b)
            if x != (c if forward else d):
                raise ArithmeticError("parallel edges are not consistently ordered")
        fac = _tet_factor(st, t, a, b)
        if fac is None:
            return None
        if forward:
            word = word * fac
            cur = ShortEdge(t, d, a, b)
        else:
            word = word / fac
            cur = ShortEdge(t, c, a, b)
    return None


def parallel_transport_word(st: Setup, e: ShortEdge, e2: ShortEdge, prefer_forward: bool = True,
                            check_paths: bool = True) -> SignedMonomial:
    """m in R_I with f(m) = u_e / u_e2, for parallel short edges in S."""
    tc = st.tc
    if tc.parallel_class(e) != tc.parallel_class(e2):
        raise ValueError(f"short edges {e} and {e2} are not parallel")
    target = tc.lift_class[e2]
    deg = st.tc.orbits[tc.parallel_class(e)[0]].degree
    limit = 2 * deg + 2
    fw = _walk(st, e, target, True, limit)
    bw = _walk(st, e, target, False, limit)
    if fw is None and bw is None:
        raise ArithmeticError(f"no path from {e} to {e2} avoiding the knot")
    if check_paths and fw is not None and bw is not None and not st.gs.degenerate:
        if not st.ri.equal(fw, bw):
            raise ArithmeticError(f"path dependence between {e} and {e2}: {fw} vs {bw}")
    if prefer_forward:
        return fw if fw is not None else bw
    return bw if bw is not None else fw


# ---------------------------------------------------------------- g

def _positive_parallel(tc: TruncatedComplex, A: int) -> list[ShortEdge]:
    out = []
    for cls in tc.S:
        for e in (cls.rep, reverse(cls.rep)):
            if tc.parallel_class(e) == (A, 1):
                out.append(e)
    return sorted(out)


def section(tc: TruncatedComplex, alternative: bool = False) -> dict:
    """A face lift outside T^K for every face orbit (first or last in lexicographic order).

    Values are (lift, sign): sign compares the lift's boundary cycle with the
    orientation the orbit carries in the boundary matrix.
    """
    out = {}
    for i, slots in enumerate(face_orbits(tc.tr)):
        ok = sorted(s for s in slots if not tc.is_distinguished_tet(s[0]))
        if ok:
            lift = ok[-1] if alternative else ok[0]
            sign = 1 if lift == slots[0] else face_slot_sign(tc.tr, *slots[0])
            out[i] = (lift, sign)
    return out


def s_choice(tc: TruncatedComplex, alternative: bool = False) -> dict:
    out = {}
    for o in tc.orbits:
        if o.index == tc.k_orbit:
            continue
        cands = _positive_parallel(tc, o.index)
        if cands:
            out[o.index] = cands[-1] if alternative else cands[0]
    return out


def _face_edges(t: int, f: int):
    vs = [x for x in range(4) if x != f]
    return [LongEdge(t, vs[0], vs[1]), LongEdge(t, vs[1], vs[2]), LongEdge(t, vs[2], vs[0])]


def m_s(st: Setup, A: int, sd: SgnDecomposition, sigma: dict, s: dict) -> SignedMonomial:
    """The R_I word mapping to u_s(A)."""
    tc = st.tc
    out = SignedMonomial()
    for F, coeff in sd.nonzero().items():
        (t, f), sign_f = sigma[F]
        coeff *= sign_f
        for E in _face_edges(t, f):
            o, sign = tc.long_class(E)
            r = r_map((t, f), E)
            if sign == 1:
                fac = parallel_transport_word(st, s[o], r)
            else:
                fac = parallel_transport_word(st, s[o], reverse(r)).inverse()
            out = out * fac ** coeff
    return out


@dataclass
class GChoices:
    alt_sgn: bool = False
    alt_sigma: bool = False
    alt_s: bool = False


def g_map(st: Setup, choices: GChoices | None = None) -> RingMap:
    ch = choices or GChoices()
    tc = st.tc
    if not homology(st.tr, 1).trivial:
        raise NoIntegerSolution("H_1 is nonzero: g is not constructed, use the diagnostics")
    sigma = section(tc, ch.alt_sigma)
    s = s_choice(tc, ch.alt_s)
    ms = {}
    for A in s:
        ms[A] = m_s(st, A, sgn_decomposition(tc, A, ch.alt_sgn), sigma, s)

    def g_lift(e: ShortEdge) -> SignedMonomial:
        o, sign = tc.parallel_class(e)
        if o == tc.k_orbit:
            # u_p = v_m^-1 v_l = u_check(m)^-1 u_check(l)
            fr = tc.frame
            val = g_lift(check_edge(fr["l"])) / g_lift(check_edge(fr["m"]))
            return val if tc.lift_class[e] == tc.lift_class[fr["p"]] else val.inverse()
        if sign == -1:
            return g_lift(reverse(e)).inverse()
        return ms[o] * parallel_transport_word(st, e, s[o])

    assign = {u_name(cls): g_lift(cls.rep) for cls in tc.S}
    return RingMap("RH->RI", assign)


def verify_iso(st: Setup, fmap: RingMap, gmap: RingMap | None, alternatives: bool = True) -> IsoReport:
    rep = IsoReport()
    if st.ri_one_element or st.rh_one_element:
        rep.add("R_I has one element", st.ri_one_element,
                st.ri.witness if st.ri_one_element else "")
        w = degenerate_witness(st, fmap)
        if w is None and st.rh_one_element:
            w = OneElementRing("a unit is forced to vanish",
                               f"{st.reduced.vanishing[0]} = 0 follows from the relations")
        rep.add("R_H has one element", w is not None, w.witness if w else "")
        rep.status = "proven-instance" if rep.ok else "failed"
        return rep
    ri, rh = st.ri, st.rh
    wd = verify_f(fmap, st.gs, rh, st.pres, st.corr)
    rep.checks.extend(wd.checks)
    if gmap is None:
        rep.status = "failed"
        return rep
    bad = [g for g in rh.generators if not rh.equal(fmap(gmap.image(g)), SignedMonomial({g: 1}))]
    rep.add("f(g(u)) = u for every u", not bad, ", ".join(bad))
    bad = [z for z in ri.generators if not ri.equal(gmap(fmap.image(z)), SignedMonomial({z: 1}))]
    rep.add("g(f(z)) = z for every z", not bad, ", ".join(bad))
    if alternatives:
        for label, ch in (("sgn", GChoices(alt_sgn=True)), ("section", GChoices(alt_sigma=True)),
                          ("s", GChoices(alt_s=True))):
            alt = g_map(st, ch)
            diff = [g for g in rh.generators if not ri.equal(alt.image(g), gmap.image(g))]
            rep.add(f"g independent of the {label} choice", not diff, ", ".join(diff))
    rep.status = "proven-instance" if rep.ok else "failed"
    return rep


# ---------------------------------------------------------------- diagnostics

@dataclass
class Diagnostics:
    image: list                 # f-images of the parameters
    cokernel: AbelianGroupDesc
    kernel: AbelianGroupDesc
    kernel_witnesses: list
    rh: SignedAbelianGroup
    ri: SignedAbelianGroup

    def in_image(self, m: SignedMonomial) -> bool:
        return self.rh.contains(self.image, m)

    def in_kernel(self, m: SignedMonomial, fmap: RingMap) -> bool:
        return self.rh.is_identity(fmap(m))

    def image_equals(self, gens) -> bool:
        return self.rh.same_subgroup(self.image, list(gens))

    def lines(self) -> list[str]:
        return ([f"image generators: {', '.join(str(m) for m in self.image)}",
                 f"cokernel: {self.cokernel}", f"kernel: {self.kernel}"]
                + [f"kernel witness: {w}" for w in self.kernel_witnesses])

    def to_json(self):
        return {"image": [str(m) for m in self.image], "cokernel": str(self.cokernel),
                "kernel": str(self.kernel), "kernel_witnesses": [str(w) for w in self.kernel_witnesses]}


def image_kernel(st: Setup, fmap: RingMap) -> Diagnostics:
    ri, rh = st.ri, st.rh
    if isinstance(ri, OneElementRing) or st.rh_one_element:
        raise ValueError("degenerate input: both rings have one element")
    image = [fmap.image(z) for z in ri.generators]
    desc, wit = hom_kernel(ri, rh, fmap.assignment)
    return Diagnostics(image, rh.cokernel(image), desc, wit, rh, ri)


def degenerate_witness(st: Setup, fmap: RingMap) -> OneElementRing | None:
    """For an ideal edge of degree one: f(z) = 1 while f(z')(1 - f(z)) = 1, so 0 = 1 in R_H."""
    if not st.gs.degenerate:
        return None
    eq = st.gs.equations[st.gs.degenerate_edges[0]]
    (z, _), = eq.monomial.exps.items()
    if not st.rh.is_identity(fmap.image(z)):
        return None
    t, q = st.sa.owner[z]
    z1 = st.sa.names[t][(q + 1) % 3]
    return OneElementRing("ideal edge with a single preimage",
                          f"f({z}) = 1 in R_H, and f({z1}) - f({z})f({z1}) = 1 gives 0 = 1")


# ---------------------------------------------------------------- numerics

def _evaluate(m: SignedMonomial, point: dict) -> complex:
    val = complex(m.sign)
    for g, e in m.exps.items():
        val *= complex(point[g]) ** e
    return val


@dataclass
class TransportReport:
    rh_point: dict
    residuals: list             # (relation, residual)

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    def ok(self, tol=1e-9) -> bool:
        return self.max_residual < tol


def numeric_transport(st: Setup, gmap: RingMap, solution: dict) -> TransportReport:
    pres, tc = st.pres, st.tc
    pt = {}
    for cls in tc.S:
        pt[u_name(cls)] = _evaluate(gmap.image(u_name(cls)), solution)

    def u(e):
        cls, s = tc.short_class(e)
        return pt[u_name(cls)] ** s

    def v(e):
        c = check_edge(e)
        if tc.in_S(c):
            return u(c)
        if pres.v_of(e) is ZERO:
            return 0j
        raise NonUnitError(f"no value for v of {e}")

    for cls in tc.S:
        pt[v_name(cls)] = v(cls.rep)
    res = []
    for cls in tc.S:
        e = reverse(cls.rep)
        # orientation relations: v of the reversed edge two ways
        res.append((f"v_rev({cls.name})", abs(v(e) - (-v(cls.rep) / u(cls.rep)))))
    for e, c in pres.hexagonal:
        res.append((f"hex {e}", max(abs(u(c) - v(e)), abs(v(c) - u(e)))))
    for cyc in pres.triangles:
        e1, e2, e3 = cyc
        res.append((f"tri {cyc[0].tet}:{cyc[0].vertex} mono", abs(u(e1) * u(e2) * u(e3) - 1)))
        res.append((f"tri {cyc[0].tet}:{cyc[0].vertex} add",
                    abs(u(e1) * u(e2) * v(e3) + u(e1) * v(e2) + v(e1))))
    fr = tc.frame
    res.append(("u_l = u_m", abs(u(fr["l"]) - u(fr["m"]))))
    res.append(("u_p = v_m^-1 v_l", abs(u(fr["p"]) - v(fr["l"]) / v(fr["m"]))))
    res.append(("v_p = 0", abs(v(fr["p"]))))
    fmap = f_map(st.corr, tc, st.sa, pres)
    for z, z1, _ in st.sa.names:
        fz, fz1 = _evaluate(fmap.image(z), pt), _evaluate(fmap.image(z1), pt)
        res.append((f"f({z1}) - f({z})f({z1}) = 1", abs(fz1 - fz * fz1 - 1)))
    for z in st.sa.all_names:
        res.append((f"f({z}) at the point", abs(_evaluate(fmap.image(z), pt) - solution[z])))
    return TransportReport(pt, res)


def gl2_check(st: Setup, report: TransportReport):
    return gl2_verify(st.pres, report.rh_point)
