"""The truncated complex of an H-triangulation and its collapse to an ideal triangulation.

An oriented short edge (t, v, a, b) lies in the corner triangle at vertex v of
tetrahedron t and runs from the point on the long edge va to the point on the
long edge vb.  It borders the hexagon of the face opposite the fourth vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .complex import (FacePairing, Perm4, Triangulation, TriangulationError, ccw, ccw_next,
                      edge_lookup, edge_orbits, face_orbits, is_even_tuple, make_triangulation,
                      validate_particular, validate_triangulation, vertex_orbits)


class ShortEdge(NamedTuple):
    tet: int
    vertex: int
    tail: int
    head: int

    @property
    def face(self) -> int:
        """The hexagonal face it borders (index of the opposite vertex)."""
        return 6 - self.vertex - self.tail - self.head

    @property
    def dir(self) -> int:
        """0 when oriented as the boundary of its corner triangle."""
        return 0 if ccw_next(self.vertex, self.tail) == self.head else 1

    def __str__(self):
        return f"({self.tet}:{self.vertex},{self.tail}>{self.head})"


class LongEdge(NamedTuple):
    tet: int
    tail: int
    head: int

    @property
    def dir(self) -> int:
        return 0 if self.tail < self.head else 1

    def reversed(self) -> "LongEdge":
        return LongEdge(self.tet, self.head, self.tail)


def short_edge(tet, vertex, face, dir) -> ShortEdge:
    a, b = [x for x in range(4) if x not in (vertex, face)]
    if ccw_next(vertex, a) != b:
        a, b = b, a
    return ShortEdge(tet, vertex, a, b) if dir == 0 else ShortEdge(tet, vertex, b, a)


def reverse(e: ShortEdge) -> ShortEdge:
    return ShortEdge(e.tet, e.vertex, e.head, e.tail)


def check_edge(e: ShortEdge) -> ShortEdge:
    """The short edge of the same hexagon whose terminal point shares a long edge with e's."""
    return ShortEdge(e.tet, e.head, e.tail, e.vertex)


def opposite_long(e: ShortEdge) -> LongEdge:
    """The long edge of e's hexagon disjoint from e, oriented parallel to e."""
    return LongEdge(e.tet, e.tail, e.head)


def r_map(F: tuple[int, int], E: LongEdge) -> ShortEdge:
    """Short edge on the other hexagon through E, disjoint from E and parallel to it."""
    t, f = F
    if E.tet != t or f in (E.tail, E.head):
        raise TriangulationError(f"long edge {E} is not on the boundary of face {F}")
    return ShortEdge(t, f, E.tail, E.head)


def triangle_cycle(t: int, v: int) -> tuple[ShortEdge, ShortEdge, ShortEdge]:
    a, b, c = ccw(v)
    return (ShortEdge(t, v, a, b), ShortEdge(t, v, b, c), ShortEdge(t, v, c, a))


def hexagon_cycle(t: int, f: int) -> tuple[ShortEdge, ShortEdge, ShortEdge]:
    """The three short edges of a hexagon, oriented along one boundary cycle."""
    v, a, b = [x for x in range(4) if x != f]
    return (ShortEdge(t, v, a, b), ShortEdge(t, a, b, v), ShortEdge(t, b, v, a))


@dataclass(frozen=True)
class ShortClass:
    index: int
    rep: ShortEdge          # class orientation
    lifts: tuple[ShortEdge, ...]  # both lifts, oriented like rep
    name: str
    in_S: bool


@dataclass(frozen=True)
class DistinguishedFrame:
    top: int
    mid: int
    right: int
    left: int
    edges: dict

    def __getitem__(self, key):
        return self.edges[key]


class TruncatedComplex:
    """Short/long edges, triangles and hexagons of a particular H-triangulation."""

    def __init__(self, tr: Triangulation):
        self.tr = tr
        self.orbits = edge_orbits(tr)
        self.long_lookup = edge_lookup(self.orbits)
        d = tr.distinguished
        self.dist = d
        self.k_orbit = self.long_lookup[(d.tet, d.edge[0], d.edge[1])][0] if d else None
        self._build_short()

    # ------------------------------------------------------------ counts
    @property
    def n(self):
        return self.tr.n

    @property
    def short_lifts(self) -> list[ShortEdge]:
        return [ShortEdge(t, v, a, b) for t in range(self.n) for v in range(4)
                for a in range(4) for b in range(4) if len({v, a, b}) == 3]

    @property
    def long_lifts(self) -> list[LongEdge]:
        return [LongEdge(t, a, b) for t in range(self.n) for a in range(4) for b in range(4) if a != b]

    @property
    def triangles(self) -> list[tuple[int, int]]:
        return [(t, v) for t in range(self.n) for v in range(4)]

    @property
    def hexagons(self) -> list[tuple[int, int]]:
        return [(t, f) for t in range(self.n) for f in range(4)]

    # ------------------------------------------------------------ short edge classes
    def partner(self, e: ShortEdge) -> ShortEdge:
        """The other lift of e, across the hexagon it borders."""
        g = self.tr.glued(e.tet, e.face)
        if g is None:
            raise TriangulationError(f"face {(e.tet, e.face)} unglued")
        (t2, _), perm = g
        return ShortEdge(t2, perm[e.vertex], perm[e.tail], perm[e.head])

    def touches_knot(self, e: ShortEdge) -> bool:
        if self.k_orbit is None:
            return False
        return any(self.long_lookup[(e.tet, e.vertex, x)][0] == self.k_orbit for x in (e.tail, e.head))

    def _build_short(self):
        labels = self.tr.labels_dict
        self.lift_class = {}
        classes = []
        for e in self.short_lifts:
            if e.dir != 0 or e in self.lift_class:
                continue
            p = self.partner(e)
            lifts = [e] if p == e else [e, p]
            named = [(labels[y], sg) for x in lifts
                     for y, sg in ((x, 1), (reverse(x), -1)) if y in labels]
            if named:
                if len({nm for nm, _ in named}) > 1 or len({sg for _, sg in named}) > 1:
                    raise TriangulationError(f"inconsistent labels on the short edge class of {e}: {named}")
                name = named[0][0]
                if named[0][1] == -1:
                    lifts = [reverse(x) for x in lifts]
                rep = lifts[0]
            else:
                name, rep = f"s{e.tet}_{e.vertex}{e.tail}{e.head}", e
            idx = len(classes)
            in_S = not self.touches_knot(rep)
            classes.append(ShortClass(idx, rep, tuple(lifts), name, in_S))
            for x in lifts:
                self.lift_class[x] = (idx, 1)
                self.lift_class[reverse(x)] = (idx, -1)
        self.classes = classes
        self.by_name = {c.name: c for c in classes}
        if len(self.by_name) != len(classes):
            raise TriangulationError("duplicate short edge names")

    def short_class(self, e: ShortEdge) -> tuple[ShortClass, int]:
        idx, s = self.lift_class[e]
        return self.classes[idx], s

    def in_S(self, e: ShortEdge) -> bool:
        return self.short_class(e)[0].in_S

    @property
    def S(self) -> list[ShortClass]:
        return [c for c in self.classes if c.in_S]

    def triangle_in_T(self, t: int, v: int) -> bool:
        return all(self.in_S(e) for e in triangle_cycle(t, v))

    @property
    def T(self) -> list[tuple[int, int]]:
        return [tv for tv in self.triangles if self.triangle_in_T(*tv)]

    # ------------------------------------------------------------ long edges
    def long_class(self, E: LongEdge) -> tuple[int, int]:
        return self.long_lookup[(E.tet, E.tail, E.head)]

    def parallel_class(self, e: ShortEdge) -> tuple[int, int]:
        """Long edge class (and orientation sign) that e is parallel to."""
        return self.long_class(opposite_long(e))

    def parallel_to_long(self, e: ShortEdge, E: LongEdge) -> bool:
        return self.parallel_class(e) == self.long_class(E)

    def antiparallel_to_long(self, e: ShortEdge, E: LongEdge) -> bool:
        o, s = self.parallel_class(e)
        return (o, -s) == self.long_class(E)

    def parallel(self, e: ShortEdge, e2: ShortEdge) -> bool:
        return self.parallel_class(e) == self.parallel_class(e2)

    # ------------------------------------------------------------ frame
    @cached_property
    def frame(self) -> DistinguishedFrame:
        return distinguished_frame(self)

    def is_distinguished_tet(self, t: int) -> bool:
        return self.dist is not None and t == self.dist.tet


def truncate(tr: Triangulation) -> TruncatedComplex:
    rep = validate_particular(tr)
    if not rep.ok:
        raise TriangulationError("not a particular H-triangulation: " + "; ".join(rep.failures()))
    return TruncatedComplex(tr)


def distinguished_frame(tc: TruncatedComplex) -> DistinguishedFrame:
    d = tc.dist
    if d is None:
        raise TriangulationError("no distinguished tetrahedron")
    mid, top = d.edge
    c, e = [x for x in range(4) if x not in (mid, top)]
    g = tc.tr.glued(d.tet, c)
    if g is None or g[0] != (d.tet, e) or g[1][mid] != mid or g[1][top] != top:
        raise TriangulationError("closed-book structure absent")
    right, left = (c, e) if is_even_tuple((top, mid, c, e)) else (e, c)
    t = d.tet
    T, M, R, L = top, mid, right, left
    edges = {
        "l": ShortEdge(t, T, L, R),
        "m": ShortEdge(t, M, L, R),
        "p": ShortEdge(t, L, M, T),
        "j1": ShortEdge(t, L, R, T),
        "j2": ShortEdge(t, L, R, M),
        "i1": ShortEdge(t, R, L, T),
        "i2": ShortEdge(t, R, L, M),
        "c": LongEdge(t, L, R),
        "a1": LongEdge(t, L, T),
        "a2": LongEdge(t, L, M),
        "K": LongEdge(t, M, T),
    }
    return DistinguishedFrame(T, M, R, L, edges)


# ---------------------------------------------------------------- collapse

@dataclass(frozen=True)
class CellCorrespondence:
    """Non-distinguished cells of the H-triangulation and their ideal counterparts."""
    tet_map: dict            # H tet -> ideal tet
    edge_map: dict           # H edge orbit -> (ideal edge orbit, sign)
    face_map: dict           # H slot -> ideal slot

    def ideal_tet(self, t):
        return self.tet_map[t]

    @cached_property
    def tet_inverse(self):
        return {v: k for k, v in self.tet_map.items()}


def collapse(tr: Triangulation):
    rep = validate_particular(tr)
    if not rep.ok:
        raise TriangulationError("not a particular H-triangulation: " + "; ".join(rep.failures()))
    d = tr.distinguished
    td = d.tet
    k0, k1 = d.edge
    keep = [t for t in range(tr.n) if t != td]
    tet_map = {t: i for i, t in enumerate(keep)}
    tau = Perm4([k1 if x == k0 else k0 if x == k1 else x for x in range(4)])
    (x_slot, phi_x) = tr.glued(td, k0)[0], tr.glued(td, k0)[1].inverse()  # X -> T^K
    (y_slot, phi_y) = tr.glued(td, k1)[0], tr.glued(td, k1)[1].inverse()  # Y -> T^K
    if x_slot[0] == td or y_slot[0] == td:
        raise TriangulationError("cannot collapse: non-knot faces of T^K glued to T^K")
    new = []
    for p in tr.pairings:
        (ts, fs), (tt, ft) = p.src, p.dst
        if td in (ts, tt):
            continue
        new.append(FacePairing((tet_map[ts], fs), (tet_map[tt], ft), p.perm))
    merged = phi_y.inverse().compose(tau.compose(phi_x))
    new.append(FacePairing((tet_map[x_slot[0]], x_slot[1]), (tet_map[y_slot[0]], y_slot[1]), merged))
    shapes = [((tet_map[t], a, b), nm) for (t, a, b), nm in tr.shapes if t != td]
    it = make_triangulation(len(keep), new, None, (), shapes)
    if len(vertex_orbits(it)) != 1:
        raise TriangulationError("collapse does not give a one-cusped ideal triangulation")
    if len(edge_orbits(it)) != it.n:
        # Euler characteristic 1 - E + n must vanish for a torus cusp
        raise TriangulationError("collapse does not give an ideal triangulation: the two edges of F^K "
                                 "other than K are already identified, so the cusp link is not a torus")
    face_map = {}
    for t in keep:
        for f in range(4):
            face_map[(t, f)] = (tet_map[t], f)
    ideal_orbits = edge_orbits(it)
    ilook = edge_lookup(ideal_orbits)
    horbits = edge_orbits(tr)
    edge_map = {}
    for o in horbits:
        for t, a, b, _, _ in o.walk:
            if t != td:
                edge_map[o.index] = ilook[(tet_map[t], a, b)]
                break
    return it, CellCorrespondence(tet_map, edge_map, face_map)


def validate_ideal(it: Triangulation):
    return validate_triangulation(it)
