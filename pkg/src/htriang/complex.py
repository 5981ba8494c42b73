"""Triangulations as face-pairing data, the .htri text format, and cell orbits.

Vertices of each tetrahedron are 0..3 and face i is the face opposite vertex i.
A gluing is stored as a vertex permutation; it reverses orientation iff the
permutation is odd.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations


class TriangulationError(ValueError):
    pass


class Perm4(tuple):
    """A permutation of {0,1,2,3}, stored as its tuple of images."""

    def __new__(cls, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != [0, 1, 2, 3]:
            raise TriangulationError(f"not a permutation of 0123: {images}")
        return super().__new__(cls, images)

    @classmethod
    def from_string(cls, s: str) -> "Perm4":
        if len(s) != 4 or not s.isdigit():
            raise TriangulationError(f"bad permutation {s!r}")
        return cls(int(c) for c in s)

    def __str__(self):
        return "".join(str(i) for i in self)

    def inverse(self) -> "Perm4":
        inv = [0] * 4
        for i, j in enumerate(self):
            inv[j] = i
        return Perm4(inv)

    def compose(self, other: "Perm4") -> "Perm4":
        """Return self after other: i -> self[other[i]]."""
        return Perm4(self[other[i]] for i in range(4))

    def sign(self) -> int:
        s = 1
        p = list(self)
        for i in range(4):
            while p[i] != i:
                j = p[i]
                p[i], p[j] = p[j], p[i]
                s = -s
        return s

    def is_even(self) -> bool:
        return self.sign() == 1


IDENTITY = Perm4((0, 1, 2, 3))
ALL_PERMS = tuple(Perm4(p) for p in permutations(range(4)))


def is_even_tuple(seq) -> bool:
    return Perm4(seq).is_even()


def completion(a: int, b: int) -> tuple[int, int]:
    """The two vertices other than a, b, ordered so (a, b, c, d) is even."""
    c, d = [x for x in range(4) if x not in (a, b)]
    if not is_even_tuple((a, b, c, d)):
        c, d = d, c
    return c, d


def ccw(v: int) -> tuple[int, int, int]:
    """Counter-clockwise order of the vertices around vertex v."""
    a = 0 if v != 0 else 1
    b, c = completion(v, a)
    return (a, b, c)


def ccw_next(v: int, a: int) -> int:
    cyc = ccw(v)
    return cyc[(cyc.index(a) + 1) % 3]


def ccw_prev(v: int, a: int) -> int:
    cyc = ccw(v)
    return cyc[(cyc.index(a) - 1) % 3]


@dataclass(frozen=True)
class FacePairing:
    src: tuple[int, int]
    dst: tuple[int, int]
    perm: Perm4

    def inverse(self) -> "FacePairing":
        return FacePairing(self.dst, self.src, self.perm.inverse())


@dataclass(frozen=True)
class Distinguished:
    tet: int
    edge: tuple[int, int]  # oriented: edge[0] -> edge[1]
    face: int


@dataclass(frozen=True)
class Triangulation:
    """Closed or ideal triangulation; `distinguished` is set for H-triangulations.

    `labels` names oriented short edges (tet, v, a, b) and `shapes` names the
    parameter of a tetrahedron edge (tet, a, b) with a < b.
    """
    n: int
    pairings: tuple[FacePairing, ...]
    distinguished: Distinguished | None = None
    labels: tuple[tuple[tuple[int, int, int, int], str], ...] = ()
    shapes: tuple[tuple[tuple[int, int, int], str], ...] = ()
    _glue: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        table = {}
        for p in self.pairings:
            for a, b, perm in ((p.src, p.dst, p.perm), (p.dst, p.src, p.perm.inverse())):
                if a in table:
                    raise TriangulationError(f"face slot paired twice: {a}")
                table[a] = (b, perm)
        object.__setattr__(self, "_glue", table)

    def glued(self, tet: int, face: int):
        """Partner (tet, face) and vertex map of a slot, or None if unglued."""
        return self._glue.get((tet, face))

    def is_closed(self) -> bool:
        return len(self._glue) == 4 * self.n

    @property
    def labels_dict(self) -> dict:
        return dict(self.labels)

    @property
    def shapes_dict(self) -> dict:
        return dict(self.shapes)


HTriangulation = Triangulation
IdealTriangulation = Triangulation


def _check_pairing(n: int, p: FacePairing):
    for t, f in (p.src, p.dst):
        if not (0 <= t < n and 0 <= f < 4):
            raise TriangulationError(f"slot out of range: {(t, f)}")
    if p.perm[p.src[1]] != p.dst[1]:
        raise TriangulationError(
            f"perm {p.perm} does not send opposite vertex {p.src[1]} to {p.dst[1]}")
    if p.src == p.dst:
        # a face glued to itself must be an involution fixing the opposite vertex
        if p.perm.compose(p.perm) != IDENTITY:
            raise TriangulationError(f"non-involutive self pairing at {p.src}")


def make_triangulation(n, pairings, distinguished=None, labels=(), shapes=()) -> Triangulation:
    pairings = tuple(pairings)
    for p in pairings:
        _check_pairing(n, p)
    return Triangulation(n, pairings, distinguished, tuple(labels), tuple(shapes))


def parse_htriangulation(text: str, require_distinguished: bool = True) -> Triangulation:
    n = None
    pairings = []
    dist = None
    labels = []
    shapes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "tets" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "glue" and len(tok) == 6:
                t1, f1, t2, f2 = map(int, tok[1:5])
                pairings.append(FacePairing((t1, f1), (t2, f2), Perm4.from_string(tok[5])))
            elif tok[0] == "distinguished" and len(tok) == 5:
                t, a, b, f = map(int, tok[1:])
                dist = Distinguished(t, (a, b), f)
            elif tok[0] == "label" and len(tok) == 6:
                t, v, a, b = map(int, tok[1:5])
                labels.append(((t, v, a, b), tok[5]))
            elif tok[0] == "shape" and len(tok) == 5:
                t, a, b = map(int, tok[1:4])
                shapes.append(((t, min(a, b), max(a, b)), tok[4]))
            else:
                raise TriangulationError("unrecognised line")
        except (ValueError, IndexError) as exc:
            raise TriangulationError(f"line {lineno}: {exc}: {raw.strip()!r}") from None
    if n is None:
        raise TriangulationError("missing 'tets' line")
    if len(pairings) != 2 * n:
        raise TriangulationError(f"expected {2 * n} glue lines, found {len(pairings)}")
    if require_distinguished and dist is None:
        raise TriangulationError("missing distinguished marking")
    tr = make_triangulation(n, pairings, dist, labels, shapes)
    if not tr.is_closed():
        raise TriangulationError("unpaired face slot")
    _check_names(tr)
    return tr


def parse_itriangulation(text: str) -> Triangulation:
    return parse_htriangulation(text, require_distinguished=False)


def _check_names(tr: Triangulation):
    for (t, v, a, b), name in tr.labels:
        if not (0 <= t < tr.n) or len({v, a, b}) != 3 or not all(0 <= x < 4 for x in (v, a, b)):
            raise TriangulationError(f"bad label {name}: {(t, v, a, b)}")
    for (t, a, b), name in tr.shapes:
        if not (0 <= t < tr.n) or a == b or not all(0 <= x < 4 for x in (a, b)):
            raise TriangulationError(f"bad shape name {name}: {(t, a, b)}")


def canonical_pairings(tr: Triangulation) -> list[FacePairing]:
    out = []
    for p in tr.pairings:
        if p.dst < p.src:
            p = p.inverse()
        out.append(p)
    return sorted(out, key=lambda p: p.src)


def serialize(tr: Triangulation) -> str:
    lines = [f"tets {tr.n}"]
    for p in canonical_pairings(tr):
        lines.append(f"glue {p.src[0]} {p.src[1]} {p.dst[0]} {p.dst[1]} {p.perm}")
    d = tr.distinguished
    if d is not None:
        lines.append(f"distinguished {d.tet} {d.edge[0]} {d.edge[1]} {d.face}")
    for (t, v, a, b), name in sorted(tr.labels):
        lines.append(f"label {t} {v} {a} {b} {name}")
    for (t, a, b), name in sorted(tr.shapes):
        lines.append(f"shape {t} {a} {b} {name}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- orbits

def vertex_orbits(tr: Triangulation) -> list[list[tuple[int, int]]]:
    parent = {(t, v): (t, v) for t in range(tr.n) for v in range(4)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (t, f), ((t2, _f2), perm) in tr._glue.items():
        for v in range(4):
            if v != f:
                a, b = find((t, v)), find((t2, perm[v]))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    classes = {}
    for x in sorted(parent):
        classes.setdefault(find(x), []).append(x)
    return list(classes.values())


@dataclass(frozen=True)
class EdgeOrbit:
    """Edge class; `walk` lists states (tet, a, b, c, d) around the edge.

    Each state is one tet-edge a->b with (a, b, c, d) even; consecutive states
    meet across the face opposite d.  For boundary edges the walk is a path.
    """
    index: int
    walk: tuple[tuple[int, int, int, int, int], ...]
    cyclic: bool

    @property
    def representative(self) -> tuple[int, tuple[int, int]]:
        t, a, b = self.walk[0][:3]
        return (t, (a, b))

    @property
    def members(self) -> list[tuple[int, tuple[int, int], int]]:
        return [(t, (min(a, b), max(a, b)), 1 if a < b else -1) for t, a, b, _, _ in self.walk]

    @property
    def degree(self) -> int:
        return len(self.walk)


def _walk_edge(tr, t, a, b, c, d):
    """Rotate around edge ab starting in tet t, leaving through the face opposite d."""
    start = (t, a, b, c, d)
    states = [start]
    for _ in range(12 * tr.n + 1):
        g = tr.glued(t, d)
        if g is None:
            return states, False
        (t2, _), perm = g
        t, a, b, c, d = t2, perm[a], perm[b], perm[d], perm[c]
        st = (t, a, b, c, d)
        if st == start:
            return states, True
        states.append(st)
    raise TriangulationError("edge walk does not close")


def edge_orbits(tr: Triangulation) -> list[EdgeOrbit]:
    seen = {}
    orbits = []
    for t in range(tr.n):
        for a in range(4):
            for b in range(a + 1, 4):
                if (t, a, b) in seen:
                    continue
                c, d = completion(a, b)
                states, cyclic = _walk_edge(tr, t, a, b, c, d)
                if not cyclic:
                    # boundary edge: back up to the start of the path
                    c0, d0 = d, c
                    back, _ = _walk_edge(tr, t, b, a, c0, d0)
                    rev = [(s[0], s[2], s[1], s[4], s[3]) for s in back[1:]][::-1]
                    states = rev + states
                idx = len(orbits)
                for s in states:
                    key = (s[0], min(s[1], s[2]), max(s[1], s[2]))
                    if key in seen:
                        raise TriangulationError(
                            f"orientation inconsistency around edge through {key}")
                    seen[key] = idx
                orbits.append(EdgeOrbit(idx, tuple(states), cyclic))
    return orbits


def edge_lookup(orbits: list[EdgeOrbit]) -> dict:
    """Map oriented tet-edge (t, a, b) -> (orbit index, sign relative to the orbit)."""
    out = {}
    for o in orbits:
        for t, a, b, _, _ in o.walk:
            out[(t, a, b)] = (o.index, 1)
            out[(t, b, a)] = (o.index, -1)
    return out


def face_orbits(tr: Triangulation) -> list[tuple[tuple[int, int], ...]]:
    """Face classes as tuples of slots, the first slot being the representative."""
    out = []
    seen = set()
    for t in range(tr.n):
        for f in range(4):
            if (t, f) in seen:
                continue
            g = tr.glued(t, f)
            slots = [(t, f)]
            if g is not None and g[0] != (t, f):
                slots.append(g[0])
            seen.update(slots)
            out.append(tuple(slots))
    return out


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" for name, ok, detail in self.checks if not ok]

    def text(self) -> str:
        return "\n".join(f"[{'pass' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else "")
                         for name, ok, detail in self.checks)


def validate_triangulation(tr: Triangulation, report: ValidationReport | None = None) -> ValidationReport:
    rep = report or ValidationReport()
    rep.add("all face slots paired", tr.is_closed(), f"{len(tr._glue)} of {4 * tr.n} slots")
    odd = [p for p in tr.pairings if p.perm.is_even()]
    rep.add("pairings orientation-reversing", not odd,
            ", ".join(f"{p.src}->{p.dst} {p.perm}" for p in odd))
    nv = len(vertex_orbits(tr))
    rep.add("one vertex orbit", nv == 1, f"vertex orbit count = {nv}")
    try:
        orbits = edge_orbits(tr)
        rep.add("edge orbits orientable", True, f"{len(orbits)} orbits")
    except TriangulationError as exc:
        rep.add("edge orbits orientable", False, str(exc))
    return rep


def validate_particular(tr: Triangulation) -> ValidationReport:
    rep = validate_triangulation(tr)
    d = tr.distinguished
    if d is None:
        rep.add("distinguished marking present", False, "none")
        return rep
    k0, k1 = d.edge
    okk = 0 <= d.tet < tr.n and k0 != k1 and {k0, k1} <= set(range(4)) and d.face in range(4)
    rep.add("distinguished marking well formed", okk, f"{d}")
    if not okk:
        return rep
    rep.add("F^K contains K", d.face not in (k0, k1), f"face {d.face}")
    c, e = [x for x in range(4) if x not in (k0, k1)]
    g = tr.glued(d.tet, c)
    book = g is not None and g[0] == (d.tet, e) and all(g[1][x] == x for x in (k0, k1))
    rep.add("T^K closed book along the faces at K", book, "")
    rep.add("F^K from a single tetrahedron", book, "")
    if tr.is_closed():
        try:
            orbits = edge_orbits(tr)
            look = edge_lookup(orbits)
            ko = look[(d.tet, k0, k1)][0]
            deg = orbits[ko].degree
            rep.add("K of degree 1 (in a single face)", deg == 1, f"degree {deg}")
        except TriangulationError as exc:
            rep.add("K of degree 1 (in a single face)", False, str(exc))
        apart = tr.glued(d.tet, k0)[0] != (d.tet, k1)
        rep.add("non-knot faces of T^K not glued to each other", apart, "")
    return rep
