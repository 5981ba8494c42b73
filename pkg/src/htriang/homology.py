"""Exact integer linear algebra: Smith normal form, chain complexes, homology."""
from __future__ import annotations

from dataclasses import dataclass

from .complex import Triangulation, edge_lookup, edge_orbits, face_orbits, vertex_orbits


class IntMatrix:
    """Dense matrix of Python integers (arbitrary precision)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, rows=None, cols=None):
        entries = [[int(x) for x in row] for row in entries]
        self.rows = len(entries) if rows is None else rows
        self.cols = (len(entries[0]) if entries else 0) if cols is None else cols
        if any(len(r) != self.cols for r in entries) or len(entries) != self.rows:
            raise ValueError("ragged matrix")
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"IntMatrix({self.entries!r}, {self.rows}, {self.cols})"

    def copy(self):
        return IntMatrix([r[:] for r in self.entries], self.rows, self.cols)

    def transpose(self):
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose().entries
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in ot] for r in self.entries],
                         self.rows, other.cols)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.entries]

    def is_zero(self):
        return all(x == 0 for r in self.entries for x in r)

    def submatrix(self, rows, cols):
        return IntMatrix([[self.entries[i][j] for j in cols] for i in rows], len(rows), len(cols))


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    a = [r[:] for r in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def verify(self, A: IntMatrix) -> bool:
        if self.U @ A @ self.V != self.D:
            return False
        if abs(determinant(self.U)) != 1 or abs(determinant(self.V)) != 1:
            return False
        d = self.diagonal
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and self.D[i, j] != 0:
                    return False
        nz = [x for x in d if x != 0]
        if any(x < 0 for x in nz) or any(x == 0 for x in d[:len(nz)]):
            return False
        return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def smith_normal_form(A: IntMatrix) -> SnfResult:
    """U·A·V = D with unimodular U, V.

    Pivot: smallest nonzero absolute value in the remaining block, ties broken
    by lowest (row, column) index.
    """
    m, n = A.rows, A.cols
    D = [r[:] for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        if q:
            D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
            U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst -= q * col src
        if q:
            for r in D:
                r[dst] -= q * r[src]
            for r in V:
                r[dst] -= q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, D[i][t] // p)
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, D[t][j] // p)
                    dirty = dirty or D[t][j] != 0
            if dirty:
                # a remainder is smaller than the pivot: move it into place
                best = None
                for i in range(t, m):
                    x = D[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t, n):
                    x = D[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # make the pivot divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            i, _ = bad
            add_row(i, t, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SnfResult(IntMatrix(U, m, m), IntMatrix(D, m, n), IntMatrix(V, n, n))


@dataclass(frozen=True)
class AbelianGroupDesc:
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def boundary_matrices(tr: Triangulation):
    """(d1, d2, d3) over the cell orbits of a closed triangulation."""
    verts = vertex_orbits(tr)
    vidx = {tv: i for i, cls in enumerate(verts) for tv in cls}
    orbits = edge_orbits(tr)
    look = edge_lookup(orbits)
    faces = face_orbits(tr)

    d1 = IntMatrix.zeros(len(verts), len(orbits))
    for o in orbits:
        t, a, b = o.walk[0][:3]
        d1.entries[vidx[(t, b)]][o.index] += 1
        d1.entries[vidx[(t, a)]][o.index] -= 1

    d2 = IntMatrix.zeros(len(orbits), len(faces))
    for j, slots in enumerate(faces):
        t, f = slots[0]
        vs = [x for x in range(4) if x != f]
        for i in range(3):
            a, b = [vs[k] for k in range(3) if k != i]
            e, s = look[(t, a, b)]
            d2.entries[e][j] += (-1) ** i * s

    d3 = IntMatrix.zeros(len(faces), tr.n)
    for j, slots in enumerate(faces):
        t0, f0 = slots[0]
        for (t, f) in slots:
            sign = 1
            if (t, f) != (t0, f0):
                sign = face_slot_sign(tr, t0, f0)
            d3.entries[j][t] += (-1) ** f * sign
    return d1, d2, d3


def face_slot_sign(tr: Triangulation, t: int, f: int) -> int:
    """Orientation of the partner slot's sorted vertex order relative to (t, f)."""
    (t2, f2), perm = tr.glued(t, f)
    src = [x for x in range(4) if x != f]
    img = [perm[x] for x in src]
    dst = sorted(img)
    # parity of the rearrangement img -> dst
    order = [dst.index(x) for x in img]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if order[i] > order[j])
    return -1 if inv % 2 else 1


def homology_from(d_k: IntMatrix | None, d_k1: IntMatrix | None, dim_k: int) -> AbelianGroupDesc:
    rk = smith_normal_form(d_k).rank if d_k is not None and d_k.rows and d_k.cols else 0
    if d_k1 is not None and d_k1.rows and d_k1.cols:
        s = smith_normal_form(d_k1)
        diag = [x for x in s.diagonal if x != 0]
    else:
        diag = []
    torsion = tuple(x for x in diag if x > 1)
    return AbelianGroupDesc(dim_k - rk - len(diag), torsion)


def homology(tr: Triangulation, k: int) -> AbelianGroupDesc:
    d1, d2, d3 = boundary_matrices(tr)
    dims = [d1.rows, d1.cols, d2.cols, d3.cols]
    ds = {1: d1, 2: d2, 3: d3}
    if k not in (0, 1, 2, 3):
        raise ValueError("k must be 0..3")
    return homology_from(ds.get(k), ds.get(k + 1), dims[k])


def solve_integer_linear(A: IntMatrix, b: list[int]) -> list[int] | None:
    """An integer x with A·x = b, or None.  Free variables are set to 0."""
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    s = smith_normal_form(A)
    c = s.U.apply(b)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = s.D[i, i] if i < min(A.rows, A.cols) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    x = s.V.apply(y)
    assert A.apply(x) == list(b)
    return x


def integer_kernel(A: IntMatrix) -> list[list[int]]:
    """A basis of the integer kernel of A."""
    s = smith_normal_form(A)
    r = s.rank
    return [[s.V[i, j] for i in range(A.cols)] for j in range(r, A.cols)]
