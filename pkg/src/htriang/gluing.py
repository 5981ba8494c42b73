"""Shape parameters, gluing equations, the unit skeleton of R_I, and a Newton solver.

Each ideal tetrahedron carries three parameters, one per pair of opposite
edges: z on {01, 23}, z' on {02, 13}, z'' on {03, 12}.  They satisfy
z z' z'' = -1 and z' - z z' = 1, so z' = 1/(1-z) and z'' = 1 - 1/z.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .complex import Triangulation, edge_orbits
from .monomial import Additive, OneElementRing, SignedAbelianGroup, SignedMonomial, additive_closure

QUAD = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}


def quad_class(a: int, b: int) -> int:
    return QUAD[(min(a, b), max(a, b))]


@dataclass(frozen=True)
class ShapeAssignment:
    n: int
    names: tuple[tuple[str, str, str], ...]   # per tet: (z, z', z'')

    def param(self, tet: int, a: int, b: int) -> str:
        return self.names[tet][quad_class(a, b)]

    @property
    def all_names(self) -> list[str]:
        return [x for triple in self.names for x in triple]

    @property
    def owner(self) -> dict:
        return {x: (t, q) for t, triple in enumerate(self.names) for q, x in enumerate(triple)}

    def free(self, tet: int) -> str:
        return self.names[tet][0]

    def derived_relations(self) -> list[str]:
        out = []
        for z, z1, z2 in self.names:
            out.append(f"{z}*{z1}*{z2} = -1")
            out.append(f"{z1} - {z}*{z1} = 1")
            out.append(f"{z1} = 1/(1-{z}), {z2} = 1 - 1/{z}")
        return out


def shape_assignment(it: Triangulation) -> ShapeAssignment:
    given = {}
    for (t, a, b), nm in it.shapes:
        q = quad_class(a, b)
        if given.get((t, q), nm) != nm:
            raise ValueError(f"tetrahedron {t} has two names for one parameter")
        given[(t, q)] = nm
    names = []
    for t in range(it.n):
        triple = [given.get((t, q)) for q in range(3)]
        base = next((x for x in triple if x is not None), None)
        for q in range(3):
            if triple[q] is None:
                if base is not None:
                    k = next(i for i in range(3) if triple[i] == base)
                    triple[q] = base + "'" * ((q - k) % 3)
                else:
                    triple[q] = f"z{t}" + "'" * q
        names.append(tuple(triple))
    flat = [x for tr in names for x in tr]
    if len(set(flat)) != len(flat):
        raise ValueError(f"parameter names collide: {flat}")
    return ShapeAssignment(it.n, tuple(names))


@dataclass(frozen=True)
class EdgeEquation:
    orbit: int
    monomial: SignedMonomial   # product of parameters around the edge, = 1

    @property
    def exponents(self) -> dict:
        return dict(self.monomial.exps)

    def __str__(self):
        return f"{self.monomial} = 1"


@dataclass(frozen=True)
class GluingSystem:
    sa: ShapeAssignment
    equations: tuple[EdgeEquation, ...]
    degenerate: bool
    degenerate_edges: tuple[int, ...] = ()

    @property
    def params(self) -> list[str]:
        return self.sa.all_names

    def tet_relations(self) -> list[tuple[str, str, str]]:
        return list(self.sa.names)

    def exponent_matrix(self) -> list[list[int]]:
        names = self.params
        return [[eq.monomial.exps.get(x, 0) for x in names] for eq in self.equations]

    def to_json(self):
        return {
            "parameters": [list(t) for t in self.sa.names],
            "equations": [{"edge": eq.orbit, "sign": 1, "exponents": eq.exponents,
                           "text": str(eq)} for eq in self.equations],
            "tet_relations": self.sa.derived_relations(),
            "degenerate": self.degenerate,
        }


def gluing_system(it: Triangulation, sa: ShapeAssignment | None = None) -> GluingSystem:
    sa = sa or shape_assignment(it)
    eqs = []
    degenerate = []
    for o in edge_orbits(it):
        exps = {}
        for t, a, b, _, _ in o.walk:
            x = sa.param(t, a, b)
            exps[x] = exps.get(x, 0) + 1
        eqs.append(EdgeEquation(o.index, SignedMonomial(exps)))
        if o.degree == 1:
            degenerate.append(o.index)
    return GluingSystem(sa, tuple(eqs), bool(degenerate), tuple(degenerate))


def ri_skeleton(gs: GluingSystem):
    if gs.degenerate:
        e = gs.equations[gs.degenerate_edges[0]]
        return OneElementRing(
            "ideal edge with a single preimage",
            f"{e}: the parameter equals 1, but 1 - z is a unit")
    rels = [eq.monomial for eq in gs.equations]
    rels += [SignedMonomial({z: 1, z1: 1, z2: 1}, -1) for z, z1, z2 in gs.sa.names]
    derived, vanishing = additive_closure(gs.params, rels, additive_relations(gs))
    if vanishing:
        return OneElementRing("a unit is forced to vanish",
                              f"{vanishing[0]} = 0 follows from the relations")
    return SignedAbelianGroup(gs.params, rels + derived)


def additive_relations(gs: GluingSystem) -> list[Additive]:
    """x' - x x' - 1 = 0 for the three cyclic rotations of each tetrahedron's parameters."""
    out = []
    for triple in gs.sa.names:
        for k in range(3):
            x, x1 = SignedMonomial({triple[k]: 1}), SignedMonomial({triple[(k + 1) % 3]: 1})
            out.append(Additive((x1, -(x * x1), SignedMonomial.minus_one())))
    return out


# ---------------------------------------------------------------- numerics

def derived_values(z: complex) -> tuple[complex, complex, complex]:
    return z, 1 / (1 - z), 1 - 1 / z


def full_point(gs: GluingSystem, free_values) -> dict:
    """All parameter values from the free parameter of each tetrahedron."""
    if isinstance(free_values, dict):
        free_values = [free_values[gs.sa.free(t)] for t in range(gs.sa.n)]
    out = {}
    for t, z in enumerate(free_values):
        for name, val in zip(gs.sa.names[t], derived_values(complex(z))):
            out[name] = val
    return out


def residual(gs: GluingSystem, point) -> float:
    """Max residual over edge equations and the per-tetrahedron relations.

    `point` maps parameter names to values; missing derived parameters are
    filled in from the free one of their tetrahedron.
    """
    point = dict(point)
    for t, (z, z1, z2) in enumerate(gs.sa.names):
        if z1 not in point or z2 not in point:
            if z not in point:
                raise ValueError(f"no value for tetrahedron {t}")
            _, point[z1], point[z2] = derived_values(point[z])
    worst = 0.0
    for eq in gs.equations:
        val = 1 + 0j
        for x, e in eq.monomial.exps.items():
            val *= complex(point[x]) ** e
        worst = max(worst, abs(val - 1))
    for z, z1, z2 in gs.sa.names:
        a, b, c = (complex(point[x]) for x in (z, z1, z2))
        worst = max(worst, abs(a * b * c + 1), abs(b - a * b - 1))
    return worst


@dataclass(frozen=True)
class SolvePoint:
    values: dict
    residual: float
    isolated: bool
    seed_index: int

    @property
    def label(self) -> str:
        return "isolated" if self.isolated else "non-isolated"


@dataclass
class SolveResult:
    points: list[SolvePoint] = field(default_factory=list)
    attempts: int = 0

    @property
    def flag(self) -> str:
        return "ok" if self.points else "possibly empty variety"

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def _exponent_triples(gs: GluingSystem):
    """Per equation, per tet: exponents of (z, z', z'')."""
    out = []
    for eq in gs.equations:
        row = []
        for z, z1, z2 in gs.sa.names:
            e = eq.monomial.exps
            row.append((e.get(z, 0), e.get(z1, 0), e.get(z2, 0)))
        out.append(row)
    return out


def _eval(triples, x):
    F = np.empty(len(triples), dtype=complex)
    J = np.empty((len(triples), len(x)), dtype=complex)
    zp = 1 / (1 - x)
    zpp = 1 - 1 / x
    for i, row in enumerate(triples):
        logf = 0j
        dl = np.empty(len(x), dtype=complex)
        for t, (a, b, c) in enumerate(row):
            logf += a * cmath.log(x[t]) + b * cmath.log(zp[t]) + c * cmath.log(zpp[t])
            dl[t] = a / x[t] + b / (1 - x[t]) + c / (x[t] * (x[t] - 1))
        P = cmath.exp(logf)
        F[i] = P - 1
        J[i] = P * dl
    return F, J


def _independent(M, tol=1e-8):
    """Greedy indices of linearly independent rows of M."""
    chosen = []
    for i in range(M.shape[0]):
        trial = M[chosen + [i]]
        if np.linalg.matrix_rank(trial, tol=tol) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def _newton(triples, x0, tol, max_iter):
    x = np.array(x0, dtype=complex)
    F, J = _eval(triples, x)
    rows = _independent(J)
    cols = _independent(J[rows].T) if rows else []
    F, J = _eval(triples, x)
    norm = np.max(np.abs(F), initial=0.0)
    for _ in range(max_iter):
        if norm < tol or not rows:
            break
        A = J[np.ix_(rows, cols)]
        try:
            step = np.linalg.solve(A, -F[rows])
        except np.linalg.LinAlgError:
            return None, False
        # backtracking: accept the first step length that reduces the residual
        alpha = 1.0
        for _ in range(40):
            trial = x.copy()
            trial[cols] += alpha * step
            if np.all(np.isfinite(trial)) and np.all(trial != 0) and np.all(trial != 1):
                F2, J2 = _eval(triples, trial)
                n2 = np.max(np.abs(F2), initial=0.0)
                if np.isfinite(n2) and n2 < norm:
                    break
            alpha /= 2
        else:
            return None, False
        x, F, J, norm = trial, F2, J2, n2
    return x, len(cols) == len(x)


def random_seed_value(rng, tol=1e-6):
    while True:
        r = rng.uniform(0.3, 3.0)
        theta = rng.uniform(-np.pi, np.pi)
        z = r * np.exp(1j * theta)
        if abs(z.imag) <= 3 and abs(z) > tol and abs(z - 1) > tol:
            return complex(z)


def solve_numeric(gs: GluingSystem, tol: float = 1e-12, max_iter: int = 100, retries: int = 8,
                  seed: int = 0, seeds=None, accept: float = 1e-9) -> SolveResult:
    if gs.degenerate:
        raise ValueError("degenerate gluing system: the variety is empty")
    n = gs.sa.n
    rng = np.random.default_rng(seed)
    if seeds is None:
        seeds = [[1j] * n] + [[random_seed_value(rng) for _ in range(n)] for _ in range(retries)]
    triples = _exponent_triples(gs)
    res = SolveResult()
    for k, s in enumerate(seeds):
        res.attempts += 1
        x, isolated = _newton(triples, s, tol, max_iter)
        if x is None:
            continue
        if np.any(np.abs(x) < accept) or np.any(np.abs(x - 1) < accept):
            continue
        point = full_point(gs, list(x))
        r = residual(gs, point)
        if r < accept:
            if any(all(abs(point[nm] - p.values[nm]) < 1e-8 for nm in point) for p in res.points):
                continue
            res.points.append(SolvePoint(point, r, isolated, k))
    return res
