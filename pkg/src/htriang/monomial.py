"""Signed Laurent monomials and finitely presented abelian groups with a sign.

A signed abelian group is Z^k (one coordinate per generator) plus a sign
coordinate of order two, modulo a lattice of relations.  Membership and
equality are decided exactly through the Smith normal form of the relation
lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .homology import AbelianGroupDesc, IntMatrix, integer_kernel, smith_normal_form, solve_integer_linear


class SignedMonomial:
    """sign * prod(g ** e); immutable and hashable."""

    __slots__ = ("exps", "sign", "_key")

    def __init__(self, exps=None, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        items = {}
        for g, e in (exps or {}).items():
            e = int(e)
            if e:
                items[g] = items.get(g, 0) + e
        self.exps = {g: e for g, e in sorted(items.items()) if e}
        self.sign = sign
        self._key = (tuple(self.exps.items()), sign)

    @classmethod
    def gen(cls, name, power=1):
        return cls({name: power})

    @classmethod
    def one(cls):
        return cls()

    @classmethod
    def minus_one(cls):
        return cls({}, -1)

    def __mul__(self, other):
        if isinstance(other, int):
            if other not in (1, -1):
                raise ValueError("only signs can multiply a monomial")
            return SignedMonomial(self.exps, self.sign * other)
        e = dict(self.exps)
        for g, x in other.exps.items():
            e[g] = e.get(g, 0) + x
        return SignedMonomial(e, self.sign * other.sign)

    __rmul__ = __mul__

    def __neg__(self):
        return SignedMonomial(self.exps, -self.sign)

    def inverse(self):
        return SignedMonomial({g: -e for g, e in self.exps.items()}, self.sign)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        return SignedMonomial({g: e * k for g, e in self.exps.items()}, self.sign ** (k % 2))

    def __eq__(self, other):
        return isinstance(other, SignedMonomial) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def is_one(self):
        return not self.exps and self.sign == 1

    def substitute(self, table: dict) -> "SignedMonomial":
        """Replace generators by monomials (missing generators kept)."""
        out = SignedMonomial({}, self.sign)
        for g, e in self.exps.items():
            out = out * (table[g] ** e if g in table else SignedMonomial({g: e}))
        return out

    def degree(self) -> int:
        return sum(abs(e) for e in self.exps.values())

    def __repr__(self):
        return f"SignedMonomial({self})"

    def __str__(self):
        parts = []
        for g, e in self.exps.items():
            parts.append(g if e == 1 else f"{g}^{e}")
        body = "*".join(parts) if parts else "1"
        return ("-" if self.sign < 0 else "") + body

    def to_json(self):
        return {"sign": self.sign, "exponents": dict(self.exps)}


def parse_monomial(text: str) -> SignedMonomial:
    """Inverse of str(): e.g. '-u1^2*u3^-1'."""
    text = text.strip()
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    if text in ("", "1"):
        return SignedMonomial({}, sign)
    exps = {}
    for part in text.split("*"):
        g, _, e = part.partition("^")
        exps[g] = exps.get(g, 0) + (int(e) if e else 1)
    return SignedMonomial(exps, sign)


class SignedAbelianGroup:
    """Generators plus a sign, modulo relations m = 1."""

    def __init__(self, generators, relations=()):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        self._index = {g: i for i, g in enumerate(self.generators)}
        self.relations = tuple(relations)
        for r in self.relations:
            self.vector(r)

    @property
    def dim(self) -> int:
        return len(self.generators) + 1

    def vector(self, m: SignedMonomial) -> list[int]:
        v = [0] * self.dim
        for g, e in m.exps.items():
            if g not in self._index:
                raise KeyError(f"unknown generator {g!r}")
            v[self._index[g]] = e
        v[-1] = 0 if m.sign == 1 else 1
        return v

    def monomial(self, v) -> SignedMonomial:
        return SignedMonomial({g: v[i] for i, g in enumerate(self.generators)},
                              -1 if v[-1] % 2 else 1)

    def _rows(self, extra=()):
        rows = [self.vector(r) for r in self.relations]
        rows.append([0] * (self.dim - 1) + [2])
        rows.extend(self.vector(m) if isinstance(m, SignedMonomial) else list(m) for m in extra)
        return rows

    @cached_property
    def _snf(self):
        R = IntMatrix(self._rows(), cols=self.dim)
        s = smith_normal_form(R)
        return s

    def normal_form(self, m: SignedMonomial) -> tuple[int, ...]:
        s = self._snf
        x = self.vector(m)
        y = [sum(x[i] * s.V[i, j] for i in range(self.dim)) for j in range(self.dim)]
        diag = s.diagonal
        out = []
        for j in range(self.dim):
            d = diag[j] if j < len(diag) else 0
            out.append(y[j] % d if d else y[j])
        return tuple(out)

    def equal(self, a: SignedMonomial, b: SignedMonomial) -> bool:
        return self.normal_form(a) == self.normal_form(b)

    def is_identity(self, m: SignedMonomial) -> bool:
        return self.equal(m, SignedMonomial.one())

    def nf_monomial(self, m: SignedMonomial) -> SignedMonomial:
        """A canonical representative monomial of the class of m."""
        s = self._snf
        y = self.normal_form(m)
        # x = y V^{-1}: solve V^T x^T = y^T
        x = solve_integer_linear(s.V.transpose(), list(y))
        return self.monomial(x)

    def invariants(self) -> AbelianGroupDesc:
        diag = [d for d in self._snf.diagonal if d]
        free = self.dim - len(diag)
        return AbelianGroupDesc(free, tuple(d for d in diag if d > 1))

    def quotient(self, elements) -> "SignedAbelianGroup":
        return SignedAbelianGroup(self.generators, tuple(self.relations) + tuple(elements))

    def contains(self, elements, m: SignedMonomial) -> bool:
        """Is m in the subgroup generated by `elements`?"""
        rows = self._rows(elements)
        A = IntMatrix(rows, cols=self.dim).transpose()
        return solve_integer_linear(A, self.vector(m)) is not None

    def expresses(self, elements, m: SignedMonomial):
        """Integer exponents c with prod(elements^c) = m in the group, or None."""
        rows = self._rows(elements)
        A = IntMatrix(rows, cols=self.dim).transpose()
        x = solve_integer_linear(A, self.vector(m))
        if x is None:
            return None
        return x[len(rows) - len(elements):]

    def same_subgroup(self, e1, e2) -> bool:
        return (all(self.contains(e1, m) for m in e2)
                and all(self.contains(e2, m) for m in e1))

    def cokernel(self, elements) -> AbelianGroupDesc:
        return self.quotient(elements).invariants()

    def is_trivial(self) -> bool:
        return self.invariants().trivial


@dataclass(frozen=True)
class Additive:
    """A formal relation sum(terms) = 0."""
    terms: tuple[SignedMonomial, ...]

    def __str__(self):
        if not self.terms:
            return "0 = 0"
        s = " + ".join(str(t) for t in self.terms).replace("+ -", "- ")
        return s + " = 0"

    def substitute(self, table) -> "Additive":
        return Additive(tuple(t.substitute(table) for t in self.terms))

    def collect(self) -> "Additive":
        """Cancel opposite terms."""
        count = {}
        for t in self.terms:
            key = SignedMonomial(t.exps)
            count[key] = count.get(key, 0) + t.sign
        out = []
        for m, c in count.items():
            out.extend([m] * c if c > 0 else [-m] * (-c))
        return Additive(tuple(out))


def combine_terms(group, terms):
    """Cancel pairs of terms that are opposite in the unit skeleton."""
    out = []
    for t in terms:
        for i, o in enumerate(out):
            if group.equal(t, -o):
                del out[i]
                break
        else:
            out.append(t)
    return out


def pair_binomials(group, add):
    """Monomial relations from differences of scaled relations that leave two terms.

    Scaling relation a so that one of its terms cancels a term of relation b and
    subtracting leaves at most four terms; when two of those cancel as well the
    remaining binomial is a monomial identity.
    """
    out = []
    for i, a in enumerate(add):
        for b in add[i:]:
            for ta in a.terms:
                for tb in b.terms:
                    lam = tb / ta
                    diff = [t for t in b.terms] + [-(lam * t) for t in a.terms]
                    terms = combine_terms(group, diff)
                    if len(terms) == 2:
                        out.append(-(terms[0] / terms[1]))
    return out


def additive_closure(generators, monomial, additive, rounds: int = 20):
    """Monomial consequences of additive relations, iterated to a fixed point.

    Returns (new monomial relations, units forced to vanish).
    """
    mono = list(monomial)
    derived, vanishing = [], []
    for _ in range(rounds):
        group = SignedAbelianGroup(generators, mono)
        new = []
        for a in additive:
            terms = combine_terms(group, a.terms)
            if len(terms) == 2:
                new.append(-(terms[0] / terms[1]))
            elif len(terms) == 1:
                vanishing.append(terms[0])
        new.extend(pair_binomials(group, additive))
        new = [r for r in new if not group.is_identity(r)]
        if not new or vanishing:
            break
        uniq = []
        for r in new:
            if not SignedAbelianGroup(generators, mono + uniq).is_identity(r):
                uniq.append(r)
        derived.extend(uniq)
        mono.extend(uniq)
    return derived, vanishing


@dataclass(frozen=True)
class OneElementRing:
    """Marker for a ring in which 1 = 0."""
    reason: str
    witness: str = ""

    def is_trivial(self) -> bool:
        return True


def hom_kernel(source: SignedAbelianGroup, target: SignedAbelianGroup, images: dict):
    """Kernel of the map source -> target sending generator g to images[g].

    Returns (kernel invariants, witness monomials).  The witnesses generate the
    kernel and are nontrivial in the source.
    """
    ks, kt = source.dim, target.dim
    rows = [target.vector(images[g]) for g in source.generators]
    rows.append([0] * (kt - 1) + [1])
    M = IntMatrix(rows + target._rows(), cols=kt)
    # (x, lam) with x.Phi + lam.R = 0
    pre = [b[:ks] for b in integer_kernel(M.transpose())]
    pre = [v for v in pre if any(v)] + source._rows()
    zbasis = row_basis(pre, ks)
    B = IntMatrix(zbasis, cols=ks).transpose()
    coords = []
    for row in source._rows():
        c = solve_integer_linear(B, row)
        if c is None:
            raise ArithmeticError("relation lattice not inside the preimage")
        coords.append(c)
    C = smith_normal_form(IntMatrix(coords, cols=len(zbasis)))
    diag = [d for d in C.diagonal if d]
    desc = AbelianGroupDesc(len(zbasis) - len(diag), tuple(d for d in diag if d > 1))
    witnesses = [m for m in (source.monomial(v) for v in zbasis) if not source.is_identity(m)]
    return desc, witnesses


def row_basis(rows, dim):
    """A Z-basis of the lattice spanned by `rows`."""
    if not rows:
        return []
    s = smith_normal_form(IntMatrix(rows, cols=dim))
    # row lattice of A equals that of D V^-1
    vinv = inverse_unimodular(s.V)
    return [[s.D[i, i] * vinv[i, j] for j in range(dim)] for i in range(s.rank)]


def inverse_unimodular(V: IntMatrix) -> IntMatrix:
    n = V.rows
    cols = [solve_integer_linear(V, [int(i == j) for i in range(n)]) for j in range(n)]
    return IntMatrix(cols, n, n).transpose()
