"""Cartan data, root and weight lattices, and Weyl group combinatorics.

Root-lattice vectors and weights are plain tuples of ints indexed by ``I``
(0-based).  A root vector ``(n_0, ..., n_{r-1})`` means ``sum n_i alpha_i``; a
weight ``(l_0, ...)`` lists the values ``<lambda, h_i>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from pathlib import Path

RootVector = tuple[int, ...]
Weight = tuple[int, ...]

__all__ = [
    "CartanDatum",
    "PRESETS",
    "RootVector",
    "Weight",
    "cartan_type",
    "load_gcm",
    "minimal_symmetrizer",
]


class CartanError(ValueError):
    pass


def minimal_symmetrizer(gcm: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    """Smallest positive integers d with d_i a_ij = d_j a_ji on each component."""
    n = len(gcm)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or gcm[i][j] == 0:
                    continue
                if gcm[j][i] == 0:
                    raise CartanError("a_ij = 0 must imply a_ji = 0")
                val = d[i] * gcm[i][j] / gcm[j][i]
                if d[j] is None:
                    d[j] = val
                    comp.append(j)
                    stack.append(j)
                elif d[j] != val:
                    raise CartanError("matrix is not symmetrizable")
        scale = reduce(lambda a, b: a * b // gcd(a, b), (d[j].denominator for j in comp), 1)
        ints = [int(d[j] * scale) for j in comp]
        g = reduce(gcd, ints)
        for j, v in zip(comp, ints):
            d[j] = Fraction(v // g)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class CartanDatum:
    """A symmetrizable generalized Cartan matrix with its symmetrizer.

    ``gcm[i][j]`` is ``a_ij = <alpha_j, h_i>``; ``sym[i]`` is
    ``d_i = (alpha_i, alpha_i) / 2`` so that ``(alpha_i, alpha_j) = d_i a_ij``.
    """

    gcm: tuple[tuple[int, ...], ...]
    sym: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.gcm)
        if any(len(row) != n for row in self.gcm):
            raise CartanError("Cartan matrix must be square")
        if len(self.sym) != n or any(d <= 0 for d in self.sym):
            raise CartanError("symmetrizer must be n positive integers")
        for i in range(n):
            if self.gcm[i][i] != 2:
                raise CartanError("diagonal entries must be 2")
            for j in range(n):
                if i == j:
                    continue
                if self.gcm[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (self.gcm[i][j] == 0) != (self.gcm[j][i] == 0):
                    raise CartanError("a_ij = 0 must imply a_ji = 0")
                if self.sym[i] * self.gcm[i][j] != self.sym[j] * self.gcm[j][i]:
                    raise CartanError("d is not a symmetrizer of the matrix")

    @classmethod
    def from_matrix(cls, gcm, sym=None, name: str = "") -> CartanDatum:
        gcm = tuple(tuple(int(x) for x in row) for row in gcm)
        if sym is None:
            sym = minimal_symmetrizer(gcm)
        return cls(gcm, tuple(int(d) for d in sym), name)

    @property
    def rank(self) -> int:
        return len(self.gcm)

    def __str__(self) -> str:
        return self.name or f"GCM{self.gcm}"

    # -- lattice helpers ---------------------------------------------------
    def simple_root(self, i: int) -> RootVector:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def zero(self) -> RootVector:
        return (0,) * self.rank

    def check_vector(self, v) -> RootVector:
        v = tuple(v)
        if len(v) != self.rank:
            raise CartanError(f"vector {v} does not match rank {self.rank}")
        return v

    def bilinear(self, gamma: RootVector, delta: RootVector) -> int:
        """``(gamma, delta) = sum n_i d_i a_ij m_j``."""
        return _bilinear(self.gcm, self.sym, tuple(gamma), tuple(delta))

    def root_pairing(self, i: int, gamma: RootVector) -> int:
        """``(alpha_i, gamma)``."""
        row = self.gcm[i]
        return self.sym[i] * sum(row[j] * gamma[j] for j in range(self.rank))

    def coroot_value(self, gamma: RootVector, i: int) -> int:
        """``<gamma, h_i> = sum_j n_j a_ij``."""
        row = self.gcm[i]
        return sum(row[j] * gamma[j] for j in range(self.rank))

    def root_to_weight(self, gamma: RootVector) -> Weight:
        return tuple(self.coroot_value(gamma, i) for i in range(self.rank))

    def simple_reflection(self, i: int, gamma: RootVector) -> RootVector:
        c = self.coroot_value(gamma, i)
        return tuple(g - c if j == i else g for j, g in enumerate(gamma))

    def reflect_weight(self, i: int, lam: Weight) -> Weight:
        """``s_i(lambda) = lambda - <lambda, h_i> alpha_i`` in weight coordinates."""
        c = lam[i]
        return tuple(lam[j] - c * self.gcm[j][i] for j in range(self.rank))

    def t_pairing(self, lam: Weight, gamma: RootVector) -> int:
        """``<lambda, t_gamma> = sum_i n_i d_i <lambda, h_i>``."""
        return sum(n * d * l for n, d, l in zip(gamma, self.sym, lam))

    def height(self, gamma: RootVector) -> int:
        return sum(gamma)

    def q_exponent(self, i: int) -> int:
        """``d_i``, so that ``q_i = q**d_i``."""
        return self.sym[i]

    # -- finite type --------------------------------------------------------
    def is_finite_type(self) -> bool:
        return _is_finite(self.gcm, self.sym)

    def positive_roots(self) -> list[RootVector]:
        if not self.is_finite_type():
            raise CartanError("positive_roots needs a finite-type Cartan matrix")
        return list(_positive_roots(self.gcm, self.sym))

    def coxeter_order(self, i: int, j: int) -> int:
        prod = self.gcm[i][j] * self.gcm[j][i]
        orders = {0: 2, 1: 3, 2: 4, 3: 6}
        if prod not in orders:
            raise CartanError("pair generates an infinite dihedral group")
        return orders[prod]

    def longest_word(self) -> tuple[int, ...]:
        """A reduced expression for the longest Weyl group element (finite type)."""
        if not self.is_finite_type():
            raise CartanError("longest element exists only in finite type")
        word: list[int] = []
        target = len(self.positive_roots())
        lam = (1,) * self.rank  # rho; walk it to -rho one simple reflection at a time
        while len(word) < target:
            for i in range(self.rank):
                if lam[i] > 0:
                    lam = self.reflect_weight(i, lam)
                    word.append(i)
                    break
            else:  # pragma: no cover - cannot happen in finite type
                raise CartanError("failed to build a reduced word")
        return tuple(word)


@lru_cache(maxsize=None)
def _bilinear(gcm, sym, gamma, delta) -> int:
    n = len(gcm)
    return sum(
        gamma[i] * sym[i] * gcm[i][j] * delta[j]
        for i in range(n)
        if gamma[i]
        for j in range(n)
        if delta[j]
    )


@lru_cache(maxsize=None)
def _is_finite(gcm, sym) -> bool:
    n = len(gcm)
    b = [[Fraction(sym[i] * gcm[i][j]) for j in range(n)] for i in range(n)]
    # positive definiteness by Gaussian elimination without pivoting
    for k in range(n):
        if b[k][k] <= 0:
            return False
        for r in range(k + 1, n):
            f = b[r][k] / b[k][k]
            for c in range(k, n):
                b[r][c] -= f * b[k][c]
    return True


@lru_cache(maxsize=None)
def _positive_roots(gcm, sym) -> tuple[RootVector, ...]:
    datum = CartanDatum(gcm, sym)
    n = datum.rank
    seen = {datum.simple_root(i) for i in range(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                r = datum.simple_reflection(i, beta)
                if all(c >= 0 for c in r) and r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return tuple(sorted(seen, key=lambda b: (sum(b), b)))


PRESETS: dict[str, tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]] = {
    "A1": (((2,),), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1)),
    "B2": (((2, -1), (-2, 2)), (2, 1)),
    "G2": (((2, -3), (-1, 2)), (1, 3)),
    "A1xA1": (((2, 0), (0, 2)), (1, 1)),
}


def cartan_type(name: str) -> CartanDatum:
    """Named preset: A1, A2, B2 (alpha_1 long), G2 (alpha_1 short), A1xA1."""
    try:
        gcm, sym = PRESETS[name]
    except KeyError:
        raise CartanError(f"unknown Cartan type {name!r}; choose from {sorted(PRESETS)}") from None
    return CartanDatum(gcm, sym, name)


def load_gcm(path: str | Path) -> CartanDatum:
    """Read a GCM file: ``n``, then ``n`` matrix rows, then an optional row of d_i."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        n = int(lines[0][0])
        rows = [tuple(int(x) for x in lines[1 + k]) for k in range(n)]
        sym = tuple(int(x) for x in lines[1 + n]) if len(lines) > 1 + n else None
    except (IndexError, ValueError) as exc:
        raise CartanError(f"malformed GCM file {path}: {exc}") from None
    if len(lines) > 2 + n:
        raise CartanError(f"malformed GCM file {path}: trailing lines")
    return CartanDatum.from_matrix(rows, sym, name=Path(path).stem)
