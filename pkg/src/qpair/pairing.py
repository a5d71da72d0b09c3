"""The Drinfeld pairing between the non-negative and non-positive Borel parts.

Pairings of pure words factor as ``tau(E, F) = c(nu) * P(E, F)`` where ``nu`` is
the common weight, ``c(nu) = prod_i (-1/(q_i - q_i^-1))^{nu_i}`` and ``P`` is a
Laurent polynomial with non-negative integer coefficients obeying

    P(e_i E', F) = sum over positions p with F_p = i of
                   q^{(wt F_<p, alpha_i)} P(E', F with position p removed).

Everything else here (Gram blocks, canonical forms, the equality and
membership oracles, intersection subspaces, canonical elements) is built on
top of that recursion and exact linear algebra.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from . import linalg
from .algebra import (
    Element,
    Mono,
    TensorElement,
    from_words,
    word_weight,
)
from .cartan import CartanDatum, RootVector
from .scalars import ONE, ZERO, Scalar, q_factorial, qpow

__all__ = [
    "CanonicalElement",
    "GramBlock",
    "GradedSubspace",
    "canonical_form",
    "canonical_tensor_form",
    "dp_functional",
    "equality_oracle",
    "golden_lines",
    "in_reflected_cone",
    "weights_up_to",
    "gram_block",
    "intersection_subspace",
    "membership_minus",
    "membership_plus",
    "pbw_count",
    "tau",
    "tau_combo",
    "tau_power_closed",
    "tau_words",
    "tensor_equality_oracle",
    "theta",
    "theta_dprime",
    "theta_prime",
    "words_of_weight",
]


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def is_nonnegative(gamma: RootVector) -> bool:
    return all(x >= 0 for x in gamma)


@lru_cache(maxsize=None)
def words_of_weight(gamma: RootVector) -> tuple[tuple[int, ...], ...]:
    """All words with letter multiplicities ``gamma``, in lexicographic order."""
    if any(x < 0 for x in gamma):
        return ()
    if not any(gamma):
        return ((),)
    out = []
    for i, n in enumerate(gamma):
        if n:
            rest = gamma[:i] + (n - 1,) + gamma[i + 1:]
            out.extend((i,) + w for w in words_of_weight(rest))
    return tuple(out)


# -- the pairing on words ---------------------------------------------------------
@lru_cache(maxsize=None)
def _reduced(datum: CartanDatum, ew: tuple[int, ...], fw: tuple[int, ...]) -> Scalar:
    if not ew:
        return ONE if not fw else ZERO
    i = ew[0]
    rest = ew[1:]
    acc = ZERO
    before = [0] * datum.rank
    for p, j in enumerate(fw):
        if j == i:
            sub = _reduced(datum, rest, fw[:p] + fw[p + 1:])
            if not sub.is_zero():
                acc = acc + sub * qpow(datum.root_pairing(i, tuple(before)))
        before[j] += 1
    return acc


@lru_cache(maxsize=None)
def _norm(datum: CartanDatum, nu: RootVector) -> Scalar:
    out = ONE
    for i, n in enumerate(nu):
        d = datum.sym[i]
        out = out * ((qpow(-d) - qpow(d)).inverse() ** n)
    return out


def tau_words(datum: CartanDatum, ew: tuple[int, ...], fw: tuple[int, ...]) -> Scalar:
    """``tau(e-word, f-word)``; zero unless the weights agree."""
    nu = word_weight(datum.rank, ew)
    if nu != word_weight(datum.rank, fw):
        return ZERO
    return _norm(datum, nu) * _reduced(datum, tuple(ew), tuple(fw))


def tau(x: Element, y: Element) -> Scalar:
    """The pairing of ``x`` in U^0 U^+ with ``y`` in U^- U^0.

    Monomials are ``k_g E`` and ``F k_d``; ``k_g E = q^{(g, wt E)} E k_g`` and the
    torus then splits off as ``q^{-(g, d)}``.
    """
    if not x.in_plus_torus():
        raise ValueError("first argument must lie in U^0 U^+")
    if not y.in_minus_torus():
        raise ValueError("second argument must lie in U^- U^0")
    datum = x.datum
    rank = datum.rank
    acc = ZERO
    for mx, cx in x.terms.items():
        we = word_weight(rank, mx.e)
        for my, cy in y.terms.items():
            base = tau_words(datum, mx.e, my.f)
            if base.is_zero():
                continue
            exp = datum.bilinear(mx.k, we) - datum.bilinear(mx.k, my.k)
            acc = acc + cx * cy * base * qpow(exp)
    return acc


def tau_combo(
    datum: CartanDatum,
    xs: Mapping[tuple[int, ...], Scalar],
    ys: Mapping[tuple[int, ...], Scalar],
) -> Scalar:
    """``tau(sum a_E E, sum b_F F)`` for combinations of pure words.

    The e-words are walked as a prefix tree; at each node the f-side
    combination is hit with the letter-removal operator of the recursion, so
    shared prefixes are paid for once.  This is the route for tall weights
    where per-pair memoization would blow up.
    """
    by_weight: dict[RootVector, dict] = {}
    for w, c in xs.items():
        if not c.is_zero():
            by_weight.setdefault(word_weight(datum.rank, w), {})[w] = c
    total = ZERO
    for nu, group in by_weight.items():
        ystate = {w: c for w, c in ys.items() if not c.is_zero() and word_weight(datum.rank, w) == nu}
        if not ystate:
            continue
        total = total + _norm(datum, nu) * _trie_eval(datum, list(group.items()), 0, ystate)
    return total


def _remove_letter(datum: CartanDatum, i: int, ystate: Mapping[tuple, Scalar]) -> dict:
    out: dict[tuple, Scalar] = {}
    for w, c in ystate.items():
        before = [0] * datum.rank
        for p, j in enumerate(w):
            if j == i:
                key = w[:p] + w[p + 1:]
                exp = datum.root_pairing(i, tuple(before))
                val = c * qpow(exp) if exp else c
                old = out.get(key)
                out[key] = val if old is None else old + val
            before[j] += 1
    return {w: c for w, c in out.items() if not c.is_zero()}


def _trie_eval(datum, items: list, depth: int, ystate: dict) -> Scalar:
    acc = ZERO
    groups: dict[int, list] = {}
    for w, c in items:
        if len(w) == depth:
            acc = acc + c * ystate.get((), ZERO)
        else:
            groups.setdefault(w[depth], []).append((w, c))
    for i, sub in sorted(groups.items()):
        nxt = _remove_letter(datum, i, ystate)
        if nxt:
            acc = acc + _trie_eval(datum, sub, depth + 1, nxt)
    return acc


def tau_power_closed(datum: CartanDatum, i: int, m: int, n: int) -> Scalar:
    """Closed form of ``tau(e_i^m, f_i^n)``."""
    if m != n:
        return ZERO
    d = datum.sym[i]
    return qpow(d * n * (n - 1) // 2) * (qpow(-d) - qpow(d)).inverse() ** n * q_factorial(n, d)


# -- Gram blocks ------------------------------------------------------------------
@dataclass
class GramBlock:
    """Pairing matrix between all e-words and all f-words of one weight."""

    datum: CartanDatum
    weight: RootVector
    ewords: tuple[tuple[int, ...], ...]
    fwords: tuple[tuple[int, ...], ...]
    matrix: list[list[Scalar]]
    pivot_rows: list[int]
    pivot_cols: list[int]
    pivot_inverse: list[list[Scalar]] = field(repr=False)
    _ecache: dict = field(default_factory=dict, repr=False)
    _fcache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    @property
    def pivot_ewords(self) -> list[tuple[int, ...]]:
        return [self.ewords[a] for a in self.pivot_rows]

    @property
    def pivot_fwords(self) -> list[tuple[int, ...]]:
        return [self.fwords[b] for b in self.pivot_cols]

    def pivot_matrix(self) -> list[list[Scalar]]:
        return [[self.matrix[a][b] for b in self.pivot_cols] for a in self.pivot_rows]

    def e_coordinates(self, w: tuple[int, ...]) -> list[Scalar]:
        """Coordinates of an e-word in the pivot e-word basis of U^+_weight."""
        out = self._ecache.get(w)
        if out is None:
            r = [tau_words(self.datum, w, fw) for fw in self.pivot_fwords]
            n = self.rank
            out = [
                _sum(r[b] * self.pivot_inverse[b][a] for b in range(n))
                for a in range(n)
            ]
            self._ecache[w] = out
        return out

    def f_coordinates(self, w: tuple[int, ...]) -> list[Scalar]:
        out = self._fcache.get(w)
        if out is None:
            s = [tau_words(self.datum, ew, w) for ew in self.pivot_ewords]
            n = self.rank
            out = [
                _sum(self.pivot_inverse[b][a] * s[a] for a in range(n))
                for b in range(n)
            ]
            self._fcache[w] = out
        return out

    def golden(self) -> list[str]:
        g = ",".join(str(x) for x in self.weight)
        lines = [
            f"{g}; {_word_str('e', ew)}; {_word_str('f', fw)}; {self.matrix[a][b].render()}"
            for a, ew in enumerate(self.ewords)
            for b, fw in enumerate(self.fwords)
        ]
        return sorted(lines)


def _word_str(letter: str, w: tuple[int, ...]) -> str:
    return " ".join(f"{letter}{i + 1}" for i in w) if w else "1"


def _sum(it: Iterable[Scalar]) -> Scalar:
    acc = ZERO
    for x in it:
        if not x.is_zero():
            acc = acc + x
    return acc


@lru_cache(maxsize=None)
def gram_block(datum: CartanDatum, gamma: RootVector) -> GramBlock:
    gamma = datum.check_vector(gamma)
    if not is_nonnegative(gamma):
        raise ValueError(f"weight {gamma} is not in the non-negative cone")
    words = words_of_weight(gamma)
    m = [[tau_words(datum, ew, fw) for fw in words] for ew in words]
    _, cols = linalg.row_reduce(m)
    rows = linalg.independent_rows(m)
    sub = [[m[a][b] for b in cols] for a in rows]
    inv = linalg.inverse(sub) if sub else []
    return GramBlock(datum, gamma, words, words, m, rows, cols, inv)


def pbw_count(datum: CartanDatum, gamma: RootVector) -> int:
    """Number of multisets of positive roots summing to ``gamma`` (Kostant partitions)."""
    roots = datum.positive_roots()

    @lru_cache(maxsize=None)
    def count(rest: RootVector, k: int) -> int:
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total = 0
        beta = roots[k]
        cur = rest
        while is_nonnegative(cur):
            total += count(cur, k + 1)
            cur = _sub(cur, beta)
        return total

    return count(tuple(gamma), 0)


def golden_lines(datum: CartanDatum, max_height: int) -> list[str]:
    out = []
    for gamma in weights_up_to(datum.rank, max_height):
        out.extend(gram_block(datum, gamma).golden())
    return sorted(out)


def weights_up_to(rank: int, max_height: int) -> list[RootVector]:
    """All gamma in the non-negative cone with height <= max_height, by height then lex."""
    out = []

    def rec(prefix, left):
        if len(prefix) == rank:
            out.append(tuple(prefix))
            return
        for n in range(left + 1):
            rec(prefix + [n], left - n)

    rec([], max_height)
    return sorted(out, key=lambda g: (sum(g), g))


# -- canonical forms and oracles -----------------------------------------------------
def _word_canonical(datum: CartanDatum, w: tuple[int, ...], side: str) -> list[tuple[tuple, Scalar]]:
    if not w:
        return [((), ONE)]
    block = gram_block(datum, word_weight(datum.rank, w))
    if side == "+":
        coords, basis = block.e_coordinates(w), block.pivot_ewords
    else:
        coords, basis = block.f_coordinates(w), block.pivot_fwords
    return [(b, c) for b, c in zip(basis, coords) if not c.is_zero()]


def _mono_canonical(datum: CartanDatum, m: Mono) -> list[tuple[Mono, Scalar]]:
    return [
        (Mono(fb, m.k, eb), cf * ce)
        for fb, cf in _word_canonical(datum, m.f, "-")
        for eb, ce in _word_canonical(datum, m.e, "+")
    ]


def canonical_form(z: Element) -> dict[Mono, Scalar]:
    """Coordinates of ``z`` in the basis (pivot f-word) k_gamma (pivot e-word).

    Unique for each element of U, so two representatives are equal in U iff
    their canonical forms coincide.
    """
    acc: dict[Mono, Scalar] = {}
    for m, c in z.terms.items():
        for mm, cc in _mono_canonical(z.datum, m):
            v = acc.get(mm, ZERO) + c * cc
            if v.is_zero():
                acc.pop(mm, None)
            else:
                acc[mm] = v
    return acc


def canonical_element(z: Element) -> Element:
    return Element(z.datum, canonical_form(z))


def canonical_tensor_form(t: TensorElement) -> dict[tuple, Scalar]:
    acc: dict[tuple, Scalar] = {}
    cache: dict[Mono, list] = {}
    for key, c in t.terms.items():
        parts = []
        for m in key:
            if m not in cache:
                cache[m] = _mono_canonical(t.datum, m)
            parts.append(cache[m])
        for combo in iproduct(*parts):
            coeff = c
            for _, cc in combo:
                coeff = coeff * cc
            k2 = tuple(mm for mm, _ in combo)
            v = acc.get(k2, ZERO) + coeff
            if v.is_zero():
                acc.pop(k2, None)
            else:
                acc[k2] = v
    return acc


def equality_oracle(z1: Element, z2: Element) -> bool:
    """Decide ``z1 == z2`` in U (not just as representatives)."""
    return not canonical_form(z1 - z2)


def tensor_equality_oracle(t1: TensorElement, t2: TensorElement) -> bool:
    return not canonical_tensor_form(t1 - t2)


def dp_functional(
    z: Element,
    ew: tuple[int, ...],
    fw: tuple[int, ...],
    torus: RootVector | None = None,
) -> Scalar:
    """``sum_j c_j tau(E', F_j) tau(E_j, F')`` over the monomials ``F_j k_g E_j`` of z.

    With ``torus`` given, only monomials with that torus part contribute; the
    torus itself is invisible to the pairing, so the oracle groups by it.
    """
    datum = z.datum
    acc = ZERO
    for m, c in z.terms.items():
        if torus is not None and m.k != torus:
            continue
        a = tau_words(datum, ew, m.f)
        if a.is_zero():
            continue
        acc = acc + c * a * tau_words(datum, m.e, fw)
    return acc


def membership_plus(z: Element) -> dict[tuple[int, ...], Scalar] | None:
    """Coordinates over pivot e-words if ``z`` lies in U^+, else ``None``."""
    zero = z.datum.zero()
    out: dict[tuple[int, ...], Scalar] = {}
    for m, c in canonical_form(z).items():
        if m.f or m.k != zero:
            return None
        out[m.e] = c
    return out


def membership_minus(z: Element) -> dict[tuple[int, ...], Scalar] | None:
    zero = z.datum.zero()
    out: dict[tuple[int, ...], Scalar] = {}
    for m, c in canonical_form(z).items():
        if m.e or m.k != zero:
            return None
        out[m.f] = c
    return out


# -- intersections with T_i^{+-1}(U^{+-}) ------------------------------------------------
@dataclass
class GradedSubspace:
    """Subspace of U^+_gamma (side '+') or U^-_{-gamma} (side '-') given by coordinate
    vectors over the pivot words of the weight's Gram block."""

    datum: CartanDatum
    weight: RootVector
    side: str
    words: list[tuple[int, ...]]
    basis: list[list[Scalar]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[dict[tuple[int, ...], Scalar]]:
        return [
            {w: c for w, c in zip(self.words, v) if not c.is_zero()} for v in self.basis
        ]

    def elements(self) -> list[Element]:
        return [from_words(self.datum, v, self.side) for v in self.vectors()]

    def contains(self, combo: Mapping[tuple[int, ...], Scalar]) -> bool:
        """Whether a word combination of this weight lies in the subspace."""
        block = gram_block(self.datum, self.weight)
        n = block.rank
        coords = [ZERO] * n
        for w, c in combo.items():
            wc = block.e_coordinates(w) if self.side == "+" else block.f_coordinates(w)
            coords = [a + c * b for a, b in zip(coords, wc)]
        return linalg.rank(self.basis + [coords]) == self.dim if self.basis else all(
            x.is_zero() for x in coords
        )


@lru_cache(maxsize=None)
def intersection_subspace(datum: CartanDatum, gamma: RootVector, i: int, side: str, direction: int) -> GradedSubspace:
    """``U^+_gamma`` meet ``T_i^{direction}(U^+)`` (side '+') or the U^- analogue.

    Characterized by orthogonality:
      (+, T_i)    tau(u, U^- f_i) = 0        (-, T_i)    tau(U^+ e_i, u) = 0
      (+, T_i^-1) tau(u, f_i U^-) = 0        (-, T_i^-1) tau(e_i U^+, u) = 0
    """
    if side not in "+-" or direction not in (1, -1):
        raise ValueError("side must be '+' or '-', direction 1 or -1")
    gamma = datum.check_vector(gamma)
    block = gram_block(datum, gamma)
    words = block.pivot_ewords if side == "+" else block.pivot_fwords
    rest = _sub(gamma, datum.simple_root(i))
    n = block.rank
    if not is_nonnegative(rest):
        basis = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
        return GradedSubspace(datum, gamma, side, words, basis)
    lower = gram_block(datum, rest)
    rows = []
    if side == "+":
        for w in lower.pivot_fwords:
            test = w + (i,) if direction == 1 else (i,) + w
            rows.append([tau_words(datum, u, test) for u in words])
    else:
        for w in lower.pivot_ewords:
            test = w + (i,) if direction == 1 else (i,) + w
            rows.append([tau_words(datum, test, u) for u in words])
    basis = linalg.nullspace(rows, n)
    return GradedSubspace(datum, gamma, side, words, basis)


# -- canonical elements ------------------------------------------------------------------
@dataclass
class CanonicalElement:
    """``sum_j x_j (x) y_j`` for dual bases of a restricted pairing at one weight."""

    weight: RootVector
    tensor: TensorElement


def _canonical_from_bases(datum, gamma, xs: list[dict], ys: list[dict]) -> CanonicalElement:
    g = [[tau_combo(datum, x, y) for y in ys] for x in xs]
    inv = linalg.inverse(g) if g else []
    z = datum.zero()
    acc: dict[tuple, Scalar] = {}
    for a, x in enumerate(xs):
        for b, y in enumerate(ys):
            c = inv[b][a]
            if c.is_zero():
                continue
            for ew, cx in x.items():
                for fw, cy in y.items():
                    key = (Mono((), z, ew), Mono(fw, z, ()))
                    v = acc.get(key, ZERO) + c * cx * cy
                    if v.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = v
    return CanonicalElement(gamma, TensorElement(datum, 2, acc))


@lru_cache(maxsize=None)
def theta(datum: CartanDatum, gamma: RootVector) -> CanonicalElement:
    block = gram_block(datum, datum.check_vector(gamma))
    xs = [{w: ONE} for w in block.pivot_ewords]
    ys = [{w: ONE} for w in block.pivot_fwords]
    return _canonical_from_bases(datum, block.weight, xs, ys)


def in_reflected_cone(datum: CartanDatum, gamma: RootVector, i: int) -> bool:
    """gamma in Q+ and s_i gamma in Q+."""
    return is_nonnegative(gamma) and is_nonnegative(datum.simple_reflection(i, gamma))


def _theta_restricted(datum, gamma, i, direction) -> CanonicalElement:
    if not in_reflected_cone(datum, gamma, i):
        raise ValueError("restricted canonical elements need gamma and s_i gamma in Q+")
    xs = intersection_subspace(datum, gamma, i, "+", direction).vectors()
    ys = intersection_subspace(datum, gamma, i, "-", direction).vectors()
    if len(xs) != len(ys):
        raise linalg.SingularMatrixError("intersection subspaces have different dimensions")
    return _canonical_from_bases(datum, gamma, xs, ys)


@lru_cache(maxsize=None)
def theta_prime(datum: CartanDatum, gamma: RootVector, i: int) -> CanonicalElement:
    return _theta_restricted(datum, datum.check_vector(gamma), i, 1)


@lru_cache(maxsize=None)
def theta_dprime(datum: CartanDatum, gamma: RootVector, i: int) -> CanonicalElement:
    return _theta_restricted(datum, datum.check_vector(gamma), i, -1)
