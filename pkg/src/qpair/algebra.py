"""The quantized enveloping algebra U as triangular normal forms.

An ``Element`` is a finite linear combination of triangular monomials
``f_{w_1} ... f_{w_m} k_gamma e_{v_1} ... e_{v_n}`` stored as ``Mono(f, k, e)``.
Only the commutation relations between the three groups of generators are
imposed; the quantum Serre relations are not, so e-words and f-words are
representatives modulo the Serre ideal.  Deciding equality in U is the job of
:func:`qpair.pairing.equality_oracle`.

Indices are 0-based in the API.  Text rendering and the expression grammar
use 1-based generator names (``e1``, ``f2``, ``k[1,0]``).
"""
from __future__ import annotations

import random
import re
from collections.abc import Callable, Iterable, Mapping
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from .cartan import CartanDatum, RootVector
from .scalars import ONE, ZERO, Scalar, as_scalar, q_factorial, qpow

__all__ = [
    "Element",
    "Mono",
    "TensorElement",
    "antipode",
    "braid_T",
    "braid_T_inv",
    "braid_T_inv_projected",
    "coproduct",
    "counit",
    "divided_power",
    "e",
    "f",
    "gaussian_binomial_k",
    "iterated_coproduct",
    "k",
    "multiply",
    "normal_form",
    "omega",
    "parse",
    "phi_twist",
    "phi_twist_inverse",
    "projection_p",
    "scalar",
]


class Mono(NamedTuple):
    """Triangular monomial ``f-word * k_torus * e-word``."""

    f: tuple[int, ...]
    k: tuple[int, ...]
    e: tuple[int, ...]


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vneg(a):
    return tuple(-x for x in a)


@lru_cache(maxsize=None)
def word_weight(rank: int, word: tuple[int, ...]) -> RootVector:
    w = [0] * rank
    for i in word:
        w[i] += 1
    return tuple(w)


def mono_weight(datum: CartanDatum, m: Mono) -> RootVector:
    return _vsub(word_weight(datum.rank, m.e), word_weight(datum.rank, m.f))


def _add_into(acc: dict, key, c: Scalar) -> None:
    old = acc.get(key)
    if old is None:
        acc[key] = c
    else:
        new = old + c
        if new.is_zero():
            del acc[key]
        else:
            acc[key] = new


class Element:
    """A representative of an element of U; immutable by convention."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: CartanDatum, terms: Mapping[Mono, Scalar] | None = None):
        self.datum = datum
        self.terms: dict[Mono, Scalar] = {
            m: c for m, c in (terms or {}).items() if not c.is_zero()
        }

    @classmethod
    def _wrap(cls, datum: CartanDatum, terms: dict) -> Element:
        obj = cls.__new__(cls)
        obj.datum = datum
        obj.terms = terms
        return obj

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: Element) -> None:
        if other.datum != self.datum:
            raise ValueError("elements belong to different Cartan data")

    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(acc, m, c)
        return Element._wrap(self.datum, acc)

    def __neg__(self) -> Element:
        return Element._wrap(self.datum, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> Element:
        c = as_scalar(c)
        if c.is_zero():
            return Element._wrap(self.datum, {})
        return Element._wrap(self.datum, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> Element:
        if n < 0:
            raise ValueError("negative powers are not defined in U")
        out = scalar(self.datum, 1)
        for _ in range(n):
            out = multiply(out, self)
        return out

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        """Identity of representatives (not equality in U)."""
        if not isinstance(other, Element):
            return NotImplemented
        return self.datum == other.datum and self.terms == other.terms

    __hash__ = None

    def weight_components(self) -> dict[RootVector, Element]:
        out: dict[RootVector, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(mono_weight(self.datum, m), {})[m] = c
        return {w: Element._wrap(self.datum, t) for w, t in out.items()}

    def weight(self) -> RootVector:
        """The weight of a homogeneous element (zero element has weight 0)."""
        weights = {mono_weight(self.datum, m) for m in self.terms}
        if len(weights) > 1:
            raise ValueError("element is not weight-homogeneous")
        return weights.pop() if weights else self.datum.zero()

    def in_plus_torus(self) -> bool:
        """True when every monomial lies in U^0 U^+ (no f-letters)."""
        return all(not m.f for m in self.terms)

    def in_minus_torus(self) -> bool:
        return all(not m.e for m in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            parts.append(f"{self.terms[m].render()}*{render_mono(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Element({self.render()})"


def _mono_sort_key(m: Mono):
    return (len(m.f) + len(m.e), m.f, m.k, m.e)


def render_mono(m: Mono) -> str:
    toks = [f"f{i + 1}" for i in m.f]
    if any(m.k):
        toks.append("k[" + ",".join(str(x) for x in m.k) + "]")
    toks += [f"e{i + 1}" for i in m.e]
    return " ".join(toks) if toks else "1"


# -- constructors ---------------------------------------------------------------
def scalar(datum: CartanDatum, c) -> Element:
    c = as_scalar(c)
    return Element(datum, {Mono((), datum.zero(), ()): c})


def e(datum: CartanDatum, i: int) -> Element:
    return Element._wrap(datum, {Mono((), datum.zero(), (i,)): ONE})


def f(datum: CartanDatum, i: int) -> Element:
    return Element._wrap(datum, {Mono((i,), datum.zero(), ()): ONE})


def k(datum: CartanDatum, gamma) -> Element:
    return Element._wrap(datum, {Mono((), datum.check_vector(gamma), ()): ONE})


def from_words(datum: CartanDatum, combo: Mapping[tuple[int, ...], Scalar], side: str) -> Element:
    """Element ``sum c_w w`` from a combination of e-words (side '+') or f-words ('-')."""
    z = datum.zero()
    if side == "+":
        return Element(datum, {Mono((), z, w): c for w, c in combo.items()})
    return Element(datum, {Mono(w, z, ()): c for w, c in combo.items()})


def divided_power(datum: CartanDatum, letter: str, i: int, r: int) -> Element:
    """``e_i^(r)`` or ``f_i^(r)``: the r-th power divided by ``[r]!_{q_i}``."""
    if r < 0:
        raise ValueError("divided powers need r >= 0")
    word = (i,) * r
    c = q_factorial(r, datum.sym[i]).inverse()
    z = datum.zero()
    if letter == "e":
        return Element._wrap(datum, {Mono((), z, word): c})
    if letter == "f":
        return Element._wrap(datum, {Mono(word, z, ()): c})
    raise ValueError("letter must be 'e' or 'f'")


# -- multiplication ---------------------------------------------------------------
def _qi_minus_inv(datum: CartanDatum, i: int) -> Scalar:
    d = datum.sym[i]
    return (qpow(d) - qpow(-d)).inverse()


@lru_cache(maxsize=None)
def _straighten(datum: CartanDatum, ew: tuple[int, ...], fw: tuple[int, ...]) -> tuple:
    """Triangular form of ``e-word * f-word`` as a tuple of (Mono, Scalar)."""
    z = datum.zero()
    if not ew or not fw:
        return ((Mono(fw, z, ew), ONE),)
    acc: dict[Mono, Scalar] = {}
    head, i = ew[:-1], ew[-1]
    # e_i F = F e_i + sum_p F^(p) (q^-m k_i - q^m k_i^-1)/(q_i - q_i^-1)
    for (m, c) in _straighten(datum, head, fw):
        _add_into(acc, Mono(m.f, m.k, m.e + (i,)), c)
    ai = datum.simple_root(i)
    mai = _vneg(ai)
    denom = _qi_minus_inv(datum, i)
    tail_weight = [0] * datum.rank
    for p in range(len(fw) - 1, -1, -1):
        if fw[p] == i:
            mexp = datum.root_pairing(i, tuple(tail_weight))
            rest = fw[:p] + fw[p + 1:]
            for (m, c) in _straighten(datum, head, rest):
                # E'' k_beta = q^{-(wt E'', beta)} k_beta E''
                we = word_weight(datum.rank, m.e)
                s = datum.bilinear(we, ai)
                cp = c * denom * qpow(-mexp - s)
                cm = -c * denom * qpow(mexp + s)
                _add_into(acc, Mono(m.f, _vadd(m.k, ai), m.e), cp)
                _add_into(acc, Mono(m.f, _vadd(m.k, mai), m.e), cm)
        tail_weight[fw[p]] += 1
    return tuple(acc.items())


def _mono_product(datum: CartanDatum, a: Mono, b: Mono) -> Iterable[tuple[Mono, Scalar]]:
    rank = datum.rank
    for (m, c) in _straighten(datum, a.e, b.f):
        # k_{a.k} F'' = q^{-(a.k, wt F'')} F'' k_{a.k};  E'' k_{b.k} = q^{-(wt E'', b.k)} k E''
        s = datum.bilinear(a.k, word_weight(rank, m.f)) + datum.bilinear(
            word_weight(rank, m.e), b.k
        )
        yield Mono(a.f + m.f, _vadd(_vadd(a.k, m.k), b.k), m.e + b.e), (c * qpow(-s) if s else c)


def multiply(a: Element, b: Element) -> Element:
    a._check(b)
    acc: dict[Mono, Scalar] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            cab = ca * cb
            for m, c in _mono_product(a.datum, ma, mb):
                _add_into(acc, m, cab * c)
    return Element._wrap(a.datum, acc)


def multiply_all(datum: CartanDatum, factors: Iterable[Element]) -> Element:
    out = scalar(datum, 1)
    for x in factors:
        out = multiply(out, x)
    return out


# -- rewriting-system normal form ------------------------------------------
Letter = tuple  # ("E", i) | ("F", i) | ("K", gamma)


def _redexes(word: tuple[Letter, ...]) -> list[int]:
    out = []
    for p in range(len(word) - 1):
        a, b = word[p][0], word[p + 1][0]
        if (a, b) in (("E", "F"), ("E", "K"), ("K", "F"), ("K", "K")):
            out.append(p)
    return out


def _rewrite(datum: CartanDatum, word: tuple[Letter, ...], p: int) -> list[tuple[Scalar, tuple]]:
    a, b = word[p], word[p + 1]
    pre, post = word[:p], word[p + 2:]
    if a[0] == "E" and b[0] == "F":
        out = [(ONE, pre + (b, a) + post)]
        if a[1] == b[1]:
            i = a[1]
            c = _qi_minus_inv(datum, i)
            ai = datum.simple_root(i)
            out.append((c, pre + (("K", ai),) + post))
            out.append((-c, pre + (("K", _vneg(ai)),) + post))
        return out
    if a[0] == "E" and b[0] == "K":
        return [(qpow(-datum.bilinear(b[1], datum.simple_root(a[1]))), pre + (b, a) + post)]
    if a[0] == "K" and b[0] == "F":
        return [(qpow(-datum.bilinear(a[1], datum.simple_root(b[1]))), pre + (b, a) + post)]
    return [(ONE, pre + (("K", _vadd(a[1], b[1])),) + post)]


def _word_to_mono(datum: CartanDatum, word: tuple[Letter, ...]) -> Mono:
    fw = tuple(x[1] for x in word if x[0] == "F")
    ew = tuple(x[1] for x in word if x[0] == "E")
    ks = [x[1] for x in word if x[0] == "K"]
    return Mono(fw, ks[0] if ks else datum.zero(), ew)


def normal_form(
    datum: CartanDatum,
    words,
    strategy: str = "leftmost",
    rng: random.Random | None = None,
) -> Element:
    """Rewrite a word (or formal sum of words) of generator letters to triangular form.

    ``words`` is either a sequence of letters ``("E", i)``, ``("F", i)``,
    ``("K", gamma)`` or a list of ``(coefficient, letters)`` pairs.  The
    rewriting rules are applied one redex at a time, leftmost-first, or at a
    random redex when ``strategy="random"``.
    """
    if words and isinstance(words[0], tuple) and words[0] and isinstance(words[0][0], str):
        words = [(ONE, tuple(words))]
    elif not words:
        words = [(ONE, ())]
    rng = rng or random.Random(0)
    pending: dict[tuple, Scalar] = {}
    for c, w in words:
        _add_into(pending, tuple(w), as_scalar(c))
    done: dict[Mono, Scalar] = {}
    while pending:
        w, c = pending.popitem()
        spots = _redexes(w)
        if not spots:
            _add_into(done, _word_to_mono(datum, w), c)
            continue
        p = spots[0] if strategy == "leftmost" else rng.choice(spots)
        for c2, w2 in _rewrite(datum, w, p):
            _add_into(pending, w2, c * c2)
    return Element._wrap(datum, done)


# -- tensors ------------------------------------------------------------------------
class TensorElement:
    """Finite combination of tuples of triangular monomials (an element of U^{(x)n})."""

    __slots__ = ("datum", "arity", "terms")

    def __init__(self, datum: CartanDatum, arity: int, terms: Mapping[tuple, Scalar] | None = None):
        self.datum = datum
        self.arity = arity
        self.terms: dict[tuple, Scalar] = {
            t: c for t, c in (terms or {}).items() if not c.is_zero()
        }

    @classmethod
    def _wrap(cls, datum, arity, terms) -> TensorElement:
        obj = cls.__new__(cls)
        obj.datum, obj.arity, obj.terms = datum, arity, terms
        return obj

    @classmethod
    def pure(cls, *factors: Element) -> TensorElement:
        datum = factors[0].datum
        acc: dict[tuple, Scalar] = {}
        _pure_into(acc, factors, ONE)
        return cls._wrap(datum, len(factors), acc)

    def __add__(self, other: TensorElement) -> TensorElement:
        acc = dict(self.terms)
        for t, c in other.terms.items():
            _add_into(acc, t, c)
        return TensorElement._wrap(self.datum, self.arity, acc)

    def __neg__(self) -> TensorElement:
        return TensorElement._wrap(self.datum, self.arity, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def scale(self, c) -> TensorElement:
        c = as_scalar(c)
        return TensorElement(self.datum, self.arity, {t: c * v for t, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None

    def map_slots(self, fns: list[Callable[[Element], Element] | None]) -> TensorElement:
        """Apply a linear map to each slot (``None`` leaves a slot alone)."""
        acc: dict[tuple, Scalar] = {}
        cache: list[dict] = [dict() for _ in fns]
        for t, c in self.terms.items():
            images = []
            for s, m in enumerate(t):
                if fns[s] is None:
                    images.append(Element._wrap(self.datum, {m: ONE}))
                    continue
                img = cache[s].get(m)
                if img is None:
                    img = fns[s](Element._wrap(self.datum, {m: ONE}))
                    cache[s][m] = img
                images.append(img)
            _pure_into(acc, images, c)
        return TensorElement._wrap(self.datum, self.arity, acc)

    def swap(self) -> TensorElement:
        """``P(x (x) y) = y (x) x`` for a 2-fold tensor."""
        if self.arity != 2:
            raise ValueError("swap needs a 2-fold tensor")
        return TensorElement._wrap(self.datum, 2, {(b, a): c for (a, b), c in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda t: tuple(_mono_sort_key(m) for m in t))
        return " + ".join(
            f"{self.terms[t].render()}*(" + ") # (".join(render_mono(m) for m in t) + ")"
            for t in keys
        )

    def __repr__(self) -> str:
        return f"TensorElement({self.render()})"


def _pure_into(acc: dict, factors, c: Scalar) -> None:
    partial = [((), c)]
    for x in factors:
        partial = [
            (t + (m,), cc * cm) for t, cc in partial for m, cm in x.terms.items()
        ]
    for t, cc in partial:
        _add_into(acc, t, cc)


def tensor_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    if a.arity != b.arity:
        raise ValueError("tensor arity mismatch")
    acc: dict[tuple, Scalar] = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            partial = [((), ca * cb)]
            for ma, mb in zip(ta, tb):
                partial = [
                    (t + (m,), cc * cm)
                    for t, cc in partial
                    for m, cm in _mono_product(a.datum, ma, mb)
                ]
            for t, cc in partial:
                _add_into(acc, t, cc)
    return TensorElement._wrap(a.datum, a.arity, acc)


# -- Hopf structure ---------------------------------------------------------------
@lru_cache(maxsize=None)
def _coproduct_f(datum: CartanDatum, fw: tuple[int, ...]) -> tuple:
    """Terms ``(exp, F_S, F_rest)`` of Delta(F) = sum q^exp F_S (x) F_rest k_{-wt F_S}."""
    n = len(fw)
    out = []
    for size in range(n + 1):
        for S in combinations(range(n), size):
            Sset = set(S)
            exp = sum(
                datum.bilinear(datum.simple_root(fw[p]), datum.simple_root(fw[r]))
                for p in S
                for r in range(p + 1, n)
                if r not in Sset
            )
            out.append((exp, tuple(fw[p] for p in S), tuple(fw[r] for r in range(n) if r not in Sset)))
    return tuple(out)


@lru_cache(maxsize=None)
def _coproduct_e(datum: CartanDatum, ew: tuple[int, ...]) -> tuple:
    """Terms ``(exp, E_rest, E_T)`` of Delta(E) = sum q^exp k_{wt E_T} E_rest (x) E_T."""
    n = len(ew)
    out = []
    for size in range(n + 1):
        for T in combinations(range(n), size):
            Tset = set(T)
            exp = -sum(
                datum.bilinear(datum.simple_root(ew[r]), datum.simple_root(ew[p]))
                for p in T
                for r in range(p)
                if r not in Tset
            )
            out.append((exp, tuple(ew[r] for r in range(n) if r not in Tset), tuple(ew[p] for p in T)))
    return tuple(out)


def _coproduct_mono(datum: CartanDatum, m: Mono):
    rank = datum.rank
    for ef, fs, frest in _coproduct_f(datum, m.f):
        wfs = word_weight(rank, fs)
        for ee, erest, et in _coproduct_e(datum, m.e):
            left = Mono(fs, _vadd(m.k, word_weight(rank, et)), erest)
            right = Mono(frest, _vsub(m.k, wfs), et)
            yield (left, right), ef + ee


def coproduct(a: Element) -> TensorElement:
    acc: dict[tuple, Scalar] = {}
    for m, c in a.terms.items():
        for t, exp in _coproduct_mono(a.datum, m):
            _add_into(acc, t, c * qpow(exp) if exp else c)
    return TensorElement._wrap(a.datum, 2, acc)


def coproduct_at(t: TensorElement, slot: int) -> TensorElement:
    """Apply Delta to one slot of a tensor, raising the arity by one."""
    acc: dict[tuple, Scalar] = {}
    for key, c in t.terms.items():
        for pair, exp in _coproduct_mono(t.datum, key[slot]):
            _add_into(acc, key[:slot] + pair + key[slot + 1:], c * qpow(exp) if exp else c)
    return TensorElement._wrap(t.datum, t.arity + 1, acc)


def iterated_coproduct(a: Element, m: int) -> TensorElement:
    """``Delta_m(a)`` in the (m+1)-fold tensor power; ``Delta_0`` is the identity."""
    t = TensorElement._wrap(a.datum, 1, {(mono,): c for mono, c in a.terms.items()})
    for _ in range(m):
        t = coproduct_at(t, 0)
    return t


def counit(a: Element) -> Scalar:
    out = ZERO
    for m, c in a.terms.items():
        if not m.f and not m.e:
            out = out + c
    return out


@lru_cache(maxsize=None)
def _antipode_letter(datum: CartanDatum, kind: str, i: int) -> Element:
    ai = datum.simple_root(i)
    if kind == "e":  # S(e_i) = -k_i^-1 e_i
        return Element._wrap(datum, {Mono((), _vneg(ai), (i,)): -ONE})
    return Element._wrap(datum, {Mono((i,), ai, ()): -ONE})  # S(f_i) = -f_i k_i


@lru_cache(maxsize=None)
def _antipode_mono(datum: CartanDatum, m: Mono) -> Element:
    factors = [_antipode_letter(datum, "e", i) for i in reversed(m.e)]
    factors.append(k(datum, _vneg(m.k)))
    factors += [_antipode_letter(datum, "f", i) for i in reversed(m.f)]
    return multiply_all(datum, factors)


def antipode(a: Element) -> Element:
    out = Element._wrap(a.datum, {})
    for m, c in a.terms.items():
        out = out + _antipode_mono(a.datum, m).scale(c)
    return out


def omega(a: Element) -> Element:
    """Anti-automorphism swapping e_i and f_i and fixing k_gamma."""
    datum = a.datum
    out = Element._wrap(datum, {})
    for m, c in a.terms.items():
        # omega(F k E) = omega(E) k omega(F) = rev(E as f) k rev(F as e)
        prod = multiply_all(
            datum,
            [
                Element._wrap(datum, {Mono(tuple(reversed(m.e)), datum.zero(), ()): ONE}),
                k(datum, m.k),
                Element._wrap(datum, {Mono((), datum.zero(), tuple(reversed(m.f))): ONE}),
            ],
        )
        out = out + prod.scale(c)
    return out


def _times_k_right(datum: CartanDatum, m: Mono, beta) -> tuple[Mono, int]:
    """``m * k_beta`` as (mono, q-exponent)."""
    s = -datum.bilinear(word_weight(datum.rank, m.e), beta)
    return Mono(m.f, _vadd(m.k, beta), m.e), s


def phi_twist(t: TensorElement) -> TensorElement:
    """Phi(u (x) u') = q^{-(g,d)} u k_{-d} (x) u' k_{-g} for u in U_g, u' in U_d."""
    return _phi(t, -1)


def phi_twist_inverse(t: TensorElement) -> TensorElement:
    return _phi(t, 1)


def _phi(t: TensorElement, sign: int) -> TensorElement:
    if t.arity != 2:
        raise ValueError("Phi acts on 2-fold tensors")
    datum = t.datum
    acc: dict[tuple, Scalar] = {}
    for (a, b), c in t.terms.items():
        g, d = mono_weight(datum, a), mono_weight(datum, b)
        exp = sign * datum.bilinear(g, d)
        a2, s1 = _times_k_right(datum, a, tuple(sign * x for x in d))
        b2, s2 = _times_k_right(datum, b, tuple(sign * x for x in g))
        _add_into(acc, (a2, b2), c * qpow(exp + s1 + s2))
    return TensorElement._wrap(datum, 2, acc)


# -- braid automorphisms ---------------------------------------------------------------
@lru_cache(maxsize=None)
def _braid_letter(datum: CartanDatum, i: int, kind: str, j: int, inverse: bool) -> Element:
    """Image of e_j / f_j under T_i (or T_i^{-1})."""
    d = datum.sym[i]
    ai = datum.simple_root(i)
    z = datum.zero()
    if j == i:
        if kind == "e":
            # T_i(e_i) = -f_i k_i ; T_i^-1(e_i) = -k_i^-1 f_i
            if not inverse:
                return Element._wrap(datum, {Mono((i,), ai, ()): -ONE})
            return multiply(k(datum, _vneg(ai)), f(datum, i)).scale(-1)
        # T_i(f_i) = -k_i^-1 e_i ; T_i^-1(f_i) = -e_i k_i
        if not inverse:
            return Element._wrap(datum, {Mono((), _vneg(ai), (i,)): -ONE})
        return multiply(e(datum, i), k(datum, ai)).scale(-1)
    n = -datum.gcm[i][j]
    acc: dict[Mono, Scalar] = {}
    for r in range(n + 1):
        s = n - r
        sign = -ONE if r % 2 else ONE
        norm = (q_factorial(r, d) * q_factorial(s, d)).inverse()
        if kind == "e":
            coeff = sign * qpow(-d * r) * norm
            # T_i: e_i^(s) e_j e_i^(r);  T_i^-1: e_i^(r) e_j e_i^(s)
            word = (i,) * s + (j,) + (i,) * r if not inverse else (i,) * r + (j,) + (i,) * s
            _add_into(acc, Mono((), z, word), coeff)
        else:
            coeff = sign * qpow(d * r) * norm
            # T_i: f_i^(r) f_j f_i^(s);  T_i^-1: f_i^(s) f_j f_i^(r)
            word = (i,) * r + (j,) + (i,) * s if not inverse else (i,) * s + (j,) + (i,) * r
            _add_into(acc, Mono(word, z, ()), coeff)
    return Element._wrap(datum, acc)


@lru_cache(maxsize=None)
def _braid_word(datum: CartanDatum, i: int, kind: str, word: tuple[int, ...], inverse: bool) -> Element:
    if not word:
        return scalar(datum, 1)
    if len(word) == 1:
        return _braid_letter(datum, i, kind, word[0], inverse)
    # split so that prefixes are shared across calls
    return multiply(
        _braid_word(datum, i, kind, word[:-1], inverse),
        _braid_letter(datum, i, kind, word[-1], inverse),
    )


def _braid(i: int, a: Element, inverse: bool) -> Element:
    datum = a.datum
    acc: dict[Mono, Scalar] = {}
    for m, c in a.terms.items():
        img = multiply_all(
            datum,
            [
                _braid_word(datum, i, "f", m.f, inverse),
                k(datum, datum.simple_reflection(i, m.k)),
                _braid_word(datum, i, "e", m.e, inverse),
            ],
        )
        for mm, cc in img.terms.items():
            _add_into(acc, mm, c * cc)
    return Element._wrap(datum, acc)


def braid_T(i: int, a: Element) -> Element:
    """Lusztig's automorphism T_i (= T''_{i,1}) applied to a representative."""
    return _braid(i, a, inverse=False)


def braid_T_inv(i: int, a: Element) -> Element:
    """The inverse automorphism T_i^{-1} (= T'_{i,-1})."""
    return _braid(i, a, inverse=True)


def braid_generator_image(datum: CartanDatum, i: int, kind: str, j: int, inverse: bool = False) -> Element:
    return _braid_letter(datum, i, kind, j, inverse)


# -- Cartan part ------------------------------------------------------------------
def projection_p(a: Element) -> dict[RootVector, Scalar]:
    """Component in U^0 with respect to U = (U^-_+ U + U U^+_+) (+) U^0."""
    return {m.k: c for m, c in a.terms.items() if not m.f and not m.e}


def torus_multiply(x: Mapping[RootVector, Scalar], y: Mapping[RootVector, Scalar]) -> dict:
    acc: dict = {}
    for g, a in x.items():
        for h, b in y.items():
            _add_into(acc, _vadd(g, h), a * b)
    return acc


def gaussian_binomial_k(datum: CartanDatum, i: int, m: int) -> dict[RootVector, Scalar]:
    """``prod_{r=1}^m (q_i^{-(r-1)} k_i - q_i^{r-1} k_i^-1) / (q_i^r - q_i^-r)`` on the k basis."""
    if m < 0:
        raise ValueError("m must be >= 0")
    d = datum.sym[i]
    ai = datum.simple_root(i)
    out: dict = {datum.zero(): ONE}
    for r in range(1, m + 1):
        den = (qpow(d * r) - qpow(-d * r)).inverse()
        factor = {ai: qpow(-d * (r - 1)) * den, _vneg(ai): -qpow(d * (r - 1)) * den}
        out = torus_multiply(out, factor)
    return out


# -- expression grammar ---------------------------------------------------------------
_TOKEN = re.compile(
    r"\s*(?:(?P<e>e\d+)|(?P<f>f\d+)|(?P<k>k\[[-\d,\s]*\])|(?P<qb>q\[-?\d+\])|(?P<q>q)"
    r"|(?P<int>\d+)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, datum: CartanDatum, tokens):
        self.datum = datum
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self) -> Element:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def _starts_atom(self) -> bool:
        kind, val = self.peek()
        return kind in ("e", "f", "k", "q", "qb", "int") or val == "("

    def term(self) -> Element:
        out = self.power()
        while True:
            kind, val = self.peek()
            if val == "*":
                self.take()
                out = multiply(out, self.power())
            elif val == "/":
                self.take()
                den = self.power()
                c = _as_pure_scalar(den)
                out = out.scale(c.inverse())
            elif self._starts_atom():
                out = multiply(out, self.power())
            else:
                return out

    def _exponent(self) -> tuple[int, bool]:
        if self.peek()[1] == "(":
            self.take("(")
            neg = self.peek()[1] == "-"
            if neg:
                self.take("-")
            n = int(self.take()[1])
            self.take(")")
            return (-n if neg else n), True
        neg = self.peek()[1] == "-"
        if neg:
            self.take("-")
        kind, val = self.take()
        if kind != "int":
            raise ParseError(f"bad exponent {val!r}")
        return (-int(val) if neg else int(val)), False

    def power(self) -> Element:
        kind, val = self.peek()
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take("^")
        n, paren = self._exponent()
        if kind in ("e", "f") and paren:
            return divided_power(self.datum, kind, int(val[1:]) - 1, n)
        if n < 0:
            return scalar(self.datum, _as_pure_scalar(base) ** n)
        return base ** n

    def atom(self) -> Element:
        kind, val = self.take()
        d = self.datum
        if kind == "e" or kind == "f":
            i = int(val[1:]) - 1
            if not 0 <= i < d.rank:
                raise ParseError(f"generator index out of range: {val}")
            return e(d, i) if kind == "e" else f(d, i)
        if kind == "k":
            body = val[2:-1].strip()
            vec = tuple(int(x) for x in body.split(",")) if body else d.zero()
            return k(d, d.check_vector(vec))
        if kind == "q":
            return scalar(d, qpow(1))
        if kind == "qb":
            return scalar(d, qpow(int(val[2:-1])))
        if kind == "int":
            return scalar(d, int(val))
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def _as_pure_scalar(x: Element) -> Scalar:
    if not x.terms:
        return ZERO
    if len(x.terms) != 1:
        raise ParseError("division and negative powers need a scalar")
    (m, c), = x.terms.items()
    if m.f or m.e or any(m.k):
        raise ParseError("division and negative powers need a scalar")
    return c


def parse(datum: CartanDatum, text: str) -> Element:
    """Parse the expression grammar: ``e1``, ``f2``, ``k[1,-1]``, ``q``, ``q[-2]``,
    sums, juxtaposed products, powers ``x^3`` and divided powers ``e1^(2)``."""
    p = _Parser(datum, _tokenize(text))
    out = p.expr()
    if p.peek()[0] is not None:
        raise ParseError(f"trailing input at {p.peek()[1]!r}")
    return out


# -- projected braid images --------------------------------------------------------
@lru_cache(maxsize=None)
def _braid_inv_prefix_plus(datum: CartanDatum, i: int, word: tuple[int, ...]) -> Element:
    # left-to-right; a monomial with nonempty f-word stays a left factor of every
    # later product, so it can never reach the pure e-word part and is dropped
    if not word:
        return scalar(datum, 1)
    prod = multiply(_braid_inv_prefix_plus(datum, i, word[:-1]), _braid_letter(datum, i, "e", word[-1], True))
    return Element._wrap(datum, {m: c for m, c in prod.terms.items() if not m.f})


@lru_cache(maxsize=None)
def _braid_inv_suffix_minus(datum: CartanDatum, i: int, word: tuple[int, ...]) -> Element:
    if not word:
        return scalar(datum, 1)
    prod = multiply(_braid_letter(datum, i, "f", word[0], True), _braid_inv_suffix_minus(datum, i, word[1:]))
    return Element._wrap(datum, {m: c for m, c in prod.terms.items() if not m.e})


def braid_T_inv_projected(
    datum: CartanDatum, i: int, combo: Mapping[tuple[int, ...], Scalar], side: str
) -> dict[tuple[int, ...], Scalar]:
    """Pure-word part of ``T_i^{-1}`` of a word combination in U^+ (side '+') or U^-.

    When the image lies in U^+ (resp. U^-), the discarded monomials sum to zero
    in U by the triangular decomposition, so the result is a representative of
    the image using only e-words (resp. f-words).
    """
    zero = datum.zero()
    acc: dict[tuple[int, ...], Scalar] = {}
    for w, c in combo.items():
        img = _braid_inv_prefix_plus(datum, i, w) if side == "+" else _braid_inv_suffix_minus(datum, i, w)
        for m, cm in img.terms.items():
            if m.k != zero or (m.f if side == "+" else m.e):
                continue
            _add_into(acc, m.e if side == "+" else m.f, c * cm)
    return acc
