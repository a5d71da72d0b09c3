"""Finite-dimensional integrable modules and the operators acting on them.

Highest-weight modules are cut out of the span of f-words applied to v_lambda
by the radical of the contravariant form.  Lowest-weight modules are obtained
by twisting with the automorphism e_i <-> f_i, k_gamma -> k_{-gamma}.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from . import linalg
from .algebra import (
    Element,
    Mono,
    TensorElement,
    phi_twist,
    phi_twist_inverse,
    word_weight,
)
from .cartan import CartanDatum, RootVector, Weight
from .linalg import SparseMatrix
from .pairing import in_reflected_cone, is_nonnegative, theta, theta_dprime, theta_prime
from .scalars import ONE, ZERO, Scalar, expq_coeff, q_int, qpow

__all__ = [
    "WeightModule",
    "act",
    "act_tensor",
    "build_highest",
    "build_lowest",
    "contravariant_form",
    "diagonal_op",
    "exp_series",
    "is_identity",
    "module_suite",
    "nilpotency_bound",
    "twisted_tensor_op",
    "weight_space_image_ok",
    "lusztig_T_inverse_module",
    "lusztig_T_module",
    "r_element",
    "r_inverse_element",
    "sigma_alternative",
    "sigma_i",
    "sigma_inverse",
    "tensor_module",
    "theta_op",
    "theta_prime_op",
    "theta_dprime_op",
    "z_element",
]


def signed_q_int(n: int, d: int) -> Scalar:
    return q_int(n, d) if n >= 0 else -q_int(-n, d)


@dataclass
class WeightModule:
    """A finite-dimensional weight module with exact generator matrices.

    ``offsets[b]`` is the root-lattice vector with
    ``weight(b) = base + offsets[b]`` (in weight coordinates after conversion).
    """

    datum: CartanDatum
    labels: list[str]
    weights: list[Weight]
    offsets: list[RootVector]
    e: list[SparseMatrix]
    f: list[SparseMatrix]
    name: str = ""
    _mono_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def k(self, gamma: RootVector) -> SparseMatrix:
        return SparseMatrix.diagonal([qpow(self.datum.t_pairing(w, gamma)) for w in self.weights])

    def weight_space(self, mu: Weight) -> list[int]:
        return [b for b, w in enumerate(self.weights) if w == mu]

    def nilpotency(self) -> int:
        """Largest n with some e_i^n or f_i^n nonzero, plus one."""
        return max([m.is_nilpotent_order() for m in self.e + self.f] + [1])

    def dump(self) -> str:
        lines = [f"module {self.name} dim {self.dim}", "basis:"]
        for b, (lab, w) in enumerate(zip(self.labels, self.weights)):
            lines.append(f"  {b} {lab} [{','.join(map(str, w))}]")
        for letter, mats in (("e", self.e), ("f", self.f)):
            for i, m in enumerate(mats):
                lines.append(f"{letter}{i + 1}:")
                for r in sorted(m.rows):
                    for c in sorted(m.rows[r]):
                        lines.append(f"  {r} {c} {m.rows[r][c].render()}")
        return "\n".join(lines) + "\n"


# -- construction -----------------------------------------------------------------
def contravariant_form(datum: CartanDatum, lam: Weight):
    """``B(F1 v, F2 v)`` on f-words applied to v_lambda, via ``B(f_j F1 v, F2 v) = B(F1 v, e_j F2 v)``."""

    @lru_cache(maxsize=None)
    def raise_word(j: int, w: tuple[int, ...]) -> tuple:
        # e_j f_w v = sum_p [<mu_p, h_j>]_{q_j} f_{w without p} v
        out = []
        after = [0] * datum.rank
        for p in range(len(w) - 1, -1, -1):
            if w[p] == j:
                mu = _sub_weight(datum, lam, tuple(after))
                c = signed_q_int(mu[j], datum.sym[j])
                if not c.is_zero():
                    out.append((w[:p] + w[p + 1:], c))
            after[w[p]] += 1
        return tuple(out)

    @lru_cache(maxsize=None)
    def form(w1: tuple[int, ...], w2: tuple[int, ...]) -> Scalar:
        if len(w1) != len(w2):
            return ZERO
        if not w1:
            return ONE
        if word_weight(datum.rank, w1) != word_weight(datum.rank, w2):
            return ZERO
        acc = ZERO
        for w, c in raise_word(w1[0], w2):
            acc = acc + c * form(w1[1:], w)
        return acc

    form.raise_word = raise_word
    return form


def _sub_weight(datum: CartanDatum, lam: Weight, nu: RootVector) -> Weight:
    shift = datum.root_to_weight(nu)
    return tuple(a - b for a, b in zip(lam, shift))


def _word_label(w: tuple[int, ...], vec: str) -> str:
    return " ".join([f"f{i + 1}" for i in w] + [vec])


@lru_cache(maxsize=None)
def build_highest(datum: CartanDatum, lam: Weight) -> WeightModule:
    """The irreducible integrable module with highest weight ``lam``."""
    lam = tuple(lam)
    if len(lam) != datum.rank or any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not a dominant weight")
    if not datum.is_finite_type():
        raise ValueError("module construction needs a finite-type Cartan datum")
    form = contravariant_form(datum, lam)
    levels: list[list[tuple[int, ...]]] = [[()]]
    groups: dict[RootVector, list[tuple[int, ...]]] = {datum.zero(): [()]}
    while levels[-1]:
        cands: dict[RootVector, list] = {}
        for b in levels[-1]:
            for j in range(datum.rank):
                w = (j,) + b
                cands.setdefault(word_weight(datum.rank, w), []).append(w)
        nxt = []
        for nu in sorted(cands):
            words = sorted(set(cands[nu]))
            g = [[form(a, b) for b in words] for a in words]
            keep = [words[r] for r in linalg.independent_rows(g)]
            if keep:
                groups[nu] = keep
                nxt.extend(keep)
        levels.append(nxt)
    basis = [w for lvl in levels for w in lvl]
    index = {w: n for n, w in enumerate(basis)}
    inv_gram = {}
    for nu, words in groups.items():
        inv_gram[nu] = linalg.inverse([[form(a, b) for b in words] for a in words])

    def coords(combo: list[tuple[tuple[int, ...], Scalar]]) -> dict[int, Scalar]:
        out: dict[int, Scalar] = {}
        for w, c in combo:
            nu = word_weight(datum.rank, w)
            words = groups.get(nu)
            if not words:
                continue
            r = [form(w, b) for b in words]
            inv = inv_gram[nu]
            for a, wa in enumerate(words):
                val = ZERO
                for b in range(len(words)):
                    if not r[b].is_zero() and not inv[b][a].is_zero():
                        val = val + r[b] * inv[b][a]
                if not val.is_zero():
                    out[index[wa]] = out.get(index[wa], ZERO) + c * val
        return {k: v for k, v in out.items() if not v.is_zero()}

    n = len(basis)
    e_mats, f_mats = [], []
    for j in range(datum.rank):
        erows: dict[int, dict[int, Scalar]] = {}
        frows: dict[int, dict[int, Scalar]] = {}
        for col, w in enumerate(basis):
            for r, v in coords([((j,) + w, ONE)]).items():
                frows.setdefault(r, {})[col] = v
            for r, v in coords(list(form.raise_word(j, w))).items():
                erows.setdefault(r, {})[col] = v
        e_mats.append(SparseMatrix(n, n, erows))
        f_mats.append(SparseMatrix(n, n, frows))
    weights = [_sub_weight(datum, lam, word_weight(datum.rank, w)) for w in basis]
    offsets = [tuple(-x for x in word_weight(datum.rank, w)) for w in basis]
    labels = [_word_label(w, "v+") for w in basis]
    return WeightModule(datum, labels, weights, offsets, e_mats, f_mats, f"V+{list(lam)}")


@lru_cache(maxsize=None)
def build_lowest(datum: CartanDatum, lam: Weight) -> WeightModule:
    """The irreducible integrable module with lowest weight ``-lam``."""
    hi = build_highest(datum, tuple(lam))
    labels = [lab.replace("f", "e").replace("v+", "v-") for lab in hi.labels]
    weights = [tuple(-x for x in w) for w in hi.weights]
    offsets = [tuple(-x for x in o) for o in hi.offsets]
    return WeightModule(datum, labels, weights, offsets, list(hi.f), list(hi.e), f"V-{[-x for x in lam]}")


def tensor_module(v: WeightModule, w: WeightModule) -> WeightModule:
    """``V (x) W`` with the action through the coproduct."""
    datum = v.datum
    e_mats, f_mats = [], []
    iv, iw = SparseMatrix.identity(v.dim), SparseMatrix.identity(w.dim)
    for i in range(datum.rank):
        ai = datum.simple_root(i)
        kv = v.k(ai)
        kw_inv = w.k(tuple(-x for x in ai))
        e_mats.append(v.e[i].kron(iw) + kv.kron(w.e[i]))
        f_mats.append(v.f[i].kron(kw_inv) + iv.kron(w.f[i]))
    labels = [f"({a})#({b})" for a in v.labels for b in w.labels]
    weights = [tuple(x + y for x, y in zip(a, b)) for a in v.weights for b in w.weights]
    offsets = [tuple(x + y for x, y in zip(a, b)) for a in v.offsets for b in w.offsets]
    return WeightModule(datum, labels, weights, offsets, e_mats, f_mats, f"{v.name}#{w.name}")


# -- actions ---------------------------------------------------------------------
def _mono_matrix(v: WeightModule, m: Mono) -> SparseMatrix:
    cached = v._mono_cache.get(m)
    if cached is not None:
        return cached
    out = v.k(m.k)
    for i in reversed(m.f):
        out = v.f[i] @ out
    for i in m.e:
        out = out @ v.e[i]
    v._mono_cache[m] = out
    return out


def act(v: WeightModule, a: Element) -> SparseMatrix:
    out = SparseMatrix.zero(v.dim)
    for m, c in a.terms.items():
        out = out + _mono_matrix(v, m).scale(c)
    return out


def act_tensor(v: WeightModule, w: WeightModule, t: TensorElement) -> SparseMatrix:
    if t.arity != 2:
        raise ValueError("act_tensor needs a 2-fold tensor")
    out = SparseMatrix.zero(v.dim * w.dim)
    for (a, b), c in t.terms.items():
        ma = _mono_matrix(v, a)
        if ma.is_zero():
            continue
        mb = _mono_matrix(w, b)
        if mb.is_zero():
            continue
        out = out + ma.kron(mb).scale(c)
    return out


# -- exponentials and sigma_i -------------------------------------------------------
def exp_series(x: SparseMatrix, d: int) -> SparseMatrix:
    """``exp_{q^d}(x)`` for nilpotent ``x`` (``d`` may be negative)."""
    out = SparseMatrix.identity(x.nrows)
    power = SparseMatrix.identity(x.nrows)
    n = 0
    while True:
        n += 1
        power = power @ x
        if power.is_zero():
            return out
        out = out + power.scale(expq_coeff(n, d))


def _ke(v: WeightModule, i: int, kpow: int) -> SparseMatrix:
    ai = v.datum.simple_root(i)
    return v.k(tuple(kpow * x for x in ai)) @ v.e[i]


def _kf(v: WeightModule, i: int, kpow: int) -> SparseMatrix:
    ai = v.datum.simple_root(i)
    return v.k(tuple(kpow * x for x in ai)) @ v.f[i]


def sigma_i(v: WeightModule, i: int, t: Scalar) -> SparseMatrix:
    """``exp(t q_i^-1 k_i e_i) exp(-t^-1 f_i) exp(t q_i k_i^-1 e_i)`` with base q_i."""
    if t.is_zero():
        raise ValueError("t must be nonzero")
    d = v.datum.sym[i]
    a1 = _ke(v, i, 1).scale(t * qpow(-d))
    a2 = v.f[i].scale(-t.inverse())
    a3 = _ke(v, i, -1).scale(t * qpow(d))
    return exp_series(a1, d) @ exp_series(a2, d) @ exp_series(a3, d)


def sigma_inverse(v: WeightModule, i: int, t: Scalar) -> SparseMatrix:
    """Inverse of :func:`sigma_i` from ``exp_x(y) exp_{x^-1}(-y) = 1``."""
    d = v.datum.sym[i]
    a1 = _ke(v, i, 1).scale(t * qpow(-d))
    a2 = v.f[i].scale(-t.inverse())
    a3 = _ke(v, i, -1).scale(t * qpow(d))
    return exp_series(-a3, -d) @ exp_series(-a2, -d) @ exp_series(-a1, -d)


def sigma_alternative(v: WeightModule, i: int, t: Scalar, n: int, variant: int) -> SparseMatrix:
    """The two n-shifted three-factor expressions for sigma_i(t)."""
    d = v.datum.sym[i]
    tinv = t.inverse()
    if variant == 1:
        x1 = _ke(v, i, n + 1).scale(t * qpow(-d * (n + 1)))
        x2 = _kf(v, i, -n).scale(-tinv * qpow(-d * n))
        x3 = _ke(v, i, n - 1).scale(t * qpow(-d * (n - 1)))
    elif variant == 2:
        x1 = _kf(v, i, -n - 1).scale(-tinv * qpow(-d * (n + 1)))
        x2 = _ke(v, i, n).scale(t * qpow(-d * n))
        x3 = _kf(v, i, -n + 1).scale(-tinv * qpow(-d * (n - 1)))
    else:
        raise ValueError("variant must be 1 or 2")
    return exp_series(x1, d) @ exp_series(x2, d) @ exp_series(x3, d)


def diagonal_op(v: WeightModule, i: int, sign: int, shift: int) -> SparseMatrix:
    """``q_i^{sign * h_i (h_i + shift) / 2}`` with shift = +1 or -1."""
    d = v.datum.sym[i]
    return SparseMatrix.diagonal(
        [qpow(sign * d * (w[i] * (w[i] + shift)) // 2) for w in v.weights]
    )


def lusztig_T_module(v: WeightModule, i: int) -> SparseMatrix:
    """``T_i = sigma_i(-1)^{-1} q_i^{h_i(h_i+1)/2}`` on ``v``."""
    return sigma_inverse(v, i, -ONE) @ diagonal_op(v, i, 1, 1)


def lusztig_T_inverse_module(v: WeightModule, i: int) -> SparseMatrix:
    return diagonal_op(v, i, -1, 1) @ sigma_i(v, i, -ONE)


# -- Z_i, R_i and canonical elements as operators ------------------------------------------
def _series_element(datum: CartanDatum, i: int, first: str, d_sign: int, scale: Scalar, nmax: int) -> TensorElement:
    z = datum.zero()
    d = datum.sym[i]
    acc: dict[tuple, Scalar] = {}
    for n in range(nmax + 1):
        word = (i,) * n
        if first == "f":
            key = (Mono(word, z, ()), Mono((), z, word))
        else:
            key = (Mono((), z, word), Mono(word, z, ()))
        acc[key] = expq_coeff(n, d_sign * d) * scale ** n
    return TensorElement(datum, 2, acc)


def _qi_gap(datum: CartanDatum, i: int) -> Scalar:
    d = datum.sym[i]
    return qpow(d) - qpow(-d)


def z_element(datum: CartanDatum, i: int, nmax: int) -> TensorElement:
    """Truncation of ``exp_{q_i}((q_i - q_i^-1) f_i (x) e_i)``."""
    return _series_element(datum, i, "f", 1, _qi_gap(datum, i), nmax)


def r_element(datum: CartanDatum, i: int, nmax: int) -> TensorElement:
    """Truncation of ``R_i = exp_{q_i^-1}(-(q_i - q_i^-1) e_i (x) f_i)``."""
    return _series_element(datum, i, "e", -1, -_qi_gap(datum, i), nmax)


def r_inverse_element(datum: CartanDatum, i: int, nmax: int) -> TensorElement:
    return _series_element(datum, i, "e", 1, _qi_gap(datum, i), nmax)


def _gamma_bound(v: WeightModule, w: WeightModule) -> list[RootVector]:
    """Weights gamma in Q+ by which v can be raised and w lowered."""
    up = {tuple(a - b for a, b in zip(x, y)) for x in v.offsets for y in v.offsets}
    down = {tuple(a - b for a, b in zip(x, y)) for x in w.offsets for y in w.offsets}
    both = [g for g in up & down if is_nonnegative(g)]
    return sorted(both, key=lambda g: (sum(g), g))


def theta_op(v: WeightModule, w: WeightModule) -> SparseMatrix:
    out = SparseMatrix.zero(v.dim * w.dim)
    for g in _gamma_bound(v, w):
        out = out + act_tensor(v, w, theta(v.datum, g).tensor)
    return out


def theta_prime_op(v: WeightModule, w: WeightModule, i: int) -> SparseMatrix:
    out = SparseMatrix.zero(v.dim * w.dim)
    for g in _gamma_bound(v, w):
        if in_reflected_cone(v.datum, g, i):
            out = out + act_tensor(v, w, theta_prime(v.datum, g, i).tensor)
    return out


def theta_dprime_op(v: WeightModule, w: WeightModule, i: int) -> SparseMatrix:
    out = SparseMatrix.zero(v.dim * w.dim)
    for g in _gamma_bound(v, w):
        if in_reflected_cone(v.datum, g, i):
            out = out + act_tensor(v, w, theta_dprime(v.datum, g, i).tensor)
    return out


def twisted_tensor_op(v: WeightModule, w: WeightModule, t: TensorElement, inverse: bool = False) -> SparseMatrix:
    """Action of ``Phi(t)`` (or ``Phi^-1(t)``) on ``v (x) w``."""
    return act_tensor(v, w, phi_twist_inverse(t) if inverse else phi_twist(t))


def weight_space_image_ok(v: WeightModule, op: SparseMatrix, i: int) -> bool:
    """``op`` maps each weight space V_mu into V_{s_i mu}."""
    datum = v.datum
    for c in range(v.dim):
        target = datum.reflect_weight(i, v.weights[c])
        for r, row in op.rows.items():
            if c in row and v.weights[r] != target:
                return False
    return True


def nilpotency_bound(*modules: WeightModule) -> int:
    return max(m.nilpotency() for m in modules)


def is_identity(m: SparseMatrix) -> bool:
    return m == SparseMatrix.identity(m.nrows)


def matrices_equal(a: SparseMatrix, b: SparseMatrix) -> bool:
    return a == b


def module_suite(datum: CartanDatum) -> list[WeightModule]:
    """Small modules used by the operator checks for the preset types."""
    name = datum.name
    lams: Sequence[Weight]
    if datum.rank == 1:
        lams = [(0,), (1,), (2,)]
    elif name == "G2":
        lams = [(1, 0)]
    elif datum.rank == 2:
        lams = [(1, 0), (0, 1)]
    else:
        lams = [tuple(1 if j == k else 0 for j in range(datum.rank)) for k in range(datum.rank)]
    return [build_highest(datum, lam) for lam in lams]
