"""Independent reference computations used to derive frozen test values.

The pairing oracle here uses only the coproduct rule
``tau(x, y1 y2) = sum tau(x_(1), y1) tau(x_(2), y2)`` and generator values,
never the letter-removal recursion of the library.
"""
from functools import lru_cache

from qpair import algebra as alg
from qpair.algebra import Element, Mono
from qpair.scalars import ONE, ZERO, qpow


def _tau_generator(datum, mx: Mono, j: int):
    """tau(k_g E, f_j): nonzero only for E = (j,)."""
    if mx.e != (j,):
        return ZERO
    g = mx.k
    d = datum.sym[j]
    # tau(k_g e_j, f_j) = q^{(g, a_j)} tau(e_j, f_j) read off the coproduct of k_g e_j
    base = -(qpow(d) - qpow(-d)).inverse()
    return base * qpow(datum.bilinear(g, datum.simple_root(j)))


@lru_cache(maxsize=None)
def tau_oracle(datum, mx: Mono, fw: tuple):
    """tau(k_g E, F) for an f-word F, by splitting off the first letter of F."""
    if not fw:
        return ONE if not mx.e else ZERO
    j, rest = fw[0], fw[1:]
    total = ZERO
    for (a, b), c in alg.coproduct(Element(datum, {mx: ONE})).terms.items():
        v = _tau_generator(datum, a, j)
        if v.is_zero():
            continue
        total = total + c * v * tau_oracle(datum, b, rest)
    return total


def tau_words_oracle(datum, ew: tuple, fw: tuple):
    return tau_oracle(datum, Mono((), datum.zero(), tuple(ew)), tuple(fw))


def kostant_count(datum, gamma):
    """Number of ways to write gamma as an unordered sum of positive roots."""
    roots = datum.positive_roots()

    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total = 0
        r = roots[k]
        cur = rest
        while all(c >= 0 for c in cur):
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    return count(tuple(gamma), 0)


def golden_gram_lines(datum, max_height):
    from qpair.pairing import weights_up_to, words_of_weight

    lines = []
    for g in weights_up_to(datum.rank, max_height):
        words = words_of_weight(g)
        gs = ",".join(map(str, g))
        for ew in words:
            for fw in words:
                es = " ".join(f"e{i + 1}" for i in ew) or "1"
                fs = " ".join(f"f{i + 1}" for i in fw) or "1"
                lines.append(f"{gs}; {es}; {fs}; {tau_words_oracle(datum, ew, fw).render()}")
    return sorted(lines)


def weyl_dimension(datum, lam):
    """Weyl dimension formula with (w_i, a_j) = d_i delta_ij."""
    from fractions import Fraction

    num = den = Fraction(1)
    for beta in datum.positive_roots():
        num *= sum((lam[i] + 1) * datum.sym[i] * beta[i] for i in range(datum.rank))
        den *= sum(datum.sym[i] * beta[i] for i in range(datum.rank))
    return int(num / den)
