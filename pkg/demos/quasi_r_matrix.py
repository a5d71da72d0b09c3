"""The quasi-R-matrix on small modules and its factorization through R_i.

Run with ``python3 demos/quasi_r_matrix.py``.
"""
from qpair import algebra as alg
from qpair import cartan_type
from qpair import repr as rp

for name, lams in (("A1", [(1,), (2,)]), ("B2", [(1, 0), (0, 1)])):
    d = cartan_type(name)
    v, w = (rp.build_highest(d, lam) for lam in lams)
    theta = rp.theta_op(v, w)
    print(f"{name}: V({lams[0]}) x V({lams[1]}), dimension {v.dim * w.dim}")
    print("  nonzero off-diagonal entries of Theta:",
          sum(1 for r, row in theta.rows.items() for c in row if r != c))
    n = rp.nilpotency_bound(v, w)
    for i in range(d.rank):
        r = rp.act_tensor(v, w, rp.r_element(d, i, n))
        print(f"  Theta == Theta' R_{i + 1}:", theta == rp.theta_prime_op(v, w, i) @ r)
        print(f"  Theta == R_{i + 1} Theta'':", theta == r @ rp.theta_dprime_op(v, w, i))
    for u in (alg.e(d, 0), alg.f(d, d.rank - 1)):
        du = alg.coproduct(u)
        lhs = rp.act_tensor(v, w, du.swap()) @ theta
        rhs = theta @ rp.act_tensor(v, w, alg.phi_twist(du))
        print(f"  Delta'({u.render()}) Theta == Theta Phi(Delta(u)):", lhs == rhs)
