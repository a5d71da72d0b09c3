"""Walk through braid invariance of the pairing on one A2 weight.

Run with ``python3 demos/braid_invariance.py``.
"""
from qpair import algebra as alg
from qpair import cartan_type
from qpair import pairing as pr

d = cartan_type("A2")
gamma, i = (1, 1), 0

print(f"weight {gamma}, reflection index {i + 1}")
block = pr.gram_block(d, gamma)
print("Gram block over e-words x f-words:")
for ew, row in zip(block.ewords, block.matrix):
    print("  ", ew, [x.render() for x in row])

xs = pr.intersection_subspace(d, gamma, i, "+", 1).elements()
ys = pr.intersection_subspace(d, gamma, i, "-", 1).elements()
print("\nbasis of U+ meet T_1(U+):", [x.render() for x in xs])
print("basis of U- meet T_1(U-):", [y.render() for y in ys])

for x in xs:
    for y in ys:
        tx = alg.braid_T_inv(i, x)
        ty = alg.braid_T_inv(i, y)
        print("\nT_1^-1(x) =", tx.render())
        print("T_1^-1(y) =", ty.render())
        print("tau(x, y)                 =", pr.tau(x, y).render())
        print("tau(T_1^-1 x, T_1^-1 y)   =", pr.tau(tx, ty).render())

# outside the intersection the identity fails: e1 e2 alone is not in T_1(U+)
x = alg.e(d, 0) * alg.e(d, 1)
img = alg.braid_T_inv(i, x)
print("\nfor x = e1 e2 the image", img.render(), "is not in U+:", pr.membership_plus(img) is None)
