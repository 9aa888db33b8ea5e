"""Witt vectors

W_n(A) is built from universal integer polynomials determined by the ghost map
w_i(a) = a_0^{p^i} + p a_1^{p^{i-1}} + ... + p^i a_i.
"""

from wittkit.wittring import (
    IntegerRing, IntegersMod, PolynomialRing, WittVector, frobenius, ghost, prime_field_witt_structure,
    teichmuller, verschiebung, witt_one, witt_universal_polynomials,
)

p = 3
polys = witt_universal_polynomials(p, 2)
print("S_1(x0, x1, y0, y1) =", polys.sum_polys[1])

# in W_2(F_3), 1 + 1 + 1 = (0, 1): adding 1 to itself carries into the next component
F3 = IntegersMod(3, 1)
one = witt_one(p, 2, F3)
print("3 * 1 =", one.scalar(3))
for n in range(1, 5):
    print(f"W_{n}(F_3):", prime_field_witt_structure(p, n)["invariant_factors"])

# ghost components turn Witt arithmetic into componentwise arithmetic over Z
ZZ = IntegerRing()
a, b = WittVector(p, (1, 2, 0), ZZ), WittVector(p, (2, 1, 1), ZZ)
print("ghost(a+b) =", ghost(a + b), " ghost(a)+ghost(b) =", tuple(x + y for x, y in zip(ghost(a), ghost(b))))

# Frobenius and Verschiebung over F_3[t]; FV = p
R = PolynomialRing(p, 1)
t = teichmuller(R.var(0), 2, p, R)
print("V[t] =", verschiebung(t), " F(V[t]) =", frobenius(verschiebung(t)), " 3[t] =", t.scalar(3))
