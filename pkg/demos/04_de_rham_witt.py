"""The de Rham-Witt complex of F_p[T_1, T_2]

Elements are sums over weights k ∈ Z[1/p]^2 of forms T^k dlog T_I.  F multiplies
weights by p, V divides them by p and multiplies the coefficient by p.
"""

from fractions import Fraction

from wittkit.drwitt import DrwElement, drw_d, drw_F, drw_mul, drw_V, illusie_exactness, weight_module

p = 3
T = lambda n, *e: DrwElement.teichmuller_monomial(p, 2, n, e)

t1 = T(2, 1, 0)
print("F d[T1] =", drw_F(drw_d(t1)))
print("equals [T1]^2 d[T1]:", drw_F(drw_d(t1)) == drw_mul(T(1, 2, 0), drw_d(T(1, 1, 0))))
print("V d[T1] = 3 d V[T1]:", drw_V(drw_d(T(1, 1, 0))) == drw_d(drw_V(T(1, 1, 0))).scale(p))

for n in (1, 2, 3):
    print(f"W_{n}Ω^0 at weight (1, 0):", weight_module(p, 2, n, 0, (1, 0)).invariant_factors)
print("W_2Ω^1 at weight (1, 1/3):", weight_module(p, 2, 2, 1, (1, Fraction(1, 3))).invariant_factors)

print("Illusie sequence exact for n=2, weights <= 3:", illusie_exactness(p, 2, 2, 3)["pass"])
