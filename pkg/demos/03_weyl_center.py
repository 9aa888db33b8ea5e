"""The Weyl algebra mod p^n and its center

A_n = Z/p^n<x, y>/(yx - xy - 1).  Mod p the center is F_p[x^p, y^p]; mod p^n
it is the image of W_n(F_p[u, v]) under φ_n(z) = Σ p^i z̃_i^{p^{n-i}}, with
u ↦ x^p and v ↦ y^p.
"""

from wittkit.polydiff import poly_ring
from wittkit.weylquant import NcPoly, center_basis, deformation_bracket, divided_bracket, phi_n, theorem_iso_check

p = 3
x, y = NcPoly.x(p), NcPoly.y(p)
print("y x =", y * x)
print("(1/3)[y^3, x^3] =", divided_bracket(y**3, x**3))

# level one: degrees 0..3 of the center
for d, mod in center_basis(p, 1, 3).items():
    print(f"degree {d}: length {mod.length}")

# the bracket {u, v} read off from (1/p)[ũ, ṽ]
zero, (u, v) = poly_ring(p, 2)
print("{u, v} =", deformation_bracket(u, v))

# φ_2 on (u, 0) and (0, v)
print("φ_2(u, 0) =", phi_n([u, zero], 2, p))
print("φ_2(0, v) =", phi_n([zero, v], 2, p))

report = theorem_iso_check(p, 2, 9)
print("center of A_2 = φ_2(W_2) up to degree 9:", report["pass"])
