"""Hochschild cohomology of A_n through the Koszul complex

HH* of the Weyl algebra is computed from A -> A^2 -> A, one bidegree at a time.
The comparison map φ* sends x_0 dx_1 ... dx_q to φ(x_0) d_n φ(x_1) ⌣ ... where
d_n is the Bockstein of 0 -> A_n -> A_2n -> A_n -> 0.
"""

from wittkit.drwitt import DrwSymbol, basic, weight_module
from wittkit.hoch import (
    bockstein_d, center_cochain, class_of, connecting_delta_check, cup, hh, matched_piece, phi_star,
    sv_identity_check,
)
from wittkit.weylquant import NcPoly

p = 3
print("HH^0(A_1) lengths by degree:", hh(p, 1, 0, 6).lengths_by_degree())
print("HH^1(A_1) lengths by degree:", hh(p, 1, 1, 6).lengths_by_degree())

du = bockstein_d(center_cochain(NcPoly.x(p, 1, 3)))
dv = bockstein_d(center_cochain(NcPoly.y(p, 1, 3)))
print("d_1(x^3) =", du)
print("d_1(x^3) ⌣ d_1(y^3) =", cup(du, dv))

sym = DrwSymbol(1, None, (basic(p, 1, 0, (1, 0)), basic(p, 1, 0, (0, 1))))
print("φ*_1(du dv) class:", class_of(phi_star([sym], 1, p)).coords)

print("SV identity at x^3:", sv_identity_check(NcPoly.x(p, 1, 3))["pass"])

rec = matched_piece(p, 2, 1, (1, 1))
print("W_2Ω^1 vs HH^1(A_2) at weight (1,1):", rec["drw_length"], rec["hh_length"], "bijective:", rec["bijective"])

print("connecting map δ_n equals", connecting_delta_check(p)["resolution"])
