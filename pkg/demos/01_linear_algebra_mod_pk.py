"""Linear algebra over Z/p^k

Modules over Z/p^k are not vector spaces: a vector can be killed by p without
being zero.  Every finite Z/p^k-module is a sum of cyclic pieces Z/p^{e_i}, and
the library tracks those exponents exactly.
"""

from wittkit.zmod_linalg import ZModMatrix, howell_form, smith_form, subquotient, brute_force_span

# a 2x2 matrix over Z/8
rows = [[2, 4], [0, 4]]
M = ZModMatrix(2, 3, 2, 2, (2, 4, 0, 4))
H, _ = howell_form(M)
print("Howell form over Z/8:", [H.entries[i:i + 2] for i in range(0, len(H.entries), 2)])

# |span| = 2^(sum of Howell pivot exponents) = 4 * 2; brute force agrees
print("span size:", len(brute_force_span(rows, 8, 2)))

# Smith form: diagonal entries are powers of 2
print("Smith diagonal:", smith_form(rows, 2, 2, 3)[0])

# homology of a tiny complex Z/9 --3--> Z/9 --3--> Z/9 at the middle spot:
# kernel of multiplication by 3 is 3Z/9, image is 3Z/9, so the homology is zero
H = subquotient([[3]], [[3]], 1, 3, 2)
print("H =", H.invariant_factors or "0")

# kernel of zero map modulo image of 3: Z/9 / 3 = Z/3
H = subquotient([[1]], [[3]], 1, 3, 2)
print("H =", H.invariant_factors)
