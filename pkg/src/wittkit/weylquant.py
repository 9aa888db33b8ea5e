"""The first Weyl algebra over Z/p^N and the center map from Witt vectors.

Relation: yx = xy + 1.  Elements are stored normal ordered (x left of y) as
{(a, b): c} meaning Σ c x^a y^b.  Reordering uses
y^b x^c = Σ_k k! C(b,k) C(c,k) x^{c-k} y^{b-k}.
"""

from __future__ import annotations

import json
import random
from math import comb, factorial
from typing import Iterable, Sequence

from .polydiff import MPoly, TruncationOverflow
from .wittring import PolynomialRing, WittVector, verschiebung, frobenius
from .zmod_linalg import SpanSolver, kernel_rows, span_length, subquotient, image_length


class NotDivisible(ArithmeticError):
    pass


class NotCentral(ValueError):
    pass


def _reorder_coeffs(b: int, c: int):
    out = []
    for k in range(min(b, c) + 1):
        out.append((k, factorial(k) * comb(b, k) * comb(c, k)))
    return out


_REORDER: dict = {}


def _reorder(b, c):
    key = (b, c)
    r = _REORDER.get(key)
    if r is None:
        r = _REORDER[key] = _reorder_coeffs(b, c)
    return r


class NcPoly:
    """Normal-ordered element of the Weyl algebra with integer or mod-p^N coefficients."""

    __slots__ = ("p", "N", "terms", "bound")

    def __init__(self, terms=None, p: int = 3, N: int | None = None, bound: int | None = None, _clean=False):
        self.p, self.N, self.bound = p, N, bound
        if _clean:
            self.terms = terms
            return
        mod = p**N if N is not None else None
        out = {}
        for k, c in (terms or {}).items():
            if mod is not None:
                c %= mod
            if c:
                out[(int(k[0]), int(k[1]))] = c
        if bound is not None:
            for a, b in out:
                if a + b > bound:
                    raise TruncationOverflow(f"degree {a + b} exceeds bound {bound}")
        self.terms = out

    @property
    def modulus(self):
        return None if self.N is None else self.p**self.N

    def _new(self, terms):
        return NcPoly(terms, self.p, self.N, self.bound)

    @classmethod
    def x(cls, p, N=None, power=1):
        return cls({(power, 0): 1}, p, N)

    @classmethod
    def y(cls, p, N=None, power=1):
        return cls({(0, power): 1}, p, N)

    @classmethod
    def const(cls, c, p, N=None):
        return cls({(0, 0): c}, p, N)

    @classmethod
    def monomial(cls, a, b, p, N=None, c=1):
        return cls({(a, b): c}, p, N)

    def _coerce(self, other):
        if isinstance(other, NcPoly):
            if other.p != self.p:
                raise ValueError("primes differ")
            return other
        return NcPoly({(0, 0): other}, self.p, self.N)

    def _merge_N(self, other):
        if self.N is None:
            return other.N
        if other.N is None:
            return self.N
        return min(self.N, other.N)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return NcPoly(t, self.p, self._merge_N(other), self.bound)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self._new({k: c * other for k, c in self.terms.items()})
        return nc_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self._new({k: c * other for k, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, k: int):
        result = NcPoly.const(1, self.p, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def at(self, N: int | None) -> "NcPoly":
        """Same integer representatives read at modulus p^N (None: over Z)."""
        return NcPoly(dict(self.terms), self.p, N, self.bound)

    def lift(self) -> "NcPoly":
        """Integer lift with representatives in [0, p^N)."""
        return NcPoly(dict(self.terms), self.p, None, self.bound, _clean=True)

    def divide(self, k: int) -> "NcPoly":
        d = self.p**k
        out = {}
        for key, c in self.terms.items():
            if c % d:
                raise NotDivisible(f"coefficient {c} of x^{key[0]}y^{key[1]} not divisible by {d}")
            out[key] = c // d
        N = None if self.N is None else self.N - k
        return NcPoly(out, self.p, N, self.bound)

    def ad_x(self) -> "NcPoly":
        """[a, x] = ∂a/∂y, exact on normal-ordered monomials."""
        return self._new({(a, b - 1): b * c for (a, b), c in self.terms.items() if b})

    def ad_y(self) -> "NcPoly":
        """[a, y] = -∂a/∂x."""
        return self._new({(a - 1, b): -a * c for (a, b), c in self.terms.items() if a})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "".join(s for s in ((f"x^{a}" if a > 1 else "x") if a else "", (f"y^{b}" if b > 1 else "y") if b else ""))
            parts.append(mono if c == 1 and mono else f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)

    def to_json(self) -> str:
        return json.dumps({f"{a},{b}": str(c) for (a, b), c in sorted(self.terms.items())}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, p: int, N=None) -> "NcPoly":
        d = json.loads(text)
        return cls({tuple(map(int, k.split(","))): int(v) for k, v in d.items()}, p, N)


def nc_mul(a: NcPoly, b: NcPoly) -> NcPoly:
    N = a._merge_N(b)
    mod = a.p**N if N is not None else None
    out: dict = {}
    for (a1, b1), c1 in a.terms.items():
        for (a2, b2), c2 in b.terms.items():
            base = c1 * c2
            for k, w in _reorder(b1, a2):
                coef = base * w
                if mod is not None:
                    coef %= mod
                    if not coef:
                        continue
                key = (a1 + a2 - k, b1 + b2 - k)
                out[key] = out.get(key, 0) + coef
    bound = a.bound if a.bound is not None else b.bound
    return NcPoly(out, a.p, N, bound)


def commutator(a: NcPoly, b: NcPoly) -> NcPoly:
    return a * b - b * a


def divided_bracket(a: NcPoly, b: NcPoly, k: int = 1) -> NcPoly:
    """(1/p^k)[a, b], returned at modulus p^{N-k} (or over Z)."""
    c = commutator(a, b)
    if c.N is not None and c.N <= k:
        raise NotDivisible(f"modulus p^{c.N} leaves no room to divide by p^{k}")
    return c.divide(k)


def is_central(z: NcPoly) -> bool:
    return z.ad_x().is_zero() and z.ad_y().is_zero()


# -- the center mod p and its Poisson bracket ---------------------------------


def embed_center(f: MPoly, p: int, N: int | None = None) -> NcPoly:
    """u ↦ x^p, v ↦ y^p with coefficient representatives in [0, modulus)."""
    if f.nvars != 2:
        raise ValueError("center elements are polynomials in u, v")
    return NcPoly({(p * a, p * b): c for (a, b), c in f.terms.items()}, p, N)


def restrict_center(z: NcPoly) -> MPoly:
    """Inverse of :func:`embed_center` on elements supported on p-th power monomials."""
    p = z.p
    terms = {}
    for (a, b), c in z.terms.items():
        if a % p or b % p:
            raise NotCentral(f"x^{a}y^{b} is not central mod {p}")
        terms[(a // p, b // p)] = c
    return MPoly(terms, 2, z.modulus)


def _as_center_lift(a, p) -> NcPoly:
    if isinstance(a, MPoly):
        return embed_center(a.with_modulus(p), p, None)
    z = a.at(1)
    if not is_central(z):
        raise NotCentral("element is not central mod p")
    return z.lift()


def deformation_bracket(a, b, p: int = 3) -> MPoly:
    """{a mod p, b mod p} = (1/p)[ã, b̃] mod p, written in u = x̄^p, v = ȳ^p."""
    if isinstance(a, NcPoly):
        p = a.p
    ta, tb = _as_center_lift(a, p), _as_center_lift(b, p)
    z = divided_bracket(ta, tb, 1).at(1)
    return restrict_center(z)


def center_basis(p: int, n: int, D: int) -> dict:
    """Per Bernstein degree d <= D, the center of A_n in degree d as a PresentedModule.

    Basis of degree d: x^a y^{d-a}, a = 0..d.  The map z ↦ ([z,x], [z,y])
    is assembled from commutators in the algebra.
    """
    out = {}
    x, y = NcPoly.x(p, n), NcPoly.y(p, n)
    for d in range(D + 1):
        rows = []
        for a in range(d + 1):
            m = NcPoly.monomial(a, d - a, p, n)
            cx, cy = commutator(m, x), commutator(m, y)
            row = [cx.terms.get((i, d - 1 - i), 0) for i in range(d)] + [cy.terms.get((i, d - 1 - i), 0) for i in range(d)]
            rows.append(row)
        if d == 0:
            ker = [[1]]
        else:
            ker = kernel_rows(rows, 2 * d, p, n)
        out[d] = subquotient(ker, [], d + 1, p, n)
    return out


def degree_vector(z: NcPoly, d: int) -> list[int]:
    return [z.terms.get((a, d - a), 0) for a in range(d + 1)]


def filtered_vector(z: NcPoly, D: int) -> list[int]:
    """Coordinates in the monomials of degree <= D, ordered by degree then x-exponent."""
    vec = []
    for d in range(D + 1):
        vec.extend(degree_vector(z, d))
    if z.degree() > D:
        raise TruncationOverflow(f"degree {z.degree()} exceeds window {D}")
    return vec


def vector_to_nc(vec: Sequence[int], d: int, p: int, N: int | None) -> NcPoly:
    return NcPoly({(a, d - a): c for a, c in enumerate(vec)}, p, N)


# -- the map phi_n ----------------------------------------------------------


def _components(w) -> list:
    return list(w.components) if isinstance(w, WittVector) else list(w)


def phi_n(w, n: int | None = None, p: int | None = None, perturb: Sequence | None = None) -> NcPoly:
    """φ_n(z_1, ..., z_n) = Σ p^{i-1} z̃_i^{p^{n-i}} mod p^n.

    Components are polynomials in u, v (or NcPolys central mod p).  ``perturb``
    adds p·r_i to the i-th lift, which must not change the result.
    """
    comps = _components(w)
    if p is None:
        p = w.p if isinstance(w, WittVector) else comps[0].p
    n = len(comps) if n is None else n
    total = NcPoly({}, p, n)
    for i, z in enumerate(comps[:n]):
        lift = _as_center_lift(z, p)
        if perturb is not None and perturb[i] is not None:
            lift = lift + p * perturb[i].lift()
        term = lift.at(n) ** (p ** (n - 1 - i))
        total = total + term * (p**i)
    return total


def v_map(z: NcPoly, l: int = 1) -> NcPoly:
    """v^l: A_n -> A_{n+l}, z ↦ p^l z̃."""
    return (z.lift() * z.p**l).at(z.N + l)


def r_map(z: NcPoly, l: int = 1) -> NcPoly:
    if z.N - l < 1:
        raise ValueError("level underflow")
    return z.at(z.N - l)


def underline_lift(z: NcPoly, perturb: NcPoly | None = None) -> NcPoly:
    """z̲ = z̃^p mod p^{n+1} for z central in A_n."""
    if not is_central(z):
        raise NotCentral("underline lift needs a central element")
    n = z.N
    lift = z.lift()
    if perturb is not None:
        lift = lift + perturb.lift() * z.p**n
    out = lift.at(n + 1) ** z.p
    if not is_central(out):
        raise NotCentral("lift is not central")
    return out


# -- checks -------------------------------------------------------------------


def azumaya_freeness_check(p: int, D: int) -> dict:
    """A_1 in degrees <= D is free over Z_1 on {x^i y^j : 0 <= i, j < p}."""
    products = []
    for a in range(D // p + 1):
        for b in range(D // p + 1 - a):
            z = NcPoly.monomial(p * a, p * b, p, 1)
            for i in range(p):
                for j in range(p):
                    if p * (a + b) + i + j <= D:
                        products.append(z * NcPoly.monomial(i, j, p, 1))
    rows = [filtered_vector(f, D) for f in products]
    dim = (D + 1) * (D + 2) // 2
    rank = span_length(rows, dim, p, 1)
    return {"p": p, "window": D, "products": len(rows), "dimension": dim, "rank": rank,
            "pass": rank == dim == len(rows)}


def witt_monomial(p: int, n: int, i: int, exp: tuple, ring=None) -> WittVector:
    """V^i[u^a v^b] in W_n(F_p[u, v])."""
    ring = ring or PolynomialRing(p, 2)
    comps = [ring.zero()] * n
    comps[i] = MPoly.monomial(exp, 1, p)
    return WittVector(p, tuple(comps), ring)


def basic_witt_generators(p: int, n: int, D: int):
    """Additive generators V^i[m] of W_n(Z_1) with p^{n-i} deg m <= D, m not a p-th power when i > 0.

    Each has additive order p^{n-i}.
    """
    gens = []
    for i in range(n):
        scale = p ** (n - i)
        for deg in range(D // scale + 1):
            for a in range(deg + 1):
                e = (a, deg - a)
                if i > 0 and e[0] % p == 0 and e[1] % p == 0:
                    continue
                gens.append((i, e, n - i))
    return gens


def theorem_iso_check(p: int = 3, n: int = 2, D: int = 9, samples: int = 20, seed: int = 0) -> dict:
    """Center of A_m versus φ_m(W_m(Z_1)) on degrees <= D for m = 1..n."""
    rng = random.Random(seed)
    levels = []
    ok = True
    for m in range(1, n + 1):
        centers = center_basis(p, m, D)
        gens = basic_witt_generators(p, m, D)
        images = [phi_n(witt_monomial(p, m, i, e), m, p) for i, e, _ in gens]
        dim = (D + 1) * (D + 2) // 2
        central = all(is_central(z) for z in images)
        per_degree = []
        level_ok = central
        for d in range(D + 1):
            # filtered piece of degree <= d
            cvecs = []
            for dd in range(d + 1):
                for g in centers[dd].generators:
                    z = vector_to_nc(g, dd, p, m)
                    cvecs.append(filtered_vector(z, D))
            ivecs = [filtered_vector(z, D) for (i, e, _), z in zip(gens, images) if z.degree() <= d]
            csolve = SpanSolver(cvecs, dim, p, m) if cvecs else None
            isolve = SpanSolver(ivecs, dim, p, m) if ivecs else None
            img_in_center = all(csolve is not None and csolve.contains(v) for v in ivecs)
            center_in_img = all(isolve is not None and isolve.contains(v) for v in cvecs)
            clen = span_length(cvecs, dim, p, m) if cvecs else 0
            ilen = span_length(ivecs, dim, p, m) if ivecs else 0
            dom_len = sum(k for (i, e, k), z in zip(gens, images) if z.degree() <= d)
            cfac = sorted(subquotient(cvecs, [], dim, p, m).exponents) if cvecs else []
            ifac = sorted(subquotient(ivecs, [], dim, p, m).exponents) if ivecs else []
            good = img_in_center and center_in_img and clen == ilen == dom_len and cfac == ifac
            level_ok &= good
            per_degree.append({"degree": d, "center_length": clen, "image_length": ilen,
                               "domain_length": dom_len, "invariant_factors": [p**k for k in cfac],
                               "pass": good})
        # presentation of the domain: p·V^{i}[m] = V^{i+1}[m^p]
        ring = PolynomialRing(p, 2)
        pres_ok = True
        for i, e, _ in gens:
            if i + 1 < m:
                lhs = witt_monomial(p, m, i, e, ring).scalar(p)
                rhs = witt_monomial(p, m, i + 1, (p * e[0], p * e[1]), ring)
                pres_ok &= lhs == rhs
            else:
                pres_ok &= witt_monomial(p, m, i, e, ring).scalar(p ** (m - i)).is_zero()
        # injectivity through the V-adic split on random elements
        split_ok = True
        for _ in range(samples if m > 1 else 0):
            i = rng.randrange(m)
            comps = [ring.zero()] * m
            for j in range(i, m):
                comps[j] = ring.random(rng, max_degree=1)
            if comps[i].is_zero():
                comps[i] = ring.var(rng.randrange(2))
            w = WittVector(p, tuple(comps), ring)
            s, z = w.v_adic_split()
            lhs = phi_n(w, m, p)
            rhs = v_map(phi_n(z, m - s, p), s) if s else phi_n(z, m, p)
            nonzero = not phi_n(z, m - s, p).at(1).is_zero()
            split_ok &= lhs == rhs and nonzero and not lhs.is_zero()
        level_ok &= pres_ok and split_ok
        ok &= level_ok
        levels.append({"m": m, "central": central, "presentation": pres_ok, "v_split": split_ok,
                       "degrees": per_degree, "pass": level_ok})
    return {"p": p, "n": n, "window": D, "levels": levels, "pass": ok}


def phi_intertwining_check(p: int, n: int, samples: int = 20, seed: int = 0) -> dict:
    """φ_{n+1}∘V = v∘φ_n and φ_{n-1}∘F = r∘φ_n on random Witt vectors."""
    rng = random.Random(seed)
    ring = PolynomialRing(p, 2)
    v_ok = f_ok = True
    for _ in range(samples):
        w = WittVector(p, tuple(ring.random(rng, max_degree=1) for _ in range(n)), ring)
        v_ok &= phi_n(verschiebung(w), n + 1, p) == v_map(phi_n(w, n, p))
        if n > 1:
            f_ok &= phi_n(frobenius(w), n - 1, p) == r_map(phi_n(w, n, p))
    return {"p": p, "n": n, "V": v_ok, "F": f_ok, "pass": v_ok and f_ok}
