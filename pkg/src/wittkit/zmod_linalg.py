"""Exact linear algebra over the local rings Z/p^e.

Vectors are row vectors and matrices act on the right (``v -> v @ M``),
which is the convention used for every complex in the package.  Entries are
plain Python integers kept reduced into ``[0, p^e)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

MAX_MODULUS = 2**62


class CompositionNonzero(ValueError):
    """Raised when two maps handed to :func:`complex_cohomology` do not compose to zero."""


class NotInSpan(ValueError):
    pass


def valuation(a: int, p: int, cap: int) -> int:
    """p-adic valuation of ``a`` capped at ``cap`` (so that 0 has valuation ``cap``)."""
    if a == 0:
        return cap
    v = 0
    while a % p == 0 and v < cap:
        a //= p
        v += 1
    return v


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ZModMatrix:
    """A dense matrix over Z/p^e stored row-major."""

    p: int
    modulus_exponent: int
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.modulus_exponent < 1:
            raise ValueError("modulus exponent must be positive")
        if self.p**self.modulus_exponent > MAX_MODULUS:
            raise ValueError("modulus exceeds 2^62")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        mod = self.modulus
        object.__setattr__(self, "entries", tuple(int(x) % mod for x in self.entries))

    @property
    def modulus(self) -> int:
        return self.p**self.modulus_exponent

    @classmethod
    def from_rows(cls, p: int, e: int, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = [x for r in rows for x in r]
        return cls(p, e, len(rows), cols, tuple(flat))

    @classmethod
    def zeros(cls, p: int, e: int, rows: int, cols: int):
        return cls(p, e, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, p: int, e: int, size: int):
        return cls.from_rows(p, e, _identity(size), size)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "ZModMatrix") -> "ZModMatrix":
        if self.cols != other.rows or self.modulus != other.modulus:
            raise ValueError("incompatible matrices")
        prod = matmul(self.to_rows(), other.to_rows(), self.modulus, other.cols)
        return ZModMatrix.from_rows(self.p, self.modulus_exponent, prod, other.cols)

    def to_json(self) -> str:
        payload = {
            "p": str(self.p),
            "e": str(self.modulus_exponent),
            "rows": str(self.rows),
            "cols": str(self.cols),
            "entries": [[str(x) for x in r] for r in self.to_rows()],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ZModMatrix":
        d = json.loads(text)
        rows = [[int(x) for x in r] for r in d["entries"]]
        return cls.from_rows(int(d["p"]), int(d["e"]), rows, int(d["cols"]))


# ---------------------------------------------------------------------------
# list-of-lists kernels


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]], mod: int, bcols: int | None = None) -> list[list[int]]:
    if bcols is None:
        bcols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(bcols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append([v % mod for v in acc])
    return out


def vecmat(v: Sequence[int], m: list[list[int]], mod: int, cols: int) -> list[int]:
    acc = [0] * cols
    for k, x in enumerate(v):
        if x:
            mk = m[k]
            for j in range(cols):
                if mk[j]:
                    acc[j] += x * mk[j]
    return [a % mod for a in acc]


def _unit_part_inverse(a: int, p: int, mod: int) -> tuple[int, int]:
    """Write a = p^v * u with u a unit; return (v, u^{-1} mod mod)."""
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, pow(a, -1, mod)


def howell_rows(rows: list[list[int]], ncols: int, p: int, e: int, track: int = 0):
    """Howell form of the row span of ``rows``.

    With ``track > 0`` the last ``track`` columns are carried along as a
    bookkeeping block and do not take part in pivoting; pivots are restricted
    to the first ``ncols - track`` columns, and rows whose leading part is zero
    are returned separately (they generate the relations among the inputs).

    Returns ``(pivot_rows, pivot_cols, null_rows)``.
    """
    mod = p**e
    work = [[x % mod for x in r] for r in rows]
    work = [r for r in work if any(r)]
    lead = ncols - track
    pivots: list[list[int]] = []
    pivot_cols: list[int] = []
    for col in range(lead):
        best = None
        best_v = e
        for idx, r in enumerate(work):
            if r[col]:
                v = valuation(r[col], p, e)
                if v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        if best is None:
            continue
        prow = work.pop(best)
        _, uinv = _unit_part_inverse(prow[col], p, mod)
        prow = [(x * uinv) % mod for x in prow]
        pv = p**best_v
        rest = []
        for r in work:
            if r[col]:
                f = r[col] // pv
                r = [(x - f * y) % mod for x, y in zip(r, prow)]
            if any(r):
                rest.append(r)
        if best_v > 0:
            # annihilator multiple keeps the Howell property
            extra = [(x * p ** (e - best_v)) % mod for x in prow]
            if any(extra):
                rest.append(extra)
        work = rest
        pivots.append(prow)
        pivot_cols.append(col)
    # reduce above pivots
    for i in range(len(pivots)):
        ci = pivot_cols[i]
        pv = pivots[i][ci]
        for k in range(i):
            x = pivots[k][ci]
            if x:
                f = x // pv
                if f:
                    pivots[k] = [(a - f * b) % mod for a, b in zip(pivots[k], pivots[i])]
    return pivots, pivot_cols, work


def howell_form(M: ZModMatrix) -> tuple[ZModMatrix, ZModMatrix]:
    """Howell form H of M together with an invertible U such that U @ M' = H.

    M' is M padded with ``cols`` zero rows: a Howell basis over Z/p^e can need
    more rows than the input has (``[[2, 1]]`` over Z/4 needs the extra row
    ``(0, 2)``), and the padding supplies room for them.  H has the same
    shape as M'; its nonzero rows come first.
    """
    p, e, mod = M.p, M.modulus_exponent, M.modulus
    n = M.cols
    k = M.rows + n
    A = M.to_rows() + [[0] * n for _ in range(n)]
    U = _identity(k)
    top = 0
    for col in range(n):
        best, best_v = None, e
        for i in range(top, k):
            if A[i][col]:
                v = valuation(A[i][col], p, e)
                if v < best_v:
                    best, best_v = i, v
        if best is None:
            continue
        A[top], A[best] = A[best], A[top]
        U[top], U[best] = U[best], U[top]
        _, uinv = _unit_part_inverse(A[top][col], p, mod)
        A[top] = [(x * uinv) % mod for x in A[top]]
        U[top] = [(x * uinv) % mod for x in U[top]]
        pv = A[top][col]
        for i in range(top + 1, k):
            if A[i][col]:
                f = A[i][col] // pv
                A[i] = [(a - f * b) % mod for a, b in zip(A[i], A[top])]
                U[i] = [(a - f * b) % mod for a, b in zip(U[i], U[top])]
        if best_v > 0:
            c = p ** (e - best_v)
            extra = [(x * c) % mod for x in A[top]]
            if any(extra):
                slot = next(i for i in range(top + 1, k) if not any(A[i]))
                A[slot] = extra
                U[slot] = [(a + c * b) % mod for a, b in zip(U[slot], U[top])]
        top += 1
    pivots = [next(j for j, x in enumerate(A[i]) if x) for i in range(top)]
    for i in range(top):
        ci = pivots[i]
        pv = A[i][ci]
        for r in range(i):
            f = A[r][ci] // pv
            if f:
                A[r] = [(a - f * b) % mod for a, b in zip(A[r], A[i])]
                U[r] = [(a - f * b) % mod for a, b in zip(U[r], U[i])]
    return (ZModMatrix.from_rows(p, e, A, n), ZModMatrix.from_rows(p, e, U, k))


def _rank_mod_p(rows, ncols, p):
    piv, _, _ = howell_rows([[x % p for x in r] for r in rows], ncols, p, 1)
    return len(piv)


def is_invertible(M: ZModMatrix) -> bool:
    if M.rows != M.cols:
        return False
    return _rank_mod_p(M.to_rows(), M.cols, M.p) == M.rows


def kernel_rows(rows: list[list[int]], ncols: int, p: int, e: int) -> list[list[int]]:
    """Generators of {v : v @ M = 0} for M given by ``rows``."""
    n = len(rows)
    if n == 0:
        return []
    aug = [list(r) + ident for r, ident in zip(rows, _identity(n))]
    piv, pcols, null = howell_rows(aug, ncols + n, p, e, track=n)
    # null rows have zero leading part; their tails generate the kernel
    return [r[ncols:] for r in null if any(r[ncols:])]


def kernel(M: ZModMatrix) -> list[tuple[int, ...]]:
    """Generating set of the left kernel {v : v @ M = 0}."""
    gens = kernel_rows(M.to_rows(), M.cols, M.p, M.modulus_exponent)
    return [tuple(g) for g in gens]


class SpanSolver:
    """Membership and coefficient recovery for the row span of a fixed matrix."""

    def __init__(self, rows: list[list[int]], ncols: int, p: int, e: int):
        self.p, self.e, self.mod = p, e, p**e
        self.ncols = ncols
        self.nrows = len(rows)
        n = self.nrows
        aug = [list(r) + ident for r, ident in zip(rows, _identity(n))]
        piv, pcols, _ = howell_rows(aug, ncols + n, p, e, track=n)
        self.pivots = piv
        self.pivot_cols = pcols

    def solve(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients c with c @ rows = v, or None if v is not in the span."""
        mod = self.mod
        rem = [x % mod for x in v]
        coeff = [0] * self.nrows
        for prow, col in zip(self.pivots, self.pivot_cols):
            x = rem[col]
            if not x:
                continue
            pv = prow[col]
            if x % pv:
                return None
            f = x // pv
            for j in range(self.ncols):
                if prow[j]:
                    rem[j] = (rem[j] - f * prow[j]) % mod
            tail = prow[self.ncols:]
            for j in range(self.nrows):
                if tail[j]:
                    coeff[j] = (coeff[j] + f * tail[j]) % mod
        if any(rem):
            return None
        return coeff

    def contains(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None


def smith_form(rows: list[list[int]], ncols: int, p: int, e: int):
    """Smith form S = U @ M @ V over Z/p^e.

    Returns ``(diag, U, V, Vinv)`` where ``diag`` lists the diagonal entries
    (powers of p, 0 allowed) of length ``min(rows, cols)``.
    """
    mod = p**e
    m = len(rows)
    n = ncols
    A = [[x % mod for x in r] for r in rows]
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)
    diag = []
    for t in range(min(m, n)):
        best = None
        best_v = e
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                if Ai[j]:
                    v = valuation(Ai[j], p, e)
                    if v < best_v:
                        best, best_v = (i, j), v
                        if v == 0:
                            break
            if best_v == 0:
                break
        if best is None:
            diag.extend([0] * (min(m, n) - t))
            break
        i, j = best
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for r in A:
                r[t], r[j] = r[j], r[t]
            for r in V:
                r[t], r[j] = r[j], r[t]
            Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        _, uinv = _unit_part_inverse(A[t][t], p, mod)
        A[t] = [(x * uinv) % mod for x in A[t]]
        U[t] = [(x * uinv) % mod for x in U[t]]
        pv = A[t][t]
        # clear column t below
        for i2 in range(t + 1, m):
            x = A[i2][t]
            if x:
                f = x // pv
                A[i2] = [(a - f * b) % mod for a, b in zip(A[i2], A[t])]
                U[i2] = [(a - f * b) % mod for a, b in zip(U[i2], U[t])]
        # clear row t to the right: column op col_j -= f col_t
        for j2 in range(t + 1, n):
            x = A[t][j2]
            if x:
                f = x // pv
                for r in A:
                    r[j2] = (r[j2] - f * r[t]) % mod
                for r in V:
                    r[j2] = (r[j2] - f * r[t]) % mod
                # inverse: row_t of Vinv += f * row_j2
                Vinv[t] = [(a + f * b) % mod for a, b in zip(Vinv[t], Vinv[j2])]
        diag.append(pv)
    return diag, U, V, Vinv


@dataclass
class PresentedModule:
    """A finite Z/p^e-module presented as a subquotient of a free module.

    ``exponents[i]`` is e_i with generator ``generators[i]`` of order p^{e_i};
    the module is the direct sum of the Z/p^{e_i}.  ``coords`` maps an ambient
    vector of the submodule to its coordinates in this decomposition.
    """

    p: int
    e: int
    ambient_dim: int
    exponents: list[int]
    generators: list[list[int]]
    _sub: list[list[int]] = field(repr=False, default_factory=list)
    _V: list[list[int]] = field(repr=False, default_factory=list)
    _solver: SpanSolver | None = field(repr=False, default=None)

    @property
    def invariant_factors(self) -> list[int]:
        return [self.p**k for k in self.exponents]

    @property
    def length(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p**self.length

    def is_zero(self) -> bool:
        return not self.exponents

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        if not self.exponents:
            if self._solver is not None and not self._solver.contains(v):
                raise NotInSpan("vector is not in the submodule")
            return ()
        c = self._solver.solve(v)
        if c is None:
            raise NotInSpan("vector is not in the submodule")
        cp = vecmat(c, self._V, self.p**self.e, len(self.exponents))
        return tuple(x % self.p**k for x, k in zip(cp, self.exponents))

    def contains(self, v: Sequence[int]) -> bool:
        return self._solver is None or self._solver.contains(v)

    def element(self, coords: Sequence[int]) -> list[int]:
        mod = self.p**self.e
        out = [0] * self.ambient_dim
        for c, g in zip(coords, self.generators):
            for j, x in enumerate(g):
                out[j] = (out[j] + c * x) % mod
        return out

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "e": str(self.e),
            "invariant_factors": [str(x) for x in self.invariant_factors],
            "generators": [[str(x) for x in g] for g in self.generators],
        }


def subquotient(sub: list[list[int]], rel: list[list[int]], dim: int, p: int, e: int) -> PresentedModule:
    """span(sub) / span(rel) inside (Z/p^e)^dim; requires span(rel) within span(sub)."""
    mod = p**e
    sub = [[x % mod for x in r] for r in sub]
    sub = [r for r in sub if any(r)]
    if not sub:
        for r in rel:
            if any(x % mod for x in r):
                raise NotInSpan("relation outside the submodule")
        return PresentedModule(p, e, dim, [], [], [], [], SpanSolver([], dim, p, e))
    solver = SpanSolver(sub, dim, p, e)
    g = len(sub)
    relmat = []
    for r in rel:
        c = solver.solve(r)
        if c is None:
            raise NotInSpan("relation outside the submodule")
        if any(c):
            relmat.append(c)
    relmat.extend(kernel_rows(sub, dim, p, e))
    if not relmat:
        relmat = [[0] * g]
    diag, _, V, Vinv = smith_form(relmat, g, p, e)
    diag = diag + [0] * (g - len(diag))
    # order the diagonal so that trivial factors come first
    keep = []
    for j, d in enumerate(diag):
        # Z/(d) has exponent v(d); d == 0 gives the full Z/p^e
        k = valuation(d, p, e) if d else e
        if k > 0:
            keep.append((j, k))
    perm = [j for j, _ in keep]
    exps = [k for _, k in keep]
    gens = [vecmat(Vinv[j], sub, mod, dim) for j in perm]
    # coordinates: c' = c @ V restricted to the surviving columns
    Vcols = [[V[i][j] for j in perm] for i in range(g)]
    return PresentedModule(p, e, dim, exps, gens, sub, Vcols, solver)


def complex_cohomology(d_in: ZModMatrix, d_out: ZModMatrix) -> PresentedModule:
    """ker(d_out) / im(d_in) for A --d_in--> B --d_out--> C (row-vector convention)."""
    if d_in.cols != d_out.rows:
        raise ValueError("shapes do not chain")
    if d_in.modulus != d_out.modulus:
        raise ValueError("moduli differ")
    p, e = d_in.p, d_in.modulus_exponent
    comp = d_in @ d_out
    if any(comp.entries):
        raise CompositionNonzero("d_in @ d_out is not zero")
    return cohomology_rows(d_in.to_rows(), d_out.to_rows(), d_out.rows, d_out.cols, p, e)


def cohomology_rows(d_in, d_out, dim, out_dim, p, e) -> PresentedModule:
    if out_dim == 0 or not d_out:
        ker = _identity(dim)
    else:
        ker = kernel_rows(d_out, out_dim, p, e)
    return subquotient(ker, [list(r) for r in d_in], dim, p, e)


def module_length_of_quotient(rows: list[list[int]], dim: int, p: int, e: int) -> int:
    """Length of (Z/p^e)^dim / span(rows)."""
    piv, pcols, _ = howell_rows(rows, dim, p, e)
    used = sum(e - valuation(r[c], p, e) for r, c in zip(piv, pcols))
    return dim * e - used


def span_length(rows: list[list[int]], dim: int, p: int, e: int) -> int:
    """Length of the submodule of (Z/p^e)^dim spanned by ``rows``."""
    return dim * e - module_length_of_quotient(rows, dim, p, e)


def brute_force_span(rows: Iterable[Sequence[int]], mod: int, dim: int) -> set[tuple[int, ...]]:
    """All Z/mod-combinations of the rows (exponential; testing oracle only)."""
    span = {tuple([0] * dim)}
    for r in rows:
        new = set()
        for s in span:
            for c in range(mod):
                new.add(tuple((a + c * b) % mod for a, b in zip(s, r)))
        span = new
    return span


def image_length(images: Sequence[Sequence[int]], target_exponents: Sequence[int], p: int) -> int:
    """Length of the subgroup of ⊕ Z/p^{f_j} generated by ``images`` (coordinate rows)."""
    if not target_exponents or not images:
        return 0
    top = max(target_exponents)
    if top == 0:
        return 0
    scale = [p ** (top - f) for f in target_exponents]
    rows = [[(x * s) % p**top for x, s in zip(r, scale)] for r in images]
    return span_length(rows, len(target_exponents), p, top)


def is_exact_at(f_images, g_images, mid_exponents, out_exponents, p: int) -> bool:
    """Exactness of A --f--> M --g--> B at M, given g∘f = 0.

    ``f_images`` are the f-images of generators of A in M-coordinates and
    ``g_images`` the g-images of the generators of M in B-coordinates.
    Since im f lies in ker g, equality holds iff the lengths add up.
    """
    return image_length(f_images, mid_exponents, p) + image_length(g_images, out_exponents, p) == sum(mid_exponents)
