import random

import pytest

from wittkit.polydiff import MPoly
from wittkit.wittring import (
    IntegerRing,
    IntegersMod,
    LengthUnderflow,
    MixedLength,
    NotInImage,
    PolynomialRing,
    RationalField,
    UniversalPolynomials,
    WittVector,
    from_ghost,
    frobenius,
    ghost,
    prime_field_witt_structure,
    random_witt,
    teichmuller,
    verschiebung,
    witt_from_int,
    witt_one,
    witt_universal_polynomials,
    witt_zero,
)

ZZ = IntegerRing()
QQ = RationalField()


def xy(n, nv):
    def var(j):
        return MPoly.monomial([1 if k == j else 0 for k in range(nv)])
    return var


def test_sum_polynomials_p3():
    polys = witt_universal_polynomials(3, 2)
    var = xy(2, 4)
    x0, x1, y0, y1 = var(0), var(1), var(2), var(3)
    assert polys.sum_polys[0] == x0 + y0
    assert polys.sum_polys[1] == x1 + y1 - x0 * x0 * y0 - x0 * y0 * y0


def test_product_polynomials_p3():
    polys = witt_universal_polynomials(3, 2)
    var = xy(2, 4)
    x0, x1, y0, y1 = var(0), var(1), var(2), var(3)
    assert polys.prod_polys[0] == x0 * y0
    assert polys.prod_polys[1] == x0**3 * y1 + y0**3 * x1 + x1 * y1 * 3


def test_universal_json_round_trip():
    polys = witt_universal_polynomials(3, 3)
    back = UniversalPolynomials.from_json(3, 3, polys.to_json())
    assert back == polys
    with pytest.raises(ValueError):
        UniversalPolynomials.from_json(5, 3, polys.to_json())


def test_product_over_f3_symbolic():
    R = PolynomialRing(3, 4)
    a0, a1, b0, b1 = (R.var(i) for i in range(4))
    prod = WittVector(3, (a0, a1), R) * WittVector(3, (b0, b1), R)
    assert prod.components == (a0 * b0, a0**3 * b1 + b0**3 * a1)


def test_teichmuller_square_over_f3t():
    R = PolynomialRing(3, 1)
    t = R.var(0)
    a = teichmuller(t, 2, 3, R)
    assert a * a == teichmuller(t * t, 2, 3, R)
    assert teichmuller(t, 2, 3, R) * teichmuller(t * t, 2, 3, R) == teichmuller(t**3, 2, 3, R)


def test_p_times_one_in_w2_f3():
    F3 = IntegersMod(3)
    one = witt_one(3, 2, F3)
    assert (one + one + one).components == (F3.from_int(0), F3.from_int(1))
    assert witt_from_int(9, 3, 2, F3).is_zero()
    assert witt_from_int(3, 3, 2, F3) == verschiebung(witt_one(3, 1, F3))


def test_verschiebung_and_frobenius_examples():
    R = PolynomialRing(3, 1)
    t = R.var(0)
    assert frobenius(verschiebung(teichmuller(t, 1, 3, R))).is_zero()
    assert frobenius(teichmuller(t, 2, 3, R)).components == (t**3,)
    assert frobenius(teichmuller(t, 2, 3, R), universal=True).components == (t**3,)
    with pytest.raises(LengthUnderflow):
        frobenius(teichmuller(t, 1, 3, R))


def test_ghost_examples():
    assert ghost(WittVector(3, (1, 1), ZZ)) == (1, 4)
    assert from_ghost((0, 3), 3, ZZ) == WittVector(3, (0, 1), ZZ)
    with pytest.raises(NotInImage):
        from_ghost((0, 1), 3, ZZ)
    assert ghost(teichmuller(2, 3, 5, ZZ)) == (2, 32, 2**25)


def test_mixed_length():
    a = witt_one(3, 2, ZZ)
    with pytest.raises(MixedLength):
        a + witt_one(3, 3, ZZ)


def test_ghost_round_trip():
    rng = random.Random(0)
    for _ in range(100):
        a = random_witt(rng, 3, 3, ZZ)
        assert from_ghost(ghost(a), 3, ZZ) == a
        assert from_ghost(ghost(a), 3, QQ) == WittVector(3, tuple(map(QQ.from_int, a.components)), QQ)


@pytest.mark.parametrize("p", [3, 5])
def test_ghost_equivariance(p):
    rng = random.Random(p)
    for case in range(500):
        n = 1 + case % 3
        a, b = random_witt(rng, p, n, ZZ), random_witt(rng, p, n, ZZ)
        ga, gb = ghost(a), ghost(b)
        assert ghost(a.universal("sum", b)) == tuple(x + y for x, y in zip(ga, gb))
        assert ghost(a.universal("prod", b)) == tuple(x * y for x, y in zip(ga, gb))
        assert ghost(a.universal("neg")) == tuple(-x for x in ga)
        if n > 1:
            assert ghost(frobenius(a)) == ga[1:]


def _identities(rng, ring, p, cases, **kw):
    for case in range(cases):
        n = 2 + case % 2
        a, b = random_witt(rng, p, n, ring, **kw), random_witt(rng, p, n, ring, **kw)
        c = random_witt(rng, p, n - 1, ring, **kw)
        assert frobenius(verschiebung(c)) == c.scalar(p)
        assert verschiebung(c) * b == verschiebung(c * frobenius(b))
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        x, y = ring.random(rng, **kw), ring.random(rng, **kw)
        assert teichmuller(x, n, p, ring) * teichmuller(y, n, p, ring) == teichmuller(x * y, n, p, ring)
        assert frobenius(a) == frobenius(a, universal=True)


def test_identities_over_f3t():
    _identities(random.Random(1), PolynomialRing(3, 1, bound=60), 3, 500, max_degree=2)


def test_identities_over_z9():
    _identities(random.Random(2), IntegersMod(3, 2), 3, 500)


def test_ring_axioms_sampled():
    rng = random.Random(3)
    R = IntegersMod(5, 2)
    for _ in range(100):
        a, b, c = (random_witt(rng, 5, 2, R) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == witt_zero(5, 2, R)
        assert a * witt_one(5, 2, R) == a


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)])
def test_prime_field_is_cyclic(p, n):
    report = prime_field_witt_structure(p, n)
    assert report["invariant_factors"] == [p**n]
    assert report["order_of_one"] == p**n


def test_integral_fast_path_matches_universal_polynomials():
    rng = random.Random(7)
    for ring, p in [(ZZ, 3), (IntegersMod(3, 2), 3), (IntegersMod(5, 1), 5)]:
        for case in range(100):
            n = 1 + case % 3
            a, b = random_witt(rng, p, n, ring), random_witt(rng, p, n, ring)
            assert a + b == a.universal("sum", b)
            assert a * b == a.universal("prod", b)
            assert -a == a.universal("neg")
