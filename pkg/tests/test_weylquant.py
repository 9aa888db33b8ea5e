import random

import pytest

from wittkit.polydiff import MPoly, poisson_bracket, poly_ring
from wittkit.weylquant import (
    NcPoly,
    NotCentral,
    NotDivisible,
    azumaya_freeness_check,
    center_basis,
    commutator,
    deformation_bracket,
    divided_bracket,
    embed_center,
    is_central,
    phi_intertwining_check,
    phi_n,
    theorem_iso_check,
    underline_lift,
    v_map,
)
from wittkit.wittring import PolynomialRing, WittVector

P = 3


def X(k=1, N=None):
    return NcPoly.x(P, N, k)


def Y(k=1, N=None):
    return NcPoly.y(P, N, k)


def random_nc(rng, deg, N=None, p=P):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        a = rng.randint(0, deg)
        b = rng.randint(0, deg - a)
        terms[(a, b)] = rng.randint(-5, 5)
    return NcPoly(terms, p, N)


def differential_operator_apply(f: NcPoly, poly: dict) -> dict:
    """Act on Q[t] by x = multiplication by t, y = d/dt (an independent oracle)."""
    out: dict = {}
    for (a, b), c in f.terms.items():
        for e, k in poly.items():
            coeff = k
            for j in range(b):
                coeff *= e - j
            if coeff and e - b >= 0:
                key = e - b + a
                out[key] = out.get(key, 0) + c * coeff
    return {e: c for e, c in out.items() if c}


def test_defining_relation():
    assert Y() * X() == X() * Y() + 1
    assert Y(2) * X() == X() * Y(2) + 2 * Y()


def test_commutator_matches_differential_operators():
    lhs = commutator(Y(3), X(3))
    assert lhs == NcPoly({(2, 2): 9, (1, 1): 18, (0, 0): 6}, P)
    for e in range(8):
        poly = {e: 1}
        a = differential_operator_apply(Y(3), differential_operator_apply(X(3), poly))
        b = differential_operator_apply(X(3), differential_operator_apply(Y(3), poly))
        diff = {k: a.get(k, 0) - b.get(k, 0) for k in set(a) | set(b)}
        diff = {k: v for k, v in diff.items() if v}
        assert diff == differential_operator_apply(lhs, poly)


def test_associativity_random():
    rng = random.Random(0)
    for _ in range(200):
        a, b, c = (random_nc(rng, 4, N=3) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_ad_formulas_agree_with_commutators():
    rng = random.Random(1)
    for _ in range(50):
        a = random_nc(rng, 6)
        assert a.ad_x() == commutator(a, X())
        assert a.ad_y() == commutator(a, Y())


def test_divided_bracket_examples():
    assert divided_bracket(Y(3), X(3), 1) == NcPoly({(2, 2): 3, (1, 1): 6, (0, 0): 2}, P)
    assert divided_bracket(X(3), X(3), 1).is_zero()
    with pytest.raises(NotDivisible):
        divided_bracket(Y(), X(), 1)
    res = divided_bracket(Y(3, 3), X(3, 3), 1)
    assert res.N == 2


def test_deformation_bracket_calibration():
    zero, (u, v) = poly_ring(P, 2)
    assert deformation_bracket(v, u) == zero - 1
    assert deformation_bracket(u, v) == zero + 1
    assert deformation_bracket(u, u).is_zero()
    assert deformation_bracket(u * v, u) == poisson_bracket(u * v, u) == -u
    rng = random.Random(2)
    from wittkit.polydiff import random_poly

    for _ in range(20):
        f = random_poly(rng, P, 2, 2)
        g = random_poly(rng, P, 2, 2)
        assert deformation_bracket(f, g) == poisson_bracket(f, g)
    with pytest.raises(NotCentral):
        deformation_bracket(X(), X(3))


@pytest.mark.parametrize("p", [5, 7])
def test_bracket_sign_for_other_primes(p):
    zero, (u, v) = poly_ring(p, 2)
    assert deformation_bracket(u, v, p) == zero + 1


def test_center_level_one():
    c = center_basis(P, 1, 3)
    assert c[0].invariant_factors == [3]
    assert c[1].is_zero() and c[2].is_zero()
    assert c[3].length == 2
    for g in c[3].generators:
        z = NcPoly({(a, 3 - a): x for a, x in enumerate(g)}, P, 1)
        assert is_central(z)
        assert set(z.terms) <= {(3, 0), (0, 3)}


def test_phi_examples():
    zero, (u, v) = poly_ring(P, 2)
    assert phi_n([u, zero], 2, P) == X(9, 2)
    assert phi_n([zero, v], 2, P) == 3 * Y(3, 2)
    assert phi_n([zero, v], 2, P) == v_map(phi_n([v], 1, P))
    assert phi_n([u], 1, P) == X(3, 1)


def test_phi_lift_independent_and_multiplicative():
    rng = random.Random(3)
    ring = PolynomialRing(P, 2)
    for _ in range(30):
        w = WittVector(P, (ring.random(rng, max_degree=1), ring.random(rng, max_degree=1)), ring)
        w2 = WittVector(P, (ring.random(rng, max_degree=1), ring.random(rng, max_degree=1)), ring)
        base = phi_n(w, 2, P)
        assert is_central(base)
        pert = [random_nc(rng, 3), random_nc(rng, 3)]
        assert phi_n(w, 2, P, perturb=pert) == base
        assert phi_n(w * w2, 2, P) == base * phi_n(w2, 2, P)
        assert phi_n(w + w2, 2, P) == base + phi_n(w2, 2, P)


def test_phi_intertwines_v_and_f():
    assert phi_intertwining_check(3, 2, samples=10)["pass"]
    assert phi_intertwining_check(3, 1, samples=10)["pass"]


def test_underline_lift():
    assert underline_lift(X(3, 1)) == X(9, 2)
    assert underline_lift(NcPoly.const(1, P, 1)) == NcPoly.const(1, P, 2)
    rng = random.Random(4)
    for _ in range(20):
        w = random_nc(rng, 3)
        assert underline_lift(X(3, 1), perturb=w) == X(9, 2)
    with pytest.raises(NotCentral):
        underline_lift(X(1, 1))


def test_underline_of_teichmuller():
    zero, (u, v) = poly_ring(P, 2)
    # φ_2 of the Teichmüller lift of u equals the p-th power lift of φ_1(u)
    assert phi_n([u, zero], 2, P) == underline_lift(phi_n([u], 1, P))


def test_azumaya_freeness():
    assert azumaya_freeness_check(3, 8)["pass"]


def test_theorem_iso_small():
    report = theorem_iso_check(3, 2, 9, samples=10)
    assert report["pass"]
    top = report["levels"][1]["degrees"][-1]
    assert top["center_length"] == top["domain_length"]


def test_json_round_trip():
    f = NcPoly({(2, 1): 5, (0, 0): 7}, P, 2)
    assert NcPoly.from_json(f.to_json(), P, 2) == f


def test_embed_center():
    zero, (u, v) = poly_ring(P, 2)
    assert embed_center(u * v, P) == NcPoly({(3, 3): 1}, P)
