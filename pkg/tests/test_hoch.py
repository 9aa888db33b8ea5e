import random

import pytest

from wittkit.drwitt import DrwSymbol, basic
from wittkit.hoch import (
    KoszulCochain,
    LevelBounds,
    NotCocycle,
    bockstein_d,
    center_cochain,
    class_of,
    connecting_delta,
    connecting_delta_check,
    cup,
    cup_is_comparison_independent,
    hh,
    hh_piece,
    hkr_check,
    koszul_d,
    lemma_identities_check,
    long_exact_sequence_check,
    matched_piece,
    phi_star,
    rbar,
    relation_vanishing,
    same_class,
    sv_identity_check,
    theorem1_check,
    vbar,
)
from wittkit.weylquant import NcPoly, divided_bracket

P = 3


def X(k=1, N=1):
    return NcPoly.x(P, N, k)


def Y(k=1, N=1):
    return NcPoly.y(P, N, k)


def random_class(rng, n, q, window=9):
    gens = hh(P, n, q, window).generators()
    acc = KoszulCochain.zero(P, n, q)
    for _ in range(3):
        _, _, g = rng.choice(gens)
        acc = acc + g.scale(rng.randint(1, P**n - 1))
    return acc


def test_koszul_square_is_zero():
    rng = random.Random(0)
    for _ in range(30):
        terms = {(rng.randint(0, 5), rng.randint(0, 5)): rng.randint(1, 8) for _ in range(3)}
        a = center_cochain(NcPoly(terms, P, 2))
        assert koszul_d(koszul_d(a)).is_zero()


def test_center_dimensions_level_one():
    assert hh(P, 1, 0, 3).lengths_by_degree() == [1, 0, 0, 2]
    assert hh(P, 1, 1, 0).lengths_by_degree() == [0]


def vp(a):
    return 99 if a == 0 else (0 if a % P else 1 + vp(a // P))


@pytest.mark.parametrize("n,q", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1)])
def test_piece_lengths(n, q):
    # HH^0 and HH^2 pieces have length g = min(n, v(a), v(b)); HH^1 follows from the Euler characteristic
    for a in range(10):
        for b in range(10):
            g = min(n, vp(a), vp(b))
            h0 = g
            h2 = g if a and b else 0
            ranks = [1, (a > 0) + (b > 0), int(a > 0 and b > 0)]
            h1 = h0 + h2 - n * (ranks[0] - ranks[1] + ranks[2])
            assert hh_piece(P, n, q, a, b).length == [h0, h1, h2][q], (a, b)


def test_bockstein_examples():
    d = bockstein_d(center_cochain(X(3)))
    oracle = (divided_bracket(X(3, 2), X(1, 2)).at(1), divided_bracket(X(3, 2), Y(1, 2)).at(1))
    assert d.comps == oracle
    assert d.comps[1] == NcPoly({(2, 0): 2}, P, 1)
    assert bockstein_d(center_cochain(NcPoly.const(1, P, 1))).is_zero()
    dy = bockstein_d(center_cochain(Y(3)))
    assert dy.comps[0] == NcPoly({(0, 2): 1}, P, 1) and dy.comps[1].is_zero()


def test_bockstein_lift_independent_and_square_zero():
    rng = random.Random(1)
    for n in (1, 2):
        for q in (0, 1):
            c = random_class(rng, n, q)
            base = bockstein_d(c)
            for _ in range(20):
                terms = {(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(1, 9)}
                pert = KoszulCochain.of(P, None, q, [NcPoly(terms, P)] * len(c.comps))
                assert same_class(bockstein_d(c, perturb=pert), base)
            if q == 0:
                assert class_of(bockstein_d(base)).is_zero()


def test_vbar_rbar():
    one = center_cochain(NcPoly.const(1, P, 1))
    assert vbar(one).comps[0] == NcPoly.const(P, P, 2)
    x9 = center_cochain(X(9, 2))
    assert rbar(x9).comps[0] == X(3, 1) ** 3
    rng = random.Random(2)
    for _ in range(50):
        q = rng.randrange(3)
        c = random_class(rng, 1, q)
        assert same_class(rbar(vbar(c)), c.scale(P))
    with pytest.raises(LevelBounds):
        rbar(one)


def test_errors():
    with pytest.raises(NotCocycle):
        bockstein_d(center_cochain(X(1)))
    with pytest.raises(NotCocycle):
        class_of(center_cochain(Y(2)))


def test_connecting_delta():
    x3 = center_cochain(X(3))
    assert same_class(connecting_delta(x3), bockstein_d(x3))
    x9 = center_cochain(X(9, 2))
    assert same_class(connecting_delta(x9), rbar(bockstein_d(x9)))
    report = connecting_delta_check(P)
    assert report["pass"] and report["resolution"] == "r^(n-1) d_n"


def test_long_exact_sequence():
    assert long_exact_sequence_check(P, 2, 6)["pass"]


def test_cup():
    du = bockstein_d(center_cochain(X(3)))
    dv = bockstein_d(center_cochain(Y(3)))
    one = center_cochain(NcPoly.const(1, P, 1))
    assert same_class(cup(du, one), du)
    assert same_class(cup(one, du), du)
    u = center_cochain(X(3))
    assert cup(u, du).comps == (NcPoly({}, P, 1), NcPoly({(5, 0): 2}, P, 1))
    top = cup(du, dv)
    assert top.comps[0] == NcPoly({(2, 2): 2}, P, 1)
    assert not class_of(top).is_zero()
    assert same_class(cup(dv, du), top.scale(-1))
    for seed in range(3):
        assert cup_is_comparison_independent(du, dv, seed)


def test_phi_star_examples():
    u = basic(P, 1, 0, (1, 0))
    du = phi_star([DrwSymbol(1, None, (u,))], 1, P)
    assert same_class(du, bockstein_d(center_cochain(X(3))))
    unit = phi_star([DrwSymbol(1, None, ())], 1, P)
    assert same_class(unit, center_cochain(NcPoly.const(1, P, 1)))


def test_sv_identity():
    for z in (X(3), Y(3), X(3) * Y(3), NcPoly.const(1, P, 1)):
        assert sv_identity_check(z)["pass"]


def test_hkr():
    assert hkr_check(P, 9)["pass"]


def test_matched_pieces():
    for q, k in [(0, (1, 0)), (1, (1, 1)), (2, (1, 1)), (1, (0, 2))]:
        rec = matched_piece(P, 2, q, k)
        assert rec["pass"] and rec["drw_length"] == rec["hh_length"] > 0


@pytest.mark.parametrize("n", [1, 2])
def test_relation_vanishing(n):
    assert relation_vanishing(P, n, samples=3)["pass"]


def test_theorem1_small():
    report = theorem1_check(P, 2, qs=(0, 1), max_weight=1)
    assert report["pass"]


@pytest.mark.parametrize("n", [1, 2])
def test_lemma_identities(n):
    report = lemma_identities_check(n)
    assert report["pass"]
    assert set(report["counts"]) >= {"r v = p", "r d_{n+1} v = d_n", "v d_n = p d_{n+1} v",
                                     "d_n r = p r d_{n+1}", "x v(y) = v(r(x) y)",
                                     "v(x d_n y) = v(x) d_{n+1}(v y)"}
