"""Doubling formula, 2-isogeny, and divisibility report tests for y^2 = x^3 - Nx."""

import random

import pytest
from gmpy2 import is_square, mpq, mpz

from ellscan.curve import Curve
from ellscan.family import (
    curve_en,
    duplicate_x,
    ebn_bound_check,
    isogeny_image_on_curve,
    isogeny_x,
    lemma_invariants,
    lemma_scan,
)

E90 = curve_en(90)
E1681 = curve_en(1681)


def test_curve_en():
    assert E90.ainvs() == (0, 0, 0, -90, 0)
    with pytest.raises(ValueError):
        curve_en(0)


def test_duplicate_x_examples():
    assert duplicate_x(90, E90.point(-6, 18)) == mpq(49, 4)
    assert duplicate_x(90, E90.point(-9, 9)) == mpq(361, 4)
    with pytest.raises(ValueError):
        duplicate_x(90, E90.point(0, 0))  # 2-torsion, C = 0
    with pytest.raises(ValueError):
        duplicate_x(91, E90.point(-6, 18))  # wrong N


def test_duplicate_x_matches_doubling():
    rng = random.Random(61)
    for n, curve, gens in (
        (90, E90, (E90.point(-9, 9), E90.point(-6, 18))),
        (1681, E1681, (E1681.point(-9, 120), E1681.point(841, 24360))),
    ):
        seen = 0
        while seen < 50:
            a = rng.randrange(-5, 6)
            b = rng.randrange(-5, 6)
            pt = a * gens[0] + b * gens[1]
            if pt.is_identity or pt.C == 0:
                continue
            seen += 1
            assert duplicate_x(n, pt) == (2 * pt).x, (n, a, b)


def test_isogeny_x():
    assert isogeny_x(1, 2) == 4
    assert isogeny_x(90, 40) == 49
    # for square N, x = 2 sqrt(N) maps to 4 sqrt(N)
    assert isogeny_x(4, 4) == 8
    assert isogeny_x(9, 6) == 12
    with pytest.raises(ValueError):
        isogeny_x(5, 0)


def test_isogeny_images_land_on_en():
    # points on y^2 = x^3 + 4Nx, found by brute force for small N
    cases = []
    for n in (1, 5, 6, 30, 90, 1681):
        source = Curve(0, 0, 0, 4 * n, 0)
        found = 0
        for x in range(1, 4000):
            val = x**3 + 4 * n * x
            if is_square(mpz(val)):
                cases.append((n, x))
                found += 1
                if found >= 3:
                    break
    assert len(cases) >= 8
    for n, x in cases:
        assert isogeny_image_on_curve(n, x), (n, x)


def test_isogeny_image_worked_examples():
    # (40, 280) on y^2=x^3+360x maps to x(2*(-6,18)) = 49/4 on E_90
    assert isogeny_x(90, 40) / 4 == mpq(49, 4)
    assert isogeny_image_on_curve(90, 40)
    # (2, 116) on y^2=x^3+6724x maps to 841, and 841^3 - 1681*841 = 24360^2
    img = isogeny_x(1681, 2) / 4
    assert img == 841
    assert mpz(841) ** 3 - 1681 * 841 == mpz(24360) ** 2
    assert isogeny_image_on_curve(1681, 2)


def test_lemma_invariants():
    rep = lemma_invariants(90, E90.point(-9, 9))
    assert rep.identity_minus       # 81 = (-9)(81 - 90)
    assert rep.divides_plus         # 9 | 171
    assert rep.divides_plus_2adic
    assert rep.bound_c and rep.bound_a

    rep = lemma_invariants(90, E90.point(-6, 18))
    assert rep.identity_minus       # 324 = (-6)(36 - 90)
    assert (rep.a, rep.b, rep.c) == (-6, 1, 18)

    # integral point branch: B = 1 reports stay meaningful
    rep = lemma_invariants(1681, E1681.point(841, 24360))
    assert rep.identity_minus
    assert rep.b == 1


def test_lemma_identity_minus_holds_universally():
    # the identity is the curve equation itself; check on many points
    rng = random.Random(67)
    gens = (E90.point(-9, 9), E90.point(-6, 18))
    for _ in range(40):
        pt = rng.randrange(-6, 7) * gens[0] + rng.randrange(-6, 7) * gens[1]
        if pt.is_identity:
            continue
        assert lemma_invariants(90, pt).identity_minus


def test_ebn_bound_check():
    assert ebn_bound_check(90, E90.point(-9, 9))
    assert ebn_bound_check(1681, E1681.point(-9, 120))
    with pytest.raises(ValueError):
        ebn_bound_check(90, E90.point(mpq(49, 4), mpq(-217, 8)))  # unbounded side


def test_lemma_scan_yields_reports():
    gens = (E90.point(-9, 9), E90.point(-6, 18))
    reports = list(lemma_scan(90, gens, 4))
    assert reports, "the small box contains length-1 points with L(2P) <= 1"
    for rep in reports:
        assert rep.identity_minus
        pt = E90.point(mpq(rep.a, rep.b**2), mpq(rep.c, rep.b**3))
        assert E90.contains(pt)


def test_lemma_scan_rejects_foreign_generator():
    with pytest.raises(ValueError):
        list(lemma_scan(90, (E1681.point(-9, 120),), 2))
