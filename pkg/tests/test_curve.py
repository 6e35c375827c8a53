"""Group-law, invariant, and real-component tests for the exact curve model."""

import json
import random
from importlib import resources

import pytest
from gmpy2 import gcd, mpq, mpz

from ellscan.curve import (
    Curve,
    Point,
    SingularCurveError,
    format_point,
    parse_curve,
    parse_point,
)

E90 = Curve(0, 0, 0, -90, 0)
E1681 = Curve(0, 0, 0, -1681, 0)


def load_tables():
    path = resources.files("ellscan").joinpath("data/tables.json")
    return json.loads(path.read_text())


def test_discriminant_examples():
    assert Curve(0, 0, 1, -199, 1092).discriminant() == -11022011
    assert Curve(0, 0, 0, -412, 3316).discriminant() == -274400000
    assert Curve(0, 1, 0, -648, 0).discriminant() == 17420977152
    assert Curve(0, 0, 0, 150, 0).discriminant() == -216000000
    assert E90.discriminant() == 46656000


def test_discriminant_against_all_table_curves():
    tables = load_tables()
    for tid in ("rank2_den", "rank2_num", "eds", "repelling"):
        for row in tables[tid]:
            if row.get("delta_abs") is None:
                continue
            assert abs(Curve(*row["curve"]).discriminant()) == row["delta_abs"], row


def test_curve_invariant_identities():
    rng = random.Random(5)
    for _ in range(200):
        ai = [rng.randrange(-20, 21) for _ in range(5)]
        try:
            e = Curve(*ai)
        except SingularCurveError:
            continue
        assert 4 * e.b8 == e.b2 * e.b6 - e.b4 * e.b4
        assert e.c4**3 - e.c6**2 == 1728 * e.delta
        assert e.j * e.delta == e.c4**3


def test_singular_rejected():
    with pytest.raises(SingularCurveError):
        Curve(0, 0, 0, 0, 0)
    with pytest.raises(SingularCurveError):
        Curve(0, 0, 0, -3, 2)  # (x-1)^2 (x+2)


def test_contains():
    assert E1681.contains_xy(-9, 120)
    assert E90.contains_xy(mpq(49, 4), mpq(-217, 8))
    assert not E90.contains_xy(1, 1)


def test_standardized_shape():
    assert Curve(1, -1, 1, -42, 105).is_standardized_shape()
    assert Curve(0, 0, 0, -28, 52).is_standardized_shape()
    assert not Curve(2, 0, 0, -1, 1).is_standardized_shape()
    assert not Curve(0, 2, 0, -1, 1).is_standardized_shape()


def test_negate():
    p = E90.point(-6, 18)
    assert -p == E90.point(-6, -18)
    assert E90.negate(E90.identity()).is_identity
    e = Curve(0, 0, 1, -7, 6)
    assert -e.point(0, 2) == e.point(0, -3)


def test_add_examples():
    p = E90.point(-9, 9)
    q = E90.point(-6, 18)
    assert p + q == E90.point(24, -108)
    assert p + E90.identity() == p
    assert (q + (-q)).is_identity


def test_add_doubling_and_two_torsion():
    q = E90.point(-6, 18)
    assert q + q == E90.point(mpq(49, 4), mpq(-217, 8))
    t = E90.point(0, 0)  # 2-torsion
    assert (t + t).is_identity
    assert (2 * t).is_identity


def test_scalar_mul():
    q = E90.point(-6, 18)
    assert 2 * q == E90.point(mpq(49, 4), mpq(-217, 8))
    assert (0 * q).is_identity
    assert 1 * q == q
    for n in range(-8, 9):
        assert n * q == -((-n) * q)
    # double-and-add against naive repeated addition
    acc = E90.identity()
    for n in range(1, 21):
        acc = acc + q
        assert acc == n * q


def test_add_commutative_sampled():
    e = Curve(0, 0, 1, -7, 6)
    gens = [e.point(-2, 3), e.point(-1, 3), e.point(0, 2)]
    pts = [a * gens[0] + b * gens[1] + c * gens[2]
           for a, b, c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0),
                           (2, -1, 1), (-1, 2, 3)]]
    for p in pts:
        for q in pts:
            assert p + q == q + p


def test_add_associative_on_rank3_generators():
    tables = load_tables()
    for row in tables["rank3"]:
        e = Curve(*row["curve"])
        p, q, r = (e.point(x, y) for x, y in row["gens"])
        assert (p + q) + r == p + (q + r), row["curve"]


def test_canonical_form_closure():
    e = Curve(0, 0, 1, -7, 6)
    gens = [e.point(-2, 3), e.point(-1, 3), e.point(0, 2)]
    rng = random.Random(17)
    for _ in range(60):
        coeffs = [rng.randrange(-6, 7) for _ in range(3)]
        pt = sum((c * g for c, g in zip(coeffs, gens)), e.identity())
        if pt.is_identity:
            continue
        a, b, c = pt.abc()
        assert b >= 1
        assert gcd(mpz(b), mpz(a) * mpz(c)) == 1
        assert e.contains(pt)
        assert pt.x == mpq(a, b * b) and pt.y == mpq(c, b**3)


def test_from_abc_validation():
    p = Point.from_abc(E90, 49, 2, -217)
    assert p == E90.point(mpq(49, 4), mpq(-217, 8))
    with pytest.raises(ValueError):
        Point.from_abc(E90, 49, -2, -217)
    with pytest.raises(ValueError):
        Point.from_abc(E90, 4, 2, -217)  # gcd(B, AC) != 1
    with pytest.raises(ValueError):
        E90.point(1, 1)


def test_real_components_counts():
    assert E90.real_components().count == 2
    assert Curve(0, 0, 0, 150, 0).real_components().count == 1
    e = Curve(0, 0, 1, -7, 6)
    assert e.delta == 5077  # positive, hence two components
    assert e.real_components().count == 2


def test_real_components_intervals_isolate():
    comps = E90.real_components()
    ivs = comps.intervals
    assert len(ivs) == 3
    # roots of 4x^3 - 360x = 0 scaled: actually x^3 - 90x: -sqrt(90), 0, sqrt(90)
    import math
    roots = (-math.sqrt(90), 0.0, math.sqrt(90))
    for (lo, hi), root in zip(ivs, roots):
        assert float(lo) <= root <= float(hi)
    # pairwise disjoint and ordered
    assert ivs[0][1] <= ivs[1][0] or ivs[0][1] < ivs[1][1]
    assert ivs[1][1] <= ivs[2][0] or ivs[1][1] < ivs[2][1]
    # the middle root is rational (0) and must be pinned exactly
    assert ivs[1][0] == 0 and ivs[1][1] == 0


def test_real_components_sign_agreement():
    rng = random.Random(23)
    for _ in range(100):
        ai = [rng.randrange(-9, 10) for _ in range(5)]
        try:
            e = Curve(*ai)
        except SingularCurveError:
            continue
        assert e.real_components().count == (2 if e.delta > 0 else 1)


def test_on_bounded_component():
    assert E90.on_bounded_component(E90.point(-9, 9))
    assert not E90.on_bounded_component(E90.point(mpq(49, 4), mpq(-217, 8)))
    assert E90.on_bounded_component(E90.point(-6, 18))
    one_comp = Curve(0, 0, 0, 150, 0)
    with pytest.raises(ValueError):
        one_comp.on_bounded_component(one_comp.point(0, 0))
    with pytest.raises(ValueError):
        E90.on_bounded_component(E90.identity())


def test_on_bounded_component_two_torsion():
    # 2-torsion x-coordinates are the component boundary roots themselves
    assert E90.on_bounded_component(E90.point(0, 0))       # middle root
    assert E90.on_bounded_component(E90.point(-mpz(0), 0)) # same point
    # largest root is rational only for square 4N; use y^2 = x^3 - 4x
    e4 = Curve(0, 0, 0, -4, 0)
    assert not e4.on_bounded_component(e4.point(2, 0))   # x = alpha3
    assert e4.on_bounded_component(e4.point(-2, 0))      # x = alpha1
    assert e4.on_bounded_component(e4.point(0, 0))


def test_bounded_component_parity_e90():
    q1 = E90.point(-9, 9)
    acc = E90.identity()
    for n in range(1, 21):
        acc = acc + q1
        assert E90.on_bounded_component(acc) == (n % 2 == 1), n


def test_parse_and_format():
    e = parse_curve("[0,0,1,-199,1092]")
    assert e.ainvs() == (0, 0, 1, -199, 1092)
    e2 = parse_curve(" 0, 0, 1, -199, 1092 ")
    assert e2 == e
    p = parse_point(E90, "49/4,-217/8")
    assert p == E90.point(mpq(49, 4), mpq(-217, 8))
    assert format_point(p) == "49/4,-217/8"
    assert format_point(E90.identity()) == "O"
    with pytest.raises(ValueError):
        parse_curve("[1,2,3]")
    with pytest.raises(ValueError):
        parse_point(E90, "1")
