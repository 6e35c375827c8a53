"""Height functions in natural-log units, plus perfect-square witness checks.

Operands routinely exceed the double range by orders of magnitude, so logs of
big integers come from the bit length plus the leading bits, never from a
whole-integer float conversion.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from gmpy2 import is_square, isqrt, mpq, mpz

from .curve import Curve, Point

_LN2_HI = math.log(2)
# residue of ln 2 beyond double precision, for the bit-length * ln2 term
_LN2_LO = float(
    Fraction("0.6931471805599453094172321214581765680755001343602553")
    - Fraction(_LN2_HI)
)


def _log_abs_int(n) -> float:
    """Natural log of |n| for a nonzero integer of any size."""
    n = abs(mpz(n))
    k = n.bit_length()
    if k <= 900:
        return math.log(n)
    shift = k - 52
    lead = int(n >> shift)
    return math.fsum((math.log(lead), shift * _LN2_HI, shift * _LN2_LO))


def log_abs_rational(q) -> float:
    """log|q| for a nonzero rational; absolute error stays below 1e-9."""
    q = mpq(q)
    if q == 0:
        raise ValueError("log of zero")
    return _log_abs_int(q.numerator) - _log_abs_int(q.denominator)


def projective_height(q) -> float:
    """h(a/b) = log max(|a|, |b|) for a/b in lowest terms."""
    q = mpq(q)
    return _log_abs_int(max(abs(q.numerator), q.denominator))


def weil_height_from(d: Optional[Point], q: Point) -> float:
    """Weil height of q measured from the repelling point d.

    d None (infinity): max(0, log|x(q)|).  d finite: max(0, -log|x(q)-x(d)|).
    """
    if q.is_identity:
        raise ValueError("height from a repelling point needs an affine point")
    if d is None or d.is_identity:
        return max(0.0, log_abs_rational(q.x)) if q.x != 0 else 0.0
    if d.x == q.x:
        raise ValueError("x(q) = x(d): distance to the repelling point is zero")
    return max(0.0, -log_abs_rational(q.x - d.x))


def curve_height(curve: Curve) -> float:
    """(1/12) max(h(j), h(discriminant))."""
    return max(projective_height(curve.j), _log_abs_int(curve.delta)) / 12.0


def bounded_component_bound(curve: Curve) -> float:
    """4 h(E): proven cap on log|x| over the bounded real component.

    Requires short Weierstrass form and two real components.
    """
    if curve.a1 != 0 or curve.a2 != 0 or curve.a3 != 0:
        raise ValueError("bound applies to short Weierstrass form only")
    if curve.real_components().count != 2:
        raise ValueError("curve has no bounded real component")
    return 4.0 * curve_height(curve)


@dataclass(frozen=True)
class HallRecord:
    """A verified large integral point x on y^2 = x^3 +- d."""

    d: int
    x: int
    y: int
    sign: str  # 'plus' if y^2 = x^3 + d, 'minus' if y^2 = x^3 - d
    log_x: float
    ratio: float  # log x / (2 log|d|)

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "x": self.x,
            "y": self.y,
            "sign": self.sign,
            "log_x": self.log_x,
            "ratio": self.ratio,
        }


def hall_verify(d: int, x: int) -> HallRecord:
    """Find the integer y with y^2 = x^3 + d or y^2 = x^3 - d.

    Listed d values in circulation mix both sign conventions, so either match
    is accepted and the one that fired is recorded; the ratio column does not
    depend on it.  Raises if neither sign gives a perfect square.
    """
    if d == 0:
        raise ValueError("d must be nonzero")
    if x < 2:
        raise ValueError("x must be >= 2")
    x = mpz(x)
    cube = x**3
    for sign, val in (("plus", cube + d), ("minus", cube - d)):
        if val >= 0 and is_square(val):
            y = isqrt(val)
            log_x = _log_abs_int(x)
            denom = 2.0 * _log_abs_int(d) if abs(d) > 1 else 0.0
            ratio = log_x / denom if denom else math.inf
            return HallRecord(
                d=int(d), x=int(x), y=int(y), sign=sign, log_x=log_x, ratio=ratio
            )
    raise ValueError(f"neither x^3+d nor x^3-d is a perfect square for d={d}, x={x}")
