"""Exact Weierstrass curve model over Q: group law, invariants, real components.

All arithmetic is exact (gmpy2 mpz/mpq).  Points keep the forced shape
x = A/B^2, y = C/B^3 with gcd(B, AC) = 1; the rational x, y pair is primary
and A, B, C are extracted lazily.  Real two-torsion roots are isolated by
Sturm sequences and exact rational bisection, never floating point.
"""

from dataclasses import dataclass
from typing import Optional

from gmpy2 import gcd, isqrt, mpq, mpz


class SingularCurveError(ValueError):
    """The given coefficients have discriminant zero."""


class Curve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "b2", "b4", "b6", "b8",
                 "c4", "c6", "delta", "j", "_real_components")

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3 = mpz(a1), mpz(a2), mpz(a3)
        self.a4, self.a6 = mpz(a4), mpz(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.delta = (-self.b2 * self.b2 * self.b8 - 8 * self.b4 ** 3
                      - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6)
        if self.delta == 0:
            raise SingularCurveError(f"singular curve {self.ainvs()}")
        assert 4 * self.b8 == self.b2 * self.b6 - self.b4 * self.b4
        self.j = mpq(self.c4 ** 3, self.delta)
        self._real_components = None

    def ainvs(self) -> tuple:
        return (int(self.a1), int(self.a2), int(self.a3), int(self.a4), int(self.a6))

    def __repr__(self):
        return f"Curve{list(self.ainvs())}"

    def __eq__(self, other):
        return isinstance(other, Curve) and self.ainvs() == other.ainvs()

    def __hash__(self):
        return hash(self.ainvs())

    def discriminant(self) -> int:
        return int(self.delta)

    def is_standardized_shape(self) -> bool:
        """a1, a3 in {0, 1} and a2 in {-1, 0, 1}.  Does not verify minimality."""
        return self.a1 in (0, 1) and self.a3 in (0, 1) and self.a2 in (-1, 0, 1)

    def contains_xy(self, x, y) -> bool:
        """Exact membership test for affine rational coordinates."""
        x, y = mpq(x), mpq(y)
        return (y * y + self.a1 * x * y + self.a3 * y
                == x ** 3 + self.a2 * x * x + self.a4 * x + self.a6)

    def contains(self, point: "Point") -> bool:
        if point.is_identity:
            return True
        return self.contains_xy(point.x, point.y)

    def identity(self) -> "Point":
        return Point(self, None, None, validate=False)

    def point(self, x, y) -> "Point":
        """Validated affine point from rational coordinates."""
        return Point(self, mpq(x), mpq(y))

    def negate(self, p: "Point") -> "Point":
        if p.is_identity:
            return p
        return Point(self, p.x, -p.y - self.a1 * p.x - self.a3, validate=False)

    def add(self, p: "Point", q: "Point") -> "Point":
        """Chord-tangent addition; result is in canonical reduced form."""
        if p.is_identity:
            return q
        if q.is_identity:
            return p
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        x1, y1 = p.x, p.y
        x2, y2 = q.x, q.y
        if x1 != x2:
            lam = (y2 - y1) / (x2 - x1)
        elif y1 == y2:
            den = 2 * y1 + a1 * x1 + a3
            if den == 0:
                return self.identity()  # doubling a 2-torsion point
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        else:
            return self.identity()  # inverse pair
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = lam * (x1 - x3) - y1 - a1 * x3 - a3
        return Point(self, x3, y3, validate=False)

    def scalar_mul(self, n: int, p: "Point") -> "Point":
        """n*p by double-and-add; scalar_mul(-n, p) == negate(scalar_mul(n, p))."""
        if n < 0:
            return self.scalar_mul(-n, self.negate(p))
        acc = self.identity()
        step = p
        while n:
            if n & 1:
                acc = self.add(acc, step)
            n >>= 1
            if n:
                step = self.add(step, step)
        return acc

    def two_torsion_cubic(self) -> tuple:
        """Coefficients (low to high) of 4x^3 + b2 x^2 + 2 b4 x + b6.

        Completing the square sends curve points to 4y'^2 = this cubic, so its
        real roots split E(R) into components.
        """
        return (self.b6, 2 * self.b4, self.b2, mpz(4))

    def real_components(self) -> "RealComponents":
        if self._real_components is None:
            self._real_components = _isolate_real_components(self)
        return self._real_components

    def on_bounded_component(self, p: "Point") -> bool:
        """True iff x(p) lies strictly below the largest two-torsion root.

        Exact decision: sign of the two-torsion cubic at x(p) against the
        isolating interval of the top root.
        """
        if p.is_identity:
            raise ValueError("identity is on the unbounded component")
        comps = self.real_components()
        if comps.count != 2:
            raise ValueError("curve has a single real component")
        lo3, hi3 = comps.intervals[2]
        xp = p.x
        if lo3 == hi3:  # top root known exactly
            return xp < lo3
        if xp <= lo3:
            return True
        if xp >= hi3:
            return False
        # xp sits inside the isolating interval of the top root a3:
        # the cubic is negative on (a2, a3), zero at a3, positive beyond
        sign = _poly_eval(self.two_torsion_cubic(), xp)
        return sign < 0


@dataclass(frozen=True)
class RealComponents:
    """Real-component count, with isolating intervals for the two-torsion roots.

    count == 2 exactly when the discriminant is positive; intervals then holds
    three disjoint (lo, hi) rational pairs ordered by root, lo == hi marking a
    rational root hit exactly.
    """

    count: int
    intervals: Optional[tuple] = None


class Point:
    """Affine rational point (or the identity) on a Weierstrass curve.

    Supports P + Q, -P, P - Q, n * P.  The canonical decomposition
    x = A/B^2, y = C/B^3 (gcd(B, AC) = 1, B >= 1) is available as .A, .B, .C.
    """

    __slots__ = ("curve", "x", "y", "is_identity", "_b")

    def __init__(self, curve: Curve, x, y, validate: bool = True):
        self.curve = curve
        self.is_identity = x is None
        self._b = None
        if self.is_identity:
            self.x = None
            self.y = None
            return
        self.x = mpq(x)
        self.y = mpq(y)
        if validate:
            if not curve.contains_xy(self.x, self.y):
                raise ValueError(f"({x}, {y}) is not on {curve!r}")

    @classmethod
    def from_abc(cls, curve: Curve, a, b, c) -> "Point":
        """Build from the canonical integer triple (checks the gcd shape)."""
        a, b, c = mpz(a), mpz(b), mpz(c)
        if b < 1:
            raise ValueError("B must be >= 1")
        if gcd(b, a * c) != 1:
            raise ValueError("gcd(B, A*C) must be 1")
        return cls(curve, mpq(a, b * b), mpq(c, b ** 3))

    @property
    def A(self):
        if self.is_identity:
            raise ValueError("identity has no affine coordinates")
        return self.x.numerator

    @property
    def B(self):
        if self.is_identity:
            raise ValueError("identity has no affine coordinates")
        if self._b is None:
            den = self.x.denominator
            b = isqrt(den)
            assert b * b == den, "x-denominator of a curve point must be a square"
            self._b = b
        return self._b

    @property
    def C(self):
        if self.is_identity:
            raise ValueError("identity has no affine coordinates")
        return self.y.numerator

    def abc(self) -> tuple:
        return (int(self.A), int(self.B), int(self.C))

    def __add__(self, other):
        return self.curve.add(self, other)

    def __neg__(self):
        return self.curve.negate(self)

    def __sub__(self, other):
        return self.curve.add(self, self.curve.negate(other))

    def __rmul__(self, n: int):
        return self.curve.scalar_mul(n, self)

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_identity or other.is_identity:
            return self.is_identity and other.is_identity
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_identity:
            return hash((self.curve, "O"))
        return hash((self.curve, self.x, self.y))

    def __repr__(self):
        if self.is_identity:
            return "O"
        return f"({self.x},{self.y})"


# ---------------------------------------------------------------------------
# exact real-root isolation (Sturm sequences on the two-torsion cubic)

def _poly_eval(coeffs, x):
    """Evaluate sum(coeffs[i] * x^i) exactly; coeffs low-to-high."""
    acc = mpq(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs):
    return tuple(i * c for i, c in enumerate(coeffs) if i > 0)


def _poly_rem(f, g):
    """Remainder of f by g over Q (coeffs low-to-high, g nonzero)."""
    f = [mpq(c) for c in f]
    g = [mpq(c) for c in g]
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    while len(f) >= len(g) and any(c != 0 for c in f):
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        if len(f) < len(g):
            break
        shift = len(f) - len(g)
        factor = f[-1] / g[-1]
        for i, c in enumerate(g):
            f[i + shift] -= factor * c
        f.pop()
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f)


def _sturm_chain(coeffs):
    chain = [tuple(mpq(c) for c in coeffs), tuple(mpq(c) for c in _poly_deriv(coeffs))]
    while len(chain[-1]) > 1 or (chain[-1] and chain[-1][0] != 0):
        rem = _poly_rem(chain[-2], chain[-1])
        if len(rem) == 1 and rem[0] == 0:
            break
        chain.append(tuple(-c for c in rem))
    return chain


def _sign_variations(chain, x) -> int:
    signs = []
    for poly in chain:
        v = _poly_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _isolate_real_components(curve: Curve) -> RealComponents:
    if curve.delta < 0:
        return RealComponents(count=1)
    cubic = curve.two_torsion_cubic()
    chain = _sturm_chain(cubic)

    # Cauchy bound on root magnitude, bumped to the next power of two
    bound = 1 + max(abs(mpq(c, cubic[-1])) for c in cubic[:-1])
    m = mpz(2)
    while m < bound:
        m *= 2

    def roots_in(lo, hi):
        return _sign_variations(chain, lo) - _sign_variations(chain, hi)

    intervals = []
    stack = [(mpq(-m), mpq(m))]
    while stack:
        lo, hi = stack.pop()
        n = roots_in(lo, hi)
        if n == 0:
            continue
        if n == 1:
            if _poly_eval(cubic, hi) == 0:
                # the half-open count (lo, hi] pinned the root at hi exactly
                intervals.append((hi, hi))
                continue
            if _poly_eval(cubic, lo) != 0:
                intervals.append((lo, hi))
                continue
            # lo happens to be another root; keep bisecting until clear of it
        mid = (lo + hi) / 2
        if _poly_eval(cubic, mid) == 0:
            intervals.append((mid, mid))
            # exclude the rational root and recurse on both open sides
            eps = (hi - lo) / 4
            while roots_in(mid - eps, mid) + roots_in(mid, mid + eps) > 1:
                eps /= 2
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    assert len(intervals) == 3, "positive discriminant must give three real roots"
    intervals.sort(key=lambda iv: iv[0])
    return RealComponents(count=2, intervals=tuple(intervals))


# ---------------------------------------------------------------------------
# external text formats: curve "[a1,a2,a3,a4,a6]", point "x,y" with "p/q" parts

def parse_curve(text: str) -> Curve:
    s = text.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected 5 coefficients, got {len(parts)}: {text!r}")
    return Curve(*(int(p) for p in parts))


def parse_xy(text: str) -> tuple:
    s = text.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    return mpq(parts[0]), mpq(parts[1])


def parse_point(curve: Curve, text: str) -> Point:
    x, y = parse_xy(text)
    return curve.point(x, y)


def format_point(p: Point) -> str:
    if p.is_identity:
        return "O"
    return f"{p.x},{p.y}"
