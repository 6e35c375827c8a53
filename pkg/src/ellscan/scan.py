"""Lattice scans over generator combinations, and index scans along one point.

Enumeration is incremental: every lattice point costs a single curve addition
from a cached neighbour, never a fresh scalar multiplication.  Only the
canonical half-space (first nonzero index positive) is walked, since x(-R) =
x(R) makes the mirror half redundant for every predicate used here.

Workers split the outer index range into bands; each band is classified
independently and the merge is a deterministic reduction on exact keys, so
results are identical for any worker count.
"""

import csv
import io
import multiprocessing
from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq, mpz

from .arith import DEFAULT_TRIAL_BOUND, is_probable_prime, length_classify
from .curve import Curve, Point
from .heights import log_abs_rational

SIDE_DENOMINATOR = "denominator"
SIDE_NUMERATOR = "numerator"

PREDICATE_PRIME = "prime"
PREDICATE_PRIME_POWER = "prime_power"


@dataclass(frozen=True)
class ScanConfig:
    """Everything one lattice scan needs; generators must lie on the curve."""

    curve: Curve
    generators: tuple
    bound: int
    side: str = SIDE_DENOMINATOR
    predicate: str = PREDICATE_PRIME
    target: Optional[Point] = None  # None means the point at infinity
    trial_bound: int = DEFAULT_TRIAL_BOUND
    workers: int = 1

    def validate(self):
        if not 1 <= len(self.generators) <= 3:
            raise ValueError("need between 1 and 3 generators")
        for g in self.generators:
            if g.is_identity or not self.curve.contains(g):
                raise ValueError(f"generator {g!r} is not an affine point on the curve")
        if self.side not in (SIDE_DENOMINATOR, SIDE_NUMERATOR):
            raise ValueError(f"unknown side {self.side!r}")
        if self.predicate not in (PREDICATE_PRIME, PREDICATE_PRIME_POWER):
            raise ValueError(f"unknown predicate {self.predicate!r}")
        if self.target is not None and not self.target.is_identity:
            if not self.curve.contains(self.target):
                raise ValueError("target point is not on the curve")
        if self.bound < 1:
            raise ValueError("bound must be >= 1")


@dataclass(frozen=True)
class ScanRecord:
    """The extremal qualifying point of one scan, ready for JSON or CSV."""

    indices: tuple
    h_bar: float
    ratio: float
    a_digits: int
    b_digits: int
    predicate_hit: str  # 'B=p', 'B=p^k', or 'A=p'
    probable: bool

    def to_json_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "h_bar": self.h_bar,
            "ratio": self.ratio,
            "a_digits": self.a_digits,
            "b_digits": self.b_digits,
            "predicate_hit": self.predicate_hit,
            "probable": self.probable,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScanRecord":
        return cls(
            indices=tuple(d["indices"]),
            h_bar=d["h_bar"],
            ratio=d["ratio"],
            a_digits=d["a_digits"],
            b_digits=d["b_digits"],
            predicate_hit=d["predicate_hit"],
            probable=d["probable"],
        )


@dataclass(frozen=True)
class Hit:
    """One qualifying lattice point, with exact coordinates kept around."""

    vec: tuple
    a: int  # numerator of x
    b: int  # denominator of x is b^2
    k: int  # exponent: B = p^k (denominator side) or 1 (numerator side)
    probable: bool

    def x(self) -> "mpq":
        return mpq(self.a, mpz(self.b) ** 2)


@dataclass
class ScanResult:
    """Records per predicate plus the full sorted hit list and counters."""

    side: str
    bound: int
    predicate: str
    records: dict
    hits: list
    stats: dict
    log_disc: float
    record_hits: dict = field(default_factory=dict)  # predicate -> Hit | None

    @property
    def record(self) -> Optional[ScanRecord]:
        return self.records.get(self.predicate)


# ---------------------------------------------------------------------------
# enumeration

def _enumerate_band_rank1(curve, g, bound, m_lo, m_hi):
    if m_lo < 1:
        m_lo = 1
    if m_lo > m_hi:
        return
    acc = curve.scalar_mul(m_lo, g)
    for m in range(m_lo, m_hi + 1):
        yield (m,), acc
        if m < m_hi:
            acc = curve.add(acc, g)


def _enumerate_band_rank2(curve, gens, bound, m_lo, m_hi):
    p, q = gens
    if m_lo == 0:
        # half row: (0, n) with n >= 1
        acc = q
        for n in range(1, bound + 1):
            yield (0, n), acc
            if n < bound:
                acc = curve.add(acc, q)
        m_lo = 1
    if m_lo > m_hi:
        return
    neg_tq = curve.scalar_mul(-bound, q)
    row_base = curve.scalar_mul(m_lo, p)
    for m in range(m_lo, m_hi + 1):
        acc = curve.add(row_base, neg_tq)
        for n in range(-bound, bound + 1):
            yield (m, n), acc
            if n < bound:
                acc = curve.add(acc, q)
        if m < m_hi:
            row_base = curve.add(row_base, p)


def _enumerate_band_rank3(curve, gens, bound, m_lo, m_hi):
    p, q, r = gens
    if m_lo == 0:
        for vec, pt in _enumerate_band_rank2(curve, (q, r), bound, 0, bound):
            yield (0,) + vec, pt
        m_lo = 1
    if m_lo > m_hi:
        return
    neg_tq = curve.scalar_mul(-bound, q)
    neg_tr = curve.scalar_mul(-bound, r)
    plane_base = curve.scalar_mul(m_lo, p)
    for m in range(m_lo, m_hi + 1):
        row_base = curve.add(plane_base, neg_tq)
        for n in range(-bound, bound + 1):
            acc = curve.add(row_base, neg_tr)
            for l in range(-bound, bound + 1):
                yield (m, n, l), acc
                if l < bound:
                    acc = curve.add(acc, r)
            if n < bound:
                row_base = curve.add(row_base, q)
        if m < m_hi:
            plane_base = curve.add(plane_base, p)


def enumerate_band(curve, gens, bound, m_lo, m_hi):
    """Lattice points with first index in [m_lo, m_hi], one addition per step."""
    rank = len(gens)
    if rank == 1:
        yield from _enumerate_band_rank1(curve, gens[0], bound, m_lo, m_hi)
    elif rank == 2:
        yield from _enumerate_band_rank2(curve, gens, bound, m_lo, m_hi)
    elif rank == 3:
        yield from _enumerate_band_rank3(curve, gens, bound, m_lo, m_hi)
    else:
        raise ValueError("rank must be 1, 2 or 3")


def enumerate_lattice(curve, gens, bound):
    """Every nonzero index vector with first nonzero coordinate positive."""
    yield from enumerate_band(curve, gens, bound, 0, bound)


# ---------------------------------------------------------------------------
# per-band classification

def _classify_band(curve, gens, bound, m_lo, m_hi, side, trial_bound):
    """Walk one band; return (hits, integral_vecs, counters)."""
    hits = []
    integral = []
    n_points = 0
    n_unknown = 0
    for vec, pt in enumerate_band(curve, gens, bound, m_lo, m_hi):
        n_points += 1
        if pt.is_identity:
            continue
        if side == SIDE_NUMERATOR:
            a = pt.A
            if -1 <= a <= 1:
                continue
            if is_probable_prime(abs(a)):
                hits.append(Hit(vec=vec, a=int(a), b=int(pt.B), k=1,
                                probable=abs(a) > trial_bound))
            continue
        b = pt.B
        if b == 1:
            integral.append(vec)
            continue
        cls = length_classify(b, trial_bound)
        if cls.kind == "one":
            hits.append(Hit(vec=vec, a=int(pt.A), b=int(b), k=cls.k,
                            probable=cls.probable))
        elif cls.kind == "unknown":
            n_unknown += 1
    return hits, integral, n_points, n_unknown


def _band_worker(args):
    (ainvs, gens_ser, bound, m_lo, m_hi, side, trial_bound) = args
    curve = Curve(*ainvs)
    gens = tuple(curve.point(mpq(xn, xd), mpq(yn, yd)) for xn, xd, yn, yd in gens_ser)
    hits, integral, n_points, n_unknown = _classify_band(
        curve, gens, bound, m_lo, m_hi, side, trial_bound
    )
    hits_ser = [(h.vec, h.a, h.b, h.k, h.probable) for h in hits]
    return hits_ser, integral, n_points, n_unknown


def _serialize_gens(gens):
    return tuple(
        (int(g.x.numerator), int(g.x.denominator), int(g.y.numerator), int(g.y.denominator))
        for g in gens
    )


def _split_bands(bound, workers):
    """Contiguous outer-index bands [lo, hi] covering 0..bound."""
    workers = max(1, min(workers, bound + 1))
    edges = [round(i * (bound + 1) / workers) for i in range(workers + 1)]
    return [(edges[i], edges[i + 1] - 1) for i in range(workers) if edges[i] <= edges[i + 1] - 1]


# ---------------------------------------------------------------------------
# record selection (exact keys, deterministic tie-breaking)

def _hit_sort_key(h: Hit):
    return h.vec


def _select_record(hits, key, better):
    """Extremal hit under an exact key; ties go to the smallest index vector."""
    best = None
    best_key = None
    for h in sorted(hits, key=_hit_sort_key):
        k = key(h)
        if best is None or better(k, best_key):
            best, best_key = h, k
    return best


def _predicate_accepts(predicate: str, hit: Hit) -> bool:
    if predicate == PREDICATE_PRIME:
        return hit.k == 1
    return True  # prime_power accepts every B = p^k


def run_lattice_scan(config: ScanConfig) -> ScanResult:
    """Run one scan and pick the extremal record for each predicate."""
    config.validate()
    curve = config.curve
    target = config.target
    if target is not None and target.is_identity:
        target = None
    if target is not None and config.side == SIDE_NUMERATOR:
        raise ValueError("numerator scans measure distance to infinity only")

    bands = _split_bands(config.bound, config.workers)
    if len(bands) <= 1 or config.workers <= 1:
        hits, integral, n_points, n_unknown = _classify_band(
            curve, config.generators, config.bound, 0, config.bound,
            config.side, config.trial_bound,
        )
    else:
        gens_ser = _serialize_gens(config.generators)
        args = [
            (curve.ainvs(), gens_ser, config.bound, lo, hi, config.side, config.trial_bound)
            for lo, hi in bands
        ]
        hits = []
        integral = []
        n_points = 0
        n_unknown = 0
        with multiprocessing.get_context("fork").Pool(len(args)) as pool:
            for hits_ser, band_integral, band_points, band_unknown in pool.map(
                _band_worker, args
            ):
                hits.extend(
                    Hit(vec=tuple(v), a=a, b=b, k=k, probable=pr)
                    for v, a, b, k, pr in hits_ser
                )
                integral.extend(tuple(v) for v in band_integral)
                n_points += band_points
                n_unknown += band_unknown

    hits.sort(key=_hit_sort_key)
    integral.sort()

    log_disc = log_abs_rational(curve.delta)
    target_x = None if target is None else target.x

    if target_x is None:
        # maximize |x|; exact comparison on |A| * Bother^2
        def key(h):
            return mpq(abs(mpz(h.a)), mpz(h.b) ** 2)

        def better(k, best):
            return k > best
    else:
        # minimize |x - x(D)|
        def key(h):
            return abs(h.x() - target_x)

        def better(k, best):
            return k < best

    predicates = (
        (PREDICATE_PRIME, PREDICATE_PRIME_POWER)
        if config.side == SIDE_DENOMINATOR
        else (PREDICATE_PRIME,)
    )
    records = {}
    record_hits = {}
    for predicate in predicates:
        eligible = [h for h in hits if _predicate_accepts(predicate, h)]
        if target_x is not None:
            eligible = [h for h in eligible if h.x() != target_x]
        best = _select_record(eligible, key, better)
        record_hits[predicate] = best
        records[predicate] = (
            None if best is None else _make_record(best, config.side, target_x, log_disc)
        )

    stats = {
        "points": n_points,
        "integral": [list(v) for v in integral],
        "unknown": n_unknown,
        "hits": len(hits),
    }
    return ScanResult(
        side=config.side,
        bound=config.bound,
        predicate=config.predicate,
        records=records,
        hits=hits,
        stats=stats,
        log_disc=log_disc,
        record_hits=record_hits,
    )


def _hit_h_bar(hit: Hit, side: str, target_x) -> float:
    x = hit.x()
    if target_x is not None:
        return -log_abs_rational(x - target_x)
    if x == 0:
        return 0.0
    return max(0.0, log_abs_rational(x))


def _hit_label(hit: Hit, side: str) -> str:
    if side == SIDE_NUMERATOR:
        return "A=p"
    return "B=p" if hit.k == 1 else f"B=p^{hit.k}"


def _make_record(hit: Hit, side: str, target_x, log_disc: float) -> ScanRecord:
    h_bar = _hit_h_bar(hit, side, target_x)
    return ScanRecord(
        indices=hit.vec,
        h_bar=h_bar,
        ratio=h_bar / log_disc,
        a_digits=mpz(abs(hit.a)).num_digits(10) if hit.a else 1,
        b_digits=mpz(hit.b).num_digits(10),
        predicate_hit=_hit_label(hit, side),
        probable=hit.probable,
    )


# ---------------------------------------------------------------------------
# record-only scans
#
# The full scan classifies every lattice point, which pays a primality test on
# each candidate with no small factor (roughly one point in ten).  When only
# the extremal record is wanted, almost all of that work is avoidable: walk
# candidates in decreasing order of a float proxy for the exact key, confirm
# hits exactly, and stop as soon as no remaining proxy can beat the confirmed
# best.  Exact comparisons settle everything within a safety margin, so the
# selected record is identical to the full scan's.

_PROXY_MARGIN = 1e-6


def _proxy_band(curve, gens, bound, m_lo, m_hi, side, target_x):
    """Phase 1: (vec, proxy) for every candidate, plus integral vecs."""
    candidates = []
    integral = []
    n_points = 0
    target_is_zero = target_x is not None and target_x == 0
    for vec, pt in enumerate_band(curve, gens, bound, m_lo, m_hi):
        n_points += 1
        if pt.is_identity:
            continue
        x = pt.x
        if side == SIDE_NUMERATOR:
            if -1 <= x.numerator <= 1:
                continue
            proxy = log_abs_rational(x)
        elif target_x is None:
            if x.denominator == 1:
                integral.append(vec)
                continue
            proxy = log_abs_rational(x)
        else:
            if x.denominator == 1:
                integral.append(vec)
                continue
            if x == target_x:
                continue
            if target_is_zero:
                proxy = -log_abs_rational(x)
            else:
                proxy = -log_abs_rational(x - target_x)
        candidates.append((vec, proxy))
    return candidates, integral, n_points


def _proxy_band_worker(args):
    (ainvs, gens_ser, bound, m_lo, m_hi, side, target_ser) = args
    curve = Curve(*ainvs)
    gens = tuple(curve.point(mpq(xn, xd), mpq(yn, yd)) for xn, xd, yn, yd in gens_ser)
    target_x = None if target_ser is None else mpq(target_ser[0], target_ser[1])
    return _proxy_band(curve, gens, bound, m_lo, m_hi, side, target_x)


def _combine(curve, gens, vec):
    acc = curve.identity()
    for coeff, g in zip(vec, gens):
        if coeff:
            acc = curve.add(acc, curve.scalar_mul(coeff, g))
    return acc


def run_record_scan(config: ScanConfig) -> ScanResult:
    """Extremal records only; same selection as run_lattice_scan, far cheaper.

    The hit list is not produced (stats carry how many candidates were tested
    in depth); use run_lattice_scan when every qualifying point is wanted.
    """
    config.validate()
    curve = config.curve
    target = config.target
    if target is not None and target.is_identity:
        target = None
    if target is not None and config.side == SIDE_NUMERATOR:
        raise ValueError("numerator scans measure distance to infinity only")
    target_x = None if target is None else target.x

    bands = _split_bands(config.bound, config.workers)
    if len(bands) <= 1 or config.workers <= 1:
        candidates, integral, n_points = _proxy_band(
            curve, config.generators, config.bound, 0, config.bound,
            config.side, target_x,
        )
    else:
        gens_ser = _serialize_gens(config.generators)
        target_ser = (
            None if target_x is None
            else (int(target_x.numerator), int(target_x.denominator))
        )
        args = [
            (curve.ainvs(), gens_ser, config.bound, lo, hi, config.side, target_ser)
            for lo, hi in bands
        ]
        candidates = []
        integral = []
        n_points = 0
        with multiprocessing.get_context("fork").Pool(len(args)) as pool:
            for band_cand, band_integral, band_points in pool.map(
                _proxy_band_worker, args
            ):
                candidates.extend((tuple(v), pr) for v, pr in band_cand)
                integral.extend(tuple(v) for v in band_integral)
                n_points += band_points

    candidates.sort(key=lambda c: (-c[1], c[0]))
    integral.sort()

    log_disc = log_abs_rational(curve.delta)
    predicates = (
        (PREDICATE_PRIME, PREDICATE_PRIME_POWER)
        if config.side == SIDE_DENOMINATOR
        else (PREDICATE_PRIME,)
    )

    if target_x is None:
        def exact_key(h):
            return mpq(abs(mpz(h.a)), mpz(h.b) ** 2)

        def better(k, best):
            return k > best

        def key_proxy(h, k):
            return log_abs_rational(k)
    else:
        def exact_key(h):
            return abs(h.x() - target_x)

        def better(k, best):
            return k < best

        def key_proxy(h, k):
            return -log_abs_rational(k)

    best_hit = {p: None for p in predicates}
    best_key = {p: None for p in predicates}
    best_proxy = {p: None for p in predicates}
    deep_tested = 0
    for vec, proxy in candidates:
        # no remaining candidate can beat every confirmed record
        if all(best_proxy[p] is not None and proxy < best_proxy[p] - _PROXY_MARGIN
               for p in predicates):
            break
        pt = _combine(curve, config.generators, vec)
        deep_tested += 1
        if config.side == SIDE_NUMERATOR:
            a = pt.A
            if not is_probable_prime(abs(a)):
                continue
            hit = Hit(vec=vec, a=int(a), b=int(pt.B), k=1,
                      probable=abs(a) > config.trial_bound)
            accepted = (PREDICATE_PRIME,)
        else:
            cls = length_classify(pt.B, config.trial_bound)
            if cls.kind != "one":
                continue
            hit = Hit(vec=vec, a=int(pt.A), b=int(pt.B), k=cls.k,
                      probable=cls.probable)
            accepted = tuple(p for p in predicates if _predicate_accepts(p, hit))
        if target_x is not None and hit.x() == target_x:
            continue
        k = exact_key(hit)
        for p in accepted:
            if best_key[p] is None or better(k, best_key[p]) or (
                k == best_key[p] and vec < best_hit[p].vec
            ):
                best_hit[p] = hit
                best_key[p] = k
                best_proxy[p] = key_proxy(hit, k)

    records = {}
    record_hits = {}
    for p in predicates:
        hit = best_hit[p]
        record_hits[p] = hit
        records[p] = (
            None if hit is None else _make_record(hit, config.side, target_x, log_disc)
        )
    stats = {
        "points": n_points,
        "integral": [list(v) for v in integral],
        "candidates": len(candidates),
        "deep_tested": deep_tested,
        "mode": "record",
    }
    return ScanResult(
        side=config.side,
        bound=config.bound,
        predicate=config.predicate,
        records=records,
        hits=[],
        stats=stats,
        log_disc=log_disc,
        record_hits=record_hits,
    )


# ---------------------------------------------------------------------------
# spec-level wrappers

def scan_denominators(config: ScanConfig) -> Optional[ScanRecord]:
    """Extremal point whose denominator B passes the configured predicate."""
    if config.side != SIDE_DENOMINATOR:
        raise ValueError("scan_denominators needs side='denominator'")
    return run_lattice_scan(config).record


def scan_numerators(config: ScanConfig) -> Optional[ScanRecord]:
    """Extremal point with (probable) prime |A|; |A| <= 1 is skipped."""
    if config.side != SIDE_NUMERATOR:
        raise ValueError("scan_numerators needs side='numerator'")
    return run_lattice_scan(config).record


def scan_distance(config: ScanConfig) -> Optional[ScanRecord]:
    """Closest qualifying point to a finite repelling target."""
    if config.target is None or config.target.is_identity:
        raise ValueError("scan_distance needs a finite target point")
    return run_lattice_scan(config).record


def eds_scan(curve: Curve, gen: Point, nmax: int,
             predicate: str = PREDICATE_PRIME,
             trial_bound: int = DEFAULT_TRIAL_BOUND) -> ScanResult:
    """Scan multiples n*P for 1 <= n <= nmax by repeated addition.

    Returns the extremal record per predicate plus the full hit list (every
    qualifying n), which is what divisibility-sequence inspection wants.
    """
    if gen.is_identity or not curve.contains(gen):
        raise ValueError("generator must be an affine point on the curve")
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    hits = []
    integral = []
    n_unknown = 0
    acc = gen
    for n in range(1, nmax + 1):
        if acc.is_identity:
            raise ValueError(f"{n}*P is the identity: P is torsion")
        b = acc.B
        if b == 1:
            integral.append((n,))
        else:
            cls = length_classify(b, trial_bound)
            if cls.kind == "one":
                hits.append(Hit(vec=(n,), a=int(acc.A), b=int(b), k=cls.k,
                                probable=cls.probable))
            elif cls.kind == "unknown":
                n_unknown += 1
        if n < nmax:
            acc = curve.add(acc, gen)

    log_disc = log_abs_rational(curve.delta)

    def key(h):
        return mpq(abs(mpz(h.a)), mpz(h.b) ** 2)

    records = {}
    record_hits = {}
    for pred in (PREDICATE_PRIME, PREDICATE_PRIME_POWER):
        eligible = [h for h in hits if _predicate_accepts(pred, h)]
        best = _select_record(eligible, key, lambda k, b: k > b)
        record_hits[pred] = best
        records[pred] = (
            None if best is None else _make_record(best, SIDE_DENOMINATOR, None, log_disc)
        )
    stats = {
        "points": nmax,
        "integral": [list(v) for v in integral],
        "unknown": n_unknown,
        "hits": len(hits),
    }
    return ScanResult(
        side=SIDE_DENOMINATOR,
        bound=nmax,
        predicate=predicate,
        records=records,
        hits=hits,
        stats=stats,
        log_disc=log_disc,
        record_hits=record_hits,
    )


# ---------------------------------------------------------------------------
# emitters

CSV_COLUMNS = ("indices", "h_bar", "ratio", "B_digits", "predicate", "probable_flag")


def hits_to_csv(result: ScanResult, target: Optional[Point] = None) -> str:
    """All hits, sorted by index vector; identical for any worker split."""
    target_x = None if target is None or target.is_identity else target.x
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for h in sorted(result.hits, key=_hit_sort_key):
        h_bar = _hit_h_bar(h, result.side, target_x)
        writer.writerow(
            (
                ";".join(str(c) for c in h.vec),
                repr(h_bar),
                repr(h_bar / result.log_disc),
                mpz(h.b).num_digits(10),
                "prime" if h.k == 1 else "prime-power",
                "probable" if h.probable else "certified",
            )
        )
    return out.getvalue()


def result_to_json_dict(result: ScanResult, target: Optional[Point] = None) -> dict:
    return {
        "side": result.side,
        "bound": result.bound,
        "predicate": result.predicate,
        "log_disc": result.log_disc,
        "records": {
            pred: (rec.to_json_dict() if rec is not None else None)
            for pred, rec in result.records.items()
        },
        "stats": result.stats,
    }
