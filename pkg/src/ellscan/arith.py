"""Integer kernels: trial division, probable primality, perfect powers, length classification.

Denominators met during lattice scans run to tens of thousands of digits, so
everything here is built on gmpy2's mpz type and staged so that cheap screens
(single-word mods, one gcd against a cached primorial) run before any modular
exponentiation.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from gmpy2 import gcd, iroot, is_square, jacobi, mpz, powmod

DEFAULT_TRIAL_BOUND = 100_000

_TWO = mpz(2)


@lru_cache(maxsize=8)
def primes_up_to(bound: int) -> tuple:
    """All primes <= bound, by sieve of Eratosthenes."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i in range(bound + 1) if sieve[i])


@lru_cache(maxsize=8)
def primorial(bound: int) -> "mpz":
    """Product of all primes <= bound (one gcd with this finds every small factor)."""
    result = mpz(1)
    for p in primes_up_to(bound):
        result *= p
    return result


# Small primes used as a constant-cost screen before anything expensive.
_QUICK_PRIMES = primes_up_to(256)
_QUICK_LIMIT = 257 * 257


def _pack_prime_groups(primes, word_bits=60):
    """Group primes into products below 2^word_bits: one big-number mod per
    group replaces one per prime."""
    groups = []
    prod, members = 1, []
    for p in primes:
        if prod * p >= 1 << word_bits:
            groups.append((prod, tuple(members)))
            prod, members = 1, []
        prod *= p
        members.append(p)
    if members:
        groups.append((prod, tuple(members)))
    return tuple(groups)


_QUICK_PRIME_GROUPS = _pack_prime_groups(_QUICK_PRIMES)


def _first_quick_factor(n):
    """Smallest prime < 256 dividing n, or None."""
    for prod, members in _QUICK_PRIME_GROUPS:
        r = int(n % prod)
        for p in members:
            if r % p == 0:
                return p
    return None


def _strong_base2(n) -> bool:
    """Strong Fermat test to base 2 (n odd, n > 2)."""
    d = n - 1
    s = ((d & -d)).bit_length() - 1
    d >>= s
    x = powmod(_TWO, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = (x * x) % n
        if x == n - 1:
            return True
    return False


def _selfridge_d(n) -> Optional[int]:
    """First D in 5, -7, 9, -11, ... with Jacobi(D|n) = -1; None marks n composite."""
    d = 5
    while True:
        j = jacobi(d, n)
        if j == -1:
            return d
        if j == 0:
            # shares a factor with n, and |d| < n here, so n is composite
            return None
        if d == 13 and is_square(n):
            # perfect squares never give -1; bail before an endless search
            return None
        d = -(d + 2) if d > 0 else -(d - 2)


def _lucas_uv(n, d_param, k):
    """U_k, V_k, Q^k mod n for the Lucas sequence with P=1, Q=(1-D)/4."""
    q = (1 - d_param) // 4
    u, v, qk = mpz(1), mpz(1), mpz(q) % n
    for bit in bin(k)[3:]:
        # index doubling: U_2m = U_m V_m, V_2m = V_m^2 - 2 Q^m
        u = (u * v) % n
        v = (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if bit == "1":
            # index +1 (P=1): U' = (U + V)/2, V' = (D U + V)/2, halving mod odd n
            u, v = u + v, d_param * u + v
            u = (u + n) >> 1 if u & 1 else u >> 1
            v = (v + n) >> 1 if v & 1 else v >> 1
            u %= n
            v %= n
            qk = (qk * q) % n
    return u, v, qk


def _strong_lucas(n) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters (n odd, coprime to 6)."""
    d_param = _selfridge_d(n)
    if d_param is None:
        return False
    k = n + 1
    s = ((k & -k)).bit_length() - 1
    k >>= s
    u, v, qk = _lucas_uv(n, d_param, k)
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if v == 0:
            return True
    return False


def is_probable_prime(n) -> bool:
    """Baillie-PSW compound test: strong base-2 Fermat then strong Lucas.

    Deterministic for a given n.  No counterexample is known; results are
    certain below 2^64 and "probable" beyond.
    """
    n = mpz(n)
    if n < 2:
        return False
    p = _first_quick_factor(n)
    if p is not None:
        return n == p
    if n < _QUICK_LIMIT:
        return True
    if n.bit_length() > 1024:
        # one gcd against the primorial is far cheaper than a modexp this size
        if gcd(n, primorial(DEFAULT_TRIAL_BOUND)) != 1:
            return False
    if not _strong_base2(n):
        return False
    return _strong_lucas(n)


def perfect_power_decompose(n) -> tuple:
    """Write n = b^k with k maximal (so b is not itself a perfect power).

    k = 1 means n is not a perfect power.  Exact integer root extraction for
    each prime exponent up to log2(n).
    """
    n = mpz(n)
    if n < 2:
        raise ValueError("perfect_power_decompose requires n >= 2")
    k_total = 1
    while True:
        reduced = False
        for q in primes_up_to(n.bit_length()):
            root, exact = iroot(n, q)
            if exact:
                n = root
                k_total *= q
                reduced = True
                break
        if not reduced:
            return int(n), k_total


def prime_power_decompose(n) -> Optional[tuple]:
    """(p, k) with n = p^k and p a (probable) prime, else None."""
    base, exp = perfect_power_decompose(n)
    if is_probable_prime(base):
        return base, exp
    return None


@dataclass(frozen=True)
class PartialFactorization:
    """Small-prime part of n plus whatever is left over.

    small_factors are sieve-certified primes <= the trial bound; the cofactor
    carries a BPSW verdict, never a claimed factorization.
    """

    n: int
    small_factors: tuple  # ((p, e), ...) sorted by p
    cofactor: int
    cofactor_status: str  # 'unit' | 'probable_prime' | 'composite_unresolved'

    def check(self) -> bool:
        prod = 1
        for p, e in self.small_factors:
            prod *= p**e
        return prod * self.cofactor == self.n


def _small_prime_divisors(n, bound: int) -> list:
    """Primes p <= bound dividing n, via one gcd with the primorial."""
    g = gcd(n, primorial(bound))
    if g == 1:
        return []
    found = []
    for p in primes_up_to(bound):
        if g % p == 0:
            found.append(p)
            g //= p
            if g == 1:
                break
    return found


def trial_factor(n, bound: int = DEFAULT_TRIAL_BOUND) -> PartialFactorization:
    """Remove all prime factors <= bound from n and classify the cofactor."""
    n = mpz(n)
    if n < 1:
        raise ValueError("trial_factor requires n >= 1")
    if bound < 2:
        raise ValueError("trial_factor requires bound >= 2")
    factors = []
    rest = n
    if n.bit_length() <= 64:
        # direct trial division; stop once p^2 exceeds what is left
        for p in primes_up_to(bound):
            if p * p > rest:
                break
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                factors.append((p, e))
        if rest > 1 and rest <= bound:
            # no factor <= sqrt(rest), so rest is prime and under the bound
            factors.append((int(rest), 1))
            rest = mpz(1)
    else:
        for p in _small_prime_divisors(rest, bound):
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
    if rest == 1:
        status = "unit"
    elif is_probable_prime(rest):
        status = "probable_prime"
    else:
        status = "composite_unresolved"
    return PartialFactorization(
        n=int(n),
        small_factors=tuple(sorted(factors)),
        cofactor=int(rest),
        cofactor_status=status,
    )


@dataclass(frozen=True)
class LengthClass:
    """Number of distinct primes dividing a denominator B, as far as is provable.

    kind 'zero': B = 1.  kind 'one': B = p^k exactly.  kind 'at_least_two':
    two coprime witnesses > 1 are exhibited.  kind 'unknown': the budget was
    exhausted without a verdict (composite cofactor that is not a perfect
    power cannot be split without factoring it).
    """

    kind: str
    p: Optional[int] = None
    k: Optional[int] = None
    witnesses: Optional[tuple] = None
    probable: bool = False

    @property
    def is_prime_denominator(self) -> bool:
        """B itself is a (probable) prime."""
        return self.kind == "one" and self.k == 1

    @property
    def is_prime_power_denominator(self) -> bool:
        """B is a (probable) prime power p^k, k >= 1."""
        return self.kind == "one"


def _prime_power_probe(n, trial_bound: int) -> Optional[tuple]:
    """Like prime_power_decompose, for n known to have no factor <= trial_bound.

    Tests the cheap k=1 case (BPSW) first; any base must exceed trial_bound,
    which caps the exponents worth trying at log(n)/log(trial_bound).
    """
    if is_probable_prime(n):
        return int(n), 1
    max_exp = n.bit_length() // max(trial_bound.bit_length() - 1, 1) + 1
    for q in primes_up_to(max_exp):
        root, exact = iroot(n, q)
        if exact:
            inner = _prime_power_probe(root, trial_bound)
            if inner is None:
                return None
            p, k = inner
            return p, k * q
    return None


def _classify_with_factor(b, p) -> LengthClass:
    """Finish classifying b once one prime factor p is in hand.

    Dividing out every power of p leaves either 1 (so b = p^k) or a coprime
    part > 1, which together with p already witnesses two distinct primes.
    """
    e = 0
    rest = b
    while rest % p == 0:
        rest //= p
        e += 1
    if rest == 1:
        return LengthClass(kind="one", p=int(p), k=e)
    return LengthClass(kind="at_least_two", witnesses=(int(p), int(rest)))


def length_classify(b, trial_bound: int = DEFAULT_TRIAL_BOUND) -> LengthClass:
    """Classify how many distinct primes divide b (b >= 1).

    Trial division up to trial_bound settles most cases; what survives with no
    small factor goes through BPSW and perfect-power extraction.  Below
    trial_bound^2 the answer is always exact.
    """
    b = mpz(abs(b))
    if b == 0:
        raise ValueError("length_classify requires b >= 1")
    if b == 1:
        return LengthClass(kind="zero")

    if b.bit_length() <= 64:
        pf = trial_factor(b, trial_bound)
        smalls = pf.small_factors
        if len(smalls) >= 2:
            return LengthClass(kind="at_least_two", witnesses=(smalls[0][0], smalls[1][0]))
        if len(smalls) == 1:
            p, e = smalls[0]
            if pf.cofactor == 1:
                return LengthClass(kind="one", p=p, k=e)
            return LengthClass(kind="at_least_two", witnesses=(p, pf.cofactor))
        rest = mpz(pf.cofactor)
    else:
        # staged screens: packed single-word mods, then one primorial gcd
        if trial_bound >= 256:
            p = _first_quick_factor(b)
            if p is not None:
                return _classify_with_factor(b, p)
        else:
            for p in primes_up_to(trial_bound):
                if b % p == 0:
                    return _classify_with_factor(b, p)
        rest = b
        if trial_bound > 256:
            g = gcd(b, primorial(trial_bound))
            if g > 1:
                for p in primes_up_to(trial_bound):
                    if g % p == 0:
                        return _classify_with_factor(b, p)

    # no factor up to the trial bound: either a prime power or unsplittable
    pp = _prime_power_probe(rest, trial_bound)
    if pp is not None:
        p, k = pp
        return LengthClass(kind="one", p=p, k=k, probable=p > trial_bound)
    return LengthClass(kind="unknown")
