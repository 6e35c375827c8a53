"""Integer kernel tests: primality against a sieve, factorizations against
brute force, and the classification edge cases that scans rely on."""

import os
import random

import pytest
from gmpy2 import mpz

from ellscan.arith import (
    DEFAULT_TRIAL_BOUND,
    is_probable_prime,
    length_classify,
    perfect_power_decompose,
    prime_power_decompose,
    primes_up_to,
    trial_factor,
)


def sieve_flags(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return flags


def trial_division_is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# composites that pass the strong base-2 test; the Lucas stage must kill them
STRONG_BASE2_PSEUDOPRIMES = [
    2047, 3277, 4033, 4681, 8321, 15841, 29341, 42799, 49141, 52633,
    65281, 74665, 80581, 85489, 88357, 90751, 104653, 130561, 196093,
    220729, 233017, 252601, 253241, 256999, 271951, 280601, 314821,
    357761, 390937, 458989, 476971, 486737,
]


def test_primes_up_to():
    assert primes_up_to(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert primes_up_to(1) == ()
    assert len(primes_up_to(100_000)) == 9592


def test_is_probable_prime_small_examples():
    assert is_probable_prime(2)
    assert is_probable_prime(29)
    assert not is_probable_prime(341)  # 11 * 31, base-2 Fermat pseudoprime
    assert not is_probable_prime(1)
    assert not is_probable_prime(0)


def test_is_probable_prime_matches_sieve():
    limit = 200_000
    flags = sieve_flags(limit)
    for n in range(limit):
        assert is_probable_prime(n) == bool(flags[n]), n


def test_strong_base2_pseudoprimes_rejected():
    for n in STRONG_BASE2_PSEUDOPRIMES:
        assert not is_probable_prime(n), n


def test_is_probable_prime_random_samples_to_1e7():
    rng = random.Random(20260809)
    for _ in range(10_000):
        n = rng.randrange(2, 10_000_000)
        assert is_probable_prime(n) == trial_division_is_prime(n), n


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("ELLSCAN_SLOW") != "1",
                    reason="full 1e7 sweep takes several minutes")
def test_is_probable_prime_full_sweep_1e7():
    limit = 10_000_000
    flags = sieve_flags(limit)
    for n in range(limit):
        assert is_probable_prime(n) == bool(flags[n]), n


def test_is_probable_prime_large():
    # 2^127 - 1 is prime; 2^128 + 1 = 59649589127497217 * 5704689200685129054721
    assert is_probable_prime(2**127 - 1)
    assert not is_probable_prime(2**128 + 1)
    p = 10**50 + 151  # prime
    assert is_probable_prime(p)
    assert not is_probable_prime(p * (10**48 + 193))


def test_perfect_power_examples():
    assert perfect_power_decompose(64) == (2, 6)
    assert perfect_power_decompose(36) == (6, 2)
    assert perfect_power_decompose(17) == (17, 1)
    assert perfect_power_decompose(2) == (2, 1)


def test_perfect_power_round_trip():
    rng = random.Random(7)
    for _ in range(300):
        base = rng.randrange(2, 50)
        exp = rng.randrange(1, 12)
        n = base**exp
        b, k = perfect_power_decompose(n)
        assert mpz(b) ** k == n
        # maximality: the base is not itself a perfect power
        assert perfect_power_decompose(b)[1] == 1


def test_prime_power_examples():
    assert prime_power_decompose(343) == (7, 3)
    assert prime_power_decompose(12) is None
    assert prime_power_decompose(841) == (29, 2)


def test_prime_power_all_small_primes():
    for p in primes_up_to(1000):
        n = 1
        for k in range(1, 21):
            n *= p
            assert prime_power_decompose(n) == (p, k), (p, k)


def test_trial_factor_examples():
    pf = trial_factor(720, 10)
    assert pf.small_factors == ((2, 4), (3, 2), (5, 1))
    assert pf.cofactor == 1
    assert pf.cofactor_status == "unit"
    assert pf.check()

    pf = trial_factor(13, 100_000)
    assert pf.small_factors == ((13, 1),)
    assert pf.cofactor == 1

    pf = trial_factor(2 * 10**9 + 33, 1000)
    assert pf.check()
    for p, _ in pf.small_factors:
        assert p <= 1000
        assert trial_division_is_prime(p)
    if pf.cofactor > 1:
        assert all(pf.cofactor % p for p in primes_up_to(1000))


def test_trial_factor_against_brute_force():
    rng = random.Random(99)
    ns = list(range(1, 3000)) + [rng.randrange(1, 10**6) for _ in range(2000)]
    for n in ns:
        pf = trial_factor(n, 1000)
        assert pf.check(), n
        rest = n
        for p, e in pf.small_factors:
            assert trial_division_is_prime(p) and p <= 1000
            for _ in range(e):
                assert rest % p == 0
                rest //= p
            assert rest % p != 0  # exponent is exact
        assert rest == pf.cofactor
        if pf.cofactor > 1:
            assert all(pf.cofactor % p for p in primes_up_to(1000))
            status = "probable_prime" if trial_division_is_prime(pf.cofactor) \
                else "composite_unresolved"
            assert pf.cofactor_status == status


def test_trial_factor_big_path_matches_small_path():
    # the > 64-bit branch uses the primorial gcd; force both on the same value
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randrange(2, 10**9)
        big = mpz(n) << 100  # pushes through the big-number branch
        pf_big = trial_factor(big, 10_000)
        assert pf_big.check()
        pf_small = trial_factor(n, 10_000)
        merged = dict(pf_small.small_factors)
        merged[2] = merged.get(2, 0) + 100
        assert dict(pf_big.small_factors) == merged
        assert pf_big.cofactor == pf_small.cofactor


def oracle_distinct_primes(n):
    count = 0
    i = 2
    while i * i <= n:
        if n % i == 0:
            count += 1
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        count += 1
    return count


def check_class_against_oracle(n, cls):
    distinct = oracle_distinct_primes(n)
    if distinct == 0:
        assert cls.kind == "zero"
    elif distinct == 1:
        assert cls.kind == "one"
        assert mpz(cls.p) ** cls.k == n
        assert trial_division_is_prime(cls.p)
    else:
        assert cls.kind == "at_least_two"
        w1, w2 = cls.witnesses
        from math import gcd
        assert w1 > 1 and w2 > 1
        assert n % w1 == 0 and n % w2 == 0
        assert gcd(w1, w2) == 1


def test_length_classify_examples():
    assert length_classify(1).kind == "zero"
    cls = length_classify(2)
    assert (cls.kind, cls.p, cls.k) == ("one", 2, 1)
    cls = length_classify(6)
    assert cls.kind == "at_least_two"
    cls = length_classify(841)
    assert (cls.kind, cls.p, cls.k) == ("one", 29, 2)
    assert cls.is_prime_power_denominator and not cls.is_prime_denominator
    with pytest.raises(ValueError):
        length_classify(0)


def test_length_classify_oracle_sample():
    rng = random.Random(11)
    for n in list(range(1, 5000)) + [rng.randrange(1, 10**6) for _ in range(3000)]:
        check_class_against_oracle(n, length_classify(n))


def test_length_classify_big_numbers():
    p = 10**50 + 151
    q = 10**48 + 193  # also prime
    cls = length_classify(p)
    assert (cls.kind, cls.k) == ("one", 1) and cls.probable
    cls = length_classify(p * p)
    assert (cls.kind, cls.p, cls.k) == ("one", int(p), 2)
    cls = length_classify(p * q)
    assert cls.kind == "unknown"  # composite, no small factor, not a power
    cls = length_classify(12 * p)
    assert cls.kind == "at_least_two"
    cls = length_classify(mpz(2) ** 400)
    assert (cls.kind, cls.p, cls.k) == ("one", 2, 400)
    cls = length_classify(3 * p**2)
    assert cls.kind == "at_least_two"
    w1, w2 = cls.witnesses
    assert w1 == 3 and w2 == p * p


def test_length_classify_respects_trial_bound():
    # 101 * p stays unresolved when the bound is below 101
    p = 10**50 + 151
    cls = length_classify(101 * p, trial_bound=50)
    assert cls.kind == "unknown"
    cls = length_classify(101 * p, trial_bound=200)
    assert cls.kind == "at_least_two"


def test_determinism():
    vals = [2**89 - 1, 10**50 + 151, 842, 6, 2**400]
    for v in vals:
        assert length_classify(v) == length_classify(v)
        assert is_probable_prime(v) == is_probable_prime(v)
