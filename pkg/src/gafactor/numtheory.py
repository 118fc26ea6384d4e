"""Exact integer utilities: digit lengths, primality, semiprime generation and
the search-space-shrinkage metric.

Everything here works on Python ints, so no value is ever rounded except in
:func:`sss`, which is a reporting metric evaluated in double precision.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import CapacityExceeded, EmptySearchSpace, PrimeInput

# Largest semiprime the toolkit accepts; keeps sqrt(M) inside an unsigned 64-bit word.
MAX_M = (1 << 128) - 1
MIN_SEMIPRIME_DIGITS = 4
MAX_SEMIPRIME_DIGITS = 38

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the first 13 prime bases is exact below this bound
# (Sorenson and Webster, 2015).
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def isqrt(n: int) -> int:
    """Floor of the square root of ``n``, computed exactly."""
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("gcd is defined here for nonnegative integers")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def digit_count(n: int) -> int:
    """Number of decimal digits of a nonnegative integer (0 has one digit)."""
    return len(str(n))


def factor_digit_length(d_m: int) -> int:
    """Decimal length of each prime factor of a balanced semiprime with ``d_m`` digits."""
    if d_m < 1:
        raise ValueError("digit count must be positive")
    return d_m // 2 if d_m % 2 == 0 else (d_m + 1) // 2


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge parameter choice: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
        if d == 13 and math.isqrt(n) ** 2 == n:
            return False
    p, q = 1, (1 - d) // 4

    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1

    inv2 = (n + 1) // 2
    u, v, qk = 1, p, q % n
    for bit in bin(k)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (d * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic Miller-Rabin below 3.3e24, which covers every prime factor
    of a 38-digit balanced semiprime. Above that bound a strong Lucas test is
    added (Baillie-PSW), which has no known counterexample.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    if not all(_strong_probable_prime(n, b) for b in _SMALL_PRIMES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    return _strong_lucas_probable_prime(n)


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    n |= 1
    while not is_prime(n):
        n += 2
    return n


@dataclass(frozen=True)
class FactorizationProblem:
    """A semiprime together with its shrunk factor interval [lower, upper]."""

    M: int
    digits: int
    factor_digits: int
    lower: int
    upper: int

    @property
    def size(self) -> int:
        return self.upper - self.lower + 1

    @property
    def search_lower(self) -> int:
        # 1 divides everything; only matters for 2-digit M.
        return max(self.lower, 2)


@dataclass(frozen=True)
class SemiprimeRecord:
    M: int
    p: int
    q: int
    digits: int


def build_problem(M: int) -> FactorizationProblem:
    if M < 10:
        raise ValueError(f"M must have at least two digits, got {M}")
    if M > MAX_M:
        raise CapacityExceeded(f"M exceeds 128 bits: {M}")
    if M % 2 == 0:
        raise ValueError(f"M must be odd, got {M}")
    if is_prime(M):
        raise PrimeInput(f"{M} is prime")
    d_m = digit_count(M)
    d_j = factor_digit_length(d_m)
    lower = 10 ** (d_j - 1)
    upper = isqrt(M)
    if lower >= upper:
        raise EmptySearchSpace(
            f"interval [{lower}, {upper}] is empty; {M} is not a balanced semiprime"
        )
    return FactorizationProblem(M=M, digits=d_m, factor_digits=d_j, lower=lower, upper=upper)


def sss(problem: FactorizationProblem) -> float:
    """Percentage of the classical interval (2, sqrt M) cut away by the raised lower bound."""
    root = math.sqrt(float(problem.M))
    return (problem.lower - 2) / (root - 2) * 100.0


def generate_semiprime(digits: int, seed: int) -> SemiprimeRecord:
    """Random balanced semiprime with exactly ``digits`` decimal digits.

    Both factors are drawn as the next prime after a uniform odd integer of
    the factor length; pairs whose product has the wrong length, or equal
    factors, are redrawn. Deterministic in ``seed`` (Mersenne Twister).
    """
    if not MIN_SEMIPRIME_DIGITS <= digits <= MAX_SEMIPRIME_DIGITS:
        raise CapacityExceeded(
            f"digits must lie in [{MIN_SEMIPRIME_DIGITS}, {MAX_SEMIPRIME_DIGITS}], got {digits}"
        )
    rng = random.Random(seed)
    d_j = factor_digit_length(digits)
    lo, hi = 10 ** (d_j - 1), 10**d_j
    lo_m, hi_m = 10 ** (digits - 1), 10**digits

    def draw() -> int:
        while True:
            p = next_prime(rng.randrange(lo + 1, hi, 2))
            if p < hi:
                return p

    while True:
        p, q = draw(), draw()
        if p == q:
            continue
        if lo_m <= p * q < hi_m:
            p, q = min(p, q), max(p, q)
            return SemiprimeRecord(M=p * q, p=p, q=q, digits=digits)
