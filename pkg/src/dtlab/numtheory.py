"""Small integer helpers shared by the field and sieve code."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (inputs here stay below 2**40)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**r``; raise ``ValueError`` if q is not a prime power."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, r),) = fac.items()
    return p, r


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for f in range(2, isqrt(n) + 1):
        if sieve[f]:
            sieve[f * f :: f] = False
    return np.flatnonzero(sieve).tolist()


def smallest_prime_factors(n: int) -> np.ndarray:
    """Array ``spf`` with ``spf[m]`` the least prime dividing m (for 2 <= m <= n)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for f in range(2, n + 1):
        if spf[f] == 0:
            spf[f] = f
            if f * f <= n:
                block = spf[f * f :: f]
                block[block == 0] = f
    return spf


def factorize_with(spf: np.ndarray, n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        f = int(spf[n])
        n //= f
        out[f] = out.get(f, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, a in factorize(n).items():
        divs = [x * p**e for x in divs for e in range(a + 1)]
    return sorted(divs)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def iroot(m: int, k: int) -> int:
    """Largest integer ``x >= 0`` with ``x**k <= m`` (exact, no floating point)."""
    if m < 0:
        raise ValueError("negative radicand")
    if m < 2 or k == 1:
        return m
    if k == 2:
        return isqrt(m)
    x = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > m:
        x -= 1
    while (x + 1) ** k <= m:
        x += 1
    return x
