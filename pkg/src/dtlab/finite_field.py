"""Explicit finite fields F_q with q = p**r, driven by discrete-log tables.

An element is an integer ``idx`` in ``[0, q)``.  Its base-p digits are the
coefficients (constant term first) of the residue polynomial modulo the
defining irreducible, so the prime subfield F_p is exactly ``{0, ..., p-1}``.
Multiplication goes through the log/exp tables; addition is digit-wise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .numtheory import factorize, is_prime, prime_power

MAX_FIELD_SIZE = 2**20


class FieldError(ValueError):
    """Raised for invalid field parameters or domain errors (e.g. inverting 0)."""


# ---------------------------------------------------------------------------
# Polynomials over the prime field, used only while constructing the field.
# Coefficient lists are ascending and carry no trailing zeros.


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible_mod_p(poly: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (ascending coefficients)."""
    n = len(poly) - 1
    if n < 1:
        return False
    x = [0, 1]
    if _psub(_ppowmod(x, p**n, poly, p), x, p):
        return False
    for ell in factorize(n):
        h = _psub(_ppowmod(x, p ** (n // ell), poly, p), x, p)
        if len(_pgcd(poly, h, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, r: int) -> list[int]:
    """Monic irreducible of degree r whose low coefficients, read as a base-p
    integer, are smallest."""
    for low in range(p**r):
        coeffs = [(low // p**i) % p for i in range(r)] + [1]
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise AssertionError(f"no irreducible of degree {r} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldCtx:
    p: int
    r: int
    q: int
    modulus: tuple[int, ...]
    generator: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)

    # -- conversions -------------------------------------------------------

    def digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.r)]

    def from_digits(self, coeffs: Iterable[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def _check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of F_{self.q}")
        return x

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.r == 1:
            return (x + y) % self.p
        return int(self.add_arrays(np.int64(x), np.int64(y)))

    def neg(self, x: int) -> int:
        if self.r == 1:
            return (-x) % self.p
        return int(self.neg_array(np.int64(x)))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp_table[(self.log_table[x] + self.log_table[y]) % (self.q - 1)])

    def inv(self, x: int) -> int:
        if x == 0:
            raise FieldError("0 has no multiplicative inverse")
        return int(self.exp_table[(-self.log_table[x]) % (self.q - 1)])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise FieldError("0 has no multiplicative inverse")
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[x]) * e) % (self.q - 1)])

    def discrete_log(self, x: int) -> int:
        if x == 0:
            raise FieldError("discrete log of 0 is undefined")
        return int(self.log_table[self._check(x)])

    def is_dth_power(self, x: int, d: int) -> bool:
        self._check_divisor(d)
        return bool(x != 0 and self.log_table[x] % d == 0)

    def trace(self, x: int) -> int:
        return int(self.trace_table[self._check(x)])

    def _check_divisor(self, d: int) -> None:
        if d < 1 or (self.q - 1) % d:
            raise FieldError(f"d={d} does not divide q-1={self.q - 1}")

    # -- vectorised helpers ---------------------------------------------------

    def add_arrays(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.r == 1:
            return (x + y) % self.p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        place = 1
        for _ in range(self.r):
            out += ((x // place % self.p + y // place % self.p) % self.p) * place
            place *= self.p
        return out

    def neg_array(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.r == 1:
            return (-x) % self.p
        out = np.zeros_like(x)
        place = 1
        for _ in range(self.r):
            out += ((-(x // place % self.p)) % self.p) * place
            place *= self.p
        return out

    def mul_arrays(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        logs = (self.log_table[x] + self.log_table[y]) % (self.q - 1)
        return np.where((x == 0) | (y == 0), 0, self.exp_table[logs])

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    def dth_power_mask(self, d: int) -> np.ndarray:
        """Boolean mask over all q elements marking S_d (0 excluded)."""
        self._check_divisor(d)
        mask = self.log_table % d == 0
        mask[0] = False
        return mask

    def dth_powers(self, d: int) -> list[int]:
        self._check_divisor(d)
        return sorted(int(self.exp_table[j]) for j in range(0, self.q - 1, d))

    def subfield(self, s: int) -> list[int]:
        """Elements of the subfield of size p**s (s must divide r)."""
        if s < 1 or self.r % s:
            raise FieldError(f"F_{self.p}^{s} is not a subfield of F_{self.q}")
        e = self.p**s
        return [x for x in range(self.q) if self.pow(x, e) == x]


@lru_cache(maxsize=64)
def build_field(p: int, r: int = 1) -> FieldCtx:
    """Construct F_{p^r} with a deterministic modulus and generator."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if r < 1:
        raise FieldError(f"extension degree must be >= 1, got {r}")
    q = p**r
    if q > MAX_FIELD_SIZE:
        raise FieldError(f"q={q} exceeds the supported size {MAX_FIELD_SIZE}")

    order_factors = list(factorize(q - 1)) if q > 2 else []
    if r == 1:
        modulus: tuple[int, ...] = ()
        generator = next(
            g for g in range(1, p) if all(pow(g, (q - 1) // ell, p) != 1 for ell in order_factors)
        )
        exp_table = np.empty(q - 1, dtype=np.int64)
        acc = 1
        for j in range(q - 1):
            exp_table[j] = acc
            acc = acc * generator % p
    else:
        mod = smallest_irreducible(p, r)
        modulus = tuple(mod)

        def as_poly(x: int) -> list[int]:
            return _trim([(x // p**i) % p for i in range(r)])

        def as_idx(poly: list[int]) -> int:
            return sum(c * p**i for i, c in enumerate(poly))

        generator = next(
            g
            for g in range(1, q)
            if all(_ppowmod(as_poly(g), (q - 1) // ell, mod, p) != [1] for ell in order_factors)
        )
        exp_table = np.empty(q - 1, dtype=np.int64)
        gpoly = as_poly(generator)
        acc = [1]
        for j in range(q - 1):
            exp_table[j] = as_idx(acc)
            acc = _pmulmod(acc, gpoly, mod, p)

    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    if (log_table[1:] < 0).any():
        raise AssertionError("generator does not have full order")  # pragma: no cover

    ctx = FieldCtx(p, r, q, modulus, generator, exp_table, log_table, np.zeros(q, dtype=np.int64))
    # Tr(x) = x + x^p + ... + x^{p^{r-1}}, evaluated for every element at once.
    xs = ctx.elements()
    logs = log_table[xs]
    total = np.zeros(q, dtype=np.int64)
    for i in range(r):
        powered = np.where(xs == 0, 0, exp_table[(logs * p**i) % (q - 1)])
        total = ctx.add_arrays(total, powered)
    if (total >= p).any():
        raise AssertionError("trace left the prime field")  # pragma: no cover
    ctx.trace_table[:] = total
    for arr in (ctx.exp_table, ctx.log_table, ctx.trace_table):
        arr.setflags(write=False)
    return ctx


def field_of_size(q: int) -> FieldCtx:
    try:
        p, r = prime_power(q)
    except ValueError:
        raise FieldError(f"q={q} is not a prime power") from None
    return build_field(p, r)
