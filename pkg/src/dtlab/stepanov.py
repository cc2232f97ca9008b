"""Certificates from Stepanov's polynomial method.

Given A, B with AB + lambda inside S_d u {0}, we build the auxiliary
polynomial explicitly, then check with hyper-derivatives that it vanishes to
the claimed order at every point of B.  A nonzero polynomial cannot have more
roots (with multiplicity) than its degree, which is what turns the vanishing
data into the bound |A||B| <= |S_d| + r + |A| - 1.

The restricted variant handles a single set A' whose pairwise products
a a' + lambda (a != a') land in S_d u {0} while some square b*b + lambda
does not.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import sqrt
from typing import Sequence

from . import poly
from .finite_field import FieldCtx, FieldError

PRODUCT = "product"
RESTRICTED = "restricted"


class HypothesisError(ValueError):
    """The input sets do not satisfy the hypothesis of the certificate."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class InapplicableError(ValueError):
    """The binomial coefficient guarding the leading term vanishes mod p."""

    def __init__(self, m: int, n: int, p: int, carry_position: int):
        super().__init__(
            f"C({m + n}, {n}) vanishes mod {p}: adding {m} and {n} in base {p} "
            f"carries at digit {carry_position}"
        )
        self.carry_position = carry_position


def first_carry(m: int, n: int, p: int) -> int | None:
    """Digit position of the first carry when adding m and n in base p, or None."""
    pos, carry = 0, 0
    while m or n or carry:
        s = m % p + n % p + carry
        if s >= p:
            return pos
        carry = 0
        m //= p
        n //= p
        pos += 1
    return None


def binom_nonzero_mod_p(m: int, n: int, p: int) -> bool:
    """True iff p does not divide C(m + n, n), i.e. no base-p carry (Kummer)."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    return first_carry(m, n, p) is None


def solve_linear(F: FieldCtx, matrix: list[list[int]], rhs: list[int]) -> list[int]:
    """Gauss-Jordan elimination over F_q for a square nonsingular system."""
    n = len(matrix)
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if rows[i][col]), None)
        if pivot is None:
            raise AssertionError("singular generalized Vandermonde system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = F.inv(rows[col][col])
        rows[col] = [F.mul(inv, v) for v in rows[col]]
        for i in range(n):
            if i != col and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [F.sub(v, F.mul(factor, w)) for v, w in zip(rows[i], rows[col])]
    return [row[n] for row in rows]


def moment(F: FieldCtx, c: Sequence[int], A: Sequence[int], j: int) -> int:
    """sum_i c_i a_i**j (j may be negative)."""
    acc = 0
    for ci, ai in zip(c, A):
        acc = F.add(acc, F.mul(ci, F.pow(ai, j)))
    return acc


def _check_elements(A: Sequence[int]) -> None:
    if len(set(A)) != len(A):
        raise FieldError("elements of A must be distinct")
    if 0 in A:
        raise FieldError("elements of A must be nonzero")


def moment_exponents(n: int, variant: str) -> tuple[list[int], list[int]]:
    """Exponents j and right-hand sides of the moment equations for |A| = n."""
    if variant == PRODUCT:
        exps = list(range(n))
        return exps, [1] + [0] * (n - 1)
    if variant == RESTRICTED:
        if n % 2:
            raise FieldError("the restricted system needs an even number of elements")
        m = n // 2 - 1
        return list(range(-m, m + 2)), [0] * (2 * m + 1) + [1]
    raise ValueError(f"unknown variant {variant!r}")


def solve_vandermonde_system(F: FieldCtx, A: Sequence[int], variant: str = PRODUCT) -> list[int]:
    A = list(A)
    _check_elements(A)
    exps, rhs = moment_exponents(len(A), variant)
    matrix = [[F.pow(a, j) for a in A] for j in exps]
    c = solve_linear(F, matrix, rhs)
    if variant == PRODUCT and moment(F, c, A, len(A)) == 0:
        raise AssertionError("top moment vanished; the system was solved incorrectly")
    if variant == RESTRICTED and c[0] == 0:
        raise AssertionError("c_1 vanished; the system was solved incorrectly")
    return c


def build_auxiliary_poly(F: FieldCtx, A: Sequence[int], lam: int, d: int,
                         variant: str = PRODUCT, c: Sequence[int] | None = None) -> poly.Poly:
    F._check_divisor(d)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    A = list(A)
    n = len(A)
    if c is None:
        c = solve_vandermonde_system(F, A, variant)
    e = (F.q - 1) // d
    f: poly.Poly = []
    if variant == PRODUCT:
        carry = first_carry(e - 1, n, F.p)
        if carry is not None:
            raise InapplicableError(e - 1, n, F.p, carry)
        for ci, ai in zip(c, A):
            f = poly.add(F, f, poly.scale(F, poly.linear_power(F, ai, lam, n - 1 + e), ci))
        f = poly.add(F, f, [F.neg(F.pow(lam, n - 1))])
        expected = F.mul(
            F.mul(F.from_int(poly.binom_mod_p(n - 1 + e, n, F.p)), F.pow(lam, e - 1)),
            moment(F, c, A, n),
        )
        got = f[n] if len(f) > n else 0
        if got != expected or got == 0:
            raise AssertionError("leading-term bookkeeping failed for the auxiliary polynomial")
    else:
        m = n // 2 - 1
        for ci, ai in zip(c, A):
            left = poly.linear_power(F, ai, lam, m + e)
            right = poly.linear_power(F, F.inv(ai), F.neg(1), m)
            f = poly.add(F, f, poly.scale(F, poly.mul(F, left, right), ci))
    return f


def vanishing_order(F: FieldCtx, derivs: list[poly.Poly], x: int) -> int:
    """Largest k <= len(derivs) with E^(j) f (x) = 0 for all j < k."""
    for k, g in enumerate(derivs):
        if poly.evaluate(F, g, x):
            return k
    return len(derivs)


@dataclass
class StepanovCertificate:
    variant: str
    q: int
    d: int
    lam: int
    A: list[int]
    B: list[int]
    n: int
    c: list[int]
    f: list[int] = field(repr=False)
    degree: int
    degree_cap: int
    nonzero_witness: dict
    multiplicities: dict[int, int]
    intersection_size: int
    lambda_is_dth_power: bool
    implied_bound: float
    bound_holds: bool
    discarded: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["multiplicities"] = [[x, k] for x, k in sorted(self.multiplicities.items())]
        return out


def closed_under_shift(F: FieldCtx, A, B, lam: int, d: int, *, skip_diagonal: bool = False):
    """First pair (a, b) with a b + lambda outside S_d u {0}, or None."""
    mask = F.dth_power_mask(d)
    for a in A:
        for b in B:
            if skip_diagonal and a == b:
                continue
            v = F.add(F.mul(a, b), lam)
            if v and not mask[v]:
                return a, b
    return None


def verify_stepanov(F: FieldCtx, A: Sequence[int], B: Sequence[int], lam: int, d: int,
                    variant: str = PRODUCT) -> StepanovCertificate:
    if variant == RESTRICTED:
        return verify_restricted(F, A, lam, d)
    if variant != PRODUCT:
        raise ValueError(f"unknown variant {variant!r}")
    F._check_divisor(d)
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise FieldError("A and B must be nonempty")
    _check_elements(A)
    _check_elements(B)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    bad = closed_under_shift(F, A, B, lam, d)
    if bad:
        raise HypothesisError(f"{bad[0]}*{bad[1]} + {lam} is not in S_{d} or 0", bad)

    n = len(A)
    e = (F.q - 1) // d
    c = solve_vandermonde_system(F, A, PRODUCT)
    f = build_auxiliary_poly(F, A, lam, d, PRODUCT, c)
    derivs = [poly.hyper_derivative(F, f, k) for k in range(n)]
    poles = {F.neg(F.div(lam, a)) for a in A}
    lam_in_sd = F.is_dth_power(lam, d)

    multiplicities: dict[int, int] = {}
    for b in B:
        claimed = n - 1 if b in poles else n
        got = vanishing_order(F, derivs[:claimed], b)
        if got < claimed:
            raise AssertionError(f"E^({got}) f does not vanish at {b}")
        multiplicities[b] = claimed
    if lam_in_sd:
        if vanishing_order(F, derivs, 0) < n:
            raise AssertionError("f does not vanish to order n at 0")
        multiplicities[0] = n

    deg = poly.degree(f)
    if sum(multiplicities.values()) > deg:
        raise AssertionError("more roots than the degree allows")
    r = sum(1 for b in B if b in poles)
    implied = e + r + (-1 if lam_in_sd else n - 1)
    return StepanovCertificate(
        variant=PRODUCT, q=F.q, d=d, lam=lam, A=A, B=B, n=n, c=c, f=f,
        degree=deg, degree_cap=n - 1 + e,
        nonzero_witness={"coefficient": n, "value": f[n]},
        multiplicities=multiplicities, intersection_size=r,
        lambda_is_dth_power=lam_in_sd, implied_bound=implied,
        bound_holds=len(A) * len(B) <= implied,
    )


def verify_restricted(F: FieldCtx, A_prime: Sequence[int], lam: int, d: int) -> StepanovCertificate:
    F._check_divisor(d)
    A_prime = sorted(set(A_prime))
    _check_elements(A_prime)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    bad = closed_under_shift(F, A_prime, A_prime, lam, d, skip_diagonal=True)
    if bad:
        raise HypothesisError(f"{bad[0]}*{bad[1]} + {lam} is not in S_{d} or 0", bad)
    mask = F.dth_power_mask(d)

    def off_diagonal(x: int) -> bool:
        v = F.add(F.mul(x, x), lam)
        return v != 0 and not mask[v]

    b = next((x for x in A_prime if off_diagonal(x)), None)
    if b is None:
        raise HypothesisError("every b*b + lambda lies in S_d or 0; use the product variant")

    discarded = [x for x in A_prime if x == F.neg(F.div(lam, b))]
    rest = [x for x in A_prime if x not in discarded]
    if len(rest) % 2 and len(rest) > 1:
        parity = next(x for x in rest if x != b)
        discarded.append(parity)
        rest.remove(parity)
    e = (F.q - 1) // d
    implied = sqrt(2 * (F.q - 1) / d) + 4
    base = dict(variant=RESTRICTED, q=F.q, d=d, lam=lam, A=A_prime, B=A_prime,
                lambda_is_dth_power=F.is_dth_power(lam, d), intersection_size=0,
                implied_bound=implied, bound_holds=len(A_prime) <= implied + 1e-12,
                discarded=discarded)
    if len(rest) <= 1:
        return StepanovCertificate(n=len(rest), c=[], f=[], degree=-1, degree_cap=e,
                                   nonzero_witness={}, multiplicities={}, **base)

    A = [b] + [x for x in rest if x != b]
    n = len(A)
    m = n // 2 - 1
    c = solve_vandermonde_system(F, A, RESTRICTED)
    f = build_auxiliary_poly(F, A, lam, d, RESTRICTED, c)
    derivs = [poly.hyper_derivative(F, f, k) for k in range(m + 1)]
    multiplicities = {}
    for a in A:
        if vanishing_order(F, derivs[:m], a) < m:
            raise AssertionError(f"f does not vanish to order {m} at {a}")
        multiplicities[a] = m
    witness_value = poly.evaluate(F, derivs[m], b)
    if witness_value == 0:
        raise AssertionError("E^(m) f (b) vanished, so f may be identically zero")
    deg = poly.degree(f)
    if sum(multiplicities.values()) > deg:
        raise AssertionError("more roots than the degree allows")
    return StepanovCertificate(
        n=n, c=c, f=f, degree=deg, degree_cap=2 * m + e,
        nonzero_witness={"derivative_order": m, "point": b, "value": witness_value},
        multiplicities=multiplicities, **base,
    )
