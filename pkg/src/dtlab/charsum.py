"""Multiplicative characters, Gauss sums and numerical audits of the
character-sum identities and bounds used for Diophantine tuples.

Every check returns a :class:`CheckResult` so that audits from different
identities can be collected into a single CSV report.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isclose, sqrt
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .finite_field import FieldCtx, FieldError

IDENTITY_TOL = 1e-6
MAGNITUDE_RTOL = 1e-9


@dataclass(frozen=True)
class Character:
    """The character g**j -> exp(2 pi i m j / d), extended by chi(0) = 0."""

    ctx: FieldCtx
    d: int
    twist: int = 1

    def __post_init__(self):
        if self.d < 1 or (self.ctx.q - 1) % self.d:
            raise FieldError(f"d={self.d} does not divide q-1={self.ctx.q - 1}")
        if self.d > 1 and not (1 <= self.twist < self.d and gcd(self.twist, self.d) == 1):
            raise FieldError(f"twist {self.twist} does not give a character of order {self.d}")

    @property
    def trivial(self) -> bool:
        return self.d == 1

    def table(self) -> np.ndarray:
        """chi evaluated at every element, indexed by element."""
        vals = np.exp(2j * np.pi * self.twist * (self.ctx.log_table % self.d) / self.d)
        vals[0] = 0.0
        return vals

    def __call__(self, x: int) -> complex:
        if x == 0:
            return 0j
        j = self.ctx.discrete_log(x)
        return complex(np.exp(2j * np.pi * self.twist * (j % self.d) / self.d))

    def exponent(self, x: int) -> int | None:
        """k with chi(x) = exp(2 pi i k / d), or None for x = 0."""
        if x == 0:
            return None
        return self.twist * self.ctx.discrete_log(x) % self.d


def characters_of_order(ctx: FieldCtx, d: int) -> list[Character]:
    """All characters of exact order d."""
    twists = [1] if d == 1 else [m for m in range(1, d) if gcd(m, d) == 1]
    return [Character(ctx, d, m) for m in twists]


def additive_table(ctx: FieldCtx) -> np.ndarray:
    """e_p(Tr(x)) for every element x."""
    return np.exp(2j * np.pi * ctx.trace_table / ctx.p)


def gauss_sum(chi: Character) -> complex:
    return complex(np.sum(chi.table() * additive_table(chi.ctx)))


@dataclass(frozen=True)
class CheckResult:
    check_name: str
    q: int
    d: int
    lhs: float
    rhs: float | None
    bound: float | None
    holds: bool


def gauss_modulus_check(chi: Character) -> CheckResult:
    if chi.trivial:
        raise FieldError("the modulus identity needs a non-trivial character")
    mod = abs(gauss_sum(chi))
    root = sqrt(chi.ctx.q)
    return CheckResult("gauss_modulus", chi.ctx.q, chi.d, mod, root, MAGNITUDE_RTOL,
                       isclose(mod, root, rel_tol=MAGNITUDE_RTOL))


def inversion_errors(chi: Character) -> np.ndarray:
    """|conj(chi(a)) - G^{-1} sum_c chi(c) e_p(Tr(ac))| for every a, in one pass."""
    if chi.trivial:
        raise FieldError("the inversion identity needs a non-trivial character")
    F = chi.ctx
    xs = F.elements()
    prods = F.mul_arrays(xs[:, None], xs[None, :])
    psi = additive_table(F)[prods]
    chi_tab = chi.table()
    rhs = psi @ chi_tab / gauss_sum(chi)
    return np.abs(np.conj(chi_tab) - rhs)


def inversion_check(chi: Character, a: int | None = None) -> CheckResult:
    """Inversion identity at one point a, or the worst point over the field."""
    if a is None:
        err = float(inversion_errors(chi).max())
        name = "inversion_all"
    else:
        F = chi.ctx
        psi = additive_table(F)[F.mul_arrays(a, F.elements())]
        rhs = complex(np.sum(chi.table() * psi)) / gauss_sum(chi)
        err = abs(chi(a).conjugate() - rhs)
        name = "inversion"
    return CheckResult(name, chi.ctx.q, chi.d, err, 0.0, MAGNITUDE_RTOL, err <= MAGNITUDE_RTOL)


def twist_identity_check(chi: Character, A: Iterable[int]) -> CheckResult:
    F = chi.ctx
    A = np.array(sorted(set(A)), dtype=np.int64)
    if (A == 0).any():
        raise FieldError("the twisted second moment is taken over nonzero elements only")
    chi_a = chi.table()[A]
    psi = additive_table(F)[F.mul_arrays(F.nonzero()[:, None], A[None, :])]
    lhs = float(np.sum(np.abs(psi @ chi_a) ** 2))
    rhs = F.q * len(A) - abs(chi_a.sum()) ** 2
    return CheckResult("twist_identity", F.q, chi.d, lhs, rhs, IDENTITY_TOL,
                       abs(lhs - rhs) <= IDENTITY_TOL)


def symmetric_bound_check(chi: Character, A: Iterable[int], B: Iterable[int], lam: int) -> CheckResult:
    F = chi.ctx
    if chi.trivial:
        raise FieldError("the symmetric bound needs a non-trivial character")
    if lam == 0:
        raise FieldError("the symmetric bound needs lambda != 0")
    A = np.array(sorted(set(A)), dtype=np.int64)
    B = np.array(sorted(set(B)), dtype=np.int64)
    if (A == 0).any() or (B == 0).any():
        raise FieldError("A and B must avoid 0")
    shifted = F.add_arrays(F.mul_arrays(A[:, None], B[None, :]), lam)
    total = abs(complex(chi.table()[shifted].sum()))
    bound = sqrt(F.q * len(A) * len(B) * (1 - max(len(A), len(B)) / F.q))
    return CheckResult("symmetric_bound", F.q, chi.d, total, None, bound, total <= bound + IDENTITY_TOL)


def count_solutions(chi: Character, shifts: Sequence[int], targets: Sequence[int]) -> int:
    """#{x : chi(x + a_i) = exp(2 pi i t_i / d) for all i}; targets are the exponents t_i."""
    F = chi.ctx
    if len(set(shifts)) != len(shifts):
        raise FieldError("shifts must be distinct")
    if len(shifts) != len(targets):
        raise ValueError("one target per shift")
    ok = np.ones(F.q, dtype=bool)
    xs = F.elements()
    for a, t in zip(shifts, targets):
        moved = F.add_arrays(xs, a)
        ok &= (moved != 0) & ((chi.twist * F.log_table[moved]) % chi.d == t % chi.d)
    return int(ok.sum())


def counting_solutions_check(chi: Character, shifts: Sequence[int], targets: Sequence[int]) -> CheckResult:
    q, d, k = chi.ctx.q, chi.d, len(shifts)
    n_sol = count_solutions(chi, shifts, targets)
    deviation = abs(n_sol - q / d**k)
    bound = (k - 1 - k / d + d**-k) * sqrt(q) + k / d if k else 0.0
    return CheckResult("counting_solutions", q, d, float(n_sol), q / d**k, bound,
                       deviation <= bound + MAGNITUDE_RTOL)


def root_structure(ctx: FieldCtx, g: poly.Poly, d: int) -> tuple[int, bool]:
    """Number of distinct roots of g over the algebraic closure, and whether
    g is the d-th power of a polynomial.  g must be monic of positive degree."""
    parts = poly.squarefree_decomposition(ctx, g)
    distinct = sum(poly.degree(f) for f in parts.values())
    is_power = all(mult % d == 0 for mult in parts)
    return distinct, is_power


def weil_bound_check(chi: Character, g: poly.Poly, a: int = 1) -> CheckResult:
    F = chi.ctx
    g = poly.trim(g)
    if poly.degree(g) < 1:
        raise FieldError("Weil's bound needs a non-constant polynomial")
    if g[-1] != 1:
        raise FieldError("Weil's bound is applied to monic polynomials")
    if a == 0:
        raise FieldError("the scalar a must be nonzero")
    distinct, is_power = root_structure(F, g, chi.d)
    if is_power:
        raise FieldError(f"g is a perfect {chi.d}-th power; the bound does not apply")
    values = F.mul_arrays(a, poly.evaluate_all(F, g))
    total = abs(complex(chi.table()[values].sum()))
    bound = (distinct - 1) * sqrt(F.q)
    return CheckResult("weil_bound", F.q, chi.d, total, None, bound, total <= bound + IDENTITY_TOL)


def random_audit(ctx: FieldCtx, d: int, trials: int, rng: np.random.Generator) -> list[CheckResult]:
    """Gauss modulus and inversion for every character of order d, then
    ``trials`` random instances of the twist identity, the symmetric bound, the
    solution count and Weil's bound, each drawn with a random such character."""
    if d < 2:
        raise FieldError("the audit needs characters of order at least 2")
    chars = characters_of_order(ctx, d)
    out: list[CheckResult] = []
    for chi in chars:
        out.append(gauss_modulus_check(chi))
        out.append(inversion_check(chi))
    nonzero = np.arange(1, ctx.q)

    def subset() -> list[int]:
        size = int(rng.integers(1, ctx.q))
        return sorted(int(x) for x in rng.choice(nonzero, size=size, replace=False))

    for _ in range(trials):
        chi = chars[int(rng.integers(len(chars)))]
        out.append(twist_identity_check(chi, subset()))
        out.append(symmetric_bound_check(chi, subset(), subset(), int(rng.integers(1, ctx.q))))
        k = int(rng.integers(1, min(4, ctx.q) + 1))
        shifts = [int(x) for x in rng.choice(ctx.q, size=k, replace=False)]
        out.append(counting_solutions_check(chi, shifts, [int(t) for t in rng.integers(0, d, size=k)]))
        while True:
            g = [int(x) for x in rng.integers(0, ctx.q, size=int(rng.integers(1, 5)))] + [1]
            if not root_structure(ctx, g, d)[1]:
                break
        out.append(weil_bound_check(chi, g, int(rng.integers(1, ctx.q))))
    return out
