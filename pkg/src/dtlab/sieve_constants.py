"""Sieve constants for generalized Diophantine tuples over the integers.

For k >= 2 the candidate residues are the i in [1, k] with gcd(i, k) = 1 and
gcd(i - 1, k) > 1, each weighted by sqrt(gcd(i - 1, k)).  The constant eta_k
is the least |I| / T_I**2 over nonempty sets I of candidates, where T_I is
the total weight of I.  For a fixed size the heaviest residues win, so only
prefixes of the weight-sorted list need to be examined.

Besides the literal prefix scan this module has a grouped evaluation that
works from the multiset of gcd values (obtained prime by prime through the
Chinese remainder theorem).  It never touches individual residues, which is
what makes sweeps to k = 10**5 and beyond cheap.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from math import inf, log, sqrt
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .numtheory import factorize, factorize_with, primes_upto, smallest_prime_factors

DUJELLA_CONSTANT = 0.6071
K_CAP = 2_000_000
TIE_RTOL = 1e-12
TABLE_COLUMNS = ["k", "phi_k", "eta_k", "mu_k", "nu_k", "m_k", "three_phi_k"]


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if k > K_CAP:
        raise ValueError(f"k={k} is above the supported range {K_CAP}")


# ---------------------------------------------------------------------------
# Candidate residues


def candidate_gcds(k: int) -> np.ndarray:
    """gcd(i - 1, k) for every candidate residue i, in increasing order of i."""
    _check_k(k)
    i = np.arange(1, k + 1, dtype=np.int64)
    g = np.gcd(i - 1, k)
    keep = (np.gcd(i, k) == 1) & (g > 1)
    return g[keep]


def gcd_profile(k: int, factors: dict[int, int] | None = None) -> dict[int, int]:
    """Multiset {g: count} of gcd(i - 1, k) over candidate residues i.

    Residues coprime to k factor over the prime powers of k; modulo p**a the
    unit i has gcd(i - 1, p**a) = p**s for p**(a-s) - p**(a-s-1) units when
    1 <= s < a, for p - 2 units when s = 0, and for the single unit 1 when
    s = a.  Multiplying these local counts gives the global profile.
    """
    _check_k(k)
    if factors is None:
        factors = factorize(k)
    profile = {1: 1}
    for p, a in factors.items():
        local = {}
        if p > 2:
            local[1] = (p - 2) * p ** (a - 1)
        for s in range(1, a):
            local[p**s] = p ** (a - s) - p ** (a - s - 1)
        local[p**a] = 1
        merged: dict[int, int] = {}
        for g, c in profile.items():
            for h, e in local.items():
                merged[g * h] = merged.get(g * h, 0) + c * e
        profile = merged
    profile.pop(1, None)
    return profile


# ---------------------------------------------------------------------------
# eta_k


@dataclass(frozen=True)
class EtaValue:
    eta: float
    prefix_len: int
    prefix_counts: tuple[tuple[int, int], ...]  # (gcd value, multiplicity), largest gcd first

    def exact(self, dps: int = 50) -> mpmath.mpf:
        return exact_ratio(self.prefix_counts, dps)


def exact_ratio(counts: Sequence[tuple[int, int]], dps: int = 50) -> mpmath.mpf:
    """|I| / T_I**2 for the multiset of gcd values, at the requested precision."""
    with mpmath.workdps(dps):
        size = sum(c for _, c in counts)
        weight = mpmath.fsum(c * mpmath.sqrt(g) for g, c in counts)
        return +(size / weight**2)


def _less_than(a: Sequence[tuple[int, int]], b: Sequence[tuple[int, int]]) -> bool | None:
    """Exact comparison a < b of two prefix ratios, widening precision until they
    separate; None means equal to more than 400 digits."""
    for dps in (40, 100, 200, 400):
        xa, xb = exact_ratio(a, dps), exact_ratio(b, dps)
        with mpmath.workdps(dps):
            if abs(xa - xb) > mpmath.mpf(10) ** (10 - dps) * max(xa, xb):
                return bool(xa < xb)
    return None


def eta_direct(k: int) -> EtaValue:
    """Prefix scan over individual residues, sorted by gcd(i - 1, k) descending."""
    g = np.sort(candidate_gcds(k))[::-1]
    sizes = np.arange(1, len(g) + 1)
    weights = np.cumsum(np.sqrt(g.astype(np.float64)))
    ratios = sizes / weights**2
    r = int(np.argmin(ratios))
    counts: dict[int, int] = {}
    for v in g[: r + 1].tolist():
        counts[v] = counts.get(v, 0) + 1
    return EtaValue(float(ratios[r]), r + 1, tuple(sorted(counts.items(), reverse=True)))


def eta_k(k: int, factors: dict[int, int] | None = None) -> EtaValue:
    """Minimum prefix ratio computed from the gcd profile.

    Inside a block of equal gcd values s the ratio r / (W + s r)**2, with W
    the weight of earlier blocks minus s times their size, rises and then
    falls in r, so its minimum over the block is at one of the two ends.
    """
    profile = gcd_profile(k, factors)
    blocks = sorted(profile.items(), reverse=True)
    best = inf
    best_key: tuple[int, int] = (0, 0)
    size, weight = 0, 0.0
    near: list[tuple[int, int]] = []
    for b, (g, c) in enumerate(blocks):
        root = sqrt(g)
        for take in (1, c) if c > 1 else (1,):
            ratio = (size + take) / (weight + take * root) ** 2
            if ratio < best * (1 - TIE_RTOL):
                best, best_key, near = ratio, (b, take), []
            elif ratio <= best * (1 + TIE_RTOL):
                near.append((b, take))
        size += c
        weight += c * root

    def counts_for(key: tuple[int, int]) -> tuple[tuple[int, int], ...]:
        b, take = key
        return tuple(blocks[:b]) + ((blocks[b][0], take),)

    best_counts = counts_for(best_key)
    for key in near:
        other = counts_for(key)
        verdict = _less_than(other, best_counts)
        size_other = sum(c for _, c in other)
        size_best = sum(c for _, c in best_counts)
        if verdict or (verdict is None and size_other < size_best):
            best_counts = other
    prefix_len = sum(c for _, c in best_counts)
    weight = sum(c * sqrt(g) for g, c in best_counts)
    return EtaValue(prefix_len / weight**2, prefix_len, best_counts)


# ---------------------------------------------------------------------------
# mu_k, nu_k


def _x_term(p: int, a: int) -> float:
    return p**a - p ** (a - 1) - p ** ((a - 1) / 2) + p ** (a - 0.5)


def beta(p: int, a: int) -> float:
    return _x_term(p, a) ** 2 / ((p - 1) * (-p ** ((a - 1) / 2) + p ** (a - 1) + p ** (a - 0.5)) ** 2)


def mu_k(k: int, factors: dict[int, int] | None = None) -> float:
    """Closed-form upper bound R_k * min beta(p**a) over exact prime powers p**a of k."""
    _check_k(k)
    if factors is None:
        factors = factorize(k)
    rk = 1.0
    for p, a in factors.items():
        rk *= (p - 1) * p ** (a - 1) / _x_term(p, a) ** 2
    return rk * min(beta(p, a) for p, a in factors.items())


def nu_from_eta(k: int, eta: float, phi: int) -> float:
    base = 6 * eta * phi
    if k % 2:
        return base
    return min(base, 4 * eta * phi + DUJELLA_CONSTANT)


@dataclass(frozen=True)
class SieveRecord:
    k: int
    phi_k: int
    candidate_count: int
    eta: float
    best_prefix_len: int
    prefix_counts: tuple[tuple[int, int], ...]
    mu: float
    nu: float


def sieve_record(k: int, factors: dict[int, int] | None = None) -> SieveRecord:
    if factors is None:
        factors = factorize(k)
    phi = 1
    for p, a in factors.items():
        phi *= (p - 1) * p ** (a - 1)
    e = eta_k(k, factors)
    count = sum(gcd_profile(k, factors).values())
    return SieveRecord(k, phi, count, e.eta, e.prefix_len, e.prefix_counts,
                       mu_k(k, factors), nu_from_eta(k, e.eta, phi))


def _record_block(bounds: tuple[int, int]) -> list[SieveRecord]:
    lo, hi = bounds
    spf = smallest_prime_factors(hi)
    return [sieve_record(k, factorize_with(spf, k)) for k in range(lo, hi + 1)]


def sieve_records(k_min: int, k_max: int, workers: int | None = None,
                  block: int = 20_000) -> list[SieveRecord]:
    """Records for k_min..k_max in order of k, optionally across processes."""
    _check_k(k_min)
    _check_k(k_max)
    workers = workers or int(os.environ.get("DTLAB_THREADS", "1"))
    spans = [(lo, min(lo + block - 1, k_max)) for lo in range(k_min, k_max + 1, block)]
    if workers > 1 and len(spans) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_record_block, spans))
    else:
        parts = [_record_block(s) for s in spans]
    return [rec for part in parts for rec in part]


def running_minimum(records: Iterable[SieveRecord]) -> list[float]:
    out, best = [], inf
    for rec in records:
        best = min(best, rec.nu)
        out.append(best)
    return out


def m_k_change_points(k_max: int, workers: int | None = None) -> list[tuple[int, float]]:
    """(k, m_k) at every k where the running minimum of nu strictly drops."""
    points = []
    best = inf
    for rec in sieve_records(2, k_max, workers):
        if rec.nu < best:
            best = rec.nu
            points.append((rec.k, best))
    return points


def count_mu_exceeds_twice_eta(k_max: int, workers: int | None = None) -> int:
    return sum(1 for rec in sieve_records(2, k_max, workers) if rec.mu > 2 * rec.eta)


# ---------------------------------------------------------------------------
# Primorial ladder


@dataclass(frozen=True)
class LadderState:
    ell: int
    primorial: int
    I_size: int
    T: float
    product_bound: float  # |I| phi(P) / T**2 through the closed product


def ladder(ell_max: int) -> list[LadderState]:
    primes = primes_upto(max(10, int(ell_max * (log(ell_max + 2) + log(log(ell_max + 3)) + 3))))
    primes = primes[:ell_max]
    if len(primes) < ell_max:
        raise AssertionError("prime table too short")  # pragma: no cover
    out = []
    P, size, T, prod = 2, 1, sqrt(2), 1.0
    for ell, p in enumerate(primes, start=1):
        if ell > 1:
            P *= p
            size *= p - 1
            T *= p - 2 + sqrt(p)
        prod *= (p - 1) ** 2 / (p - 2 + sqrt(p)) ** 2
        out.append(LadderState(ell, P, size, T, prod))
    return out


def ladder_sets(ell_max: int, cap: int = K_CAP) -> list[np.ndarray]:
    """The sets I_1, ..., I_ell built directly from their defining recursion,
    stopping once the primorial exceeds the cap."""
    primes = primes_upto(100)
    current = np.array([1], dtype=np.int64)
    P = 2
    sets = [current]
    for p in primes[1:ell_max]:
        if P * p > cap:
            break
        grid = (current[:, None] + P * np.arange(p, dtype=np.int64)[None, :]).ravel()
        current = np.sort(grid[grid % p != 0])
        P *= p
        sets.append(current)
    return sets


def ladder_weight(I: np.ndarray, P: int) -> float:
    return float(np.sqrt(np.gcd(I - 1, P).astype(np.float64)).sum())


# ---------------------------------------------------------------------------
# Gallagher's larger sieve


@dataclass(frozen=True)
class GallagherResult:
    size: int
    bound: float
    valid: bool
    numerator: float
    denominator: float

    @property
    def holds(self) -> bool:
        return not self.valid or self.size <= self.bound * (1 + 1e-12)


def gallagher_bound(A: Iterable[int], primes: Iterable[int], Q: float, N: int | None = None) -> GallagherResult:
    """(sum log p - log N) / (sum log p / |A mod p| - log N) over p <= Q in the prime set."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise ValueError("A must be nonempty")
    if A[0] < 1:
        raise ValueError("A must consist of positive integers")
    N = A[-1] if N is None else N
    if A[-1] > N:
        raise ValueError("A must lie in [1, N]")
    if not 1 < Q <= N:
        raise ValueError("need 1 < Q <= N")
    arr = np.array(A, dtype=np.int64)
    num = -log(N)
    den = -log(N)
    for p in primes:
        if p > Q:
            continue
        residues = len(np.unique(arr % p))
        num += log(p)
        den += log(p) / residues
    valid = den > 0
    return GallagherResult(len(A), num / den if valid else inf, valid, num, den)


def primes_in_class(a: int, modulus: int, upto: int) -> list[int]:
    return [p for p in primes_upto(upto) if p % modulus == a % modulus]


# ---------------------------------------------------------------------------
# Table output


def round4(x: float) -> str:
    """Four decimals, halves rounded away from zero, applied to the exact binary value."""
    return str(Decimal(x).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def table_rows(k_min: int, k_max: int, workers: int | None = None) -> list[dict]:
    """Rows k_min..k_max; the running minimum always starts from k = 2."""
    records = sieve_records(2, k_max, workers)
    mins = running_minimum(records)
    rows = []
    for rec, m in zip(records, mins):
        if rec.k < k_min:
            continue
        rows.append({
            "k": rec.k, "phi_k": rec.phi_k, "eta_k": round4(rec.eta), "mu_k": round4(rec.mu),
            "nu_k": round4(rec.nu), "m_k": round4(m), "three_phi_k": 3 * rec.phi_k,
        })
    return rows


def rows_to_csv(rows: Iterable[dict], columns: Sequence[str] = TABLE_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def figure_rows(k_max: int = 1000, workers: int | None = None) -> list[dict]:
    """Data behind the comparison of nu_k with 3 phi(k), for 2 <= k <= k_max."""
    return table_rows(2, k_max, workers)
