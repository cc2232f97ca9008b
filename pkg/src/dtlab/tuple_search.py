"""Largest generalized Diophantine tuples over finite fields, by exact search.

A set A of nonzero elements has the Diophantine property for (d, lambda)
when a*b + lambda lies in S_d u {0} for all distinct a, b in A; the strong
property also asks it for a = b.  The maxima are computed as clique numbers
and compared with every applicable upper bound.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import floor, gcd, isqrt, sqrt
from typing import Iterable, Sequence

import numpy as np

from .clique import CliqueResult, adjacency_from_matrix, max_clique
from .finite_field import FieldCtx, FieldError, build_field
from .numtheory import prime_power

MAX_VERTICES = 4096
REPORT_COLUMNS = ["q", "p", "r", "d", "lambda_idx", "strong", "value", "witness", "bound_name",
                  "bound_value", "holds", "exact_expected", "exact_matched"]


@dataclass
class DiophantineGraph:
    ctx: FieldCtx
    d: int
    lam: int
    strong: bool
    vertices: list[int]
    adjacency: list[int] = field(repr=False)

    def neighbours(self, v: int) -> list[int]:
        i = self.vertices.index(v)
        row = self.adjacency[i]
        return [u for j, u in enumerate(self.vertices) if row >> j & 1]


def _good_mask(F: FieldCtx, d: int) -> np.ndarray:
    good = F.dth_power_mask(d).copy()
    good[0] = True
    return good


def _build(F: FieldCtx, d: int, lam: int, strong: bool) -> DiophantineGraph:
    good = _good_mask(F, d)
    verts = F.nonzero()
    if strong:
        verts = verts[good[F.add_arrays(F.mul_arrays(verts, verts), lam)]]
    if len(verts) > MAX_VERTICES:
        raise FieldError(f"{len(verts)} vertices exceed the search cap {MAX_VERTICES}")
    prods = F.add_arrays(F.mul_arrays(verts[:, None], verts[None, :]), lam)
    return DiophantineGraph(F, d, lam, strong, verts.tolist(), adjacency_from_matrix(good[prods]))


def build_graph(F: FieldCtx, d: int, lam: int, strong: bool = False) -> DiophantineGraph:
    if d < 2:
        raise FieldError("d must be at least 2")
    F._check_divisor(d)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    return _build(F, d, lam, strong)


def has_property(F: FieldCtx, A: Iterable[int], d: int, lam: int, strong: bool = False) -> bool:
    """Direct element-by-element check of the (strong) Diophantine property."""
    A = list(A)
    good = _good_mask(F, d)
    for i, a in enumerate(A):
        for b in A[i if strong else i + 1:]:
            if not good[F.add(F.mul(a, b), lam)]:
                return False
    return 0 not in A and len(set(A)) == len(A)


def graph_max_clique(graph: DiophantineGraph) -> CliqueResult:
    res = max_clique(graph.adjacency, graph.vertices)
    if not has_property(graph.ctx, res.witness, graph.d, graph.lam, graph.strong):
        raise AssertionError(f"clique witness {res.witness} fails the defining property")
    return res


# ---------------------------------------------------------------------------
# Bounds


@dataclass
class SquareHypotheses:
    applies: bool
    divides: bool
    alpha: int | None
    r_remainder: int
    remainder_ok: bool


def is_square_field(F: FieldCtx) -> bool:
    return F.r % 2 == 0


def square_remainder(F: FieldCtx, d: int) -> tuple[int, bool]:
    root = isqrt(F.q)
    rem = ((F.q - 1) // d) % (F.p * root)
    return rem, rem <= (F.p - 1) * root


def square_hypotheses(F: FieldCtx, d: int, lam: int) -> SquareHypotheses:
    """Hypotheses of the exactness theorem for fields of square order."""
    if not is_square_field(F):
        raise FieldError(f"q={F.q} is not a square")
    F._check_divisor(d)
    root = isqrt(F.q)
    divides = (root + 1) % d == 0
    rem, rem_ok = square_remainder(F, d)
    half = F.subfield(F.r // 2)
    half_star = set(half) - {0}
    alpha = None
    for a in range(1, F.q):
        a2 = F.mul(a, a)
        if F.is_dth_power(a2, d) and F.div(lam, a2) in half_star:
            alpha = a
            break
    return SquareHypotheses(divides and alpha is not None and rem_ok, divides, alpha, rem, rem_ok)


@dataclass
class BoundEntry:
    name: str
    value: float
    holds: bool


@dataclass
class BoundReport:
    q: int
    p: int
    r: int
    d: int
    lam: int
    strong: bool
    value: int
    witness: list[int]
    bounds: list[BoundEntry]
    exact_expected: int | None = None
    exact_matched: bool | None = None
    node_count: int = 0

    @property
    def all_hold(self) -> bool:
        return all(b.holds for b in self.bounds)

    def rows(self) -> list[dict]:
        out = []
        for b in self.bounds:
            out.append({
                "q": self.q, "p": self.p, "r": self.r, "d": self.d, "lambda_idx": self.lam,
                "strong": self.strong, "value": self.value,
                "witness": " ".join(map(str, self.witness)),
                "bound_name": b.name, "bound_value": b.value, "holds": b.holds,
                "exact_expected": self.exact_expected, "exact_matched": self.exact_matched,
            })
        return out


def applicable_bounds(F: FieldCtx, d: int, lam: int, strong: bool) -> list[tuple[str, float]]:
    q, p = F.q, F.p
    out: list[tuple[str, float]] = []
    if strong:
        out.append(("trivial_strong", (sqrt(4 * q - 3) + 1) / 2))
        if F.r == 1:
            out.append(("prime_strong", sqrt((p - 1) / d) + 1))
            if F.is_dth_power(lam, d):
                out.append(("prime_strong_dth_power", sqrt((p - 1) / d - 0.75) + 0.5))
    else:
        out.append(("trivial", sqrt(q - 11 / 4) + 2.5))
        if F.r == 1:
            out.append(("prime_restricted", sqrt(2 * (p - 1) / d) + 4))
    if (p - 1) % d == 0:
        out.append(("restricted_general", sqrt(2 * (q - 1) / d) + 4))
    if is_square_field(F) and square_remainder(F, d)[1]:
        if strong or (q >= 25 and d >= 3):
            out.append(("square", isqrt(q) - 1))
    return out


def exact_value_expected(F: FieldCtx, d: int, lam: int, strong: bool) -> int | None:
    if not is_square_field(F):
        return None
    if not square_hypotheses(F, d, lam).applies:
        return None
    if strong or (F.q >= 25 and d >= 3):
        return isqrt(F.q) - 1
    return None


def bound_report(F: FieldCtx, d: int, lam: int, strong: bool) -> BoundReport:
    graph = build_graph(F, d, lam, strong)
    res = graph_max_clique(graph)
    entries = [BoundEntry(name, val, res.size <= val + 1e-9)
               for name, val in applicable_bounds(F, d, lam, strong)]
    expected = exact_value_expected(F, d, lam, strong)
    return BoundReport(F.q, F.p, F.r, d, lam, strong, res.size, res.witness, entries,
                       expected, None if expected is None else res.size == expected,
                       res.node_count)


def msd(F: FieldCtx, d: int, lam: int) -> BoundReport:
    return bound_report(F, d, lam, strong=True)


def md(F: FieldCtx, d: int, lam: int) -> BoundReport:
    return bound_report(F, d, lam, strong=False)


def trivial_zero_shift_value(F: FieldCtx, d: int, strong: bool = False) -> int:
    """Maximum for lambda = 0, where the property is a product condition only."""
    return graph_max_clique(_build(F, d, 0, strong)).size


def prime_strong_floor(p: int, d: int) -> int:
    """Floor of the sharper prime-field bound for lambda a d-th power."""
    return floor(sqrt((p - 1) / d - 0.75) + 0.5)


# ---------------------------------------------------------------------------
# Sweeps


def invariance_modulus(F: FieldCtx, d: int) -> int:
    """Index of the subgroup of multipliers u with MD(lambda) = MD(u lambda).

    Scaling A by c sends lambda to c**2 lambda and preserves S_d only when
    c**2 lies in S_d, so the values are constant on cosets of S_d intersected
    with the squares, which is S_lcm(d, 2) when q is odd.
    """
    if F.p == 2:
        return d
    return d * 2 // gcd(d, 2)


def lambda_representatives(F: FieldCtx, d: int) -> list[int]:
    """One lambda per class on which the maxima are constant (g**j, j < index)."""
    return [int(F.exp_table[j]) for j in range(invariance_modulus(F, d))]


def _sweep_task(args) -> list[BoundReport]:
    p, r, d, lam = args
    F = build_field(p, r)
    return [bound_report(F, d, lam, strong) for strong in (True, False)]


def sweep_parameters(q_values: Iterable[int], d_filter: Sequence[int] | None = None) -> list[tuple]:
    tasks = []
    for q in q_values:
        try:
            p, r = prime_power(q)
        except ValueError:
            continue
        F = build_field(p, r)
        for d in range(2, q):
            if (q - 1) % d or (d_filter and d not in d_filter):
                continue
            for lam in lambda_representatives(F, d):
                tasks.append((p, r, d, lam))
    return tasks


class BoundViolation(AssertionError):
    def __init__(self, report: BoundReport):
        bad = [b.name for b in report.bounds if not b.holds]
        super().__init__(f"bound(s) {bad} fail for q={report.q}, d={report.d}, "
                         f"lambda={report.lam}, strong={report.strong}: value {report.value}, "
                         f"witness {report.witness}")
        self.report = report


def sweep(q_values: Iterable[int], d_filter: Sequence[int] | None = None,
          workers: int | None = None, strict: bool = True) -> list[BoundReport]:
    """Reports in (q, d, lambda class, strong-first) order; with ``strict`` a
    failing bound raises :class:`BoundViolation`."""
    tasks = sweep_parameters(q_values, d_filter)
    workers = workers or int(os.environ.get("DTLAB_THREADS", "1"))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_task, tasks))
    else:
        chunks = [_sweep_task(t) for t in tasks]
    reports = [rep for chunk in chunks for rep in chunk]
    for rep in reports if strict else ():
        if not rep.all_hold:
            raise BoundViolation(rep)
    return reports


def reports_to_csv(reports: Iterable[BoundReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        for row in rep.rows():
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()
