"""Generalized Diophantine tuples over the positive integers, searched up to a ceiling N.

A set of distinct positive integers has property D_k(n) when every product of
two distinct members, plus n, is a perfect k-th power; the strong version
also asks it of each square a*a + n.  Maxima below N are clique numbers of a
compatibility graph whose edges are found row by row with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .clique import CliqueResult, max_clique
from .finite_field import build_field
from .numtheory import divisors, iroot, is_prime
from .tuple_search import build_graph

MAX_N = 10**7
MAX_K = 64
MAX_ACTIVE = 20_000
WORK_BUDGET = 4 * 10**9


def is_kth_power(m: int, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be positive")
    if m < 0:
        return False
    root = iroot(m, k)
    return root**k == m


@dataclass
class PropertyCheck:
    holds: bool
    violating_pair: tuple[int, int] | None = None


def check_property(A, k: int, n: int, strong: bool = False) -> PropertyCheck:
    """Check every required pair, reporting the first one that fails."""
    A = [int(a) for a in A]
    if len(set(A)) != len(A) or any(a < 1 for a in A):
        raise ValueError("elements must be distinct positive integers")
    for i, a in enumerate(A):
        for b in A[i if strong else i + 1:]:
            if not is_kth_power(a * b + n, k):
                return PropertyCheck(False, (a, b))
    return PropertyCheck(True)


@dataclass(frozen=True)
class IntegerTupleQuery:
    k: int
    n: int
    N: int
    strong: bool = False

    def __post_init__(self):
        if not 2 <= self.k <= MAX_K:
            raise ValueError(f"k must lie in [2, {MAX_K}]")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 1 <= self.N <= MAX_N:
            raise ValueError(f"N must lie in [1, {MAX_N}]")
        if (self.N * self.N + self.n).bit_length() > 62:
            raise ValueError("N*N + n does not fit in 64-bit arithmetic")


@dataclass
class CompatibilityGraph:
    query: IntegerTupleQuery
    vertices: list[int]  # increasing
    edges: list[tuple[int, int]] = field(repr=False)
    candidates: list[int] = field(repr=False)  # integers allowed as singletons


def power_table(limit: int, k: int) -> np.ndarray:
    top = iroot(limit, k)
    return np.arange(top + 1, dtype=np.int64) ** k


def _in_table(values: np.ndarray, table: np.ndarray) -> np.ndarray:
    idx = np.minimum(np.searchsorted(table, values), len(table) - 1)
    return table[idx] == values


def _estimated_work(N: int, k: int, n: int) -> int:
    total = 0
    step = max(1, N // 1000)
    for a in range(1, N + 1, step):
        roots = iroot(a * N + n, k) - iroot(a * (a + 1) + n, k) + 1
        total += min(N - a, max(roots, 0)) * step
    return total


def compatibility_graph(query: IntegerTupleQuery) -> CompatibilityGraph:
    """Edges a < b with a*b + n a k-th power, keeping strong-admissible ends only.

    Row a is scanned either over all partners b or over the k-th powers y**k
    in (a(a+1) + n, aN + n], whichever list is shorter.
    """
    k, n, N = query.k, query.n, query.N
    table = power_table(N * N + n, k)
    everything = np.arange(1, N + 1, dtype=np.int64)
    if query.strong:
        allowed = everything[_in_table(everything * everything + n, table)]
        edges = []
        for i, a in enumerate(allowed.tolist()):
            rest = allowed[i + 1:]
            hit = rest[_in_table(a * rest + n, table)]
            edges.extend((a, int(b)) for b in hit)
        candidates = allowed.tolist()
    else:
        if _estimated_work(N, k, n) > WORK_BUDGET:
            raise ValueError(f"N={N} is too large for a non-strong search with k={k}")
        edges = []
        for a in range(1, N):
            lo = iroot(a * (a + 1) + n - 1, k) + 1
            hi = iroot(a * N + n, k)
            if hi < lo:
                continue
            if hi - lo + 1 < N - a:
                vals = table[lo:hi + 1] - n
                partners = vals[vals % a == 0] // a
            else:
                b = everything[a:]
                partners = b[_in_table(a * b + n, table)]
            edges.extend((a, int(b)) for b in partners)
        candidates = [1] if N >= 1 else []
    vertices = sorted({v for e in edges for v in e})
    return CompatibilityGraph(query, vertices, edges, candidates)


def search_max_tuple(query: IntegerTupleQuery) -> CliqueResult:
    """Largest tuple inside [1, N]; the witness is the lexicographically least one."""
    graph = compatibility_graph(query)
    if len(graph.vertices) > MAX_ACTIVE:
        raise ValueError(f"{len(graph.vertices)} active vertices exceed {MAX_ACTIVE}")
    if not graph.edges:
        witness = graph.candidates[:1]
        return CliqueResult(len(witness), witness)
    pos = {v: i for i, v in enumerate(graph.vertices)}
    adj = [0] * len(graph.vertices)
    for a, b in graph.edges:
        adj[pos[a]] |= 1 << pos[b]
        adj[pos[b]] |= 1 << pos[a]
    res = max_clique(adj, graph.vertices)
    check = check_property(res.witness, query.k, query.n, query.strong)
    if not check.holds:
        raise AssertionError(f"witness {res.witness} fails at {check.violating_pair}")
    return res


def difference_of_squares(n: int) -> list[tuple[int, int]]:
    """All (x, y) with x >= 1 and y*y - x*x = n, from factor pairs n = u*v."""
    out = []
    for u in divisors(n):
        v = n // u
        if u < v and (v - u) % 2 == 0:
            out.append(((v - u) // 2, (u + v) // 2))
    return sorted(out)


@dataclass
class DivisorBoundCheck:
    n: int
    k: int
    solutions: list[tuple[int, int]]
    tau: int
    searched_max: int
    witness: list[int]
    holds: bool


def strong_divisor_bound_check(n: int, k: int = 2, N: int | None = None) -> DivisorBoundCheck:
    """For even k every member x of a strong tuple has x*x + n a square, so the
    strong maximum is at most the number of x >= 1 with y*y - x*x = n, which is
    at most tau(n)."""
    if k % 2:
        raise ValueError("the divisor bound needs an even exponent k")
    if n < 1:
        raise ValueError("n must be at least 1")
    sols = difference_of_squares(n)
    tau = len(divisors(n))
    N = max(n, 2) if N is None else N
    res = search_max_tuple(IntegerTupleQuery(k, n, N, strong=True))
    xs = {x for x, _ in sols}
    holds = res.size <= len(sols) <= tau and set(res.witness) <= xs
    return DivisorBoundCheck(n, k, sols, tau, res.size, res.witness, holds)


def embedding_violations(p: int, k: int, n: int) -> list[tuple[int, int]]:
    """Integer edges on [1, p-1] whose residues fail to be edges of the finite-field
    graph with d = gcd(p - 1, k) and lambda = n mod p (empty when the map works)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= n < p:
        raise ValueError("need 1 <= n < p")
    d = gcd(p - 1, k)
    graph = compatibility_graph(IntegerTupleQuery(k, n, p - 1))
    if d == 1:
        return []
    field_graph = build_graph(build_field(p), d, n % p)
    pos = {v: i for i, v in enumerate(field_graph.vertices)}
    return [(a, b) for a, b in graph.edges
            if not field_graph.adjacency[pos[a]] >> pos[b] & 1]
