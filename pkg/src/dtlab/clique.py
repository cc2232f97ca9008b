"""Exact maximum clique on small dense graphs.

Adjacency rows are Python ints used as bitsets.  The clique number comes
from a branch and bound with greedy colouring bounds over a degeneracy
ordering; a second, lexicographic depth-first pass then recovers the
smallest maximum clique in the caller's vertex order, so witnesses do not
depend on search heuristics.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass
class CliqueResult:
    size: int
    witness: list[int]
    node_count: int = 0
    elapsed: float = field(default=0.0, compare=False)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def degeneracy_order(adj: Sequence[int]) -> list[int]:
    """Vertices in reverse smallest-last order (dense core first)."""
    n = len(adj)
    deg = [bin(row).count("1") for row in adj]
    buckets: list[set[int]] = [set() for _ in range(max(deg, default=0) + 1)]
    for v, k in enumerate(deg):
        buckets[k].add(v)
    removed = []
    gone = 0
    low = 0
    for _ in range(n):
        low = max(low - 1, 0)
        while not buckets[low]:
            low += 1
        v = min(buckets[low])
        buckets[low].discard(v)
        removed.append(v)
        gone |= 1 << v
        for u in _bits(adj[v] & ~gone):
            buckets[deg[u]].discard(u)
            deg[u] -= 1
            buckets[deg[u]].add(u)
    return removed[::-1]


def relabel(adj: Sequence[int], order: Sequence[int]) -> list[int]:
    """Adjacency rows after moving vertex order[i] to position i."""
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        row = 0
        for u in _bits(adj[v]):
            row |= 1 << pos[u]
        out.append(row)
    return out


def greedy_colouring(adj: Sequence[int], cand: int) -> list[tuple[int, int]]:
    """(vertex, colour) pairs in non-decreasing colour; colour k bounds any
    clique drawn from the vertices listed up to that point by k."""
    out = []
    colour = 0
    uncoloured = cand
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~(adj[v] | low)
            uncoloured &= ~low
            out.append((v, colour))
    return out


def clique_number(adj: Sequence[int]) -> tuple[int, int]:
    """(clique number, search nodes) by colour-bounded branch and bound."""
    n = len(adj)
    if n == 0:
        return 0, 0
    order = degeneracy_order(adj)
    radj = relabel(adj, order)
    best = 1
    nodes = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        for v, colour in reversed(greedy_colouring(radj, cand)):
            if size + colour <= best:
                return
            sub = cand & radj[v]
            if sub:
                expand(sub, size + 1)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    expand((1 << n) - 1, 0)
    return best, nodes


def first_clique_of_size(adj: Sequence[int], size: int) -> list[int] | None:
    """Lexicographically smallest clique of the given size (vertex labels are
    bit positions), or None."""
    if size == 0:
        return []

    def search(cand: int, need: int, chosen: list[int]) -> list[int] | None:
        if need == 0:
            return chosen
        if bin(cand).count("1") < need:
            return None
        colouring = greedy_colouring(adj, cand)
        if colouring[-1][1] < need:
            return None
        for v in _bits(cand):
            found = search(cand & adj[v], need - 1, chosen + [v])
            if found is not None:
                return found
            cand &= ~(1 << v)
            if bin(cand).count("1") < need:
                return None
        return None

    # Each vertex is dropped from the candidate mask once its branch fails,
    # so a branch only ever extends with later vertices and the first hit is
    # the lexicographic minimum.
    return search((1 << len(adj)) - 1, size, [])


def max_clique(adj: Sequence[int], labels: Sequence[int] | None = None) -> CliqueResult:
    """Maximum clique; ``labels`` maps bit positions to caller labels and must
    be increasing so that the witness is the lexicographic minimum."""
    start = time.perf_counter()
    size, nodes = clique_number(adj)
    witness = first_clique_of_size(adj, size)
    if witness is None:
        raise AssertionError("clique search disagreed with itself")
    if labels is not None:
        witness = [labels[v] for v in witness]
    return CliqueResult(size, witness, nodes, time.perf_counter() - start)


def adjacency_from_matrix(matrix) -> list[int]:
    """Bitset rows from a boolean numpy matrix (diagonal ignored)."""
    m = np.array(matrix, dtype=bool)
    np.fill_diagonal(m, False)
    packed = np.packbits(m, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
