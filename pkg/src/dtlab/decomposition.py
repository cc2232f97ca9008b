"""Multiplicative decompositions of shifted multiplicative subgroups.

The target is T = (S_d - lambda) minus {0}.  A binary decomposition is a pair
(A, B) of sets of size at least 2 with AB = T exactly.  Every decomposition
extends to a *closed* one, where A = {x : xB in T} and B = {y : Ay in T}, with
the same product set; only closed pairs are enumerated, up to the scaling
(A, B) -> (cA, B/c).

Sets of field elements are handled as Python-int bitmasks indexed by element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt
from typing import Iterable

from .finite_field import FieldCtx, FieldError

COMPLETENESS_CAP = 64
NODE_BUDGET = 5_000_000


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class ShiftedSubgroupTarget:
    ctx: FieldCtx
    T: list[int]
    d: int | None = None
    lam: int | None = None
    contains_zero_shift: bool = False

    @property
    def size(self) -> int:
        return len(self.T)


def build_target(F: FieldCtx, d: int, lam: int) -> ShiftedSubgroupTarget:
    if d < 2:
        raise FieldError("d must be at least 2")
    F._check_divisor(d)
    if lam == 0:
        raise FieldError("lambda must be nonzero")
    shifted = {F.sub(s, lam) for s in F.dth_powers(d)}
    shifted.discard(0)
    return ShiftedSubgroupTarget(F, sorted(shifted), d, lam, F.is_dth_power(lam, d))


def target_from_set(F: FieldCtx, T: Iterable[int]) -> ShiftedSubgroupTarget:
    """An arbitrary target set, for exercising the search on synthetic inputs."""
    T = sorted(set(T))
    if 0 in T:
        raise FieldError("targets live in the multiplicative group")
    return ShiftedSubgroupTarget(F, T)


class _Products:
    """Division masks x^{-1} T and product sets for one target."""

    def __init__(self, F: FieldCtx, T: Iterable[int]):
        self.F = F
        self.T = sorted(set(T))
        self.t_mask = mask_of(self.T)
        self.quotients = [0] + [mask_of(F.div(t, x) for t in self.T) for x in range(1, F.q)]

    def right_closure(self, A: Iterable[int]) -> int:
        """Mask of {y : A y subset of T}."""
        m = (1 << self.F.q) - 2
        for a in A:
            m &= self.quotients[a]
        return m

    def product(self, A: Iterable[int], B: Iterable[int]) -> int:
        F = self.F
        logs = F.log_table
        exp = F.exp_table
        n = F.q - 1
        lb = [int(logs[b]) for b in B]
        m = 0
        for a in A:
            la = int(logs[a])
            for x in lb:
                m |= 1 << int(exp[(la + x) % n])
        return m


def canonical_pair(F: FieldCtx, A: Iterable[int], B: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lexicographically least representative of (cA, B/c) with 1 in cA."""
    A, B = list(A), list(B)
    best = None
    for a in A:
        inv = F.inv(a)
        cand = (tuple(sorted(F.mul(inv, x) for x in A)), tuple(sorted(F.mul(a, y) for y in B)))
        if best is None or cand < best:
            best = cand
    return best


def close_pair(F: FieldCtx, T: Iterable[int], A: Iterable[int], B: Iterable[int]) -> tuple[list[int], list[int]]:
    """Enlarge A to {x : xB in T}, then B to {y : A y in T}."""
    prod = _Products(F, T)
    A2 = members(prod.right_closure(B))
    B2 = members(prod.right_closure(A2))
    return A2, B2


@dataclass
class DecompositionResult:
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]]
    search_complete: bool
    node_count: int = 0
    sidon: list[bool] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return bool(self.pairs)

    def to_dict(self) -> dict:
        return {
            "exists": self.exists,
            "search_complete": self.search_complete,
            "pairs": [{"A": list(a), "B": list(b), "sidon": s} for (a, b), s in zip(self.pairs, self.sidon)],
        }


def _closed_pairs(prod: _Products, budget: int) -> tuple[set, int, bool]:
    """Unordered closed pairs {X, Y}, found through their smaller side X with 1 in X.

    Along any prefix P of the smaller side X we have |P| <= |X| <= |Y| <= |B(P)|
    and |B(P)|**2 >= |X||Y| >= |T|; both tests are antitone, so they prune soundly.
    """
    F = prod.F
    tsize = len(prod.T)
    need = max(2, isqrt(tsize - 1) + 1 if tsize > 1 else 2)
    cands = [x for x in range(2, F.q) if (prod.quotients[1] & prod.quotients[x]).bit_count() >= need]
    found: set = set()
    nodes = 0
    complete = True

    def dfs(start: int, chosen: list[int], bmask: int) -> None:
        nonlocal nodes, complete
        nodes += 1
        if nodes > budget:
            complete = False
            return
        bsize = bmask.bit_count()
        if len(chosen) >= 2 and len(chosen) * bsize >= tsize:
            B = members(bmask)
            if prod.product(chosen, B) == prod.t_mask:
                A = members(prod.right_closure(B))
                found.add(frozenset((canonical_pair(F, A, B), canonical_pair(F, B, A))))
        for i in range(start, len(cands)):
            x = cands[i]
            nb = bmask & prod.quotients[x]
            nsize = nb.bit_count()
            if nsize < len(chosen) + 1 or nsize * nsize < tsize:
                continue
            chosen.append(x)
            dfs(i + 1, chosen, nb)
            chosen.pop()
            if not complete:
                return

    if tsize >= 2:
        dfs(0, [1], prod.quotients[1])
    return found, nodes, complete


def find_binary(target: ShiftedSubgroupTarget, cap: int = COMPLETENESS_CAP,
                budget: int = NODE_BUDGET) -> DecompositionResult:
    """All closed binary decompositions of the target, each up to scaling.

    Both orientations (A, B) and (B, A) are listed.  Beyond the size cap the
    search still runs but the result is flagged as incomplete.
    """
    F = target.ctx
    prod = _Products(F, target.T)
    found, nodes, complete = _closed_pairs(prod, budget)
    pairs = sorted({pair for both in found for pair in both})
    sidon = [len(a) * len(b) == prod.product(a, b).bit_count() for a, b in pairs]
    return DecompositionResult(pairs, complete and target.size <= cap, nodes, sidon)


def sidon_audit(result: DecompositionResult, target: ShiftedSubgroupTarget) -> bool:
    """Every pair has |A||B| = |S_d| - 1 with all products distinct."""
    if not target.contains_zero_shift:
        raise FieldError("the product-size identity needs lambda in S_d")
    return all(s and len(a) * len(b) == target.size for (a, b), s in zip(result.pairs, result.sidon))


@dataclass
class TernaryResult:
    exists: bool
    witness: tuple[list[int], list[int], list[int]] | None
    search_complete: bool


def _sub_products(F: FieldCtx, B: list[int]) -> Iterable[tuple[list[int], list[int]]]:
    """Pairs (Y, Z) with 1 in Y, |Y|, |Z| >= 2, YZ inside B and Z = {z : Yz in B}."""
    inner = _Products(F, B)
    cands = [y for y in range(2, F.q) if (inner.quotients[1] & inner.quotients[y]).bit_count() >= 2]

    def dfs(start: int, Y: list[int], zmask: int):
        if len(Y) >= 2:
            yield list(Y), members(zmask)
        for i in range(start, len(cands)):
            nz = zmask & inner.quotients[cands[i]]
            if nz.bit_count() >= 2:
                Y.append(cands[i])
                yield from dfs(i + 1, Y, nz)
                Y.pop()

    yield from dfs(0, [1], inner.quotients[1])


def find_ternary(target: ShiftedSubgroupTarget, binary: DecompositionResult | None = None) -> TernaryResult:
    """Search for T = XYZ with |X|, |Y|, |Z| >= 2.

    If XYZ = T then X(YZ) = T, whose closure (A, B) has X in A and YZ in B, and
    then A * Y * Z = T as well.  So it suffices to look, for every closed pair
    (A, B), for a product YZ inside B with A Y Z = T.
    """
    F = target.ctx
    if binary is None:
        binary = find_binary(target)
    prod = _Products(F, target.T)
    for A, B in binary.pairs:
        for Y, Z in _sub_products(F, list(B)):
            if prod.product(A, members(prod.product(Y, Z))) == prod.t_mask:
                return TernaryResult(True, (list(A), Y, Z), binary.search_complete)
    return TernaryResult(False, None, binary.search_complete)


@dataclass
class SquareConstruction:
    A: list[int]
    B: list[int]
    target: ShiftedSubgroupTarget
    attempts: int


def square_construction(F: FieldCtx, max_attempts: int = 100_000) -> SquareConstruction:
    """For q = r**2: a set A of floor((r-1)/2) elements of F_r^* with
    B = F_r^* minus A^{-1}, so that AB = F_r^* minus {1} = (G + 1) minus {0}
    where G = F_r^* = S_{r+1} and lambda = -1."""
    if F.r % 2:
        raise FieldError(f"q={F.q} is not a square")
    root = isqrt(F.q)
    small = sorted(set(F.subfield(F.r // 2)) - {0})
    target = build_target(F, root + 1, F.neg(1))
    if target.T != sorted(set(small) - {1}):
        raise AssertionError("shifted subfield target is not F_r^* minus {1}")
    prod = _Products(F, target.T)
    size = (root - 1) // 2
    for attempts, A in enumerate(combinations(small, size), start=1):
        if attempts > max_attempts:
            break
        inverses = {F.inv(a) for a in A}
        B = [b for b in small if b not in inverses]
        if prod.product(A, B) == prod.t_mask:
            return SquareConstruction(list(A), B, target, attempts)
    raise LookupError(f"no verified construction for q={F.q} within {max_attempts} candidates")
