"""Slow, independent reference computations used to cross-check the package.

Nothing here shares code paths with the routines under test beyond the field
tables themselves.
"""

from collections import Counter
from itertools import combinations, product
from math import gcd, sqrt



def brute_force_clique(matrix):
    """Lexicographically smallest maximum clique of a small boolean matrix."""
    n = len(matrix)
    for size in range(n, 0, -1):
        for combo in combinations(range(n), size):
            if all(matrix[a][b] for a, b in combinations(combo, 2)):
                return list(combo)
    return []


def eta_exhaustive(k):
    """Minimum of |I| / T_I**2 over every nonempty subset I of the candidates.

    The ratio only sees how many members of each gcd value a subset holds, so
    subsets are enumerated through those multiplicity vectors.
    """
    values = Counter(gcd(i - 1, k) for i in range(1, k + 1)
                     if gcd(i, k) == 1 and gcd(i - 1, k) > 1)
    gs = sorted(values)
    best = float("inf")
    for counts in product(*(range(values[g] + 1) for g in gs)):
        size = sum(counts)
        if size:
            total = sum(c * sqrt(g) for c, g in zip(counts, gs))
            best = min(best, size / total**2)
    return best


def field_product(F, a, b):
    if a == 0 or b == 0:
        return 0
    return int(F.exp_table[(int(F.log_table[a]) + int(F.log_table[b])) % (F.q - 1)])


def product_set(F, A, B):
    return {field_product(F, a, b) for a in A for b in B}


def decomposition_exists(F, T):
    """Any A, B with |A|, |B| >= 2 and AB = T, by nested subset enumeration.

    Scaling lets us assume 1 is in B, which forces A to lie inside T; B then
    ranges over subsets of the elements y with Ay inside T.  Subsets of T are
    bitmasks over the positions of its sorted elements.
    """
    elems = sorted(set(T))
    n = len(elems)
    pos = {t: i for i, t in enumerate(elems)}
    full = (1 << n) - 1
    # image[y][i]: position of elems[i] * y in T, or None
    image = {y: [pos.get(field_product(F, t, y)) for t in elems] for y in range(2, F.q)}
    fits = {y: sum(1 << i for i, t in enumerate(img) if t is not None) for y, img in image.items()}
    for A in range(1, full + 1):
        if A & (A - 1) == 0:
            continue
        bits = [i for i in range(n) if A >> i & 1]
        shifted = {y: sum(1 << image[y][i] for i in bits)
                   for y in image if A & ~fits[y] == 0}
        ys = sorted(shifted)
        for size in range(1, len(ys) + 1):
            for rest in combinations(ys, size):
                cover = A
                for y in rest:
                    cover |= shifted[y]
                if cover == full:
                    return True
    return False


def stepanov_reference_binom(m, n, p):
    """C(m + n, n) mod p from Python's exact binomial."""
    from math import comb
    return comb(m + n, n) % p
