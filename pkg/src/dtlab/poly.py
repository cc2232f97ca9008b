"""Dense univariate polynomials over an explicit finite field.

A polynomial is a list of element indices, constant term first, with no
trailing zeros (so the zero polynomial is ``[]``).  All functions take the
field context as their first argument.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .finite_field import FieldCtx

Poly = list[int]


def trim(f: Poly) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Poly) -> int:
    return len(f) - 1 if f else -1


def add(F: FieldCtx, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    a[: len(f)] = f
    b[: len(g)] = g
    return trim(F.add_arrays(a, b).tolist())


def neg(F: FieldCtx, f: Poly) -> Poly:
    return F.neg_array(np.asarray(f, dtype=np.int64)).tolist() if f else []


def sub(F: FieldCtx, f: Poly, g: Poly) -> Poly:
    return add(F, f, neg(F, g))


def scale(F: FieldCtx, f: Poly, c: int) -> Poly:
    if not f or c == 0:
        return []
    return trim(F.mul_arrays(np.asarray(f, dtype=np.int64), c).tolist())


def mul(F: FieldCtx, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    if len(f) > len(g):
        f, g = g, f
    gv = np.asarray(g, dtype=np.int64)
    out = np.zeros(len(f) + len(g) - 1, dtype=np.int64)
    for i, c in enumerate(f):
        if c:
            seg = slice(i, i + len(g))
            out[seg] = F.add_arrays(out[seg], F.mul_arrays(c, gv))
    return trim(out.tolist())


def power(F: FieldCtx, f: Poly, e: int) -> Poly:
    """f**e by repeated squaring."""
    if e < 0:
        raise ValueError("negative exponent")
    result: Poly = [1]
    base = trim(f)
    while e:
        if e & 1:
            result = mul(F, result, base)
        e >>= 1
        if e:
            base = mul(F, base, base)
    return result


def divmod_poly(F: FieldCtx, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = trim(f)
    if len(rem) < len(g):
        return [], rem
    quot = [0] * (len(rem) - len(g) + 1)
    inv_lead = F.inv(g[-1])
    gv = np.asarray(g, dtype=np.int64)
    rem_v = np.asarray(rem, dtype=np.int64)
    for shift in range(len(rem) - len(g), -1, -1):
        top = int(rem_v[shift + len(g) - 1])
        if top == 0:
            continue
        coef = F.mul(top, inv_lead)
        quot[shift] = coef
        seg = slice(shift, shift + len(g))
        rem_v[seg] = F.add_arrays(rem_v[seg], F.neg_array(F.mul_arrays(coef, gv)))
    return trim(quot), trim(rem_v.tolist())


def monic(F: FieldCtx, f: Poly) -> Poly:
    f = trim(f)
    return scale(F, f, F.inv(f[-1])) if f else []


def gcd(F: FieldCtx, f: Poly, g: Poly) -> Poly:
    f, g = trim(f), trim(g)
    while g:
        f, g = g, divmod_poly(F, f, g)[1]
    return monic(F, f)


def evaluate(F: FieldCtx, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def evaluate_all(F: FieldCtx, f: Poly) -> np.ndarray:
    """Values of f at every field element, indexed by element."""
    xs = F.elements()
    acc = np.zeros(F.q, dtype=np.int64)
    for c in reversed(f):
        acc = F.add_arrays(F.mul_arrays(acc, xs), c)
    return acc


def linear_power(F: FieldCtx, a: int, c: int, e: int) -> Poly:
    """(a x + c)**e."""
    return power(F, trim([c, a]), e)


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p, digit by digit in base p."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        n_i, k_i = n % p, k % p
        if k_i > n_i:
            return 0
        out = out * comb(n_i, k_i) % p
        n //= p
        k //= p
    return out


def hyper_derivative(F: FieldCtx, f: Poly, n: int) -> Poly:
    """n-th hyper-derivative: x**j maps to C(j, n) x**(j - n)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    out = [F.mul(F.from_int(binom_mod_p(j, n, F.p)), c) for j, c in enumerate(f) if j >= n]
    return trim(out)


def derivative(F: FieldCtx, f: Poly) -> Poly:
    return hyper_derivative(F, f, 1)


def pth_root(F: FieldCtx, f: Poly) -> Poly:
    """Root of a polynomial in x**p whose coefficients are taken to their p-th roots."""
    if any(c for j, c in enumerate(f) if j % F.p):
        raise ValueError("polynomial is not a p-th power")
    root_exp = F.q // F.p
    return trim([F.pow(c, root_exp) for c in f[:: F.p]])


def squarefree_decomposition(F: FieldCtx, f: Poly) -> dict[int, Poly]:
    """Map multiplicity -> squarefree monic factor for a monic f, so that f is
    the product of factor**multiplicity and the factors are pairwise coprime."""
    f = trim(f)
    if not f or f[-1] != 1:
        raise ValueError("squarefree decomposition needs a monic polynomial")
    out: dict[int, Poly] = {}

    def record(mult: int, g: Poly) -> None:
        if degree(g) > 0:
            out[mult] = mul(F, out.get(mult, [1]), g)

    def walk(f: Poly, scale_: int) -> None:
        if degree(f) <= 0:
            return
        df = derivative(F, f)
        if not df:
            walk(pth_root(F, f), scale_ * F.p)
            return
        c = gcd(F, f, df)
        w = divmod_poly(F, f, c)[0]
        i = 1
        while degree(w) > 0:
            y = gcd(F, w, c)
            record(i * scale_, divmod_poly(F, w, y)[0])
            w = y
            c = divmod_poly(F, c, y)[0]
            i += 1
        if degree(c) > 0:
            walk(pth_root(F, c), scale_ * F.p)

    walk(f, 1)
    return out
