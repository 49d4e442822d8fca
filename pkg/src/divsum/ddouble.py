"""Vectorized double-double ("dd") arithmetic on numpy float64 arrays.

A dd number is an unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving
~106 mantissa bits.  All kernels follow the classic error-free transforms
(Knuth two-sum, Dekker split/two-product) and therefore require strict
IEEE-754 double rounding per operation -- which numpy elementwise ops and
CPython floats both guarantee.  No FMA contraction is assumed.

Every function accepts and returns (hi, lo) pairs; scalars and arrays mix
freely under numpy broadcasting.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2^27 + 1, Dekker split constant for binary64


def two_sum(a, b):
    """Error-free sum: a + b = s + e exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """Error-free sum assuming |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def two_prod(a, b):
    """Error-free product: a * b = p + e exactly (no overflow in split range)."""
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def add(ahi, alo, bhi, blo):
    s, e = two_sum(ahi, bhi)
    e = e + (alo + blo)
    return quick_two_sum(s, e)


def sub(ahi, alo, bhi, blo):
    return add(ahi, alo, -bhi, -blo)


def mul(ahi, alo, bhi, blo):
    p, e = two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return quick_two_sum(p, e)


def mul_pow2(ahi, alo, f):
    """Scale by an exact power of two (exact, no rounding)."""
    return ahi * f, alo * f


def div(ahi, alo, bhi, blo):
    """Quotient accurate to ~2^-104 relative (three-step long division)."""
    q1 = ahi / bhi
    p1h, p1l = mul(bhi, blo, q1, np.zeros_like(q1))
    r1h, r1l = sub(ahi, alo, p1h, p1l)
    q2 = r1h / bhi
    p2h, p2l = mul(bhi, blo, q2, np.zeros_like(q2))
    r2h, r2l = sub(r1h, r1l, p2h, p2l)
    q3 = r2h / bhi
    s, e = quick_two_sum(q1, q2)
    return quick_two_sum(s, e + q3)


def recip(bhi, blo):
    one = np.ones_like(bhi)
    zero = np.zeros_like(bhi)
    return div(one, zero, bhi, blo)


def sqrt(ahi, alo):
    """Square root via one dd Newton step from the float64 root (Karp)."""
    s = np.sqrt(ahi)
    p, pe = two_prod(s, s)
    # a - s^2 cancels benignly: s^2 is within one ulp of a
    e = ((ahi - p) - pe) + alo
    return quick_two_sum(s, e * (0.5 / s))


def ipow(base_hi, base_lo, n: int):
    """Integer power by binary exponentiation, n >= 1."""
    if n < 1:
        raise ValueError("ipow expects n >= 1")
    rh, rl = base_hi, base_lo
    n -= 1
    bh, bl = base_hi, base_lo
    while n:
        if n & 1:
            rh, rl = mul(rh, rl, bh, bl)
        n >>= 1
        if n:
            bh, bl = mul(bh, bl, bh, bl)
    return rh, rl


def product_tree(hi: np.ndarray, lo: np.ndarray):
    """Product of all elements by fixed pairwise reduction.

    Level by level, element 2i is multiplied by element 2i+1; an odd tail
    element passes through unchanged.  The reduction order depends only on
    the input length, so results are bit-identical across runs and thread
    counts.  Returns a scalar (hi, lo) pair; empty input yields exact 1.
    """
    if hi.size == 0:
        return 1.0, 0.0
    h, l = hi, lo
    while h.size > 1:
        odd = h.size % 2 == 1
        if odd:
            th, tl = h[-1:], l[-1:]
            h, l = h[:-1], l[:-1]
        h, l = mul(h[0::2], l[0::2], h[1::2], l[1::2])
        if odd:
            h = np.concatenate([h, th])
            l = np.concatenate([l, tl])
    return float(h[0]), float(l[0])


def to_float(hi, lo) -> float:
    return float(hi) + float(lo)
