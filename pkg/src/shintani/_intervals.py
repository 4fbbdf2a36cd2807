"""Thin helpers over ``mpmath.iv`` for certified signs and small determinants.

All interval work in the package goes through here so the precision state of
the shared ``mpmath`` contexts is only ever touched in one place.
"""

from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from mpmath import iv, mp

from .exceptions import PrecisionExhausted


@contextmanager
def working_precision(bits):
    """Temporarily set the mantissa precision of both ``mp`` and ``iv``."""
    saved = mp.prec, iv.prec
    mp.prec = iv.prec = int(bits)
    try:
        yield
    finally:
        mp.prec, iv.prec = saved


def precision_ladder(start, cap):
    bits = int(start)
    while True:
        yield bits
        if bits >= cap:
            return
        bits = min(2 * bits, int(cap))


def certify(fn, start, cap, what="value"):
    """Call ``fn(bits)`` on a doubling precision ladder until it returns non-None."""
    for bits in precision_ladder(start, cap):
        with working_precision(bits):
            out = fn(bits)
        if out is not None:
            return out
    raise PrecisionExhausted(f"could not certify {what} at {cap} bits")


def ival(x):
    """Exact-input interval: ints and Fractions are enclosed rigorously."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    return iv.mpf(x)


def sign(x):
    """Certified sign of a real interval: +1, -1, 0 (exact zero) or None."""
    if x.a > 0:
        return 1
    if x.b < 0:
        return -1
    if x.a == 0 and x.b == 0:
        return 0
    return None


def _raw_to_fraction(raw):
    sgn, man, exp, _ = raw
    if not man:
        if exp:  # +-inf or nan
            raise ValueError("interval endpoint is not finite")
        return Fraction(0)
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sgn else val


def endpoints(x):
    """Exact (lower, upper) endpoints of a real interval as Fractions."""
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def mid(x):
    return mp.mpf(x.mid)


def radius(x):
    return mp.mpf(x.delta) / 2


@lru_cache(maxsize=None)
def _signed_permutations(n):
    out = []
    for perm in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        out.append((perm, -1 if inversions % 2 else 1))
    return tuple(out)


def leibniz_det(rows):
    """Division-free determinant, so interval widths stay proportional."""
    n = len(rows)
    if n == 0:
        return iv.mpf(1)
    total = iv.mpf(0)
    for perm, s in _signed_permutations(n):
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        total = total + term if s > 0 else total - term
    return total


def fraction_det(rows):
    """Exact determinant of a rational (or integer) matrix."""
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def fraction_inverse(rows):
    """Exact inverse by Gauss-Jordan; returns None for a singular matrix."""
    n = len(rows)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


def interval_solve(rows, rhs):
    """Cramer's rule on interval data; None if the determinant straddles 0."""
    d = leibniz_det(rows)
    if sign(d) in (0, None):
        return None
    n = len(rows)
    out = []
    for k in range(n):
        swapped = [[rhs[i] if j == k else rows[i][j] for j in range(n)]
                   for i in range(n)]
        out.append(leibniz_det(swapped) / d)
    return out
