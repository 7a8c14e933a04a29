"""Exact rational bounds on base-2 logarithms.

Thresholds that involve ``log2 m`` are compared by cross-multiplication
against rationals that provably bound the real value.  Bounds are dyadic
with ``BITS`` fractional bits and are exact whenever the true value is a
multiple of ``2**-BITS`` (e.g. ``m`` a power of two).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

BITS = 10
_SCALE = 1 << BITS


@lru_cache(maxsize=4096)
def log2_lower(m: int) -> Fraction:
    """Largest ``p / 2**BITS`` with ``2**(p / 2**BITS) <= m``."""
    if m < 1:
        raise ValueError(f"log2 undefined for {m}")
    if m == 1:
        return Fraction(0)
    p = int(math.floor(math.log2(m) * _SCALE))
    target = m**_SCALE
    while (1 << (p + 1)) <= target:
        p += 1
    while (1 << p) > target:
        p -= 1
    return Fraction(p, _SCALE)


@lru_cache(maxsize=4096)
def log2_upper(m: int) -> Fraction:
    """Smallest ``p / 2**BITS`` with ``2**(p / 2**BITS) >= m``."""
    lo = log2_lower(m)
    if (1 << lo.numerator * (_SCALE // lo.denominator)) == m**_SCALE:
        return lo
    return lo + Fraction(1, _SCALE)


@lru_cache(maxsize=4096)
def loglog2_lower(m: int) -> Fraction:
    """Dyadic lower bound on ``log2(log2 m)``; requires ``m >= 2``."""
    if m < 2:
        raise ValueError(f"log2 log2 undefined for {m}")
    lo = log2_lower(m)
    p = lo.numerator * (_SCALE // lo.denominator)  # lo == p / 2**BITS
    if p == 0:
        raise ValueError(f"log2 log2 undefined for {m}")
    # 2**(q / 2**BITS) <= p / 2**BITS  <=>  2**(q + BITS * 2**BITS) <= p**(2**BITS)
    target = p**_SCALE
    shift = BITS * _SCALE
    q = int(math.floor(math.log2(p / _SCALE) * _SCALE)) if p >= _SCALE else 0
    while (1 << (q + 1 + shift)) <= target:
        q += 1
    while q + shift < 0 or (1 << (q + shift)) > target:
        q -= 1
    return Fraction(q, _SCALE)


def floor_loglog(m: int) -> int:
    """``floor(log2 log2 m)`` computed with integers; ``m >= 2``."""
    if m < 2:
        raise ValueError(f"log2 log2 undefined for {m}")
    j = 0
    while m >= 1 << (1 << (j + 1)):
        j += 1
    return j


def ceil_loglog(m: int) -> int:
    """Smallest ``k >= 0`` with ``m <= 2**(2**k)``; ``m >= 1``."""
    k = 0
    while m > 1 << (1 << k):
        k += 1
    return k


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text.strip())
