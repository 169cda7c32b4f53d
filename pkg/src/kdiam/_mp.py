"""Working-precision configuration.

All numeric evaluation runs on mpmath's arbitrary-precision floats so that
values like e^{-c*n} at n ~ 4096 neither overflow nor underflow to zero.
The precision is fixed once at import from KDIAM_PRECISION_BITS (default 128,
floor 100) and never mutated afterwards, which keeps evaluation pure and
thread-safe.
"""

from __future__ import annotations

import os
from fractions import Fraction

import mpmath
from mpmath import mpf

MIN_PRECISION_BITS = 100
DEFAULT_PRECISION_BITS = 128


def _configured_bits() -> int:
    raw = os.environ.get("KDIAM_PRECISION_BITS", "")
    try:
        bits = int(raw)
    except ValueError:
        bits = DEFAULT_PRECISION_BITS
    return max(MIN_PRECISION_BITS, bits)


PRECISION_BITS = _configured_bits()
mpmath.mp.prec = PRECISION_BITS

INF = mpf("+inf")


def to_mpf(x) -> mpf:
    """Convert int/float/Fraction/mpf to mpf at the working precision."""
    if isinstance(x, mpf):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


def is_finite(x) -> bool:
    return mpmath.isfinite(to_mpf(x))


def format_number(x) -> str:
    """Deterministic decimal rendering used in reports and CSV output."""
    if isinstance(x, Fraction):
        x = to_mpf(x)
    x = to_mpf(x)
    if mpmath.isinf(x):
        return "inf" if x > 0 else "-inf"
    if mpmath.isnan(x):
        return "nan"
    return mpmath.nstr(x, 17, strip_zeros=True)
