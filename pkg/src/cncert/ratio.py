"""Exact rational scalars.

Rational multiply/add is the innermost loop of every construction here, so we
use gmpy2's mpq when available and fall back to fractions.Fraction otherwise.
Both are interchangeable for our purposes: exact, always reduced, denominator
positive, hashable, equal across types, and printed as "p/q".

Set CNCERT_RATIO=fractions to force the stdlib backend.
"""

import os
from fractions import Fraction

_mpq = None
if os.environ.get("CNCERT_RATIO") != "fractions":
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:
        _mpq = None

if _mpq is not None:
    Q = _mpq
    RATIO_BACKEND = "gmpy2"
else:
    Q = Fraction
    RATIO_BACKEND = "fractions"

QZERO = Q(0)
QONE = Q(1)

_RATIONAL_TYPES = (int, Fraction, type(QZERO))


def is_rational(value) -> bool:
    """True for plain rational scalars (int, Fraction, or the mpq type)."""
    return isinstance(value, _RATIONAL_TYPES)


def rational(num, den=1):
    """Build a rational from ints, a "p/q" string, or another rational."""
    if den != 1:
        return Q(num) / Q(den)
    if isinstance(num, str):
        text = num.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return Q(int(p)) / Q(int(q))
        return Q(int(text))
    return Q(num)


def rational_text(value) -> str:
    """Canonical "p" or "p/q" rendering (q > 0, reduced)."""
    value = Q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
