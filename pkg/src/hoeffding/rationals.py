"""Rational parsing/formatting and binomial coefficients.

The whole deterministic side of the library works in exact rationals
(:class:`fractions.Fraction`); floats appear only in the Monte Carlo module.
Rationals travel through documents and reports as ``"p/q"`` or ``"p"`` text
with decimal integers, never as binary floats.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import ParseError

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (decimal integers) into a Fraction."""
    if not isinstance(text, str):
        raise ParseError(f"expected a rational as text, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binom(n: int, k: int) -> int:
    """Binomial coefficient with value 0 outside the support 0 <= k <= n.

    The out-of-support convention keeps lifting and symmetrization sums
    uniformly indexed, with no boundary special cases at the call sites.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)
