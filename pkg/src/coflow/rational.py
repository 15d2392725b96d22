"""Parsing and rendering of exact rationals.

All quantities in this package are :class:`fractions.Fraction`; the wire
format is "p/q" (or just "p" for integers).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import StructuralError


def parse_rational(text: str | int) -> Fraction:
    """Parse "p/q" or "p" into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise StructuralError(f"not a rational: {text!r}") from exc


def render_rational(q: Fraction | int) -> str:
    """Render a rational as "p/q", or "p" when it is an integer."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_decimal(q: Fraction, sig_digits: int = 6) -> str:
    """Decimal rendering for display only; never used in any exact check."""
    if q == 0:
        return "0"
    return f"{float(q):.{sig_digits}g}"
