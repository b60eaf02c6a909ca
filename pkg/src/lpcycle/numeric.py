"""Scalar arithmetic for the two backends: exact rationals and binary64.

Scalars are plain Python numbers: :class:`fractions.Fraction` (or ``int``)
in exact mode and ``float`` in float mode.  Python would silently coerce a
Fraction/float mix to float, so every public entry point that combines
scalars checks that they share a backend and raises
:class:`MixedBackendError` otherwise.
"""

from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[Fraction, int, float]

_DECIMAL_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)\Z")


class MixedBackendError(TypeError):
    """Raised when exact and float scalars meet in one computation."""


class DecimalParseError(ValueError):
    pass


class Backend(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"

    def convert(self, value: Scalar) -> Scalar:
        """Convert a number into this backend.

        Float -> exact conversion goes through the shortest decimal repr so
        that ``0.4`` becomes ``2/5`` rather than its binary expansion.
        """
        if self is Backend.EXACT:
            if isinstance(value, float):
                if not math.isfinite(value):
                    raise ValueError(f"cannot convert {value!r} to an exact rational")
                return Fraction(repr(value))
            return Fraction(value)
        return float(value)

    def parse(self, text: str) -> Scalar:
        value = parse_number(text)
        return value if self is Backend.EXACT else float(value)

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self is Backend.EXACT else 0.0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self is Backend.EXACT else 1.0


def backend_of(value: Scalar) -> Backend:
    if isinstance(value, float):
        return Backend.FLOAT
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return Backend.EXACT
    raise TypeError(f"not a scalar: {value!r}")


def common_backend(values: Iterable[Scalar]) -> Backend | None:
    """Return the single backend shared by ``values``.

    Plain ints are neutral: they combine exactly with either backend.
    Returns None when there is nothing but ints.
    """
    found = None
    for v in values:
        if isinstance(v, int) and not isinstance(v, bool):
            continue
        b = backend_of(v)
        if found is None:
            found = b
        elif b is not found:
            raise MixedBackendError(f"mixed {found.value} and {b.value} scalars")
    return found


def parse_decimal_exact(text: str) -> Fraction:
    """Parse a plain decimal such as ``"-7.8"`` into an exact Fraction.

    Exponent notation is rejected.

    >>> parse_decimal_exact("-13.55")
    Fraction(-271, 20)
    """
    s = text.strip()
    if not _DECIMAL_RE.match(s):
        for i, ch in enumerate(s):
            if not (ch.isdigit() or ch == "." or (ch in "+-" and i == 0)):
                raise DecimalParseError(f"invalid character {ch!r} at position {i} in {text!r}")
        raise DecimalParseError(f"malformed decimal {text!r}")
    sign = -1 if s.startswith("-") else 1
    s = s.lstrip("+-")
    whole, _, frac = s.partition(".")
    num = int(whole or "0") * 10 ** len(frac) + int(frac or "0")
    return Fraction(sign * num, 10 ** len(frac))


def parse_number(text: str) -> Fraction:
    """Parse a decimal or a quotient of decimals (``"-2.15/2.3"``) exactly."""
    num, sep, den = text.strip().partition("/")
    value = parse_decimal_exact(num)
    if sep:
        d = parse_decimal_exact(den)
        if d == 0:
            raise DecimalParseError(f"zero denominator in {text!r}")
        value /= d
    return value


def to_decimal_string(value: Fraction) -> str | None:
    """Render a Fraction as a terminating decimal, or None if it does not terminate."""
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    digits = max(twos, fives)
    scaled = abs(value.numerator) * 10**digits // value.denominator
    sign = "-" if value < 0 else ""
    if digits == 0:
        return f"{sign}{scaled}"
    body = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def format_scalar(value: Scalar) -> str:
    """Render for logs: exact values as ``p/q``, floats via repr."""
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Scalar) -> str:
    """Render as a decimal: exactly when terminating, else 17 significant digits."""
    if isinstance(value, float):
        return format(value, ".17g")
    text = to_decimal_string(Fraction(value))
    return text if text is not None else format(float(value), ".17g")


def approx_eq(a: Scalar, b: Scalar, tol: Scalar) -> bool:
    """``|a - b| <= tol``; with ``tol == 0`` this is exact equality."""
    common_backend((a, b, tol))
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return abs(a - b) <= tol


def rel_close(a: Scalar, b: Scalar, rel: float, floor: float = 0.0) -> bool:
    """Relative comparison with an absolute floor for values near zero."""
    return abs(a - b) <= rel * max(abs(a), abs(b), floor)
