"""
Exact Coordinate Functions

This module provides functions to parse, format and measure agent
coordinates. Coordinates are exact rationals (`fractions.Fraction`), so
every comparison in the package is free of rounding.
"""

import re
from fractions import Fraction

from .errors import InputError

Coord = Fraction

RATIONAL_PATTERN = r"[+-]?\d+/\d+"
DECIMAL_PATTERN = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"


def is_coord_format(text: str) -> bool:
    """
    Checks if the string is a decimal ("1.5") or rational ("3/2") number.

    Args:
        text (str): String to check

    Returns:
        bool: True if the string has a coordinate format, False otherwise

    Example:
        - is_coord_format("3/2")  # Returns: True
        - is_coord_format("-0.5")  # Returns: True
        - is_coord_format("1.5.2")  # Returns: False
    """
    text = text.strip()
    return bool(
        re.fullmatch(RATIONAL_PATTERN, text)
        or re.fullmatch(DECIMAL_PATTERN, text)
    )


def parse_coord(value: str | int | Fraction) -> Fraction:
    """
    Parses a coordinate exactly, without passing through floating point.

    Args:
        value (str | int | Fraction): Decimal or rational text, or a number

    Returns:
        Fraction: The exact value in lowest terms

    Example:
        - parse_coord("0.2361")  # Returns: Fraction(2361, 10000)
        - parse_coord("3/2")  # Returns: Fraction(3, 2)
        - parse_coord("1/0")  # Raises: InputError
    """
    if isinstance(value, bool):
        raise InputError(f"malformed number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"malformed number: {value!r}")

    if not is_coord_format(value):
        raise InputError(f"malformed number: {value!r}")

    text = value.strip()
    if re.fullmatch(RATIONAL_PATTERN, text) and re.search(r"/0+$", text):
        raise InputError(f"zero denominator: {value!r}")

    return Fraction(text)


def format_coord(value: Fraction) -> str:
    """
    Formats a coordinate as its canonical rational string.

    Args:
        value (Fraction): Value to format

    Returns:
        str: "p/q" in lowest terms, or "p" when the denominator is 1

    Example:
        - format_coord(Fraction(3, 2))  # Returns: "3/2"
        - format_coord(Fraction(-4, 2))  # Returns: "-2"
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_display_float(value: Fraction) -> float:
    """
    Rounds an exact value to 15 significant digits for display.

    Example:
        - to_display_float(Fraction(22, 21))  # Returns: 1.04761904761905
    """
    return float(f"{float(value):.15g}")


def distance(a: Fraction, b: Fraction) -> Fraction:
    """
    Distance between two points of the line.

    Example:
        - distance(Fraction(-1, 2), Fraction(2))  # Returns: Fraction(5, 2)
    """
    return abs(a - b)


__all__ = [
    "Coord",
    "is_coord_format",
    "parse_coord",
    "format_coord",
    "to_display_float",
    "distance",
]
