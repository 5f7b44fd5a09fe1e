"""Parsing helpers for numbers as they are printed in papers."""
from decimal import Decimal, InvalidOperation

from statfidelity_common.exceptions import ParseError

# Characters PDF extraction substitutes for an ASCII minus sign
_MINUS_SIGNS = ("−", "–", "‒", "‐")


def normalize_number_text(text: str) -> str:
    """Strip thousands separators and map typographic minus signs to '-'."""
    cleaned = text.strip().replace(",", "")
    for sign in _MINUS_SIGNS:
        cleaned = cleaned.replace(sign, "-")
    return cleaned


def parse_decimal(text: str) -> Decimal:
    """
    Parse printed numeric text into an exact Decimal.

    Accepts leading-dot forms (".019"), thousands separators ("1,234.5"),
    typographic minus signs and e-notation ("1e-5").

    Raises:
        ParseError: if the text is not a finite decimal number
    """
    cleaned = normalize_number_text(text)
    try:
        value = Decimal(cleaned)
    except (InvalidOperation, ValueError):
        raise ParseError(f"Not a number: {text!r}")
    if not value.is_finite():
        raise ParseError(f"Not a finite number: {text!r}")
    return value


def parse_number(text: str) -> float:
    return float(parse_decimal(text))


def decimal_places(text: str) -> int:
    """Number of printed digits after the decimal point (0 for integers)."""
    exponent = parse_decimal(text).as_tuple().exponent
    return max(0, -int(exponent))
