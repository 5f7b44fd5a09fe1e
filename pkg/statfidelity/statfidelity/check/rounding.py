from decimal import Decimal
from typing import Optional, Tuple

from statfidelity_common.utils.numbers import parse_decimal


def rounding_interval(value_text: str, lower_bound: Optional[float] = None,
                      upper_bound: Optional[float] = None) -> Tuple[float, float]:
    """
    Half-open interval [v - 0.5*10^-d, v + 0.5*10^-d) of true values that
    round half-up to the printed ``value_text`` with d fraction digits.

    Optional bounds clamp the interval to the domain of the quantity
    (e.g. 0 for chi-square, [0, 1] for a p-value).

    Raises:
        ParseError: if ``value_text`` is not numeric
    """
    value = parse_decimal(value_text)
    exponent = value.as_tuple().exponent
    half = Decimal(5).scaleb(int(exponent) - 1)
    lo, hi = float(value - half), float(value + half)
    if lower_bound is not None:
        lo = max(lo, lower_bound)
    if upper_bound is not None:
        hi = min(hi, upper_bound)
    return lo, hi
