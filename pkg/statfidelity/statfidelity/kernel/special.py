"""
Regularized incomplete beta and gamma functions.

Both follow the classic Numerical Recipes split: the incomplete beta is a
continued fraction evaluated with the modified Lentz method, applied to
I_x(a, b) or to its complement depending on which side of (a+1)/(a+b+2)
x falls; the incomplete gamma uses its power series below s+1 and a
continued fraction above.
"""
import math

from scipy.special import gammaln

from statfidelity_common.exceptions import DomainError, require

_EPS = 1.0e-16
_TINY = 1.0e-300
_MAX_ITER = 100000


def _lentz_guard(value: float) -> float:
    return _TINY if abs(value) < _TINY else value


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction part of I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 / _lentz_guard(1.0 - qab * x / qap)
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 / _lentz_guard(1.0 + aa * d)
        c = _lentz_guard(1.0 + aa / c)
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 / _lentz_guard(1.0 + aa * d)
        c = _lentz_guard(1.0 + aa / c)
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise DomainError(f"Incomplete beta did not converge for a={a}, b={b}, x={x}")


def _incomplete_beta(a: float, b: float, x: float, y: float) -> float:
    """I_x(a, b) with y = 1 - x supplied by the caller to keep its precision."""
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (gammaln(a + b) - gammaln(a) - gammaln(b)
                 + a * math.log(x) + b * math.log(y))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, y) / b


def _check_beta_args(a: float, b: float, x: float) -> None:
    require(math.isfinite(a) and a > 0.0, DomainError, f"a must be positive, got {a}")
    require(math.isfinite(b) and b > 0.0, DomainError, f"b must be positive, got {b}")
    require(0.0 <= x <= 1.0, DomainError, f"x must lie in [0, 1], got {x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """
    I_x(a, b), the regularized incomplete beta function.

    Raises:
        DomainError: unless a, b > 0 and 0 <= x <= 1
    """
    _check_beta_args(a, b, x)
    value = _incomplete_beta(float(a), float(b), float(x), 1.0 - float(x))
    return min(1.0, max(0.0, value))


def regularized_incomplete_beta_tail(a: float, b: float, x: float, y: float) -> float:
    """
    I_x(a, b) where the caller also passes y = 1 - x computed without
    cancellation (e.g. t^2 / (df + t^2) next to df / (df + t^2)).
    """
    _check_beta_args(a, b, x)
    require(0.0 <= y <= 1.0, DomainError, f"y must lie in [0, 1], got {y}")
    return min(1.0, max(0.0, _incomplete_beta(float(a), float(b), float(x), float(y))))


def _gamma_series(s: float, x: float) -> float:
    """P(s, x) by its power series; converges quickly for x < s + 1."""
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + s * math.log(x) - gammaln(s))
    raise DomainError(f"Incomplete gamma series did not converge for s={s}, x={x}")


def _gamma_continued_fraction(s: float, x: float) -> float:
    """Q(s, x) by its continued fraction (modified Lentz); for x >= s + 1."""
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / _lentz_guard(b)
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = 1.0 / _lentz_guard(an * d + b)
        c = _lentz_guard(b + an / c)
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + s * math.log(x) - gammaln(s)) * h
    raise DomainError(f"Incomplete gamma continued fraction did not converge for s={s}, x={x}")


def _check_gamma_args(s: float, x: float) -> None:
    require(math.isfinite(s) and s > 0.0, DomainError, f"s must be positive, got {s}")
    require(not math.isnan(x) and x >= 0.0, DomainError, f"x must be non-negative, got {x}")


def regularized_incomplete_gamma_lower(s: float, x: float) -> float:
    """
    P(s, x) = gamma(s, x) / Gamma(s).

    Raises:
        DomainError: unless s > 0 and x >= 0
    """
    _check_gamma_args(s, x)
    s, x = float(s), float(x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        value = _gamma_series(s, x)
    else:
        value = 1.0 - _gamma_continued_fraction(s, x)
    return min(1.0, max(0.0, value))


def regularized_incomplete_gamma_upper(s: float, x: float) -> float:
    """Q(s, x) = 1 - P(s, x), computed directly in the far tail."""
    _check_gamma_args(s, x)
    s, x = float(s), float(x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        value = 1.0 - _gamma_series(s, x)
    else:
        value = _gamma_continued_fraction(s, x)
    return min(1.0, max(0.0, value))
