"""Constructive reals as approximation oracles.

A :class:`CReal` is a function ``k -> Fraction`` whose value at precision
index ``k`` lies within ``2**-k`` of the represented real.  Comparison is
never total; the two dichotomy primitives :func:`dichotomy` and
:func:`pos_or_small` are the only ways to branch on a real.

Rationals are plain :class:`fractions.Fraction` values (always reduced).
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Callable, Optional, Union

__all__ = [
    "CReal",
    "Verdict",
    "WitnessViolation",
    "BudgetExceeded",
    "as_creal",
    "from_rational",
    "parse_rational",
    "format_rational",
    "add",
    "sub",
    "neg",
    "scale_rational",
    "mul",
    "creal_abs",
    "creal_max",
    "creal_min",
    "plus_part",
    "minus_part",
    "inv",
    "div",
    "sqrt",
    "approx_to",
    "dichotomy",
    "pos_or_small",
    "ceil_log2",
    "dyadic",
]

RealLike = Union["CReal", int, Fraction]


class WitnessViolation(ValueError):
    """The caller's claimed gap between two reals is refuted by approximation."""


class BudgetExceeded(RuntimeError):
    """A precision request went past the oracle's budget."""

    def __init__(self, k: int, budget: int):
        super().__init__(f"precision {k} requested, budget is {budget}")
        self.k = k
        self.budget = budget


class Verdict(enum.Enum):
    GAMMA_GT_ALPHA = "GammaGtAlpha"
    GAMMA_LT_BETA = "GammaLtBeta"
    POS = "Pos"
    SMALLER_THAN_E = "SmallerThanE"

    def __str__(self) -> str:
        return self.value


# --------------------------------------------------------------------------
# rational helpers

def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or an integer string into a Fraction.

    Decimal notation is rejected so no float ever enters through the wire.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not a rational string: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def ceil_log2(q: Fraction) -> int:
    """Smallest integer n with 2**n >= q, for q > 0."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    p, d = q.numerator, q.denominator
    n = p.bit_length() - d.bit_length()
    # 2**(n-1) < p/d < 2**(n+1)
    while _pow2(n) < q:
        n += 1
    while _pow2(n - 1) >= q:
        n -= 1
    return n


def _pow2(n: int) -> Fraction:
    return Fraction(1 << n) if n >= 0 else Fraction(1, 1 << -n)


def dyadic(n: int) -> Fraction:
    """``2**-n`` as a Fraction."""
    return _pow2(-n)


def _round_to(q: Fraction, k: int) -> Fraction:
    """Nearest multiple of 2**-k (error <= 2**-(k+1))."""
    if k >= 0:
        scale = 1 << k
        n = (2 * q.numerator * scale + q.denominator) // (2 * q.denominator)
        return Fraction(n, scale)
    scale = 1 << -k
    n = (2 * q.numerator + q.denominator * scale) // (2 * q.denominator * scale)
    return Fraction(n * scale)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as a rational")


# --------------------------------------------------------------------------
# the oracle type

class CReal:
    """Constructive real number given by a precision oracle.

    ``exact`` is set when the value is a known rational; arithmetic on two
    exact operands folds to another exact constant.  Approximations are
    memoised per precision.  When ``record`` is true every request made
    through :meth:`approx` (including those issued by derived reals) is
    appended to :attr:`query_log`.
    """

    __slots__ = ("_fn", "exact", "_cache", "query_log", "budget")

    def __init__(self, fn: Callable[[int], Fraction], exact: Optional[Fraction] = None,
                 record: bool = False, budget: Optional[int] = None):
        self._fn = fn
        self.exact = exact
        self._cache: dict[int, Fraction] = {}
        self.query_log: Optional[list[int]] = [] if record else None
        self.budget = budget

    def approx(self, k: int) -> Fraction:
        if k < 0:
            k = 0
        if self.query_log is not None:
            self.query_log.append(k)
        if self.budget is not None and k > self.budget:
            raise BudgetExceeded(k, self.budget)
        if self.exact is not None:
            return self.exact
        try:
            return self._cache[k]
        except KeyError:
            value = self._cache[k] = self._fn(k)
            return value

    # operator sugar; the module-level functions are the primary API
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return creal_abs(self)

    def __truediv__(self, other):
        if isinstance(other, CReal):
            return NotImplemented
        return scale_rational(self, 1 / _as_fraction(other))

    def __float__(self) -> float:
        return float(self.approx(60))

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"CReal({format_rational(self.exact)})"
        return f"CReal(~{float(self.approx(40)):.12g})"


def as_creal(x: RealLike) -> CReal:
    if isinstance(x, CReal):
        return x
    return from_rational(_as_fraction(x))


def from_rational(q) -> CReal:
    q = _as_fraction(q)
    return CReal(lambda k: q, exact=q)


def approx_to(x: CReal, k: int) -> Fraction:
    """Oracle access point; |result - x| <= 2**-k."""
    if k < 0:
        raise ValueError("precision index must be non-negative")
    return x.approx(k)


# --------------------------------------------------------------------------
# arithmetic

def add(x: RealLike, y: RealLike) -> CReal:
    x, y = as_creal(x), as_creal(y)
    if x.exact is not None and y.exact is not None:
        return from_rational(x.exact + y.exact)
    return CReal(lambda k: x.approx(k + 1) + y.approx(k + 1))


def neg(x: RealLike) -> CReal:
    x = as_creal(x)
    if x.exact is not None:
        return from_rational(-x.exact)
    return CReal(lambda k: -x.approx(k))


def sub(x: RealLike, y: RealLike) -> CReal:
    x, y = as_creal(x), as_creal(y)
    if x.exact is not None and y.exact is not None:
        return from_rational(x.exact - y.exact)
    return CReal(lambda k: x.approx(k + 1) - y.approx(k + 1))


def scale_rational(x: RealLike, q) -> CReal:
    x, q = as_creal(x), _as_fraction(q)
    if x.exact is not None:
        return from_rational(q * x.exact)
    if q == 0:
        return from_rational(0)
    shift = max(ceil_log2(abs(q)), 0)
    return CReal(lambda k: q * x.approx(k + shift))


def _magnitude_bits(x: CReal) -> int:
    # |x| <= |approx(0)| + 1
    return ceil_log2(abs(x.approx(0)) + 1)


def mul(x: RealLike, y: RealLike) -> CReal:
    x, y = as_creal(x), as_creal(y)
    if x.exact is not None and y.exact is not None:
        return from_rational(x.exact * y.exact)
    if x.exact is not None:
        return scale_rational(y, x.exact)
    if y.exact is not None:
        return scale_rational(x, y.exact)
    bounds: list[int] = []

    def fn(k: int) -> Fraction:
        if not bounds:
            bounds.extend((_magnitude_bits(x), _magnitude_bits(y)))
        bx, by = bounds
        # |a*b - x*y| <= (|x|+1)|b-y| + |y||a-x|, each term <= 2**-(k+2)
        a = x.approx(k + 2 + by)
        b = y.approx(k + 2 + bx + 1)
        return _round_to(a * b, k + 2)

    return CReal(fn)


def creal_abs(x: RealLike) -> CReal:
    x = as_creal(x)
    if x.exact is not None:
        return from_rational(abs(x.exact))
    return CReal(lambda k: abs(x.approx(k + 1)))


def creal_max(x: RealLike, y: RealLike) -> CReal:
    x, y = as_creal(x), as_creal(y)
    if x.exact is not None and y.exact is not None:
        return from_rational(max(x.exact, y.exact))
    return CReal(lambda k: max(x.approx(k + 1), y.approx(k + 1)))


def creal_min(x: RealLike, y: RealLike) -> CReal:
    x, y = as_creal(x), as_creal(y)
    if x.exact is not None and y.exact is not None:
        return from_rational(min(x.exact, y.exact))
    return CReal(lambda k: min(x.approx(k + 1), y.approx(k + 1)))


def plus_part(alpha: RealLike) -> CReal:
    """max(alpha, 0)"""
    return creal_max(alpha, 0)


def minus_part(alpha: RealLike) -> CReal:
    """max(-alpha, 0)"""
    return creal_max(neg(alpha), 0)


def inv(y: RealLike, lower) -> CReal:
    """1/y given a rational ``lower`` with 0 < lower <= |y|."""
    y, lower = as_creal(y), _as_fraction(lower)
    if lower <= 0:
        raise ValueError("inverse needs a positive lower bound on |y|")
    if y.exact is not None:
        if y.exact == 0:
            raise ZeroDivisionError("inverse of exact zero")
        return from_rational(1 / y.exact)
    base = ceil_log2(2 / lower)
    slope = ceil_log2(2 / (lower * lower))

    def fn(k: int) -> Fraction:
        # |a| >= lower/2, so |1/a - 1/y| <= 2**-m * 2/lower**2
        m = max(base, k + 2 + slope)
        a = y.approx(m)
        if abs(a) < lower / 2:
            raise WitnessViolation("claimed lower bound on |y| is refuted")
        return _round_to(1 / a, k + 2)

    return CReal(fn)


def div(x: RealLike, y: RealLike, lower) -> CReal:
    """x / y given a rational lower bound on |y|."""
    return mul(x, inv(y, lower))


def _sqrt_floor(q: Fraction, k: int) -> Fraction:
    """floor(sqrt(q) * 2**k) / 2**k for q >= 0; error < 2**-k."""
    scaled = (q.numerator << (2 * k)) // q.denominator
    return Fraction(isqrt(scaled), 1 << k)


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    p, d = q.numerator, q.denominator
    rp, rd = isqrt(p), isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def sqrt(s: RealLike) -> CReal:
    """Square root of a non-negative real.

    Uses |sqrt(a) - sqrt(b)| <= sqrt(|a - b|), so no positive lower bound on
    the radicand is needed.
    """
    s = as_creal(s)
    if s.exact is not None:
        if s.exact < 0:
            raise ValueError("square root of a negative rational")
        root = _exact_sqrt(s.exact)
        if root is not None:
            return from_rational(root)
        q = s.exact
        return CReal(lambda k: _sqrt_floor(q, k))

    def fn(k: int) -> Fraction:
        a = s.approx(2 * k + 2)
        return _sqrt_floor(max(a, Fraction(0)), k + 1)

    return CReal(fn)


# --------------------------------------------------------------------------
# dichotomies

def _precision_for(q: Fraction) -> int:
    """Least k >= 0 with 2**-k <= q."""
    return max(ceil_log2(1 / q), 0)


def dichotomy(alpha: RealLike, beta: RealLike, gap, gamma: RealLike) -> Verdict:
    """Decide ``gamma > alpha`` or ``gamma < beta`` given ``beta - alpha >= gap``.

    gamma is approximated with 2**-k <= gap/16 and compared to the midpoint of
    the approximations of alpha and beta.  A returned GammaGtAlpha certifies
    gamma > alpha + gap/4 and GammaLtBeta certifies gamma < beta - gap/4.
    """
    gap = _as_fraction(gap)
    if gap <= 0:
        raise ValueError("gap must be positive")
    alpha, beta, gamma = as_creal(alpha), as_creal(beta), as_creal(gamma)
    k = _precision_for(gap / 16)
    a, b = alpha.approx(k), beta.approx(k)
    err = dyadic(k)
    if b - a < gap - 2 * err:
        raise WitnessViolation(
            f"beta - alpha < {format_rational(gap)} refuted at precision {k}")
    g = gamma.approx(k)
    if g > (a + b) / 2:
        return Verdict.GAMMA_GT_ALPHA
    return Verdict.GAMMA_LT_BETA


def pos_or_small(x: RealLike, e) -> Verdict:
    """Either x > 0 (in fact x > e/4) or x < e, for x >= 0."""
    e = _as_fraction(e)
    if e <= 0:
        raise ValueError("e must be positive")
    x = as_creal(x)
    k = _precision_for(e / 4)
    if x.approx(k) > e / 2:
        return Verdict.POS
    return Verdict.SMALLER_THAN_E
