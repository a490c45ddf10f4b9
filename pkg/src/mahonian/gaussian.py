"""Mixed moments of a centred bivariate normal with equal variances."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


@dataclass(frozen=True)
class GaussianSpec:
    """Common variance ``V`` of both coordinates and their covariance ``C``."""

    variance: Fraction
    covariance: Fraction

    def __post_init__(self):
        v = Fraction(self.variance)
        c = Fraction(self.covariance)
        if v < 0:
            raise ValueError(f"variance must be nonnegative, got {v}")
        if abs(c) > v:
            raise ValueError(f"|covariance| {abs(c)} exceeds variance {v}")
        object.__setattr__(self, "variance", v)
        object.__setattr__(self, "covariance", c)

    @property
    def correlation(self) -> Fraction:
        if self.variance == 0:
            raise ZeroDivisionError("correlation undefined for zero variance")
        return self.covariance / self.variance

    @classmethod
    def two_letter(cls, a, b) -> "GaussianSpec":
        """Limit parameters for the alphabet ``{1^a, 2^b}``."""
        a = Fraction(a)
        b = Fraction(b)
        return cls(a * b * (a + b) / 12, a * b * (b - a) / 12)


def double_factorial(k: int) -> int:
    """``k!!`` for odd ``k >= -1``, with ``(-1)!! = 1``."""
    if k < -1 or k % 2 == 0:
        raise ValueError(f"double factorial only defined here for odd k >= -1, got {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def matching_count(r: int, s: int, j: int) -> int:
    """Perfect matchings of ``[r] + [s]`` with exactly ``j`` edges across."""
    if j < 0 or j > min(r, s) or (r - j) % 2 or (s - j) % 2:
        return 0
    return comb(r, j) * comb(s, j) * factorial(j) * double_factorial(r - j - 1) * double_factorial(s - j - 1)


def isserlis_moment(r: int, s: int, g: GaussianSpec) -> Fraction:
    """``E(X^r Y^s)`` summed over perfect matchings, grouped by cross edges."""
    if r < 0 or s < 0:
        raise ValueError("orders must be nonnegative")
    if (r + s) % 2:
        return Fraction(0)
    half = (r + s) // 2
    return sum(
        (matching_count(r, s, j) * g.variance ** (half - j) * g.covariance**j
         for j in range(min(r, s) + 1)),
        Fraction(0),
    )


def recurrence_moment(r: int, s: int, g: GaussianSpec) -> Fraction:
    """Same moment through the red-vertex double-counting recurrence."""
    if r < 0 or s < 0:
        raise ValueError("orders must be nonnegative")
    v, c = g.variance, g.covariance

    @lru_cache(maxsize=None)
    def m(x, y):
        if x < 0 or y < 0 or (x + y) % 2:
            return Fraction(0)
        if x == y == 0:
            return Fraction(1)
        total = 0
        if x >= 2:
            total += v * x * (x - 1) * m(x - 2, y)
        if y >= 2:
            total += v * y * (y - 1) * m(x, y - 2)
        if x and y:
            total += 2 * x * y * c * m(x - 1, y - 1)
        return Fraction(total) / (x + y)

    return m(r, s)


def d2_closed_form(r: int, s: int, a, b) -> Fraction:
    """Two-letter limit moment ``E(X^r Y^s)`` from the single-sum closed form.

    For ``r < s`` the orders are swapped; both coordinates share the same
    variance so the moment is symmetric in ``(r, s)``.
    """
    if (r + s) % 2:
        raise ValueError(f"closed form needs r + s even, got {r} + {s}")
    if r < s:
        r, s = s, r
    a = Fraction(a)
    b = Fraction(b)
    half = (r + s) // 2
    total = Fraction(0)
    for j in range(s + 1):
        total += (
            Fraction(comb(s, j), double_factorial(r - s - 1))
            * double_factorial(r + s - 2 * j - 1)
            * double_factorial(r - s + 2 * j - 1)
            * (-a) ** j
            * b ** (s - j)
        )
    return (a * b / 12) ** half * (a + b) ** ((r - s) // 2) * total


def standardized_moment(r: int, s: int, rho) -> Fraction:
    """Mixed moment of the standard bivariate normal with correlation ``rho``."""
    return isserlis_moment(r, s, GaussianSpec(Fraction(1), Fraction(rho)))
