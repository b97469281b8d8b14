"""Core domain types and the interval-shortfall objective.

Everything here is exact: service vectors are tuples of ``Fraction`` and the
objective is evaluated with big-integer rational arithmetic.  Binary floats
are refused on input so that decimal data like "2.2" never picks up rounding
noise (floats belong to the numerical oracle only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import StabilityError, TrivialRegimeError, ValidationError

RationalLike = Union[Fraction, int, str]

ServiceVector = tuple[Fraction, ...]


def as_rational(value: RationalLike) -> Fraction:
    """Convert an int, a "p/q" string or a decimal string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(
            f"refusing to coerce {value!r}; pass an int, Fraction, or decimal/ratio string"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValidationError(f"not a rational number: {value!r}") from exc


def service_vector(entries: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    """Validate and normalize a candidate solution vector."""
    vec = tuple(as_rational(e) for e in entries)
    if not vec:
        raise ValidationError("service vector must have at least one entry")
    if any(e < 0 for e in vec):
        raise ValidationError("service vector entries must be nonnegative")
    return vec


@dataclass(frozen=True)
class Instance:
    """Problem parameterization: n waiting customers, demand x, mass budget w.

    Requires 0 < w < n*x; the w >= n*x regime is rejected because the
    minimization is trivial there.  Derived quantities:

    * ``m``: number of whole x-masses that fit in w,
    * ``r``: leftover mass, 0 <= r < x,
    * ``y``: complement x - r, so y + r = x.
    """

    n: int
    x: Fraction
    w: Fraction

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise ValidationError(f"n must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ValidationError(f"n must be at least 1, got {self.n}")
        object.__setattr__(self, "x", as_rational(self.x))
        object.__setattr__(self, "w", as_rational(self.w))
        if self.x <= 0:
            raise ValidationError(f"x must be positive, got {self.x}")
        if self.w <= 0:
            raise ValidationError(f"w must be positive, got {self.w}")
        if self.w >= self.n * self.x:
            raise TrivialRegimeError(
                f"trivial regime: w = {self.w} >= n*x = {self.n * self.x}, "
                "every interval can be saturated"
            )

    @property
    def m(self) -> int:
        return math.floor(self.w / self.x)

    @property
    def r(self) -> Fraction:
        return self.w - self.m * self.x

    @property
    def y(self) -> Fraction:
        return self.x - self.r


@dataclass(frozen=True)
class QueueParams:
    """Arrival rate and first two service-demand moments of the queue.

    Stability (lam * mu1 < 1) is enforced at construction.  lam = 0 is
    accepted as the degenerate no-arrivals limit.
    """

    lam: Fraction
    mu1: Fraction
    mu2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "mu1", as_rational(self.mu1))
        object.__setattr__(self, "mu2", as_rational(self.mu2))
        if self.lam < 0:
            raise ValidationError(f"arrival rate must be nonnegative, got {self.lam}")
        if self.mu1 <= 0:
            raise ValidationError(f"mu1 must be positive, got {self.mu1}")
        if self.mu2 < self.mu1 * self.mu1:
            raise ValidationError(
                f"mu2 = {self.mu2} < mu1^2 = {self.mu1 * self.mu1}: not a valid second moment"
            )
        if self.rho >= 1:
            raise StabilityError(f"utilization rho = {self.rho} >= 1")

    @property
    def rho(self) -> Fraction:
        return self.lam * self.mu1


def _prefix_sums(vec: tuple[Fraction, ...]) -> list[Fraction]:
    prefix = [Fraction(0)]
    acc = Fraction(0)
    for e in vec:
        acc += e
        prefix.append(acc)
    return prefix


def eval_f(v: Iterable[RationalLike], x: RationalLike) -> Fraction:
    """Total shortfall: sum of (x - interval sum)^+ over all index intervals.

    Uses prefix sums, so the cost is one subtraction per interval.  Since
    entries are nonnegative, the inner scan stops as soon as an interval is
    saturated.
    """
    vec = service_vector(v)
    xq = as_rational(x)
    if xq <= 0:
        raise ValidationError(f"x must be positive, got {xq}")
    prefix = _prefix_sums(vec)
    n = len(vec)
    total = Fraction(0)
    for k in range(n):
        base = prefix[k]
        for end in range(k + 1, n + 1):
            gap = xq - (prefix[end] - base)
            if gap <= 0:
                break
            total += gap
    return total


def eval_f_row(v: Iterable[RationalLike], x: RationalLike, j: int) -> Fraction:
    """Shortfall restricted to the n+1-j intervals of exactly j consecutive indices."""
    vec = service_vector(v)
    xq = as_rational(x)
    if xq <= 0:
        raise ValidationError(f"x must be positive, got {xq}")
    n = len(vec)
    if isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= n:
        raise ValidationError(f"row length j must be an integer in [1, {n}], got {j!r}")
    prefix = _prefix_sums(vec)
    total = Fraction(0)
    for k in range(n + 1 - j):
        gap = xq - (prefix[k + j] - prefix[k])
        if gap > 0:
            total += gap
    return total


def strict_pair_sum(v: Iterable[RationalLike], x: RationalLike) -> Fraction:
    """Shortfall over intervals of length at least two (the variance bracket term)."""
    vec = service_vector(v)
    xq = as_rational(x)
    if xq <= 0:
        raise ValidationError(f"x must be positive, got {xq}")
    prefix = _prefix_sums(vec)
    n = len(vec)
    total = Fraction(0)
    for k in range(n - 1):
        base = prefix[k]
        for end in range(k + 2, n + 1):
            gap = xq - (prefix[end] - base)
            if gap <= 0:
                break
            total += gap
    return total


def externality_mean(q: QueueParams, n: int, x: RationalLike) -> Fraction:
    """Expected externalities n*x/(1 - rho); independent of the service vector."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    xq = as_rational(x)
    if xq <= 0:
        raise ValidationError(f"x must be positive, got {xq}")
    return n * xq / (1 - q.rho)


def externality_variance(
    q: QueueParams, v: Iterable[RationalLike], x: RationalLike
) -> Fraction:
    """Externalities variance: lam*mu2/(1-rho)^3 * (n*x + 2 * pair shortfall).

    The bracket sums intervals of length >= 2 only; singleton intervals do
    not enter, unlike :func:`eval_f`.
    """
    vec = service_vector(v)
    xq = as_rational(x)
    factor = q.lam * q.mu2 / (1 - q.rho) ** 3
    return factor * (len(vec) * xq + 2 * strict_pair_sum(vec, xq))


def supremum_vector(inst: Instance) -> tuple[Fraction, ...]:
    """Variance-maximizing allocation: the whole budget on the first coordinate."""
    return (inst.w,) + (Fraction(0),) * (inst.n - 1)


def is_in_lambda(v: Iterable[RationalLike], w: RationalLike) -> bool:
    """Membership in the continuous feasible set: nonnegative, sum <= w."""
    try:
        vec = service_vector(v)
    except ValidationError:
        return False
    return sum(vec, Fraction(0)) <= as_rational(w)


def is_in_upsilon(v: Iterable[RationalLike], inst: Instance) -> bool:
    """Membership in the combinatorial feasible set of the instance.

    m entries equal to x, one entry equal to r when r > 0, all others zero.
    """
    try:
        vec = service_vector(v)
    except ValidationError:
        return False
    if len(vec) != inst.n:
        return False
    m, r, x = inst.m, inst.r, inst.x
    n_x = sum(1 for e in vec if e == x)
    if r > 0:
        n_r = sum(1 for e in vec if e == r)
        n_zero = sum(1 for e in vec if e == 0)
        return n_x == m and n_r == 1 and n_x + n_r + n_zero == len(vec)
    n_zero = sum(1 for e in vec if e == 0)
    return n_x == m and n_x + n_zero == len(vec)
