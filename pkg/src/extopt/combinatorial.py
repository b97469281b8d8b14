"""Closed-form solver for the combinatorial minimization over structured vectors.

A candidate places m masses of size x (plus one leftover mass r) on n slots.
Writing the placement as a profile of m+1 gaps that sum to n+1, the objective
depends only on the gap multiset and on where the leftover sits inside the
widest gap.  The optimal profile is near-equidistant except for one widest
gap delta*, which is found by comparing the minimal odd and even candidates
of an exact second-difference criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import ConstructionError, SizeCapError, ValidationError
from .model import Instance, eval_f


@dataclass(frozen=True)
class GapProfile:
    """Gaps between consecutive masses (boundaries included), plus the index
    of the designated widest gap.

    Valid profiles have positive gaps, the maximum at position ``t``, and all
    other gaps pairwise within one of each other.
    """

    gaps: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        gaps = tuple(self.gaps)
        object.__setattr__(self, "gaps", gaps)
        if not gaps or any(g < 1 for g in gaps):
            raise ValidationError(f"gaps must be positive integers, got {gaps}")
        if not 0 <= self.t < len(gaps):
            raise ValidationError(f"t = {self.t} out of range for {len(gaps)} gaps")
        if gaps[self.t] != max(gaps):
            raise ValidationError(f"gap at t = {self.t} is not maximal in {gaps}")
        rest = [g for i, g in enumerate(gaps) if i != self.t]
        if rest and max(rest) - min(rest) > 1:
            raise ValidationError(f"non-widest gaps of {gaps} differ by more than 1")

    @property
    def delta(self) -> int:
        return self.gaps[self.t]


@dataclass(frozen=True)
class DeltaCertificate:
    """Artifacts of the widest-gap search: the odd and even candidates, their
    objective values, the analytic search window, and the chosen delta*."""

    delta1: int
    delta2: int
    delta_star: int
    a_delta1: Fraction
    a_delta2: Fraction
    window: tuple[Fraction, Fraction]
    used_fallback: bool = False


def middle_points(a: int, b: int) -> tuple[int, ...]:
    """Middle point(s) of the integer range {a, ..., b}: one when a+b is even,
    two adjacent ones when a+b is odd."""
    if isinstance(a, bool) or isinstance(b, bool) or not (isinstance(a, int) and isinstance(b, int)):
        raise ValidationError(f"middle points need integers, got {a!r}, {b!r}")
    if a <= 0 or a >= b:
        raise ValidationError(f"need 0 < a < b, got a={a}, b={b}")
    return tuple(range((a + b) // 2, (a + b + 1) // 2 + 1))


def _stretch_middles(a: int, b: int) -> tuple[int, ...]:
    # middle_points extended to the degenerate single-element range
    if a == b:
        return (a,)
    return middle_points(a, b)


def near_equidistant_parts(a: int, b: int) -> tuple[int, ...]:
    """Partition b into a positive parts differing by at most one, ascending."""
    if a <= 0 or b < a:
        raise ValidationError(f"cannot split {b} into {a} positive near-equal parts")
    q, s = divmod(b, a)
    return (q,) * (a - s) + (q + 1,) * s


def h(a: int, b: int) -> Fraction:
    """Half the sum of part*(part-1) over a near-equal split of b into a parts.

    This counts the index intervals that fit strictly inside the parts; the
    closed form below equals the direct sum for every valid split.
    """
    if isinstance(a, bool) or isinstance(b, bool) or not (isinstance(a, int) and isinstance(b, int)):
        raise ValidationError(f"h needs integers, got {a!r}, {b!r}")
    if a <= 0 or b < a:
        raise ValidationError(f"need 0 < a <= b, got a={a}, b={b}")
    q, s = divmod(b, a)
    return Fraction(s * (q + 1) * q + (a - s) * q * (q - 1), 2)


def a_value(inst: Instance, delta: int) -> Fraction:
    """Objective of the best structured placement whose widest gap is delta."""
    m = inst.m
    if m < 1:
        raise ValidationError("a_value needs m >= 1; the w < x case has no gap search")
    if isinstance(delta, bool) or not isinstance(delta, int) or not 1 <= delta <= inst.n + 1 - m:
        raise ValidationError(
            f"delta must be an integer in [1, {inst.n + 1 - m}], got {delta!r}"
        )
    half_pairs = h(m, inst.n + 1 - delta) + Fraction(delta * (delta - 1), 2)
    return inst.x * half_pairs - inst.r * (delta // 2) * ((delta + 1) // 2)


def phi(inst: Instance, delta: int) -> Fraction:
    """Second difference of the widest-gap objective: a_value(delta+2) - a_value(delta).

    Increasing in delta, which is what makes the parity-class bisection valid.
    """
    n, m = inst.n, inst.m
    if m < 1:
        raise ValidationError("phi needs m >= 1")
    if isinstance(delta, bool) or not isinstance(delta, int) or not 1 <= delta <= n - 1:
        raise ValidationError(f"delta must be an integer in [1, {n - 1}], got {delta!r}")
    x, r = inst.x, inst.r
    return (
        (2 * delta + 1) * (x - r / 2)
        - x * ((n - delta - 1) // m + (n - delta) // m)
        - r / 2
    )


def _tau_upper(n: int, m: int) -> int:
    return -((n + 1) // -(m + 1))


def _bisect_first_positive(inst: Instance, lo: int, hi: int) -> int | None:
    # smallest delta in {lo, lo+2, ..., hi} with phi(delta) > 0; phi is increasing
    if lo > hi:
        return None
    count = (hi - lo) // 2 + 1
    left, right = 0, count - 1
    if phi(inst, hi) <= 0:
        return None
    while left < right:
        mid = (left + right) // 2
        if phi(inst, lo + 2 * mid) > 0:
            right = mid
        else:
            left = mid + 1
    return lo + 2 * left


def _class_minimizer(
    inst: Instance, parity: int, win_lo: int, win_hi: int
) -> tuple[int, bool]:
    """Smallest delta of the given parity whose second difference is positive,
    or the top of the feasible class when there is none.

    Tries the analytic window first; any inconsistency falls back to a linear
    scan and is reported in the second component.
    """
    n, m = inst.n, inst.m
    hi = n + 1 - m
    cls_lo = parity
    cls_hi = hi - (hi - parity) % 2
    if cls_hi < cls_lo:
        raise ConstructionError(f"no feasible delta of parity {parity} for {inst}")
    # phi(delta) compares a_value(delta) with a_value(delta+2), so the scan
    # stops two below the top of the feasible range
    scan_hi = cls_hi - 2

    def align_up(v: int) -> int:
        return v if v % 2 == parity % 2 else v + 1

    def align_down(v: int) -> int:
        return v if v % 2 == parity % 2 else v - 1

    b_lo = align_up(max(cls_lo, win_lo))
    b_hi = align_down(min(scan_hi, win_hi))
    if b_lo <= b_hi:
        found = _bisect_first_positive(inst, b_lo, b_hi)
        if found is not None:
            minimal = found - 2 < cls_lo or phi(inst, found - 2) <= 0
            if minimal:
                return found, False
    # window missed: linear scan of the whole parity class
    for delta in range(cls_lo, scan_hi + 1, 2):
        if phi(inst, delta) > 0:
            return delta, True
    return cls_hi, True


def delta_search(inst: Instance) -> DeltaCertificate:
    """Locate the optimal widest gap delta* for an instance with m >= 1.

    Both parity classes are searched for the first positive second
    difference inside the analytic window; delta* is the candidate with the
    smaller objective (the even one on ties).  When r = 0 the objective's
    first difference is already monotone and delta* collapses to
    ceil((n+1)/(m+1)), which is returned directly.
    """
    n, m = inst.n, inst.m
    if m < 1:
        raise ValidationError("delta_search needs m >= 1; place r at a middle point instead")
    x, r = inst.x, inst.r
    denom = x * (1 + Fraction(1, m)) - r / 2
    center = r / 2 + x * Fraction(2 * n - 1 - m, 2 * m)
    d_minus = (center - 1) / denom
    d_plus = (center + 1) / denom
    # +2 absorbs parity rounding at the top of the window
    win_lo = math.ceil(d_minus)
    win_hi = math.floor(d_plus) + 2

    delta1, fb1 = _class_minimizer(inst, 1, win_lo, win_hi)
    delta2, fb2 = _class_minimizer(inst, 2, win_lo, win_hi)
    a1 = a_value(inst, delta1)
    a2 = a_value(inst, delta2)
    fallback = fb1 or fb2
    if r == 0:
        delta_star = _tau_upper(n, m)
        if delta_star not in (delta1, delta2):  # pragma: no cover - theorem guarantee
            fallback = True
    else:
        delta_star = delta1 if a1 < a2 else delta2
    return DeltaCertificate(
        delta1=delta1,
        delta2=delta2,
        delta_star=delta_star,
        a_delta1=a1,
        a_delta2=a2,
        window=(d_minus, d_plus),
        used_fallback=fallback,
    )


def _positions_from_gaps(gaps: tuple[int, ...], count: int) -> tuple[int, ...]:
    positions = []
    acc = 0
    for g in gaps[:count]:
        acc += g
        positions.append(acc)
    return tuple(positions)


def build_gamma_member(inst: Instance, delta: int) -> tuple[Fraction, ...]:
    """Canonical structured vector with widest gap delta: the delta-gap first,
    the remaining gaps ascending, and the leftover mass at the smallest middle
    point of the widest stretch."""
    n, m, x, r = inst.n, inst.m, inst.x, inst.r
    if isinstance(delta, bool) or not isinstance(delta, int):
        raise ValidationError(f"delta must be an integer, got {delta!r}")
    entries = [Fraction(0)] * n
    if m == 0:
        if delta != n + 1:
            raise ConstructionError(f"with w < x the only valid widest gap is {n + 1}")
        j = _stretch_middles(1, n)[0]
        entries[j - 1] = r
        return tuple(entries)
    if not 1 <= delta <= n + 1 - m:
        raise ConstructionError(f"delta = {delta} leaves no room for {m} masses on {n} slots")
    rest = near_equidistant_parts(m, n + 1 - delta)
    if rest[-1] > delta:
        raise ConstructionError(
            f"delta = {delta} is smaller than the near-equal remainder gaps {rest}"
        )
    if r > 0 and delta < 2:
        raise ConstructionError("the widest stretch has no slot for the leftover mass")
    gaps = (delta,) + rest
    for pos in _positions_from_gaps(gaps, m):
        entries[pos - 1] = x
    if r > 0:
        j = _stretch_middles(1, delta - 1)[0]
        entries[j - 1] = r
    return tuple(entries)


def _multiset_permutations(values: dict[int, int]) -> Iterator[tuple[int, ...]]:
    # distinct permutations of a small multiset given as value -> count
    total = sum(values.values())

    def rec(prefix: list[int], remaining: dict[int, int], left: int) -> Iterator[tuple[int, ...]]:
        if left == 0:
            yield tuple(prefix)
            return
        for val in sorted(remaining):
            if remaining[val] == 0:
                continue
            remaining[val] -= 1
            prefix.append(val)
            yield from rec(prefix, remaining, left - 1)
            prefix.pop()
            remaining[val] += 1

    return rec([], dict(values), total)


def enumerate_gamma(inst: Instance, delta: int, cap: int = 20) -> list[tuple[Fraction, ...]]:
    """Every structured vector with widest gap delta, deduplicated and in
    lexicographic order.  Bounded by ``cap`` on n to keep the output small."""
    n, m, x, r = inst.n, inst.m, inst.x, inst.r
    if n > cap:
        raise SizeCapError(f"n = {n} exceeds the enumeration cap {cap}")
    if isinstance(delta, bool) or not isinstance(delta, int) or delta < 1 or delta > n + 1:
        raise ValidationError(f"delta must be an integer in [1, {n + 1}], got {delta!r}")
    if m == 0:
        if delta != n + 1:
            return []
        out = []
        for j in _stretch_middles(1, n):
            entries = [Fraction(0)] * n
            entries[j - 1] = r
            out.append(tuple(entries))
        return sorted(set(out))

    total_rest = n + 1 - delta
    if total_rest < m:
        return []
    q, s = divmod(total_rest, m)
    if max(q + (1 if s else 0), q) > delta or (r > 0 and delta < 2):
        return []
    counts: dict[int, int] = {delta: 1}
    if s:
        counts[q + 1] = counts.get(q + 1, 0) + s
    counts[q] = counts.get(q, 0) + (m - s)

    seen: set[tuple[tuple[int, ...], int]] = set()
    for arrangement in _multiset_permutations(counts):
        positions = _positions_from_gaps(arrangement, m)
        boundaries = (0,) + positions + (n + 1,)
        for t, gap in enumerate(arrangement):
            if gap != delta:
                continue
            rest = [g for i, g in enumerate(arrangement) if i != t]
            if rest and max(rest) - min(rest) > 1:
                continue
            if r > 0:
                lo, hi = boundaries[t] + 1, boundaries[t + 1] - 1
                for j in _stretch_middles(lo, hi):
                    seen.add((positions, j))
            else:
                seen.add((positions, 0))

    members = []
    for positions, j in seen:
        entries = [Fraction(0)] * n
        for pos in positions:
            entries[pos - 1] = x
        if j:
            entries[j - 1] = r
        members.append(tuple(entries))
    return sorted(set(members))


def solve_combinatorial(inst: Instance):
    """Exact minimizer over the structured placements, with its certificate."""
    from .report import PROVEN, SolveReport

    if inst.m == 0:
        vector = build_gamma_member(inst, inst.n + 1)
        objective = eval_f(vector, inst.x)
        return SolveReport(
            instance=inst,
            vector=vector,
            objective=objective,
            status=PROVEN,
            method="combinatorial/middle-point",
        )
    cert = delta_search(inst)
    vector = build_gamma_member(inst, cert.delta_star)
    objective = eval_f(vector, inst.x)
    expected = a_value(inst, cert.delta_star)
    if objective != expected:
        raise ConstructionError(
            f"built vector scores {objective}, widest-gap formula says {expected}"
        )
    return SolveReport(
        instance=inst,
        vector=vector,
        objective=objective,
        status=PROVEN,
        method="combinatorial/gap-profile",
        delta_cert=cert,
    )
