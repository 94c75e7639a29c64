"""Regenerative pairs: symmetric witnesses in arithmetic progression.

A pair ``(f, g)`` with ``S(f)`` and ``S(f v g)`` both of order ``m`` (``S`` the
(-1)^m symmetrization) extends forever: ``(f v g, s g*)`` is again such a
pair.  Appending ``g, s g*, g, s g*, ...`` to ``f`` therefore gives nested
left halves of witnesses of lengths ``2 len(f) + 2 k len(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import (
    Bipartition,
    LittlewoodPoly,
    has_order,
    join,
    reversal,
    scale,
    symmetrize,
    symmetry_sign,
    to_bipartition,
)


class TheoremViolation(AssertionError):
    """An extended pair failed re-verification (would be a counterexample)."""


@dataclass(frozen=True)
class RegenerativePair:
    f: LittlewoodPoly
    g: LittlewoodPoly
    m: int

    @property
    def s(self) -> int:
        return symmetry_sign(self.m)

    @property
    def lengths(self) -> tuple[int, int]:
        """(2 len(f), 2 len(f v g)), the two witness lengths of the pair."""
        nu, delta = len(self.f), len(self.g)
        return 2 * nu, 2 * (nu + delta)


def verify_rp(f: LittlewoodPoly, g: LittlewoodPoly, m: int) -> bool:
    s = symmetry_sign(m)
    return has_order(symmetrize(f, s), m) and has_order(symmetrize(join(f, g), s), m)


def is_valid(pair: RegenerativePair) -> bool:
    return verify_rp(pair.f, pair.g, pair.m)


def trivial_pair(f: LittlewoodPoly, m: int) -> RegenerativePair:
    """(f, s f*): an RP for (2n, 4n) whenever S(f) has order m."""
    return RegenerativePair(f, scale(reversal(f), symmetry_sign(m)), m)


def rp_extend(pair: RegenerativePair) -> RegenerativePair:
    nxt = RegenerativePair(join(pair.f, pair.g), scale(reversal(pair.g), pair.s), pair.m)
    if not is_valid(nxt):
        raise TheoremViolation(f"extension of a pair for {pair.lengths} lost order {pair.m}")
    return nxt


def left_half(pair: RegenerativePair, k: int) -> LittlewoodPoly:
    """f v h_1 v ... v h_k with h_i = g for odd i and s g* for even i."""
    if k < 0:
        raise ValueError("family index must be nonnegative")
    blocks = [pair.f.coeffs]
    alt = scale(reversal(pair.g), pair.s).coeffs
    for i in range(1, k + 1):
        blocks.append(pair.g.coeffs if i % 2 else alt)
    return LittlewoodPoly(sum(blocks, ()))


def family(pair: RegenerativePair, k: int) -> Bipartition:
    return to_bipartition(symmetrize(left_half(pair, k), pair.s))


@dataclass(frozen=True)
class DifferenceSequence:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    raw: tuple[int, ...]

    @property
    def detected(self) -> bool:
        return bool(self.period)


def _eventual_period(seq: tuple[int, ...]) -> tuple[int, int] | None:
    n = len(seq)
    for pre in range(n):
        tail = n - pre
        for per in range(1, tail // 2 + 1):
            if all(seq[i] == seq[i + per] for i in range(pre, n - per)):
                return pre, per
    return None


def difference_sequence(pair: RegenerativePair, horizon: int) -> DifferenceSequence:
    """Gaps of the limit set X of left halves, using ``horizon`` appended blocks.

    Needs at least three blocks; with fewer the raw gaps come back undivided.
    """
    X = [i for i, c in enumerate(left_half(pair, max(horizon, 0)).coeffs) if c > 0]
    raw = tuple(b - a for a, b in zip(X, X[1:]))
    if horizon < 3:
        return DifferenceSequence(raw, (), raw)
    found = _eventual_period(raw)
    if found is None:
        return DifferenceSequence(raw, (), raw)
    pre, per = found
    return DifferenceSequence(raw[:pre], raw[pre : pre + per], raw)
