"""Depth-first witness search for P(n, m).

The search decides one sign per *slot*.  Without symmetry a slot is a
single index; with symmetry it is the pair (k, n-1-k), whose mirror sign is
fixed by s = (-1)^m, and only moments j <= m-2 are enforced (the top one
follows for free).  Pruning uses, per moment row, the interval of sums the
undecided slots can still reach plus its parity, residue-class profiles
from :mod:`equipower.constraints`, and a precomputed table of tail
completions (meet in the middle on the last few slots).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from . import constraints as cons
from .poly import (
    Bipartition,
    InputError,
    LittlewoodPoly,
    MomentKind,
    MomentSpec,
    has_order,
    symmetry_sign,
    weight,
)

log = logging.getLogger(__name__)

MODES = ("first", "all", "count")
SHIFTS = ("none", "centered")
DEFAULT_TAIL = 14


@dataclass(frozen=True)
class SearchSpec:
    n: int
    m: int
    assume_symmetry: bool = False
    shift: str = "none"
    moment_kind: str = "binomial"
    primes: tuple[int, ...] = ()
    dp_branch: tuple[tuple[int, tuple[int, ...]], ...] = ()
    mode: str = "first"
    prune: bool = True
    canonical: bool = True
    max_nodes: int | None = None
    tail: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 0:
            raise InputError(f"need n >= 1 and m >= 0, got n={self.n}, m={self.m}")
        if self.m >= 1 and self.n % 2:
            raise InputError(f"order {self.m} needs an even length, got {self.n}")
        if self.assume_symmetry and self.n % 2:
            raise InputError("symmetric search needs an even length")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}")
        if self.shift not in SHIFTS:
            raise InputError(f"shift must be one of {SHIFTS}")
        MomentKind(self.moment_kind)
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))
        branch = dict(self.dp_branch) if not isinstance(self.dp_branch, dict) else self.dp_branch
        object.__setattr__(self, "dp_branch", tuple(sorted((int(p), tuple(v)) for p, v in branch.items())))

    @property
    def s(self) -> int:
        return symmetry_sign(self.m)

    @property
    def moment_spec(self) -> MomentSpec:
        t = self.n // 2 - 1 if self.shift == "centered" else 0
        return MomentSpec(MomentKind(self.moment_kind), t)

    @property
    def top_moment(self) -> int:
        """Number of moment rows enforced (j = 0 .. top_moment-1)."""
        if self.assume_symmetry:
            return max(self.m - 1, 0)
        return self.m


@dataclass
class SearchResult:
    witnesses: list[Bipartition] = field(default_factory=list)
    exhausted: bool = True
    nodes_visited: int = 0
    count: int = 0


# --- model -------------------------------------------------------------------


@dataclass
class Model:
    """Slots, their per-row weights and their residue-class contributions."""

    spec: SearchSpec
    slots: list[tuple[int, ...]]
    rows: list[int]
    weights: list[tuple[int, ...]]

    def positions(self, k: int, sign: int) -> Iterator[tuple[int, int]]:
        """(index, coefficient) pairs fixed by giving slot k the sign ``sign``."""
        pos = self.slots[k]
        yield pos[0], sign
        if len(pos) == 2:
            yield pos[1], self.spec.s * sign

    def members(self, k: int, sign: int) -> list[int]:
        return [i for i, c in self.positions(k, sign) if c > 0]


def build_model(spec: SearchSpec) -> Model:
    n = spec.n
    if spec.assume_symmetry:
        slots = [(k, n - 1 - k) for k in range(n // 2)]
    else:
        slots = [(i,) for i in range(n)]
    ms = spec.moment_spec
    rows = list(range(spec.top_moment))
    weights = []
    for pos in slots:
        w = []
        for j in rows:
            v = weight(pos[0], j, ms)
            if len(pos) == 2:
                v += spec.s * weight(pos[1], j, ms)
            w.append(v)
        weights.append(tuple(w))
    return Model(spec, slots, rows, weights)


def allowed_profiles(spec: SearchSpec) -> dict[int, set[tuple[int, ...]]]:
    """Admissible A-count profiles per prime: fixed branches, else all feasible vectors."""
    out: dict[int, set[tuple[int, ...]]] = {}
    fixed = dict(spec.dp_branch)
    for p, d in fixed.items():
        out[p] = {cons.profile(spec.n, p, d)}
    if spec.prune and spec.m >= 1:
        for p in spec.primes:
            if p in fixed:
                continue
            vs = cons.feasible_dp(spec.n, spec.m, p)
            if spec.assume_symmetry:
                vs = cons.filter_symmetric(vs, spec.n, spec.m)
            out[p] = {cons.profile(spec.n, p, d) for d in vs}
    return out


# --- depth-first search -----------------------------------------------------


def dfs_search(spec: SearchSpec) -> SearchResult:
    model = build_model(spec)
    K = len(model.slots)
    n = spec.n
    result = SearchResult()

    # rows whose weights vanish identically impose nothing
    active = [r for r in range(len(model.rows)) if any(w[r] for w in model.weights)]
    W = [tuple(w[r] for r in active) for w in model.weights]
    J = len(active)

    profiles = allowed_profiles(spec)
    if any(not v for v in profiles.values()):
        return result
    primes = sorted(profiles)
    # class increments per slot and sign, per prime
    inc = {
        p: [[_class_inc(model, k, sg, p) for sg in (1, -1)] for k in range(K)] for p in primes
    }

    prune = spec.prune
    # suffix reach of each row, its parity, and min/max class additions
    R = [[0] * J for _ in range(K + 1)]
    P = [[0] * J for _ in range(K + 1)]
    for k in range(K - 1, -1, -1):
        for j in range(J):
            R[k][j] = R[k + 1][j] + abs(W[k][j])
            P[k][j] = (P[k + 1][j] + W[k][j]) & 1
    lo_add = {p: [[0] * p for _ in range(K + 1)] for p in primes}
    hi_add = {p: [[0] * p for _ in range(K + 1)] for p in primes}
    for p in primes:
        for k in range(K - 1, -1, -1):
            a, b = inc[p][k]
            for c in range(p):
                lo_add[p][k][c] = lo_add[p][k + 1][c] + min(a[c], b[c])
                hi_add[p][k][c] = hi_add[p][k + 1][c] + max(a[c], b[c])

    first_signs = (1,) if spec.canonical else (1, -1)
    if prune:
        tail = spec.tail if spec.tail is not None else min(DEFAULT_TAIL, K // 2)
        tail = max(0, min(tail, K - 1))
    else:
        tail = 0
    split = K - tail
    table = _tail_table(W, split, K, inc, primes) if tail else None

    signs = [0] * K
    S = [0] * J
    counts = {p: [0] * p for p in primes}
    budget = spec.max_nodes
    found: list[tuple[int, ...]] = []
    stop = False

    def residue_ok(k: int) -> bool:
        for p in primes:
            cnt = counts[p]
            lo, hi = lo_add[p][k], hi_add[p][k]
            good = False
            for prof in profiles[p]:
                if all(cnt[c] + lo[c] <= prof[c] <= cnt[c] + hi[c] for c in range(p)):
                    good = True
                    break
            if not good:
                return False
        return True

    def emit(sig: Sequence[int]) -> None:
        nonlocal stop
        result.count += 1
        if spec.mode != "count":
            found.append(tuple(sig))
        if spec.mode == "first":
            stop = True

    def rec(k: int) -> None:
        nonlocal stop
        if stop:
            return
        if k == split and table is not None:
            key = tuple(-x for x in S)
            for tail_signs, tail_counts in table.get(key, ()):
                if primes and not all(
                    tuple(a + b for a, b in zip(counts[p], tail_counts[p])) in profiles[p] for p in primes
                ):
                    continue
                emit(signs[:split] + list(tail_signs))
                if stop:
                    return
            return
        if k == K:
            if any(S):
                return
            if primes and not all(tuple(counts[p]) in profiles[p] for p in primes):
                return
            emit(signs)
            return
        Wk = W[k]
        Rn, Pn = R[k + 1], P[k + 1]
        for sg in first_signs if k == 0 else (1, -1):
            result.nodes_visited += 1
            if budget is not None and result.nodes_visited > budget:
                result.exhausted = False
                stop = True
                return
            if sg > 0:
                for j in range(J):
                    S[j] += Wk[j]
            else:
                for j in range(J):
                    S[j] -= Wk[j]
            for p in primes:
                cp = counts[p]
                for c, v in enumerate(inc[p][k][0 if sg > 0 else 1]):
                    cp[c] += v
            signs[k] = sg
            ok = True
            if prune:
                for j in range(J):
                    x = S[j]
                    if x > Rn[j] or -x > Rn[j] or (x + Pn[j]) & 1:
                        ok = False
                        break
                if ok and primes:
                    ok = residue_ok(k + 1)
            if ok:
                rec(k + 1)
            if sg > 0:
                for j in range(J):
                    S[j] -= Wk[j]
            else:
                for j in range(J):
                    S[j] += Wk[j]
            for p in primes:
                cp = counts[p]
                for c, v in enumerate(inc[p][k][0 if sg > 0 else 1]):
                    cp[c] -= v
            if stop:
                return

    rec(0)

    for sig in found:
        coeffs = [0] * n
        for k, sg in enumerate(sig):
            for i, c in model.positions(k, sg):
                coeffs[i] = c
        f = LittlewoodPoly(tuple(coeffs))
        if not has_order(f, spec.m):
            raise AssertionError(f"search emitted a non-witness {f}")
        result.witnesses.append(Bipartition(n, tuple(i for i, c in enumerate(coeffs) if c > 0)))
    result.witnesses.sort(key=lambda bp: bp.A)
    if spec.mode == "first" and result.witnesses:
        # stopped early: the space was not exhausted
        result.exhausted = False
    return result


def _class_inc(model: Model, k: int, sign: int, p: int) -> tuple[int, ...]:
    v = [0] * p
    for i in model.members(k, sign):
        v[i % p] += 1
    return tuple(v)


def _tail_table(W, split, K, inc, primes):
    """Map from the tail's contribution vector to its sign choices and class counts."""
    table: dict[tuple[int, ...], list] = {}
    J = len(W[0]) if W else 0
    for sig in product((1, -1), repeat=K - split):
        contrib = [0] * J
        cnts = {p: [0] * p for p in primes}
        for off, sg in enumerate(sig):
            w = W[split + off]
            for j in range(J):
                contrib[j] += sg * w[j]
            for p in primes:
                for c, v in enumerate(inc[p][split + off][0 if sg > 0 else 1]):
                    cnts[p][c] += v
        table.setdefault(tuple(contrib), []).append((sig, {p: tuple(c) for p, c in cnts.items()}))
    return table


# --- m*(n) ------------------------------------------------------------------


@dataclass
class MStar:
    lower: int
    upper: int | None
    witness: Bipartition | None = None
    log: list[str] = field(default_factory=list)


def has_witness(n: int, m: int, budget: int | None = None, symmetric: bool = False) -> SearchResult:
    spec = SearchSpec(n, m, assume_symmetry=symmetric, mode="first", primes=(2, 3, 5), max_nodes=budget)
    return dfs_search(spec)


def mstar(n: int, budget: int | None = 5_000_000) -> MStar:
    """Bounds on the largest m with an order-m LP of length n.

    The lower bound comes from a witness; the upper bound only from a
    divisibility/constraint refutation or full-space exhaustion.
    """
    if n % 2:
        raise InputError("m*(n) is only interesting for even n")
    out = MStar(0, None)
    m = 1
    while True:
        if not cons.divisibility_check(n, m):
            out.upper = m - 1
            out.log.append(f"m={m}: refuted by divisibility")
            return out
        rep = cons.nonexistence_report(n, m, [2, 3, 5], budget=10_000)
        if rep.refuted:
            out.upper = m - 1
            out.log.append(f"m={m}: refuted by residue constraints")
            return out
        res = has_witness(n, m, budget, symmetric=True)
        if not res.witnesses:
            res = has_witness(n, m, budget)
        if res.witnesses:
            out.lower = m
            out.witness = res.witnesses[0]
            out.log.append(f"m={m}: witness found")
            m += 1
            continue
        if res.exhausted:
            out.upper = m - 1
            out.log.append(f"m={m}: full search exhausted, P({n},{m}) is empty")
        else:
            out.log.append(f"m={m}: budget exhausted")
        return out
