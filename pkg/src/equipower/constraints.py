"""Residue-class discrepancy constraints and nonexistence reports.

For a witness ``A`` of ``[n]`` and a prime ``p`` the discrepancy vector is
``d_j = C_{p,j}(A) - C_{p,j}(B)``, where ``C_{p,j}(X)`` counts elements of ``X``
congruent to ``j`` mod ``p``.  An order-``m`` witness forces strong conditions
on these vectors; enumerating everything that survives them (and checking
pairs of primes against each other by an exact transportation/flow test)
is how lengths are ruled out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import networkx as nx

Vector = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    pass


# --- basic counts -----------------------------------------------------------


def class_counts(n: int, p: int) -> Vector:
    """C_{p,j}([n]) for j = 0..p-1."""
    q, r = divmod(n, p)
    return tuple(q + (1 if j < r else 0) for j in range(p))


def cell_count(n: int, p: int, j: int, q: int, k: int) -> int:
    """Size of [n] ∩ (j mod p) ∩ (k mod q) for distinct primes p, q."""
    # smallest x >= 0 with x = j (p), x = k (q)
    x = next(x for x in range(j, p * q, p) if x % q == k)
    return 0 if x >= n else (n - 1 - x) // (p * q) + 1


def two_part(n: int) -> int:
    return n & -n


def decompose(m: int, p: int) -> tuple[int, int]:
    """m = s (p - 1) + r with 0 <= r <= p - 2."""
    return divmod(m, p - 1)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def discrepancy(A: Iterable[int], n: int, p: int) -> Vector:
    counts = [0] * p
    for a in A:
        counts[a % p] += 1
    total = class_counts(n, p)
    return tuple(2 * c - t for c, t in zip(counts, total))


def profile(n: int, p: int, d: Sequence[int]) -> Vector:
    """Counts of A per residue class implied by a discrepancy vector."""
    out = []
    for c, dj in zip(class_counts(n, p), d):
        if (c + dj) % 2 or abs(dj) > c:
            raise ValueError(f"vector {tuple(d)} is not realisable for n={n}, p={p}")
        out.append((c + dj) // 2)
    return tuple(out)


def vector_from_profile(n: int, p: int, counts: Sequence[int]) -> Vector:
    return tuple(2 * a - c for a, c in zip(counts, class_counts(n, p)))


# --- single-prime rules -----------------------------------------------------


def divisibility_check(n: int, m: int) -> bool:
    """False (refuted) when the 2-part of n does not exceed m."""
    return two_part(n) > m


def f_minus_one_nonzero(n: int, m: int) -> bool:
    """An order-m LP of length n cannot vanish at -1 once m >= t - 1 (t the 2-part)."""
    return m >= two_part(n) - 1


def check_vector(n: int, m: int, p: int, d: Sequence[int]) -> list[str]:
    """Names of the rules a candidate vector violates (empty list = passes)."""
    bad = []
    C = class_counts(n, p)
    if len(d) != p:
        return ["length"]
    if any(abs(x) > c for x, c in zip(d, C)):
        bad.append("bound")
    if sum(d) != 0:
        bad.append("balance")
    if any((x - c) % 2 for x, c in zip(d, C)):
        bad.append("parity")
    s, r = decompose(m, p)
    ps = p**s
    if r == 0:
        if any((x - d[0]) % ps for x in d):
            bad.append("congruent")
    else:
        if any(x % ps for x in d):
            bad.append("divisible")
        for j in range(r):
            if sum(comb(k, j) * d[k] for k in range(j, p)) % (ps * p):
                bad.append(f"binomial[{j}]")
    if p == 2:
        e = d[0] - d[1]
        if e == 0 and f_minus_one_nonzero(n, m):
            bad.append("x+1")
        if e != 0 and abs(e) < 2**m:
            bad.append("f(-1)")
    return bad


def _canonical_sign(d: Vector) -> bool:
    for x in d:
        if x:
            return x > 0
    return True


def feasible_dp(
    n: int,
    m: int,
    p: int,
    normalize: bool = False,
    limit: int | None = None,
) -> list[Vector]:
    """All discrepancy vectors mod p compatible with an order-m witness of [n].

    Enumeration fixes d_{p-1} first and walks down to d_0, larger values
    first.  Below index r the binomial congruences pin d_j modulo p^(s+1).
    ``normalize`` keeps one of each pair {d, -d} (first nonzero entry
    positive): the complement switch, valid once per argument.
    """
    if m < 1:
        raise ValueError("order must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    C = class_counts(n, p)
    s, r = decompose(m, p)
    ps = p**s
    step_hi = ps * p

    memo: dict[tuple[int, int, int], list[int]] = {}

    def values(j: int, residue: int, modulus: int) -> list[int]:
        key = (j, residue % modulus, modulus)
        if key not in memo:
            c = C[j]
            memo[key] = [
                x for x in range(c, -c - 1, -1) if (x - c) % 2 == 0 and (x - residue) % modulus == 0
            ]
        return memo[key]

    # suffix bounds on achievable sums of d_0..d_{j}
    cap = [0] * (p + 1)
    for j in range(p):
        cap[j + 1] = cap[j] + C[j]

    out: list[Vector] = []
    d = [0] * p

    def rec(j: int, partial: int) -> None:
        # d_{j+1..p-1} fixed; partial is their sum
        if j < 0:
            if partial != 0:
                return
            vec = tuple(d)
            if p == 2:
                e = vec[0] - vec[1]
                if e == 0 and f_minus_one_nonzero(n, m):
                    return
                if e != 0 and abs(e) < 2**m:
                    return
            if normalize and not _canonical_sign(vec):
                return
            out.append(vec)
            if limit is not None and len(out) > limit:
                raise BudgetExceeded(f"more than {limit} vectors for p={p}")
            return
        if r == 0:
            if j == p - 1:
                cands = values(j, 0, 1)
            else:
                cands = values(j, d[p - 1], ps)
        elif j >= r:
            cands = values(j, 0, ps)
        else:
            target = -sum(comb(k, j) * d[k] for k in range(j + 1, p))
            cands = values(j, target, step_hi)
        for x in cands:
            rest = partial + x
            if abs(rest) > cap[j]:
                continue
            d[j] = x
            rec(j - 1, rest)
        d[j] = 0

    rec(p - 1, 0)
    return out


def filter_symmetric(vectors: Iterable[Vector], n: int, m: int) -> list[Vector]:
    """Keep vectors compatible with a (-1)^m-symmetric witness of [n]."""
    s = -1 if m % 2 else 1
    out = []
    for d in vectors:
        p = len(d)
        if all(d[i] == s * d[(n - 1 - i) % p] for i in range(p)):
            out.append(tuple(d))
    return out


# --- cross-prime counting ---------------------------------------------------


def contingency_feasible(n: int, prof_p: Sequence[int], prof_q: Sequence[int]) -> bool:
    """Is there a table of A-counts per (class mod p, class mod q) with these margins?

    Cell (j, k) is capped by the size of that joint class in [n].  Decided
    exactly via the max-flow/min-cut dual: for every set I of rows kept on
    the source side the cut is sum_{j not in I} a_j + sum_k min(b_k, sum_{j in I} cap_jk),
    and the margins are realisable iff no cut falls below the total.
    """
    p, q = len(prof_p), len(prof_q)
    if p == q:
        raise ValueError("profiles must be for distinct primes")
    total = sum(prof_p)
    if total != sum(prof_q):
        return False
    if p > q:
        prof_p, prof_q, p, q = prof_q, prof_p, q, p
    cap = _cells(n, p, q)
    for mask in range(1 << p):
        cut = 0
        col = [0] * q
        for j in range(p):
            if mask >> j & 1:
                row = cap[j]
                for k in range(q):
                    col[k] += row[k]
            else:
                cut += prof_p[j]
        for k in range(q):
            cut += min(prof_q[k], col[k])
        if cut < total:
            return False
    return True


@lru_cache(maxsize=None)
def _cells(n: int, p: int, q: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(cell_count(n, p, j, q, k) for k in range(q)) for j in range(p))


def max_flow_feasible(n: int, prof_p: Sequence[int], prof_q: Sequence[int]) -> bool:
    """Same decision as :func:`contingency_feasible`, by an explicit max-flow (slow; cross-check)."""
    p, q = len(prof_p), len(prof_q)
    total = sum(prof_p)
    if total != sum(prof_q):
        return False
    G = nx.DiGraph()
    for j, a in enumerate(prof_p):
        G.add_edge("s", ("p", j), capacity=a)
    for k, b in enumerate(prof_q):
        G.add_edge(("q", k), "t", capacity=b)
    for j in range(p):
        for k in range(q):
            c = cell_count(n, p, j, q, k)
            if c:
                G.add_edge(("p", j), ("q", k), capacity=c)
    return nx.maximum_flow_value(G, "s", "t") == total


@lru_cache(maxsize=1 << 18)
def vectors_compatible(n: int, d_p: Sequence[int], d_q: Sequence[int]) -> bool:
    return contingency_feasible(n, profile(n, len(d_p), d_p), profile(n, len(d_q), d_q))


def cross_filter(n: int, vp: Sequence[Vector], vq: Sequence[Vector]) -> tuple[list[Vector], list[Vector]]:
    """Drop vectors of either prime that have no compatible partner in the other."""
    keep_p, keep_q = set(), set()
    for a in vp:
        for b in vq:
            if vectors_compatible(n, a, b):
                keep_p.add(a)
                keep_q.add(b)
    return [a for a in vp if a in keep_p], [b for b in vq if b in keep_q]


# --- reports ----------------------------------------------------------------


@dataclass
class Step:
    rule: str
    inputs: dict
    outcome: object

    def to_json(self) -> str:
        return json.dumps({"rule": self.rule, "inputs": self.inputs, "outcome": self.outcome}, sort_keys=True)


@dataclass
class NonexistenceReport:
    n: int
    m: int
    primes: list[int]
    steps: list[Step] = field(default_factory=list)
    conclusion: str = "inconclusive"

    @property
    def refuted(self) -> bool:
        return self.conclusion == "refuted"

    def survivors(self) -> dict[int, list[Vector]]:
        """Per-prime vectors still alive at the end of the log."""
        alive: dict[int, list[Vector]] = {}
        for st in self.steps:
            if st.rule == "feasible_dp":
                alive[st.inputs["p"]] = [tuple(v) for v in st.outcome]
            elif st.rule == "cross_prime":
                alive[st.inputs["p"]] = [tuple(v) for v in st.outcome["p"]]
                alive[st.inputs["q"]] = [tuple(v) for v in st.outcome["q"]]
            elif st.rule == "joint" and st.outcome["exhausted"]:
                for k, vs in st.outcome["surviving"].items():
                    alive[int(k)] = [tuple(v) for v in vs]
        return alive

    def dumps(self) -> str:
        head = json.dumps(
            {"n": self.n, "m": self.m, "primes": self.primes, "conclusion": self.conclusion},
            sort_keys=True,
        )
        return "\n".join([head] + [st.to_json() for st in self.steps]) + "\n"

    @classmethod
    def loads(cls, text: str) -> "NonexistenceReport":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = json.loads(lines[0])
        rep = cls(head["n"], head["m"], list(head["primes"]), conclusion=head["conclusion"])
        for ln in lines[1:]:
            obj = json.loads(ln)
            rep.steps.append(Step(obj["rule"], obj["inputs"], obj["outcome"]))
        return rep


def _lists(vs: Iterable[Vector]) -> list[list[int]]:
    return [list(v) for v in vs]


def _rule_divisibility(inp: dict) -> str:
    return "pass" if divisibility_check(inp["n"], inp["m"]) else "refuted"


def _rule_feasible(inp: dict) -> list[list[int]]:
    vs = feasible_dp(inp["n"], inp["m"], inp["p"], normalize=inp["normalize"], limit=inp.get("limit"))
    if inp.get("symmetric"):
        vs = filter_symmetric(vs, inp["n"], inp["m"])
    return _lists(vs)


def _rule_cross(inp: dict) -> dict:
    vp = [tuple(v) for v in inp["vp"]]
    vq = [tuple(v) for v in inp["vq"]]
    a, b = cross_filter(inp["n"], vp, vq)
    return {"p": _lists(a), "q": _lists(b)}


def _rule_joint(inp: dict) -> dict:
    sets = {int(k): [tuple(v) for v in vs] for k, vs in inp["sets"].items()}
    return joint_propagate(inp["n"], sets, inp["budget"])


RULES = {
    "divisibility": _rule_divisibility,
    "feasible_dp": _rule_feasible,
    "cross_prime": _rule_cross,
    "joint": _rule_joint,
}


def joint_propagate(n: int, sets: dict[int, list[Vector]], budget: int) -> dict:
    """Depth-first over one vector per prime, smallest set first, pairwise compatible.

    ``budget`` caps visited partial tuples.  Returns the count of full
    tuples, whether the search finished, and the vectors used by them.
    """
    primes = sorted(sets, key=lambda p: (len(sets[p]), p))
    used: dict[int, set] = {p: set() for p in primes}
    cache: dict[tuple, bool] = {}
    visited = 0
    found = 0
    exhausted = True
    chosen: list[Vector] = []

    def ok(a: Vector, b: Vector) -> bool:
        key = (a, b)
        if key not in cache:
            cache[key] = vectors_compatible(n, a, b)
        return cache[key]

    def rec(i: int) -> bool:
        nonlocal visited, found, exhausted
        if i == len(primes):
            found += 1
            for p, v in zip(primes, chosen):
                used[p].add(v)
            return True
        for v in sets[primes[i]]:
            visited += 1
            if visited > budget:
                exhausted = False
                return False
            if all(ok(w, v) for w in chosen):
                chosen.append(v)
                cont = rec(i + 1)
                chosen.pop()
                if not cont:
                    return False
        return True

    rec(0)
    surviving = {str(p): _lists(v for v in sets[p] if v in used[p]) for p in sorted(sets)}
    return {"tuples": found, "exhausted": exhausted, "surviving": surviving}


def nonexistence_report(
    n: int,
    m: int,
    primes: Sequence[int],
    budget: int = 100_000,
    symmetric: bool = False,
) -> NonexistenceReport:
    """Chain divisibility, per-prime enumeration, pairwise counting and joint search.

    With ``symmetric`` only (-1)^m-symmetric witnesses are considered, so a
    refutation then covers the symmetric subspace only.
    """
    primes = sorted(primes)
    rep = NonexistenceReport(n, m, list(primes))

    def run(rule: str, inputs: dict):
        out = RULES[rule](inputs)
        rep.steps.append(Step(rule, inputs, out))
        return out

    if run("divisibility", {"n": n, "m": m}) == "refuted":
        rep.conclusion = "refuted"
        return rep

    switched = False
    alive: dict[int, list[Vector]] = {}
    for p in primes:
        inputs = {"n": n, "m": m, "p": p, "normalize": False, "limit": budget}
        if symmetric:
            inputs["symmetric"] = True
        # the complement switch negates every vector at once: spend it on the
        # first prime that has a nonzero candidate (all earlier sets are then
        # {0}-like and unaffected)
        if not switched and not symmetric:
            try:
                probe = feasible_dp(n, m, p, limit=budget)
            except BudgetExceeded:
                probe = []
            if any(any(v) for v in probe):
                inputs["normalize"] = True
                switched = True
        try:
            vs = run("feasible_dp", inputs)
        except BudgetExceeded as exc:
            rep.steps.append(Step("feasible_dp", inputs, {"budget_exceeded": str(exc)}))
            rep.conclusion = "inconclusive"
            return rep
        alive[p] = [tuple(v) for v in vs]
        if not vs:
            rep.conclusion = "refuted"
            return rep

    # pairwise arc consistency to a fixed point
    changed = True
    while changed:
        changed = False
        for p, q in combinations(primes, 2):
            out = run("cross_prime", {"n": n, "p": p, "q": q, "vp": _lists(alive[p]), "vq": _lists(alive[q])})
            new_p = [tuple(v) for v in out["p"]]
            new_q = [tuple(v) for v in out["q"]]
            if new_p != alive[p] or new_q != alive[q]:
                changed = True
            alive[p], alive[q] = new_p, new_q
            if not new_p or not new_q:
                rep.conclusion = "refuted"
                return rep

    if len(primes) >= 3:
        out = run("joint", {"n": n, "sets": {str(p): _lists(alive[p]) for p in primes}, "budget": budget})
        if out["exhausted"] and out["tuples"] == 0:
            rep.conclusion = "refuted"
            return rep
    rep.conclusion = "inconclusive"
    return rep


def replay(rep: NonexistenceReport) -> list[tuple[int, bool]]:
    """Re-execute every logged step; (index, reproduced?) per step."""
    results = []
    for i, st in enumerate(rep.steps):
        if isinstance(st.outcome, dict) and "budget_exceeded" in st.outcome:
            try:
                RULES[st.rule](st.inputs)
                results.append((i, False))
            except BudgetExceeded:
                results.append((i, True))
            continue
        again = RULES[st.rule](st.inputs)
        results.append((i, json.dumps(again, sort_keys=True) == json.dumps(st.outcome, sort_keys=True)))
    return results
