import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from equipower import constraints as cons
from equipower.search import SearchSpec, dfs_search

import oracles


@pytest.mark.parametrize("n,p,expected", [(184, 3, (62, 61, 61)), (8, 2, (4, 4)), (176, 5, (36, 35, 35, 35, 35))])
def test_class_counts(n, p, expected):
    assert cons.class_counts(n, p) == expected


@pytest.mark.parametrize("n,m,ok", [(200, 8, False), (216, 8, False), (232, 8, False), (192, 10, True), (48, 7, True)])
def test_divisibility(n, m, ok):
    assert cons.divisibility_check(n, m) is ok


def test_cell_count_brute():
    for n in (1, 7, 30, 176):
        for p, q in ((2, 3), (3, 5), (5, 7)):
            for j in range(p):
                for k in range(q):
                    assert cons.cell_count(n, p, j, q, k) == sum(1 for x in range(n) if x % p == j and x % q == k)


# --- feasible_dp -------------------------------------------------------------


def test_dp_184_7_2_normalized():
    assert cons.feasible_dp(184, 7, 2, normalize=True) == [(64, -64)]


def test_dp_208_224_9_3_empty():
    assert cons.feasible_dp(208, 9, 3) == []
    assert cons.feasible_dp(224, 9, 3) == []


def _box(n, p):
    C = cons.class_counts(n, p)
    return itertools.product(*(range(-c, c + 1) for c in C))


def test_dp_192_10_5_before_and_after_binomial_rule():
    # everything except the binomial congruences, by brute force over the box
    # restricted to multiples of 25 (the divisibility rule)
    C = cons.class_counts(192, 5)
    cand = itertools.product(*([x for x in range(-c, c + 1) if x % 25 == 0] for c in C))
    pre = sorted(
        d for d in cand if not [r for r in cons.check_vector(192, 10, 5, d) if not r.startswith("binomial")]
    )
    assert pre == [(-25, 25, 0, 0, 0), (25, -25, 0, 0, 0)]
    assert cons.feasible_dp(192, 10, 5) == []


def test_dp_184_7_3_after_p2():
    d3 = cons.feasible_dp(184, 7, 3)
    _, kept = cons.cross_filter(184, [(64, -64)], d3)
    assert set(kept) <= {(0, -27, 27), (0, 27, -27)} and kept
    assert sorted(cons.filter_symmetric(kept, 184, 7)) == [(0, -27, 27), (0, 27, -27)]


def test_dp_176_orientations():
    d3 = cons.feasible_dp(176, 8, 3)
    assert (27, 27, -54) in d3 and (-27, -27, 54) in d3
    assert cons.feasible_dp(176, 8, 3, normalize=True) == [(27, 27, -54)]


def test_filter_symmetric_rule():
    n, m = 10, 2
    vs = [(1, -1, 0), (0, 1, -1), (2, -1, -1)]
    kept = cons.filter_symmetric(vs, n, m)
    for d in kept:
        assert all(d[j] == d[(n - 1 - j) % 3] for j in range(3))
    assert (1, -1, 0) not in kept


@pytest.mark.parametrize("n,m,p", [(n, m, p) for n in range(4, 41, 4) for m in range(1, 6) for p in (2, 3, 5, 7)])
def test_lemma_closure_and_brute_force(n, m, p):
    got = cons.feasible_dp(n, m, p)
    C = cons.class_counts(n, p)
    for d in got:
        assert sum(d) == 0
        assert all(abs(x) <= c and (x - c) % 2 == 0 for x, c in zip(d, C))
        assert cons.check_vector(n, m, p, d) == []
    if np.prod([2 * c + 1 for c in C]) <= 200_000:
        brute = sorted(d for d in _box(n, p) if not cons.check_vector(n, m, p, d))
        assert sorted(got) == brute


@pytest.mark.parametrize("n", range(2, 21, 2))
def test_soundness_against_exhaustive_witnesses(n):
    for m in range(1, 6):
        if n <= 16:
            sets = oracles.witness_sets(n, m)
        else:
            sets = [bp.A for bp in dfs_search(SearchSpec(n, m, mode="all")).witnesses]
        if not sets:
            continue
        for p in (2, 3, 5):
            feas = set(cons.feasible_dp(n, m, p))
            for A in sets:
                B = tuple(sorted(set(range(n)) - set(A)))
                assert cons.discrepancy(A, n, p) in feas
                assert cons.discrepancy(B, n, p) in feas


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_x_plus_one_rule_exhaustive(n):
    t = cons.two_part(n)
    S = oracles.all_signs(n)
    o = oracles.orders(n)
    alt = np.where(np.arange(n) % 2, -1, 1)
    fm1 = S @ alt
    for m in range(1, 6):
        if m >= t - 1:
            assert not ((o >= m) & (fm1 == 0)).any()
            assert all(d[0] != d[1] for d in cons.feasible_dp(n, m, 2))


# --- cross-prime counting ------------------------------------------------------


def test_contingency_examples():
    assert not cons.contingency_feasible(176, (43, 43, 2), (23, 10, 10, 10, 35))
    assert cons.contingency_feasible(176, (43, 43, 2), (8, 20, 20, 20, 20))


@given(st.integers(4, 60), st.sampled_from([(2, 3), (3, 5), (2, 5), (5, 7), (3, 7)]), st.randoms(use_true_random=False))
def test_contingency_realized_and_flow(n, pq, rnd):
    p, q = pq
    A = rnd.sample(range(n), n // 2)
    prof_p = tuple(sum(1 for a in A if a % p == j) for j in range(p))
    prof_q = tuple(sum(1 for a in A if a % q == j) for j in range(q))
    assert cons.contingency_feasible(n, prof_p, prof_q)
    # perturb one profile and compare with the max-flow formulation
    bumped = list(prof_q)
    i, k = rnd.randrange(q), rnd.randrange(q)
    if bumped[i] > 0:
        bumped[i] -= 1
        bumped[k] += 1
    assert cons.contingency_feasible(n, prof_p, bumped) == cons.max_flow_feasible(n, prof_p, bumped)


def test_176_unique_mod5_survivor():
    d5 = cons.feasible_dp(176, 8, 5)
    profiles = sorted(cons.profile(176, 5, d) for d in d5)
    assert len(profiles) == 16
    alive = [pr for pr in profiles if cons.contingency_feasible(176, (43, 43, 2), pr)]
    assert alive == [(8, 20, 20, 20, 20)]


# --- reports ----------------------------------------------------------------


@pytest.mark.parametrize("n,m,primes", [(208, 9, [3]), (224, 9, [3]), (192, 10, [5]), (200, 8, [2])])
def test_reports_refute(n, m, primes):
    assert cons.nonexistence_report(n, m, primes).refuted


def test_report_176():
    rep = cons.nonexistence_report(176, 8, [2, 3, 5])
    assert rep.conclusion == "inconclusive"
    surv = rep.survivors()
    assert [cons.profile(176, 5, d) for d in surv[5]] == [(8, 20, 20, 20, 20)]
    assert surv[3] == [(27, 27, -54)] and surv[2] == [(0, 0)]
    assert sum(1 for s in rep.steps if s.rule == "feasible_dp" and s.inputs["normalize"]) <= 1


def test_report_replay_and_tamper():
    rep = cons.nonexistence_report(176, 8, [2, 3, 5])
    again = cons.NonexistenceReport.loads(rep.dumps())
    assert again.dumps() == rep.dumps()
    assert all(ok for _, ok in cons.replay(again))
    lines = rep.dumps().splitlines()
    step = json.loads(lines[2])
    step["outcome"] = step["outcome"][:-1] if isinstance(step["outcome"], list) else step["outcome"]
    lines[2] = json.dumps(step, sort_keys=True)
    tampered = cons.NonexistenceReport.loads("\n".join(lines))
    assert not all(ok for _, ok in cons.replay(tampered))


def test_report_budget_is_inconclusive():
    rep = cons.nonexistence_report(184, 7, [2, 3, 5, 11], budget=50)
    assert rep.conclusion == "inconclusive"
    assert all(ok for _, ok in cons.replay(rep))


def test_symmetric_report_survivors_112():
    rep = cons.nonexistence_report(112, 7, [2, 3, 5], symmetric=True)
    assert not rep.refuted
    assert (0, -27, 27) in rep.survivors()[3]
