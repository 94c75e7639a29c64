from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from equipower import constraints as cons
from equipower.ilp import ilp_export, max_coefficient, model_rows, render, signs_from_solution
from equipower.poly import InputError, LittlewoodPoly, from_bipartition, is_symmetric, order, symmetry_sign
from equipower.search import SearchSpec, dfs_search, mstar

import oracles


def sets(res):
    return [bp.A for bp in res.witnesses]


def test_spec_validation():
    with pytest.raises(InputError):
        SearchSpec(7, 2)
    with pytest.raises(InputError):
        SearchSpec(8, 2, mode="some")
    assert SearchSpec(8, 3, assume_symmetry=True).top_moment == 2
    assert SearchSpec(8, 3, shift="centered").moment_spec.shift == 3


def test_small_examples():
    assert sets(dfs_search(SearchSpec(4, 2, mode="all"))) == [(0, 3)]
    assert (0, 3, 5, 6) in sets(dfs_search(SearchSpec(8, 3, mode="all")))
    empty = dfs_search(SearchSpec(8, 4, mode="all"))
    assert empty.count == 0 and empty.exhausted
    w = dfs_search(SearchSpec(12, 3)).witnesses[0]
    target = (0, 2, 6, 7, 8, 10)
    orbit = {target, tuple(sorted(11 - a for a in target))}
    orbit |= {tuple(sorted(set(range(12)) - set(A))) for A in orbit}
    assert w.A in orbit


@pytest.mark.parametrize("n,bounds", [(8, (3, 3)), (16, (4, 4))])
def test_mstar(n, bounds):
    r = mstar(n)
    assert (r.lower, r.upper) == bounds
    assert order(from_bipartition(r.witness)) >= r.lower


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_counts_match_exhaustive_oracle(n):
    top = oracles.mstar_brute(n) + 1
    for m in range(1, top + 1):
        want = oracles.witness_count(n, m)
        pruned = dfs_search(SearchSpec(n, m, mode="count", primes=(2, 3, 5)))
        assert pruned.count == want and pruned.exhausted
        if n <= 12:
            plain = dfs_search(SearchSpec(n, m, mode="count", prune=False))
            assert plain.count == want


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_symmetric_search_sound(n):
    for m in range(1, oracles.mstar_brute(n) + 2):
        res = dfs_search(SearchSpec(n, m, assume_symmetry=True, mode="all", primes=(2, 3)))
        assert sets(res) == oracles.witness_sets(n, m, symmetric=True)
        for bp in res.witnesses:
            f = from_bipartition(bp)
            assert order(f) >= m and is_symmetric(f, symmetry_sign(m))


@pytest.mark.parametrize("n", [8, 12, 16])
def test_shift_and_moment_kind_do_not_change_witnesses(n):
    for m in range(1, oracles.mstar_brute(n) + 1):
        base = sets(dfs_search(SearchSpec(n, m, mode="all")))
        for shift in ("none", "centered"):
            for kind in ("binomial", "power"):
                got = sets(dfs_search(SearchSpec(n, m, mode="all", shift=shift, moment_kind=kind)))
                assert got == base


def test_determinism_and_order():
    spec = SearchSpec(16, 3, mode="all", primes=(3,))
    a, b = dfs_search(spec), dfs_search(spec)
    assert sets(a) == sets(b) == sorted(sets(a))
    assert a.nodes_visited == b.nodes_visited


def test_node_budget():
    res = dfs_search(SearchSpec(24, 4, mode="count", max_nodes=50, tail=0))
    assert not res.exhausted


def test_dp_branch_restricts():
    n, m = 16, 3
    allw = oracles.witness_sets(n, m)
    d = cons.discrepancy(allw[0], n, 3)
    got = sets(dfs_search(SearchSpec(n, m, mode="all", dp_branch={3: d})))
    assert got == [A for A in allw if cons.discrepancy(A, n, 3) == d]


@settings(max_examples=1000)
@given(
    st.integers(1, 7).map(lambda h: 2 * h),
    st.integers(1, 5),
    st.booleans(),
    st.sampled_from(["none", "centered"]),
    st.sampled_from(["binomial", "power"]),
    st.sets(st.sampled_from([2, 3, 5, 7])),
    st.one_of(st.none(), st.integers(0, 7)),
)
def test_pruning_lossless_random(n, m, sym, shift, kind, primes, tail):
    spec = SearchSpec(
        n, m, assume_symmetry=sym, shift=shift, moment_kind=kind, primes=tuple(primes), mode="count", tail=tail
    )
    assert dfs_search(spec).count == oracles.witness_count(n, m, symmetric=sym)


# --- ILP export ---------------------------------------------------------------


def test_lp_file_small():
    text = render(SearchSpec(4, 2))
    assert "mom0: 2 z0 + 2 z1 + 2 z2 + 2 z3 = 4" in text
    assert "mom1: 2 z1 + 4 z2 + 6 z3 = 6" in text
    assert text.split("Binary")[1].split() == ["z0", "z1", "z2", "z3", "End"]
    assert len(model_rows(SearchSpec(4, 2))) == 2


def test_max_coefficient_240_9():
    t, J = 119, 8
    sym = SearchSpec(240, 9, assume_symmetry=True, shift="centered")
    expect = max(
        abs(oracles.gbinom(k - t, j) - oracles.gbinom(239 - k - t, j)) for k in range(120) for j in range(J)
    )
    assert max_coefficient(sym) == expect
    flat_power = SearchSpec(240, 9, shift="centered", moment_kind="power")
    flat_binom = SearchSpec(240, 9, shift="centered")
    assert max_coefficient(flat_power) == 120**8
    assert max_coefficient(flat_binom) == comb(126, 8)
    # binomial weights shrink the model coefficients by orders of magnitude
    assert max_coefficient(sym) < max_coefficient(flat_binom) < max_coefficient(flat_power) // 10**4


def test_lp_reimport_with_highs(tmp_path):
    highspy = pytest.importorskip("highspy")
    spec = SearchSpec(12, 3)
    path = ilp_export(spec, tmp_path / "m.lp")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    z = [round(v) for v in h.getSolution().col_value]
    f = LittlewoodPoly(tuple(signs_from_solution(spec, z)))
    if f[0] < 0:
        f = LittlewoodPoly(tuple(-c for c in f.coeffs))
    assert tuple(i for i, c in enumerate(f.coeffs) if c > 0) in sets(dfs_search(SearchSpec(12, 3, mode="all")))


def test_lp_branch_rows(tmp_path):
    spec = SearchSpec(112, 7, assume_symmetry=True, shift="centered", dp_branch={3: (0, -27, 27)})
    rows = {name: (coeffs, rhs) for name, coeffs, rhs in model_rows(spec)}
    assert {"res3_0", "res3_1", "res3_2"} <= set(rows)
    assert "Binary" in ilp_export(spec, tmp_path / "b.lp").read_text()
