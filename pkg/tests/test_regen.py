import itertools
import random

import pytest

from equipower.catalog import catalog_load
from equipower.codec import decode_rp
from equipower.poly import (
    LittlewoodPoly,
    from_bipartition,
    from_set,
    is_symmetric,
    order,
    symmetry_sign,
    thue_morse,
)
from equipower.regen import (
    RegenerativePair,
    TheoremViolation,
    difference_sequence,
    family,
    is_valid,
    left_half,
    rp_extend,
    trivial_pair,
    verify_rp,
)

import oracles

F12 = from_set({0, 2}, 6)
G12 = LittlewoodPoly((1, 1, 1, 1))
PAIR = RegenerativePair(F12, G12, 3)


def catalog_pairs():
    return [decode_rp(r) for r in catalog_load() if r.table == "rp"]


def test_verify_examples():
    assert verify_rp(F12, G12, 3)
    flipped = LittlewoodPoly((1, 1, -1, 1))
    assert not verify_rp(F12, flipped, 3)


@pytest.mark.parametrize("m", range(1, 11))
def test_thue_morse_pairs(m):
    tm1 = thue_morse(m + 1)
    g = LittlewoodPoly(tm1.coeffs[2**m :])
    assert verify_rp(thue_morse(m), g, m)


def test_extend_once_and_four_times():
    nxt = rp_extend(PAIR)
    assert nxt.lengths == (20, 28) and is_valid(nxt)
    lengths = [PAIR.lengths[0]]
    p = PAIR
    for _ in range(4):
        lengths.append(p.lengths[1])
        p = rp_extend(p)
    assert lengths == [12, 20, 28, 36, 44]


def test_trivial_pair_doubling_lengths():
    f = LittlewoodPoly(thue_morse(3).coeffs[:4])
    p = trivial_pair(f, 3)
    assert is_valid(p)
    seen = []
    for _ in range(3):
        seen.append(p.lengths[0])
        p = rp_extend(p)
    assert seen == [8, 16, 24]


def test_extend_raises_on_invalid_pair():
    bad = RegenerativePair(F12, LittlewoodPoly((1, 1, -1, 1)), 3)
    with pytest.raises(TheoremViolation):
        rp_extend(bad)


def test_family_examples():
    assert family(PAIR, 0).A == (0, 2, 6, 7, 8, 10)
    assert family(PAIR, 1).A == (0, 2, 6, 7, 8, 9, 14, 15, 16, 18)
    k2 = family(PAIR, 2)
    assert tuple(a for a in k2.A if a < 10) == (0, 2, 6, 7, 8, 9)
    X = [i for i, c in enumerate(left_half(PAIR, 6).coeffs) if c > 0]
    assert X[:14] == [0, 2, 6, 7, 8, 9, 14, 15, 16, 17, 22, 23, 24, 25]


def test_family_nesting_symmetry_and_lengths():
    for k in range(51):
        bp = family(PAIR, k)
        f = from_bipartition(bp)
        assert len(f) == 12 + 8 * k
        assert is_symmetric(f, -1) and order(f) >= 3
        nxt = left_half(PAIR, k + 1).coeffs
        assert nxt[: 6 + 4 * k] == left_half(PAIR, k).coeffs


@pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda p: f"{p.m}-{p.lengths}")
def test_catalog_families(pair):
    nu, delta = len(pair.f), len(pair.g)
    s = symmetry_sign(pair.m)
    for k in range(11):
        f = from_bipartition(family(pair, k))
        assert len(f) == 2 * nu + 2 * k * delta
        assert is_symmetric(f, s) and order(f) >= pair.m
    p = pair
    for _ in range(3):
        p = rp_extend(p)


def test_difference_sequences():
    ds = difference_sequence(PAIR, 8)
    assert (ds.preperiod, ds.period) == ((2, 4), (1, 1, 1, 5))
    triv = difference_sequence(trivial_pair(LittlewoodPoly((1, -1)), 2), 8)
    assert triv.detected and sum(triv.period) == 4
    short = difference_sequence(PAIR, 2)
    assert not short.detected and short.raw


def _small_pairs():
    """All RPs with S(f) a symmetric witness of length <= 16 and |g| in {2, 4}."""
    out = []
    for n in (4, 8, 12, 16):
        for m in (2, 3):
            s = symmetry_sign(m)
            for A in oracles.witness_sets(n, m, symmetric=True):
                f = LittlewoodPoly(from_set(A, n).coeffs[: n // 2])
                for d in (2, 4):
                    for g in itertools.product((1, -1), repeat=d):
                        g = LittlewoodPoly(g)
                        if verify_rp(f, g, m):
                            out.append(RegenerativePair(f, g, m))
    return out


def test_theorem_on_random_small_pairs():
    pool = _small_pairs()
    assert len(pool) >= 20
    for pair in random.Random(3).sample(pool, 20):
        p = pair
        for _ in range(4):
            p = rp_extend(p)
        assert order(from_bipartition(family(pair, 6))) >= pair.m


def test_left_half_negative_index():
    with pytest.raises(ValueError):
        left_half(PAIR, -1)

