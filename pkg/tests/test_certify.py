import itertools
import random

import pytest

from equipower.catalog import catalog_load
from equipower.certify import (
    STONG_LENGTHS,
    CertificateError,
    Leaf,
    certify_leaf,
    coefficient_at,
    compose,
    from_json,
    materialize,
    placeholder,
    product_components,
    stong_certificate,
    subset_sum_search,
    tau_derivative_closed_form,
    tau_moment_check,
    to_json,
)
from equipower.codec import record_witness
from equipower.poly import (
    LittlewoodPoly,
    ResourceError,
    double,
    expanded_product,
    from_bipartition,
    join,
    negate,
    order,
    symmetrize,
    thue_morse,
)


def tau(m):
    return certify_leaf(thue_morse(m), f"tau_{m}")


def test_leaf_and_simple_rules():
    c = tau(4)
    assert (c.length, c.order_lb) == (16, 4)
    d = compose("double", tau(2))
    assert (d.length, d.order_lb) == (8, 3)
    assert materialize(d) == thue_morse(3)
    with pytest.raises(CertificateError):
        Leaf(thue_morse(3), 4, "bad")
    with pytest.raises(Exception):
        certify_leaf([1, 0, 1])


def test_product_of_144_witness():
    rec = next(r for r in catalog_load() if r.get("id") == "P144_8")
    c = certify_leaf(from_bipartition(record_witness(rec)), "P144_8")
    sq = compose("product", c, c)
    assert (sq.length, sq.order_lb) == (20736, 16)
    assert sq.length < 2**15


def test_coefficient_block_rule():
    c = compose("product", tau(2), tau(2))
    assert coefficient_at(c, 5) == 1
    with pytest.raises(IndexError):
        coefficient_at(c, 16)


def _random_tree(rng, budget=1 << 12):
    kind = rng.randrange(6)
    if kind == 0 or budget < 8:
        n = rng.randint(1, 6)
        return certify_leaf(LittlewoodPoly(tuple(rng.choice((1, -1)) for _ in range(n))), "r")
    if kind == 1:
        return compose("join", _random_tree(rng, budget // 2), _random_tree(rng, budget // 2))
    if kind == 2:
        return compose("negate", _random_tree(rng, budget))
    if kind == 3:
        return compose("double", _random_tree(rng, budget // 2))
    if kind == 4:
        a = _random_tree(rng, int(budget**0.5))
        b = _random_tree(rng, int(budget**0.5))
        return compose("product", a, b)
    child = _random_tree(rng, budget // 2)
    s = rng.choice((1, -1))
    return compose("symmetrize", child, s=s, claimed_order=child.order_lb)


def _dense(c):
    """Independent dense construction from the tree using lp-core operations."""
    node = c.root
    name = type(node).__name__
    if name == "Leaf":
        return node.poly
    from equipower.certify import certificate

    kids = [certificate(k) for k in (getattr(node, "left", None), getattr(node, "right", None), getattr(node, "child", None)) if k is not None]
    if name == "Join":
        return join(_dense(kids[0]), _dense(kids[1]))
    if name == "Product":
        return expanded_product(_dense(kids[0]), _dense(kids[1]))
    if name == "Negate":
        return negate(_dense(kids[0]))
    if name == "Double":
        return double(_dense(kids[0]))
    return symmetrize(_dense(kids[0]), node.s)


def test_random_trees_match_dense_and_are_sound():
    rng = random.Random(11)
    for _ in range(300):
        c = _random_tree(rng)
        if c.length > 1 << 16:
            continue
        f = _dense(c)
        assert len(f) == c.length
        assert materialize(c) == f
        idx = range(c.length) if c.length <= 512 else rng.sample(range(c.length), 512)
        assert all(coefficient_at(c, i) == f[i] for i in idx)
        assert c.order_lb <= order(f)


def test_symmetrize_claims():
    half = LittlewoodPoly(thue_morse(3).coeffs[:4])
    leaf = certify_leaf(half, "h")
    ok = compose("symmetrize", leaf, s=-1, claimed_order=3)  # checked by materializing
    assert ok.order_lb == 3
    with pytest.raises(CertificateError):
        compose("symmetrize", leaf, s=1, claimed_order=3)
    big = placeholder(1 << 20, 4, "big")
    assert compose("symmetrize", big, s=-1, claimed_order=5).order_lb == 5  # symmetry rule
    with pytest.raises(CertificateError):
        compose("symmetrize", big, s=1, claimed_order=5)


def test_materialize_cap():
    with pytest.raises(ResourceError):
        materialize(compose("product", tau(9), tau(9)))


def _catalog_witnesses():
    w, labels = {}, {}
    for rec in catalog_load():
        if rec.table == "sporadic" and "id" in rec.fields:
            w[rec.n, rec.m] = from_bipartition(record_witness(rec))
            labels[rec.n, rec.m] = rec.ident
    return w, labels


def test_stong_placeholders():
    res = stong_certificate(placeholders=True)
    assert res.lengths == STONG_LENGTHS
    assert res.certificate.length == 2**51
    assert res.certificate.order_lb >= 52
    assert all(x % 2**32 == 0 for x in res.lengths)
    assert "P112_7" in res.certificate.placeholders


def test_stong_with_witnesses():
    w, labels = _catalog_witnesses()
    res = stong_certificate(w, labels)
    c = res.certificate
    assert res.lengths == STONG_LENGTHS and c.length == 2**51 and c.order_lb >= 52
    assert not c.placeholders
    assert coefficient_at(c, 0) == 1
    rng = random.Random(5)
    for i in rng.sample(range(2**51), 50):
        assert coefficient_at(c, i) in (1, -1)


def test_stong_rejects_bad_leaf():
    w, labels = _catalog_witnesses()
    w[112, 7] = LittlewoodPoly(tuple([1, -1] * 56))
    with pytest.raises(CertificateError) as err:
        stong_certificate(w, labels)
    assert err.value.label == "P112_7"
    del w[112, 7]
    with pytest.raises(CertificateError):
        stong_certificate(w, labels)


def test_json_round_trip():
    w, labels = _catalog_witnesses()
    res = stong_certificate(w, labels)
    text = to_json(res.certificate)
    store = {labels[k]: v for k, v in w.items()} | {"tau_4": thue_morse(4), "tau_13": thue_morse(13)}
    again = from_json(text, store.__getitem__)
    assert (again.length, again.order_lb) == (2**51, 52)
    store["P208_8"] = thue_morse(8)  # wrong length
    with pytest.raises(CertificateError):
        from_json(text, store.__getitem__)


@pytest.mark.parametrize("m", range(0, 13))
def test_tau_moment_formula(m):
    assert tau_moment_check(m) == tau_derivative_closed_form(m)


def test_tau_moment_values():
    assert tau_moment_check(3) == -48
    assert tau_moment_check(1) == -1


# --- subset sums -----------------------------------------------------------


def test_subset_sum_refinds_known_combination():
    pool = [(48, 6), (112, 7), (144, 8), (192, 9), (208, 8), (272, 8)]
    sols = subset_sum_search(pool)
    assert any(sorted(c.length for c in q) == sorted(STONG_LENGTHS) for q in sols)
    for q in sols:
        assert sum(c.length for c in q) == 2**51
        assert all(c.order <= 52 for c in q)


@pytest.mark.parametrize("M", [8, 12, 16])
def test_subset_sum_against_brute_force(M):
    # the search is pure arithmetic on (length, order) pairs
    pool = [(3, 3), (5, 4), (7, 4), (9, 5), (11, 5)]
    comps = product_components(pool, M, 3)
    target = 1 << (M - 1)
    brute = {
        q for q in itertools.combinations_with_replacement(sorted(comps, reverse=True), 4) if sum(q) == target
    }
    got = [tuple(c.length for c in q) for q in subset_sum_search(pool, M, 3)]
    assert len(got) == len(set(got))
    assert set(got) == brute and brute


def test_subset_sum_empty_pool():
    assert subset_sum_search([(12, 3)], 6, 2) == []
