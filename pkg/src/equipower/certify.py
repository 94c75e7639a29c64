"""Certificates: expression trees over verified LPs with exact (length, order) bookkeeping.

Composition rules used for the order lower bound:

* join: min of the two children
* negate: unchanged
* double (f v -f): child + 1
* expanded product f # g: sum of the children
* symmetrize: the claimed order, accepted when it follows from the symmetry
  rule (child order >= m - 1 and s = (-1)^m) or, for small trees, when a
  materialized check confirms it

Trees are never materialized unless asked; ``coefficient_at`` answers single
coefficient queries by descending the tree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Mapping, Union

from .poly import (
    InputError,
    LittlewoodPoly,
    ResourceError,
    double,
    expanded_product,
    join,
    negate,
    order,
    symmetrize,
    symmetry_sign,
    taylor_at_one,
    thue_morse,
)

MATERIALIZE_CAP = 1 << 16


class CertificateError(ValueError):
    """A leaf or node failed verification; ``label`` names the offender."""

    def __init__(self, message: str, label: str = ""):
        super().__init__(message)
        self.label = label


# --- nodes ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Leaf:
    poly: LittlewoodPoly
    verified_order: int
    label: str = ""

    def __post_init__(self):
        actual = order(self.poly)
        if actual != self.verified_order:
            raise CertificateError(
                f"leaf {self.label or '?'}: recorded order {self.verified_order}, actual {actual}", self.label
            )


@dataclass(frozen=True, eq=False)
class Placeholder:
    """Stands in for a witness known only by its (length, order) from a table."""

    length: int
    order: int
    label: str = ""


@dataclass(frozen=True, eq=False)
class Join:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, eq=False)
class Negate:
    child: "Node"


@dataclass(frozen=True, eq=False)
class Double:
    child: "Node"


@dataclass(frozen=True, eq=False)
class Product:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, eq=False)
class Symmetrize:
    child: "Node"
    s: int
    claimed_order: int


Node = Union[Leaf, Placeholder, Join, Negate, Double, Product, Symmetrize]


@lru_cache(maxsize=None)
def node_length(node: Node) -> int:
    if isinstance(node, Leaf):
        return len(node.poly)
    if isinstance(node, Placeholder):
        return node.length
    if isinstance(node, (Join, Product)):
        a, b = node_length(node.left), node_length(node.right)
        return a + b if isinstance(node, Join) else a * b
    if isinstance(node, Negate):
        return node_length(node.child)
    if isinstance(node, (Double, Symmetrize)):
        return 2 * node_length(node.child)
    raise TypeError(f"not a certificate node: {node!r}")


@lru_cache(maxsize=None)
def node_order(node: Node) -> int:
    if isinstance(node, Leaf):
        return node.verified_order
    if isinstance(node, Placeholder):
        return node.order
    if isinstance(node, Join):
        return min(node_order(node.left), node_order(node.right))
    if isinstance(node, Negate):
        return node_order(node.child)
    if isinstance(node, Double):
        return node_order(node.child) + 1
    if isinstance(node, Product):
        return node_order(node.left) + node_order(node.right)
    if isinstance(node, Symmetrize):
        return _symmetrize_order(node)
    raise TypeError(f"not a certificate node: {node!r}")


def _symmetrize_order(node: Symmetrize) -> int:
    base = node_order(node.child)
    m = node.claimed_order
    if m <= base:
        return m
    if m == base + 1 and node.s == symmetry_sign(m):
        return m
    if node_length(node) <= MATERIALIZE_CAP and not _has_placeholder(node):
        actual = order(materialize(node))
        if actual >= m:
            return m
        raise CertificateError(f"symmetrized node has order {actual} < claimed {m}")
    raise CertificateError(f"claimed order {m} for a symmetrized node cannot be checked")


def _has_placeholder(node: Node) -> bool:
    if isinstance(node, Placeholder):
        return True
    if isinstance(node, Leaf):
        return False
    return any(_has_placeholder(c) for c in _children(node))


def _children(node: Node) -> tuple:
    if isinstance(node, (Join, Product)):
        return (node.left, node.right)
    if isinstance(node, (Negate, Double, Symmetrize)):
        return (node.child,)
    return ()


# --- certificates -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Certificate:
    root: Node
    length: int
    order_lb: int

    @property
    def placeholders(self) -> list[str]:
        out: list[str] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Placeholder):
                out.append(node.label or f"({node.length},{node.order})")
            stack.extend(_children(node))
        return sorted(set(out))


def certificate(root: Node) -> Certificate:
    return Certificate(root, node_length(root), node_order(root))


def certify_leaf(poly: LittlewoodPoly, label: str = "") -> Certificate:
    if not isinstance(poly, LittlewoodPoly):
        poly = LittlewoodPoly(tuple(poly))
    return certificate(Leaf(poly, order(poly), label))


def placeholder(length: int, order_: int, label: str = "") -> Certificate:
    return certificate(Placeholder(length, order_, label))


_OPS: dict[str, Callable[..., Node]] = {
    "join": Join,
    "negate": Negate,
    "double": Double,
    "product": Product,
}


def compose(op: str, *certs: Certificate, s: int | None = None, claimed_order: int | None = None) -> Certificate:
    """Combine certificates with one of join, negate, double, product, symmetrize."""
    nodes = [c.root for c in certs]
    if op == "symmetrize":
        if len(nodes) != 1 or s is None or claimed_order is None:
            raise InputError("symmetrize takes one certificate, s and claimed_order")
        return certificate(Symmetrize(nodes[0], s, claimed_order))
    try:
        ctor = _OPS[op]
    except KeyError:
        raise InputError(f"unknown operation {op!r}") from None
    arity = 2 if op in ("join", "product") else 1
    if len(nodes) != arity:
        raise InputError(f"{op} takes {arity} certificate(s), got {len(nodes)}")
    return certificate(ctor(*nodes))


def product_power(cert: Certificate, k: int) -> Certificate:
    """cert # cert # ... # cert (k factors)."""
    if k < 1:
        raise InputError("power must be positive")
    return reduce(lambda a, _: compose("product", a, cert), range(k - 1), cert)


# --- coefficient access -----------------------------------------------------


def coefficient_at(cert: Certificate | Node, index: int) -> int:
    node = cert.root if isinstance(cert, Certificate) else cert
    if not 0 <= index < node_length(node):
        raise IndexError(f"index {index} outside [0, {node_length(node)})")
    sign = 1
    while True:
        if isinstance(node, Leaf):
            return sign * node.poly[index]
        if isinstance(node, Placeholder):
            raise CertificateError(f"placeholder {node.label!r} has no coefficients", node.label)
        if isinstance(node, Join):
            cut = node_length(node.left)
            node, index = (node.left, index) if index < cut else (node.right, index - cut)
        elif isinstance(node, Negate):
            sign, node = -sign, node.child
        elif isinstance(node, Double):
            cut = node_length(node.child)
            if index >= cut:
                sign, index = -sign, index - cut
            node = node.child
        elif isinstance(node, Symmetrize):
            cut = node_length(node.child)
            if index >= cut:
                sign, index = sign * node.s, 2 * cut - 1 - index
            node = node.child
        elif isinstance(node, Product):
            q, r = divmod(index, node_length(node.left))
            sign *= coefficient_at(node.right, q)
            node, index = node.left, r
        else:
            raise TypeError(f"not a certificate node: {node!r}")


def materialize(cert: Certificate | Node, cap: int = MATERIALIZE_CAP) -> LittlewoodPoly:
    node = cert.root if isinstance(cert, Certificate) else cert
    if node_length(node) > cap:
        raise ResourceError(f"length {node_length(node)} exceeds materialization cap {cap}")
    return _dense(node)


def _dense(node: Node) -> LittlewoodPoly:
    if isinstance(node, Leaf):
        return node.poly
    if isinstance(node, Placeholder):
        raise CertificateError(f"placeholder {node.label!r} has no coefficients", node.label)
    if isinstance(node, Join):
        return join(_dense(node.left), _dense(node.right))
    if isinstance(node, Negate):
        return negate(_dense(node.child))
    if isinstance(node, Double):
        return double(_dense(node.child))
    if isinstance(node, Product):
        return expanded_product(_dense(node.left), _dense(node.right))
    if isinstance(node, Symmetrize):
        return symmetrize(_dense(node.child), node.s)
    raise TypeError(f"not a certificate node: {node!r}")


# --- serialization ----------------------------------------------------------


def to_json(cert: Certificate) -> str:
    """Nested JSON; leaves are referenced by label, not by coefficients."""
    return json.dumps(_node_dict(cert.root), sort_keys=True)


def _node_dict(node: Node) -> dict:
    if isinstance(node, Leaf):
        if not node.label:
            raise CertificateError("cannot serialize an unlabelled leaf")
        return {"leaf": node.label, "n": len(node.poly), "m": node.verified_order}
    if isinstance(node, Placeholder):
        return {"placeholder": node.label, "n": node.length, "m": node.order}
    if isinstance(node, Symmetrize):
        return {"op": "symmetrize", "s": node.s, "claimed_order": node.claimed_order, "args": [_node_dict(node.child)]}
    op = {Join: "join", Negate: "negate", Double: "double", Product: "product"}[type(node)]
    return {"op": op, "args": [_node_dict(c) for c in _children(node)]}


def from_json(text: str, resolve: Callable[[str], LittlewoodPoly]) -> Certificate:
    """Rebuild a certificate, fetching each leaf through ``resolve(label)``.

    Every leaf is re-verified, so a stale or corrupted store is caught here.
    """

    def build(d: dict) -> Node:
        if "leaf" in d:
            poly = resolve(d["leaf"])
            if len(poly) != d["n"]:
                raise CertificateError(f"leaf {d['leaf']}: length {len(poly)} != {d['n']}", d["leaf"])
            return Leaf(poly, order(poly), d["leaf"])
        if "placeholder" in d:
            return Placeholder(d["n"], d["m"], d["placeholder"])
        args = [build(a) for a in d["args"]]
        if d["op"] == "symmetrize":
            return Symmetrize(args[0], d["s"], d["claimed_order"])
        return _OPS[d["op"]](*args)

    return certificate(build(json.loads(text)))


# --- the 2^51 construction --------------------------------------------------

STONG_LEAVES = ((144, 8), (192, 9), (48, 6), (112, 7), (16, 4), (208, 8), (272, 8), (8192, 13))

# components as (witness, power) lists, joined left to right
STONG_RECIPE = (
    ((144, 8, 2), (192, 9, 4)),
    ((48, 6, 3), (112, 7, 1), (192, 9, 3)),
    ((16, 4, 1), (112, 7, 2), (208, 8, 1), (272, 8, 1), (192, 9, 2)),
    ((112, 7, 1), (208, 8, 4), (8192, 13, 1)),
)

STONG_LENGTHS = (28179280429056, 87668872445952, 418591807635456, 1717359853174784)


@dataclass(frozen=True)
class StongResult:
    certificate: Certificate
    components: tuple[Certificate, ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(c.length for c in self.components)


def stong_certificate(
    witnesses: Mapping[tuple[int, int], LittlewoodPoly] | None = None,
    labels: Mapping[tuple[int, int], str] | None = None,
    placeholders: bool = False,
) -> StongResult:
    """Build (a v b) v c v d for an order-52 LP of length 2**51.

    With ``placeholders`` every leaf is a (length, order) stand-in and only
    the arithmetic is checked.  Otherwise each (n, m) needs a witness in
    ``witnesses``; (16, 4) and (8192, 13) default to Thue-Morse polynomials.
    """
    witnesses = dict(witnesses or {})
    labels = dict(labels or {})
    leaves: dict[tuple[int, int], Certificate] = {}
    for n, m in STONG_LEAVES:
        label = labels.get((n, m), f"P{n}_{m}")
        if placeholders:
            leaves[n, m] = placeholder(n, m, label)
            continue
        poly = witnesses.get((n, m))
        if poly is None and n == 2**m:
            poly, label = thue_morse(m), labels.get((n, m), f"tau_{m}")
        if poly is None:
            raise CertificateError(f"no witness supplied for P({n},{m})", label)
        cert = certify_leaf(poly, label)
        if cert.length != n or cert.order_lb < m:
            raise CertificateError(
                f"witness {label} has length {cert.length} and order {cert.order_lb}, need ({n},{m})", label
            )
        leaves[n, m] = cert

    comps = []
    for recipe in STONG_RECIPE:
        factors = [product_power(leaves[n, m], k) for n, m, k in recipe]
        comps.append(reduce(lambda a, b: compose("product", a, b), factors))
    root = reduce(lambda a, b: compose("join", a, b), comps)
    return StongResult(root, tuple(comps))


# --- tau moment formula -----------------------------------------------------


def tau_derivative_closed_form(m: int) -> int:
    return (-1) ** m * math.factorial(m) * 2 ** (m * (m - 1) // 2)


def tau_moment_check(m: int) -> int:
    """m-th derivative of tau_m at 1, as m! times the j = m binomial moment.

    Raises ``CertificateError`` if it disagrees with the closed form.
    """
    value = math.factorial(m) * taylor_at_one(thue_morse(m).coeffs, m + 1)[m]
    if value != tau_derivative_closed_form(m):
        raise CertificateError(f"tau_{m}: derivative {value} != closed form {tau_derivative_closed_form(m)}")
    return value


# --- subset-sum reconstruction ----------------------------------------------


@dataclass(frozen=True)
class Component:
    """A product of pool witnesses, padded by a Thue-Morse factor to order ``M``."""

    factors: tuple[tuple[int, int], ...]
    length: int  # length after padding to order M

    @property
    def order(self) -> int:
        return sum(m for _, m in self.factors)


def product_components(pool, M: int, max_factors: int) -> dict[int, Component]:
    """Distinct padded lengths n * 2**(M - sum m) < 2**(M-1), one factorization each.

    Among factorizations of equal padded length the one of smallest order is
    kept (ties broken by first found in lexicographic pool order).
    """
    pool = sorted(set(pool))
    cap = 1 << (M - 1)
    out: dict[int, Component] = {}

    def walk(start: int, n: int, m: int, facs: list) -> None:
        if facs:
            L = n << (M - m)
            if L < cap and (L not in out or out[L].order > m):
                out[L] = Component(tuple(facs), L)
        if len(facs) == max_factors:
            return
        for i in range(start, len(pool)):
            a, b = pool[i]
            if m + b <= M:
                facs.append(pool[i])
                walk(i, n * a, m + b, facs)
                facs.pop()

    walk(0, 1, 0, [])
    return out


def subset_sum_search(pool, M: int = 52, max_factors: int = 7, limit: int | None = None):
    """Four padded components whose lengths sum to 2**(M-1), i.e. P(2**(M-1), M) by joins.

    Meet in the middle over sorted pair sums.  Returns tuples of
    ``Component`` in decreasing length order.
    """
    import numpy as np

    comps = product_components(pool, M, max_factors)
    if not comps:
        return []
    v = np.array(sorted(comps), dtype=np.int64)
    target = 1 << (M - 1)
    pairs = np.unique(np.concatenate([v[i] + v[: i + 1] for i in range(len(v))]))
    pairs = pairs[pairs < target]
    need = target - pairs
    pos = np.minimum(np.searchsorted(pairs, need), len(pairs) - 1)
    hits = pairs[(pairs[pos] == need) & (pairs <= need)]

    values = set(comps)
    found = []
    for low in hits.tolist():
        high = target - low
        for split_low in _two_sums(low, v, values):
            for split_high in _two_sums(high, v, values):
                if split_high[1] >= split_low[0]:
                    quad = split_high + split_low
                    found.append(tuple(comps[x] for x in quad))
                    if limit is not None and len(found) >= limit:
                        return found
    return found


def _two_sums(total: int, v, values: set) -> list[tuple[int, int]]:
    out = []
    for a in v[v >= -(-total // 2)].tolist():
        if a < total and total - a in values:
            out.append((a, total - a))
    return out
