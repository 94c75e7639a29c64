"""Loading and re-verification of the shipped witness catalog.

Witness records (``sporadic``, ``rp``) are decoded and re-checked from
scratch.  Table rows (``L_m``, ``m_star``) are checked against the lengths
the catalog can actually witness: catalog witnesses, regenerative-pair
families and Thue-Morse polynomials, closed under join, doubling and
expanded product up to a length bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .codec import CatalogRecord, FormatError, decode_rp, parse_catalog, record_witness
from .poly import from_bipartition, is_symmetric, order, symmetry_sign
from .regen import RegenerativePair, is_valid

DEFAULT_BOUND = 512


def default_catalog_text() -> str:
    return resources.files(__package__).joinpath("data", "catalog.txt").read_text()


def catalog_load(path: str | Path | None = None) -> list[CatalogRecord]:
    """Parse a catalog file, every ``*.txt`` in a directory, or the shipped catalog."""
    if path is None:
        return parse_catalog(default_catalog_text())
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
        if not files:
            raise FormatError(f"no *.txt catalog files in {path}")
        return [rec for f in files for rec in parse_catalog(f.read_text())]
    return parse_catalog(path.read_text())


def by_id(records: list[CatalogRecord]) -> dict[str, CatalogRecord]:
    return {rec.ident: rec for rec in records}


# --- witnessed lengths ------------------------------------------------------


def _sporadic_ok(rec: CatalogRecord) -> tuple[bool, str]:
    bp = record_witness(rec)
    f = from_bipartition(bp)
    o = order(f)
    sym = is_symmetric(f, symmetry_sign(rec.m))
    if rec.get("half", "1") == "0":
        sym = True  # full-length records carry no symmetry claim
    ok = o >= rec.m and sym and len(bp.A) * 2 == bp.n
    return ok, f"order={o} symmetric={int(sym)}"


def witnessed_lengths(records: list[CatalogRecord], bound: int = DEFAULT_BOUND, top: int = 12):
    """Map m -> {n: provenance} of lengths <= bound with a constructible order-m LP.

    Only records that verify contribute.  Provenance strings name the rule
    and operands, e.g. ``"double(48)"`` or ``"rp_3_12_20[k=2]"``.
    """
    W: dict[int, dict[int, str]] = {m: {} for m in range(top + 1)}
    W[0] = {n: "any" for n in range(1, bound + 1)}

    def put(m: int, n: int, why: str) -> bool:
        if n > bound or n in W[m]:
            return False
        W[m][n] = why
        return True

    for k in range(1, top + 1):
        if 2**k > bound:
            break
        for m in range(1, k + 1):
            put(m, 2**k, f"tau_{k}")
    for rec in records:
        try:
            if rec.table == "sporadic" and _sporadic_ok(rec)[0]:
                for m in range(1, min(rec.m, top) + 1):
                    put(m, rec.n, rec.ident)
            elif rec.table == "rp":
                pair = decode_rp(rec)
                if not is_valid(pair):
                    continue
                nu, delta = len(pair.f), len(pair.g)
                k = 0
                while 2 * nu + 2 * k * delta <= bound:
                    for m in range(1, min(rec.m, top) + 1):
                        put(m, 2 * nu + 2 * k * delta, f"{rec.ident}[k={k}]")
                    k += 1
        except FormatError:
            continue

    changed = True
    while changed:
        changed = False
        for m in range(1, top + 1):
            for n in sorted(W[m - 1]):
                changed |= put(m, 2 * n, f"double({n})")
            for a in range(1, m):
                for n1 in sorted(W[a]):
                    for n2 in sorted(W[m - a]):
                        if n1 * n2 > bound:
                            break
                        changed |= put(m, n1 * n2, f"product({n1},{n2})")
            # join closure: subset sums of the current lengths
            base = sorted(W[m])
            for n in range(1, bound + 1):
                if n in W[m]:
                    continue
                for a in base:
                    if a >= n:
                        break
                    if n - a in W[m]:
                        changed |= put(m, n, f"join({a},{n - a})")
                        break
            # order >= m implies order >= m-1
            for n, why in list(W[m].items()):
                changed |= put(m - 1, n, why)
    return W


# --- table rows -------------------------------------------------------------


def _singles(rec: CatalogRecord) -> list[int]:
    text = rec.get("singles", "")
    return [int(x) for x in text.split(",") if x.strip()]


def l_m_members(rec: CatalogRecord, bound: int) -> list[int]:
    start, step = rec.int("start"), rec.int("step")
    tail = range(start, bound + 1, step)
    return sorted(set(_singles(rec)) | set(tail))


def l_m_contains(rec: CatalogRecord, n: int) -> bool:
    start, step = rec.int("start"), rec.int("step")
    return n in _singles(rec) or (n >= start and (n - start) % step == 0)


# --- verification -----------------------------------------------------------


@dataclass
class RecordStatus:
    record: CatalogRecord
    status: str  # ok | failed | partial | unwitnessed
    detail: str = ""

    def line(self) -> str:
        return f"{self.record.table} id={self.record.ident} status={self.status} {self.detail}".rstrip()


@dataclass
class CatalogReport:
    entries: list[RecordStatus] = field(default_factory=list)

    @property
    def failures(self) -> list[RecordStatus]:
        return [e for e in self.entries if e.status == "failed"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def status_of(self, ident: str) -> str:
        for e in self.entries:
            if e.record.ident == ident:
                return e.status
        raise KeyError(ident)

    def dumps(self) -> str:
        return "".join(e.line() + "\n" for e in self.entries)


def _verify_witness(rec: CatalogRecord) -> RecordStatus:
    try:
        if rec.table == "sporadic":
            ok, detail = _sporadic_ok(rec)
        else:
            pair: RegenerativePair = decode_rp(rec)
            ok = is_valid(pair)
            detail = f"lengths={pair.lengths[0]},{pair.lengths[1]}"
    except FormatError as exc:
        return RecordStatus(rec, "failed", f"decode error: {exc}")
    return RecordStatus(rec, "ok" if ok else "failed", detail)


def catalog_verify(records: list[CatalogRecord], bound: int = DEFAULT_BOUND) -> CatalogReport:
    report = CatalogReport()
    for rec in records:
        if rec.table in ("sporadic", "rp"):
            report.entries.append(_verify_witness(rec))

    W = witnessed_lengths(records, bound)
    lm = {rec.m: rec for rec in records if rec.table == "L_m"}
    for rec in records:
        if rec.table == "L_m":
            report.entries.append(_check_l_m(rec, W, bound))
        elif rec.table == "m_star":
            report.entries.append(_check_m_star(rec, W, lm))
    return report


def _check_l_m(rec: CatalogRecord, W, bound: int) -> RecordStatus:
    m = rec.m
    have = W.get(m, {})
    # a witness outside the claimed set contradicts the row
    stray = sorted(n for n in have if n % 2 == 0 and not l_m_contains(rec, n))
    if stray:
        return RecordStatus(rec, "failed", f"witnessed outside row: {stray[:5]}")
    missing = [n for n in l_m_members(rec, bound) if n not in have]
    if not missing:
        return RecordStatus(rec, "ok", f"all members <= {bound} witnessed")
    return RecordStatus(rec, "partial", f"unwitnessed<= {bound}: {','.join(map(str, missing))}")


def _check_m_star(rec: CatalogRecord, W, lm: dict[int, CatalogRecord]) -> RecordStatus:
    n = rec.n
    claim = rec.int("value") if "value" in rec.fields else rec.int("lower")
    exact = "value" in rec.fields
    above = [m for m in W if m > claim and n in W[m]]
    if exact and above:
        return RecordStatus(rec, "failed", f"witness of order {max(above)} exceeds value")
    # consistency with the L_m rows the catalog carries
    for m, row in lm.items():
        inside = l_m_contains(row, n)
        if (m <= claim and not inside) or (exact and m > claim and inside):
            return RecordStatus(rec, "failed", f"disagrees with L_{m} row")
    if n in W.get(claim, {}):
        return RecordStatus(rec, "ok", f"lower bound via {W[claim][n]}")
    return RecordStatus(rec, "unwitnessed", "no catalog witness for the lower bound")
