"""Hex encoding of witnesses and the line-oriented catalog record format.

A set ``A`` of ``[n]`` is written as its characteristic bit string, most
significant bit first (bit 0 of the set is the top bit of the first hex
digit), padded on the right with zeros to a multiple of four bits.  Catalog
entries for symmetric witnesses store only the left half.

Catalog lines look like::

    rp m=3 n=12 n1=20 hex=A3C set="0,2,6,7,8,9"
    sporadic m=5 n=40 hex=C1EC9

The first token names the table; the rest are ``key=value`` fields (values
may be double-quoted).  ``#`` starts a comment.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from typing import Iterable

from .poly import (
    Bipartition,
    InputError,
    LittlewoodPoly,
    from_set,
    symmetrize,
    symmetry_sign,
    to_bipartition,
)
from .regen import RegenerativePair

TABLES = ("L_m", "m_star", "rp", "sporadic")
_HEX = set("0123456789ABCDEF")


class FormatError(InputError):
    """Raised for malformed hex strings or catalog lines."""


# --- hex --------------------------------------------------------------------


def hex_encode(A: Iterable[int], n: int) -> str:
    if n < 0:
        raise InputError("length must be nonnegative")
    bits = [0] * (-(-n // 4) * 4 or 4)
    for a in A:
        if not 0 <= a < n:
            raise InputError(f"element {a} is outside [0, {n})")
        bits[a] = 1
    digits = []
    for k in range(0, len(bits), 4):
        b = bits[k : k + 4]
        digits.append("%X" % (b[0] << 3 | b[1] << 2 | b[2] << 1 | b[3]))
    return "".join(digits)


def hex_decode(text: str, n: int) -> tuple[int, ...]:
    text = text.strip().upper()
    if not text or not set(text) <= _HEX:
        raise FormatError(f"not a hex string: {text!r}")
    if 4 * len(text) < n:
        raise FormatError(f"{len(text)} hex digits cannot hold {n} bits")
    bits = "".join(format(int(ch, 16), "04b") for ch in text)
    if "1" in bits[n:]:
        raise FormatError(f"nonzero pad bit beyond position {n} in {text!r}")
    return tuple(i for i, b in enumerate(bits[:n]) if b == "1")


def expand_half_witness(text: str, n: int, m: int, s: int | None = None) -> Bipartition:
    """Decode a left half over [n/2] and apply (-1)^m symmetrization (or ``s``)."""
    if n % 2:
        raise InputError(f"full length must be even, got {n}")
    half = hex_decode(text, n // 2)
    sign = symmetry_sign(m) if s is None else s
    return to_bipartition(symmetrize(from_set(half, n // 2), sign))


def half_hex(bp: Bipartition) -> str:
    """Hex of the left half of a witness (inverse of ``expand_half_witness``)."""
    if bp.n % 2:
        raise InputError("witness length must be even")
    return hex_encode([a for a in bp.A if a < bp.n // 2], bp.n // 2)


# --- catalog records --------------------------------------------------------


@dataclass(frozen=True)
class CatalogRecord:
    table: str
    fields: dict = field(default_factory=dict, compare=False, hash=False)
    line: int = 0

    def get(self, key: str, default=None):
        return self.fields.get(key, default)

    def int(self, key: str) -> int:
        try:
            return int(self.fields[key])
        except KeyError:
            raise FormatError(f"line {self.line}: {self.table} record lacks {key}=") from None
        except ValueError:
            raise FormatError(f"line {self.line}: {key}={self.fields[key]!r} is not an integer") from None

    @property
    def m(self) -> int:
        return self.int("m")

    @property
    def n(self) -> int:
        return self.int("n")

    @property
    def hex(self) -> str:
        return self.fields["hex"]

    @property
    def ident(self) -> str:
        if "id" in self.fields:
            return self.fields["id"]
        if self.table == "rp":
            return f"rp_{self.m}_{self.n}_{self.int('n1')}"
        if self.table == "m_star":
            return f"mstar_{self.n}"
        if self.table == "L_m":
            return f"L_{self.m}"
        return f"P_{self.n}_{self.m}"

    def to_line(self) -> str:
        parts = [self.table]
        for k, v in self.fields.items():
            v = str(v)
            parts.append(f'{k}="{v}"' if (" " in v or not v) else f"{k}={v}")
        return " ".join(parts)


def parse_line(text: str, lineno: int = 0) -> CatalogRecord | None:
    body = text.split("#", 1)[0].strip()
    if not body:
        return None
    try:
        tokens = shlex.split(body)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None
    table, rest = tokens[0], tokens[1:]
    if table not in TABLES:
        raise FormatError(f"line {lineno}: unknown table {table!r}")
    fields = {}
    for tok in rest:
        key, sep, value = tok.partition("=")
        if not sep or not key:
            raise FormatError(f"line {lineno}: expected key=value, got {tok!r}")
        if key in fields:
            raise FormatError(f"line {lineno}: duplicate field {key!r}")
        fields[key] = value
    rec = CatalogRecord(table, fields, lineno)
    _check_schema(rec)
    return rec


_REQUIRED = {
    "rp": ("m", "n", "n1", "hex"),
    "sporadic": ("m", "n", "hex"),
    "L_m": ("m",),
    "m_star": ("n",),
}


def _check_schema(rec: CatalogRecord) -> None:
    for key in _REQUIRED[rec.table]:
        if key not in rec.fields:
            raise FormatError(f"line {rec.line}: {rec.table} record lacks {key}=")
    if rec.table in ("rp", "sporadic"):
        if not set(rec.hex.upper()) <= _HEX:
            raise FormatError(f"line {rec.line}: bad hex {rec.hex!r}")


def parse_catalog(text: str) -> list[CatalogRecord]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        rec = parse_line(raw, lineno)
        if rec is not None:
            records.append(rec)
    return records


def dump_catalog(records: Iterable[CatalogRecord]) -> str:
    return "".join(rec.to_line() + "\n" for rec in records)


def witness_record(bp: Bipartition, m: int, **extra) -> CatalogRecord:
    """Catalog line for a (-1)^m-symmetric witness, storing its left half."""
    fields = {"m": str(m), "n": str(bp.n), "hex": half_hex(bp)}
    fields.update({k: str(v) for k, v in extra.items()})
    return CatalogRecord("sporadic", fields)


# --- witnesses from records -------------------------------------------------


def record_witness(rec: CatalogRecord) -> Bipartition:
    """Full witness of a sporadic record (half-encoded, (-1)^m symmetric)."""
    if rec.table != "sporadic":
        raise FormatError(f"line {rec.line}: {rec.table} records carry no single witness")
    if rec.get("half", "1") == "0":
        return Bipartition(rec.n, hex_decode(rec.hex, rec.n))
    return expand_half_witness(rec.hex, rec.n, rec.m)


def decode_rp(rec: CatalogRecord) -> RegenerativePair:
    """Split the decoded left half of the longer witness into f and g."""
    m, n, n1 = rec.m, rec.n, rec.int("n1")
    if not (0 < n < n1) or n % 2 or n1 % 2:
        raise FormatError(f"line {rec.line}: rp lengths must be even with n < n1, got ({n}, {n1})")
    half = hex_decode(rec.hex, n1 // 2)
    signs = from_set(half, n1 // 2).coeffs
    nu = n // 2
    return RegenerativePair(
        f=LittlewoodPoly(signs[:nu]),
        g=LittlewoodPoly(signs[nu:]),
        m=m,
    )
