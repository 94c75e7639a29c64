"""Littlewood polynomials and their bipartition view.

A Littlewood polynomial (LP) of length ``n`` is stored as its tuple of
coefficients ``(a_0, ..., a_{n-1})`` with every entry equal to +1 or -1.
The same object is a bipartition of ``[n] = {0, ..., n-1}``: ``A`` holds the
indices with coefficient +1 and ``B`` the rest.

All arithmetic is exact (Python ints); there is no floating point here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import accumulate
from math import factorial
from typing import Iterable, Sequence

# Densely materialised Thue-Morse polynomials are capped at 2**26 coefficients.
THUE_MORSE_CAP = 26


class InputError(ValueError):
    """Raised for malformed polynomials, bipartitions or lengths."""


class ResourceError(RuntimeError):
    """Raised when a request would exceed a dense-materialisation cap."""


@dataclass(frozen=True)
class LittlewoodPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise InputError("a Littlewood polynomial needs at least one coefficient")
        for c in coeffs:
            if c != 1 and c != -1:
                raise InputError(f"coefficient {c!r} is not +1 or -1")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_signs(cls, signs: Iterable[int] | str) -> "LittlewoodPoly":
        """Build from ints or a string of '+'/'-' characters."""
        if isinstance(signs, str):
            table = {"+": 1, "-": -1}
            try:
                return cls(tuple(table[ch] for ch in signs if not ch.isspace()))
            except KeyError as exc:
                raise InputError(f"bad sign character {exc.args[0]!r}") from None
        return cls(tuple(int(s) for s in signs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __str__(self) -> str:
        return "".join("+" if c > 0 else "-" for c in self.coeffs)

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def value_at(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class Bipartition:
    """``A`` as a sorted tuple of indices in ``[n]``; ``B`` is the complement."""

    n: int
    A: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"length must be positive, got {self.n}")
        A = tuple(sorted(set(int(a) for a in self.A)))
        if A and (A[0] < 0 or A[-1] >= self.n):
            raise InputError(f"elements of A must lie in [0, {self.n})")
        object.__setattr__(self, "A", A)

    @property
    def B(self) -> tuple[int, ...]:
        members = set(self.A)
        return tuple(i for i in range(self.n) if i not in members)

    @property
    def balanced(self) -> bool:
        return 2 * len(self.A) == self.n

    def complement(self) -> "Bipartition":
        return Bipartition(self.n, self.B)


class MomentKind(str, Enum):
    POWER = "power"
    BINOMIAL = "binomial"


@dataclass(frozen=True)
class MomentSpec:
    """Which weight family to use and how far to translate the domain.

    ``shift`` re-indexes the domain as ``i - shift``; the order of the
    polynomial does not depend on it.
    """

    kind: MomentKind = MomentKind.BINOMIAL
    shift: int = 0


def binom_poly(x: int, j: int) -> int:
    """The integer-valued polynomial C(x, j) = x(x-1)...(x-j+1)/j!, any integer x."""
    if j < 0:
        raise InputError("binomial index must be nonnegative")
    num = 1
    for k in range(j):
        num *= x - k
    return num // factorial(j)


def weight(i: int, j: int, spec: MomentSpec) -> int:
    x = i - spec.shift
    if spec.kind is MomentKind.POWER:
        return x**j
    return binom_poly(x, j)


# --- conversions ------------------------------------------------------------


def from_bipartition(bp: Bipartition) -> LittlewoodPoly:
    members = set(bp.A)
    return LittlewoodPoly(tuple(1 if i in members else -1 for i in range(bp.n)))


def to_bipartition(f: LittlewoodPoly) -> Bipartition:
    return Bipartition(len(f), tuple(i for i, c in enumerate(f.coeffs) if c > 0))


def from_set(A: Iterable[int], n: int) -> LittlewoodPoly:
    return from_bipartition(Bipartition(n, tuple(A)))


# --- moments and order ------------------------------------------------------


def moment(f: LittlewoodPoly, j: int, spec: MomentSpec = MomentSpec()) -> int:
    """Sum of a_i * w_j(i) with w_j the power or binomial weight of degree j."""
    if j < 0:
        raise InputError("moment index must be nonnegative")
    return sum(c * weight(i, j, spec) for i, c in enumerate(f.coeffs))


def power_sums(S: Iterable[int], count: int) -> list[int]:
    """Plain power sums of a set of integers for exponents 0..count-1."""
    S = list(S)
    return [sum(s**j for s in S) for j in range(count)]


def taylor_at_one(coeffs: Sequence[int], count: int) -> list[int]:
    """First ``count`` coefficients of f(1 + y), i.e. sum_i a_i C(i, j).

    Repeated synthetic division by (x - 1); each quotient is a suffix sum.
    """
    out: list[int] = []
    cur = list(coeffs)
    for _ in range(count):
        if not cur:
            out.append(0)
            continue
        out.append(sum(cur))
        # quotient of cur by (x - 1): q_k = sum_{i > k} cur_i
        suffix = list(accumulate(reversed(cur)))
        suffix.reverse()
        cur = suffix[1:]
    return out


def order(f: LittlewoodPoly) -> int:
    """Multiplicity of the root x = 1."""
    coeffs = list(f.coeffs)
    m = 0
    while coeffs:
        if sum(coeffs) != 0:
            return m
        m += 1
        suffix = list(accumulate(reversed(coeffs)))
        suffix.reverse()
        coeffs = suffix[1:]
    # f = 0 is impossible for a Littlewood polynomial
    raise AssertionError("unreachable: nonzero polynomial with infinite order")


def has_order(f: LittlewoodPoly, m: int) -> bool:
    """True iff (x - 1)^m divides f; cheaper than ``order`` when m is small."""
    return all(v == 0 for v in taylor_at_one(f.coeffs, m))


# --- constructions ----------------------------------------------------------


def reversal(f: LittlewoodPoly) -> LittlewoodPoly:
    return LittlewoodPoly(f.coeffs[::-1])


def negate(f: LittlewoodPoly) -> LittlewoodPoly:
    return LittlewoodPoly(tuple(-c for c in f.coeffs))


def scale(f: LittlewoodPoly, s: int) -> LittlewoodPoly:
    return f if s == 1 else negate(f)


def join(f: LittlewoodPoly, g: LittlewoodPoly) -> LittlewoodPoly:
    return LittlewoodPoly(f.coeffs + g.coeffs)


def double(f: LittlewoodPoly) -> LittlewoodPoly:
    """f v -f, i.e. (1 - x^n) f(x)."""
    return join(f, negate(f))


def symmetrize(f: LittlewoodPoly, s: int) -> LittlewoodPoly:
    """S(f) = f v (s f*); the result is s-symmetric of length 2n."""
    check_sign(s)
    return join(f, scale(reversal(f), s))


def expanded_product(f: LittlewoodPoly, g: LittlewoodPoly) -> LittlewoodPoly:
    """f(x) g(x^len(f)): one block of f per coefficient of g."""
    out: list[int] = []
    neg = tuple(-c for c in f.coeffs)
    for b in g.coeffs:
        out.extend(f.coeffs if b > 0 else neg)
    return LittlewoodPoly(tuple(out))


def is_symmetric(f: LittlewoodPoly, s: int) -> bool:
    check_sign(s)
    c = f.coeffs
    n = len(c)
    return all(c[n - 1 - i] == s * c[i] for i in range(n))


def symmetry_sign(m: int) -> int:
    return -1 if m % 2 else 1


def check_sign(s: int) -> None:
    if s not in (1, -1):
        raise InputError(f"symmetry sign must be +1 or -1, got {s!r}")


def thue_morse(m: int) -> LittlewoodPoly:
    """tau_m = (1-x)(1-x^2)...(1-x^(2^(m-1))): +1 exactly at the evil numbers."""
    if m < 0:
        raise InputError("Thue-Morse index must be nonnegative")
    if m > THUE_MORSE_CAP:
        raise ResourceError(f"tau_{m} has 2^{m} coefficients; dense cap is 2^{THUE_MORSE_CAP}")
    return LittlewoodPoly(tuple(-1 if bin(i).count("1") & 1 else 1 for i in range(1 << m)))


def evil_numbers(bound: int) -> list[int]:
    return [i for i in range(bound) if bin(i).count("1") % 2 == 0]
