"""Write the witness search as a 0/1 feasibility model in LP text format.

One binary ``z{k}`` per decided slot (``z = 1`` means sign +1 for the slot's
first index).  With a = 2z - 1, each moment row  sum_k a_k W_kj = 0  becomes
sum_k 2 W_kj z_k = sum_k W_kj.  Fixed residue branches add one class-count
equality per residue class.  Coefficients are exact integers; solvers that
work in doubles lose exactness above 2**53.
"""

from __future__ import annotations

from pathlib import Path

from . import constraints as cons
from .search import SearchSpec, build_model


def model_rows(spec: SearchSpec) -> list[tuple[str, dict[int, int], int]]:
    """(name, {slot: coefficient}, rhs) for every constraint of the model."""
    model = build_model(spec)
    K = len(model.slots)
    rows = []
    for r, j in enumerate(model.rows):
        coeffs = {k: 2 * model.weights[k][r] for k in range(K) if model.weights[k][r]}
        if not coeffs:
            continue
        rows.append((f"mom{j}", coeffs, sum(model.weights[k][r] for k in range(K))))
    for p, d in spec.dp_branch:
        target = cons.profile(spec.n, p, d)
        for c in range(p):
            coeffs: dict[int, int] = {}
            const = 0
            for k in range(K):
                plus = sum(1 for i in model.members(k, 1) if i % p == c)
                minus = sum(1 for i in model.members(k, -1) if i % p == c)
                # count = minus + (plus - minus) z_k
                const += minus
                if plus != minus:
                    coeffs[k] = coeffs.get(k, 0) + plus - minus
            rows.append((f"res{p}_{c}", coeffs, target[c] - const))
    return rows


def max_coefficient(spec: SearchSpec) -> int:
    """Largest |moment weight| of any slot, before the factor 2 of the 0/1 form."""
    model = build_model(spec)
    return max((abs(w) for ws in model.weights for w in ws), default=0)


def _term(c: int, name: str, first: bool) -> str:
    if c < 0:
        return f"- {-c} {name}" if not first else f"-{-c} {name}"
    return f"+ {c} {name}" if not first else f"{c} {name}"


def render(spec: SearchSpec) -> str:
    model = build_model(spec)
    K = len(model.slots)
    names = [f"z{k}" for k in range(K)]
    out = [
        f"\\ witness model: n={spec.n} m={spec.m} symmetric={int(spec.assume_symmetry)}"
        f" shift={spec.shift} moments={spec.moment_kind}",
        "\\ z_k = 1 iff slot k carries sign +1; slots: "
        + ("pairs (k, n-1-k)" if spec.assume_symmetry else "single indices"),
        "Minimize",
        f" obj: 0 {names[0]}",
        "Subject To",
    ]
    for name, coeffs, rhs in model_rows(spec):
        terms = [_term(c, names[k], i == 0) for i, (k, c) in enumerate(sorted(coeffs.items()))]
        if not terms:
            # a residue row with no free slot: keep the model honest
            terms = [f"0 {names[0]}"]
        line = f" {name}: " + " ".join(terms) + f" = {rhs}"
        out.append(line)
    out.append("Binary")
    for k in range(0, K, 10):
        out.append(" " + " ".join(names[k : k + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


def ilp_export(spec: SearchSpec, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(render(spec))
    return path


def signs_from_solution(spec: SearchSpec, z: list[int]) -> list[int]:
    """Full coefficient list of the witness encoded by a 0/1 solution vector."""
    model = build_model(spec)
    coeffs = [0] * spec.n
    for k, v in enumerate(z):
        for i, c in model.positions(k, 1 if v else -1):
            coeffs[i] = c
    return coeffs
