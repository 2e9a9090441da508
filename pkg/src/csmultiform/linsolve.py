"""Exact sparse linear solve over the rationals."""

from __future__ import annotations

from fractions import Fraction


def solve_exact(columns: list[dict], rhs: dict) -> list[Fraction] | None:
    """Solve ``sum_i x_i * columns[i] == rhs`` where vectors are sparse dicts.

    Returns one solution (free variables set to zero) or None when the
    system is inconsistent.
    """
    rows: dict = {}
    for i, col in enumerate(columns):
        for key, v in col.items():
            if v:
                rows.setdefault(key, [{}, Fraction(0)])[0][i] = Fraction(v)
    for key, v in rhs.items():
        if v:
            rows.setdefault(key, [{}, Fraction(0)])[1] = Fraction(v)

    pivots: list[tuple[int, dict, Fraction]] = []
    for coeffs, b in rows.values():
        coeffs = dict(coeffs)
        for piv, prow, pb in pivots:
            f = coeffs.get(piv)
            if f:
                for j, v in prow.items():
                    nv = coeffs.get(j, 0) - f * v
                    if nv:
                        coeffs[j] = nv
                    else:
                        coeffs.pop(j, None)
                b -= f * pb
        if not coeffs:
            if b:
                return None
            continue
        piv = min(coeffs)
        scale = coeffs[piv]
        prow = {j: v / scale for j, v in coeffs.items()}
        pb = b / scale
        # keep earlier pivot rows reduced against the new pivot
        for idx, (p0, r0, b0) in enumerate(pivots):
            f = r0.get(piv)
            if f:
                for j, v in prow.items():
                    nv = r0.get(j, 0) - f * v
                    if nv:
                        r0[j] = nv
                    else:
                        r0.pop(j, None)
                pivots[idx] = (p0, r0, b0 - f * pb)
        pivots.append((piv, prow, pb))

    x = [Fraction(0)] * len(columns)
    for piv, prow, pb in pivots:
        x[piv] = pb  # fully reduced: other pivot columns absent, free columns zero
    return x
