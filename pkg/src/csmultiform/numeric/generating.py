"""hbar-weighted partial sums of Chern-Simons multiform actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .quadrature import SurfaceSpec, action_integral


@dataclass
class GeneratingActionSum:
    hbar: float
    n_max: int
    terms: list = field(default_factory=list)  # dicts: n, dimension, integral, weight, weighted

    @property
    def partial_sum(self) -> float:
        return sum(t["weighted"] for t in self.terms)


def generating_action(hbar: float, n_max: int, surfaces: dict, fld, lagrangians: dict,
                      order: int | None = None) -> GeneratingActionSum:
    """``sum_{n=1}^{n_max} hbar^n / (n+1) * int_{V_{2n+1}} L^(2n+1)``.

    ``surfaces[n]`` is a :class:`SurfaceSpec` of dimension 2n+1 and
    ``lagrangians[n]`` the matching scalar form or component table.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    out = GeneratingActionSum(hbar, n_max)
    for n in range(1, n_max + 1):
        surface: SurfaceSpec = surfaces[n]
        if surface.dimension != 2 * n + 1:
            raise ValueError(f"term n={n} needs a {2 * n + 1}-dimensional surface, got {surface.dimension}")
        integral = action_integral(lagrangians[n], surface, fld, order)
        weight = float(Fraction(1, n + 1)) * hbar**n
        out.terms.append({"n": n, "dimension": 2 * n + 1, "integral": integral,
                          "weight": weight, "weighted": weight * integral})
    return out
