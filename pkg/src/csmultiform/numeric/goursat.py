"""Goursat problem for the Darboux system on a uniform grid.

Each field ``B_ij`` is prescribed on its own coordinate plane
``(xi_i, xi_j)`` (all other active coordinates zero) and is carried off
that plane only along its transverse directions, where the system gives
``d_k B_ij = B_ik B_kj``.  The solver works with the integral form

    B_ij(x) = data_ij(x_i, x_j) + sum_s int_0^{x_ts} B_i,ts B_ts,j dx_ts

(later transverse directions held at zero inside the s-th integral) and
iterates it to a fixed point.  Integrals use a fourth-order cumulative
rule.  The order of the transverse directions is the sweep ordering; the
continuous solution does not depend on it, the discrete one does at
O(h^4).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

BLOWUP = 1e6


class BlowUpError(RuntimeError):
    pass


class InconsistentDataError(ValueError):
    pass


def cumulative_integral(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """``F[i] = int_{x_0}^{x_i} f`` along ``axis``, fourth order on a uniform grid."""
    f = np.moveaxis(np.asarray(f, float), axis, 0)
    n = f.shape[0]
    if n < 5:
        raise ValueError(f"need at least 5 nodes along an axis, got {n}")
    seg = np.empty((n - 1,) + f.shape[1:])
    # interval [x_i, x_i+1] from the cubic through four neighbouring nodes
    seg[1 : n - 2] = (-f[0 : n - 3] + 13 * f[1 : n - 2] + 13 * f[2 : n - 1] - f[3:n]) / 24
    # end intervals from the quartic through five nodes, one order higher so the
    # O(h^5) closure does not compete with the interior O(h^4) error
    seg[0] = (251 * f[0] + 646 * f[1] - 264 * f[2] + 106 * f[3] - 19 * f[4]) / 720
    seg[n - 2] = (251 * f[n - 1] + 646 * f[n - 2] - 264 * f[n - 3] + 106 * f[n - 4] - 19 * f[n - 5]) / 720
    out = np.zeros_like(f)
    out[1:] = np.cumsum(seg, axis=0) * h
    return np.moveaxis(out, 0, axis)


def node_weights(n: int, h: float) -> np.ndarray:
    """Quadrature weights on ``n`` uniform nodes matching :func:`cumulative_integral`."""
    eye = np.eye(n)
    return cumulative_integral(eye, h, axis=0)[-1]


@dataclass
class Grid:
    coords: tuple  # active window indices, in axis order
    n: int  # nodes per axis
    h: float
    origin: tuple = None

    def __post_init__(self):
        self.coords = tuple(self.coords)
        if list(self.coords) != sorted(set(self.coords)):
            raise ValueError(f"grid coordinates must be strictly increasing, got {self.coords}")
        if self.origin is None:
            self.origin = (0.0,) * len(self.coords)
        self.origin = tuple(float(x) for x in self.origin)
        if self.n < 5:
            raise ValueError("a grid needs at least 5 nodes per axis")

    @classmethod
    def box(cls, coords, edge: float, h: float, origin=None) -> "Grid":
        n = int(round(edge / h)) + 1
        if abs((n - 1) * h - edge) > 1e-9 * edge:
            raise ValueError(f"edge {edge} is not a multiple of h={h}")
        return cls(coords, n, h, origin)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def axis(self, i: int) -> int:
        return self.coords.index(i)

    def nodes(self, i: int) -> np.ndarray:
        a = self.axis(i)
        return self.origin[a] + self.h * np.arange(self.n)

    def points(self) -> np.ndarray:
        """All grid points, shape ``(n, ..., n, dim)``."""
        axes = [self.origin[a] + self.h * np.arange(self.n) for a in range(self.dim)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def plane_points(self, i: int, j: int) -> np.ndarray:
        """Points of the ``(xi_i, xi_j)`` plane, other coordinates at the origin; shape ``(n, n, dim)``."""
        a, b = sorted((self.axis(i), self.axis(j)))
        pts = np.broadcast_to(np.asarray(self.origin, float), (self.n, self.n, self.dim)).copy()
        pts[..., a] = (self.origin[a] + self.h * np.arange(self.n))[:, None]
        pts[..., b] = (self.origin[b] + self.h * np.arange(self.n))[None, :]
        return pts


def field_pairs(coords) -> list[tuple[int, int]]:
    return [(i, j) for i in coords for j in coords if i != j]


@dataclass
class GoursatData:
    """Plane data: ``planes[(a, b)]`` (a < b) maps fields ``(i, j)`` to ``(n, n)`` arrays.

    Only ``B_ab`` and ``B_ba`` are read from plane ``(a, b)``.  Values of other
    fields on that plane are optional; where they are given they must agree
    with the other planes on shared axes.
    """

    grid: Grid
    planes: dict

    def own(self, i: int, j: int) -> np.ndarray:
        return self.planes[tuple(sorted((i, j)))][(i, j)]

    def validate(self, tol: float = 1e-12) -> None:
        g = self.grid
        for a, b in combinations(sorted(g.coords), 2):
            plane = self.planes.get((a, b))
            if plane is None or (a, b) not in plane or (b, a) not in plane:
                raise InconsistentDataError(f"missing data for B_{a}{b} / B_{b}{a} on plane ({a},{b})")
            for key, arr in plane.items():
                if np.shape(arr) != (g.n, g.n):
                    raise InconsistentDataError(f"plane ({a},{b}) field {key} has shape {np.shape(arr)}")
                if not np.all(np.isfinite(arr)):
                    raise InconsistentDataError(f"non-finite data for field {key} on plane ({a},{b})")
        # two planes sharing coordinate axis x_c both restrict to that axis
        for (p1, d1), (p2, d2) in combinations(sorted(self.planes.items()), 2):
            common = set(p1) & set(p2)
            if len(common) != 1:
                continue
            (c,) = common
            for key in set(d1) & set(d2):
                v1 = _axis_restriction(d1[key], p1, c)
                v2 = _axis_restriction(d2[key], p2, c)
                scale = max(1.0, float(np.max(np.abs(v1))))
                bad = np.abs(v1 - v2) > tol * scale
                if np.any(bad):
                    idx = int(np.argmax(bad))
                    raise InconsistentDataError(
                        f"field B_{key[0]}{key[1]} disagrees between planes {p1} and {p2} "
                        f"on the xi_{c} axis at node {idx}: {v1[idx]!r} vs {v2[idx]!r}"
                    )


def _axis_restriction(arr, plane, c):
    # plane arrays are indexed (x_plane[0], x_plane[1])
    return arr[:, 0] if plane[0] == c else arr[0, :]


def sample_planes(fld, grid: Grid, all_fields: bool = False) -> GoursatData:
    """Goursat data by restricting a field to the coordinate planes of ``grid``."""
    planes = {}
    pairs = field_pairs(grid.coords)
    for a, b in combinations(sorted(grid.coords), 2):
        pts = _embed(fld, grid, grid.plane_points(a, b))
        keys = pairs if all_fields else [(a, b), (b, a)]
        planes[(a, b)] = {(i, j): fld.value(i, j, (), pts) for (i, j) in keys}
    return GoursatData(grid, planes)


def _embed(fld, grid: Grid, pts: np.ndarray) -> np.ndarray:
    """Lift grid-coordinate points into the field's full window (others at 0)."""
    full = np.zeros(pts.shape[:-1] + (len(fld.window),))
    for a, i in enumerate(grid.coords):
        full[..., fld.window.index(i)] = pts[..., a]
    return full


def plane_data_from_functions(grid: Grid, funcs: dict) -> GoursatData:
    """``funcs[(i, j)](x_i, x_j)`` gives the data of B_ij on its plane."""
    planes = {}
    for a, b in combinations(sorted(grid.coords), 2):
        xa, xb = np.meshgrid(grid.nodes(a), grid.nodes(b), indexing="ij")
        planes[(a, b)] = {(a, b): np.asarray(funcs[(a, b)](xa, xb), float) * np.ones_like(xa),
                          (b, a): np.asarray(funcs[(b, a)](xb, xa), float) * np.ones_like(xa)}
    return GoursatData(grid, planes)


@dataclass
class GridSolution:
    grid: Grid
    values: dict  # (i, j) -> array of shape (n,)*dim
    ordering: tuple
    iterations: int
    history: list = field(default_factory=list)  # max update per sweep

    def max_abs_error(self, fld) -> float:
        pts = _embed(fld, self.grid, self.grid.points())
        return max(float(np.max(np.abs(v - fld.value(i, j, (), pts)))) for (i, j), v in self.values.items())

    def discrepancy(self, other: "GridSolution") -> float:
        return max(float(np.max(np.abs(v - other.values[k]))) for k, v in self.values.items())


def _broadcast_plane(arr: np.ndarray, grid: Grid, i: int, j: int) -> np.ndarray:
    a, b = sorted((grid.axis(i), grid.axis(j)))
    shape = [1] * grid.dim
    shape[a] = shape[b] = grid.n
    base = arr.reshape(shape)
    return np.broadcast_to(base, (grid.n,) * grid.dim)


def goursat_solve(data: GoursatData, ordering=None, tol: float = 1e-15, max_iter: int = 200,
                  validate: bool = True) -> GridSolution:
    """Fixed-point solve of the integral form; ``ordering`` ranks transverse directions."""
    g = data.grid
    if g.dim < 3:
        raise ValueError("the Darboux system needs at least three active coordinates")
    if validate:
        data.validate()
    ordering = tuple(g.coords if ordering is None else ordering)
    if sorted(ordering) != sorted(g.coords):
        raise ValueError(f"ordering {ordering} is not a permutation of {g.coords}")
    rank = {c: r for r, c in enumerate(ordering)}
    pairs = field_pairs(g.coords)
    base = {}
    for i, j in pairs:
        base[(i, j)] = _broadcast_plane(np.asarray(data.own(i, j), float), g, i, j)
    trans = {(i, j): sorted((k for k in g.coords if k not in (i, j)), key=rank.get) for i, j in pairs}
    values = {k: v.copy() for k, v in base.items()}
    history = []
    for it in range(1, max_iter + 1):
        new = {}
        for i, j in pairs:
            out = base[(i, j)].copy()
            ts = trans[(i, j)]
            for s, k in enumerate(ts):
                rhs = values[(i, k)] * values[(k, j)]
                idx = [slice(None)] * g.dim
                for later in ts[s + 1 :]:
                    idx[g.axis(later)] = slice(0, 1)
                part = cumulative_integral(rhs[tuple(idx)], g.h, g.axis(k))
                out = out + part  # broadcasts along the later directions
            new[(i, j)] = out
        change = max(float(np.max(np.abs(new[k] - values[k]))) for k in pairs)
        peak = max(float(np.max(np.abs(v))) for v in new.values())
        values = new
        history.append(change)
        if not np.isfinite(peak) or peak > BLOWUP:
            raise BlowUpError(f"|B| exceeded {BLOWUP:g} at sweep {it} (peak {peak:.3g})")
        if change <= tol * max(1.0, peak):
            break
    return GridSolution(g, values, ordering, it, history)


def path_independence(data: GoursatData, orderings=None) -> tuple[float, list[GridSolution]]:
    """Max discrepancy between solutions built with different sweep orderings."""
    g = data.grid
    if orderings is None:
        orderings = [tuple(g.coords), tuple(reversed(g.coords))]
    sols = [goursat_solve(data, o) for o in orderings]
    disc = max(sols[0].discrepancy(s) for s in sols[1:])
    return disc, sols


def observed_orders(hs, errors) -> list[float]:
    """Successive convergence rates ``log(e1/e2) / log(h1/h2)``."""
    out = []
    for (h1, e1), (h2, e2) in zip(zip(hs, errors), zip(hs[1:], errors[1:])):
        out.append(float(np.log(e1 / e2) / np.log(h1 / h2)) if e1 > 0 and e2 > 0 else float("nan"))
    return out


def all_orderings(coords):
    return list(permutations(coords))
