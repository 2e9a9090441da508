"""Integrals of scalar forms over axis-aligned cubes and their oriented boundaries.

For the cube over sorted coordinates ``c_0 < ... < c_d`` the boundary face
``x_{c_m} = upper`` carries orientation ``(-1)^m`` and the lower face the
opposite, so that ``int_{boundary} omega = int_cube d omega``.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from ..algebra.forms import ScalarForm, word_mask
from ..chern_simons import ComponentTable
from .fields import Field, evaluate_poly
from .goursat import GridSolution, node_weights


def gauss_legendre(order: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


@dataclass
class SurfaceSpec:
    """Boundary of the cube ``corner + [0, edge]`` spanned by ``coords``.

    ``corner`` gives every window coordinate; coordinates outside ``coords``
    stay fixed at their corner value.  ``dimension`` is ``len(coords) - 1``.
    """

    coords: tuple
    corner: tuple
    edge: float
    order: int = 6

    def __post_init__(self):
        self.coords = tuple(self.coords)
        if list(self.coords) != sorted(set(self.coords)):
            raise ValueError(f"surface coordinates must be strictly increasing, got {self.coords}")
        self.corner = tuple(float(x) for x in self.corner)

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def faces(self):
        """``(m, side, orientation)`` for the 2(d+1) boundary faces."""
        for m in range(len(self.coords)):
            for side in (0, 1):
                yield m, side, (1 if side else -1) * (-1) ** m

    def face_word(self, m: int) -> tuple:
        return self.coords[:m] + self.coords[m + 1 :]

    def box(self, window) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array(self.corner, float)
        hi = lo.copy()
        for i in self.coords:
            hi[window.index(i)] += self.edge
        return lo, hi


def _coefficient_poly(f, word) -> dict:
    if isinstance(f, ComponentTable):
        return f.coefficient(word).terms
    sign, mask = word_mask(word)
    return {m: sign * c for m, c in f.terms.get(mask, {}).items()}


def _degree(f) -> int:
    return f.degree if isinstance(f, ComponentTable) else f.degree()


def _face_points(surface: SurfaceSpec, fld: Field, m: int, side: int, order: int):
    window = fld.window
    free = surface.face_word(m)
    nodes, weights = [], []
    for i in free:
        lo = surface.corner[window.index(i)]
        x, w = gauss_legendre(order, lo, lo + surface.edge)
        nodes.append(x)
        weights.append(w)
    grids = np.meshgrid(*nodes, indexing="ij")
    wts = np.ones_like(grids[0])
    for axis, w in enumerate(weights):
        shape = [1] * len(free)
        shape[axis] = len(w)
        wts = wts * w.reshape(shape)
    pts = np.broadcast_to(np.asarray(surface.corner, float), grids[0].shape + (len(window),)).copy()
    for i, g in zip(free, grids):
        pts[..., window.index(i)] = g
    fixed = surface.coords[m]
    pts[..., window.index(fixed)] = surface.corner[window.index(fixed)] + side * surface.edge
    return pts, wts


def boundary_integral(f, surface: SurfaceSpec, fld, order: int | None = None) -> float:
    """Oriented integral of a d-form over the boundary of a (d+1)-cube."""
    if isinstance(fld, GridSolution):
        return grid_boundary_integral(f, fld)
    d = _degree(f)
    if d != surface.dimension:
        raise ValueError(f"{d}-form cannot be integrated over a {surface.dimension}-dimensional surface")
    if len(surface.corner) != len(fld.window):
        raise ValueError("surface corner must list every window coordinate")
    fld.check_domain(*surface.box(fld.window))
    order = surface.order if order is None else order
    total = 0.0
    # fixed summation order: faces in sequence, then a single numpy sum per face
    for m, side, orient in surface.faces():
        poly = _coefficient_poly(f, surface.face_word(m))
        if not poly:
            continue
        pts, wts = _face_points(surface, fld, m, side, order)
        vals = evaluate_poly(poly, fld, pts)
        total += orient * float(np.sum(vals * wts))
    return total


def action_integral(components, surface: SurfaceSpec, fld, order: int | None = None) -> float:
    """``S[B; V] = int_V L`` for ``V`` the boundary of a cube."""
    return boundary_integral(components, surface, fld, order)


def cube_integral(f, surface: SurfaceSpec, fld: Field, order: int | None = None) -> float:
    """Integral of a top-degree form over the cube itself (for Stokes checks)."""
    d = _degree(f)
    if d != len(surface.coords):
        raise ValueError(f"need a {len(surface.coords)}-form, got degree {d}")
    fld.check_domain(*surface.box(fld.window))
    order = surface.order if order is None else order
    window = fld.window
    nodes, weights = [], []
    for i in surface.coords:
        lo = surface.corner[window.index(i)]
        x, w = gauss_legendre(order, lo, lo + surface.edge)
        nodes.append(x)
        weights.append(w)
    grids = np.meshgrid(*nodes, indexing="ij")
    wts = np.ones_like(grids[0])
    for axis, w in enumerate(weights):
        shape = [1] * len(nodes)
        shape[axis] = len(w)
        wts = wts * w.reshape(shape)
    pts = np.broadcast_to(np.asarray(surface.corner, float), grids[0].shape + (len(window),)).copy()
    for i, g in zip(surface.coords, grids):
        pts[..., window.index(i)] = g
    poly = _coefficient_poly(f, surface.coords)
    return float(np.sum(evaluate_poly(poly, fld, pts) * wts))


# ---------------------------------------------------------------- grid solutions


def fd_derivative(v: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order finite difference, one-sided five-point stencils at the ends."""
    v = np.moveaxis(v, axis, 0)
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / 12
    out[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / 12
    out[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / 12
    out[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / 12
    out[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / 12
    return np.moveaxis(out / h, 0, axis)


class GridField(Field):
    """Grid solution seen as a field on its own nodes; derivatives by finite differences."""

    def __init__(self, sol: GridSolution):
        self.sol = sol
        self.window = sol.grid.coords
        self._cache: dict = {}

    def value(self, row, col, derivs, xi=None):
        key = (row, col, tuple(sorted(derivs)))
        out = self._cache.get(key)
        if out is None:
            if not derivs:
                out = self.sol.values[(row, col)]
            else:
                rest = list(key[2])
                last = rest.pop()
                out = fd_derivative(self.value(row, col, tuple(rest)), self.sol.grid.h, self.sol.grid.axis(last))
            self._cache[key] = out
        return out


def grid_boundary_integral(f, sol: GridSolution) -> float:
    """Boundary integral over the whole grid box using node quadrature."""
    g = sol.grid
    d = _degree(f)
    if d != g.dim - 1:
        raise ValueError(f"{d}-form cannot be integrated over the boundary of a {g.dim}-cube")
    fld = GridField(sol)
    w1 = node_weights(g.n, g.h)
    total = 0.0
    for m in range(g.dim):
        word = g.coords[:m] + g.coords[m + 1 :]
        poly = _coefficient_poly(f, word)
        if not poly:
            continue
        for side in (0, 1):
            orient = (1 if side else -1) * (-1) ** m
            cache = {}
            acc = np.zeros((g.n,) * (g.dim - 1))
            for mono, c in poly.items():
                term = np.full(acc.shape, float(c))
                for a in mono:
                    v = cache.get(a)
                    if v is None:
                        v = cache[a] = np.take(fld.atom(a, None), -1 if side else 0, axis=m)
                    term = term * v
                acc += term
            wts = np.ones_like(acc)
            for axis in range(g.dim - 1):
                shape = [1] * (g.dim - 1)
                shape[axis] = g.n
                wts = wts * w1.reshape(shape)
            total += orient * float(np.sum(acc * wts))
    return total
