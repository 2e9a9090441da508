"""Numeric gauge fields: closed-form fields that can be evaluated with any
number of partial derivatives at arbitrary points.

Points are arrays of shape ``(..., len(window))``; column ``window.index(i)``
holds the coordinate xi_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from ..algebra import atoms
from ..algebra.forms import normalize_window


class PoleError(ValueError):
    """The field is singular somewhere on the evaluation domain."""


class Field:
    window: tuple

    def value(self, row: int, col: int, derivs: tuple, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def atom(self, code: int, xi: np.ndarray) -> np.ndarray:
        a = atoms.decode(code)
        if a.kind != atoms.B:
            raise ValueError(f"numeric fields only evaluate B atoms, got {atoms.atom_str(code)}")
        return self.value(a.row, a.col, a.derivs, xi)

    def check_domain(self, lo, hi) -> None:
        """Raise :class:`PoleError` if the box ``lo <= xi <= hi`` meets a singularity."""

    def col(self, i: int) -> int:
        return self.window.index(i)


@dataclass
class ExactSolution(Field):
    """``B_ij = -1 / (c + sum_m xi_m)`` for every ``i != j``, a solution of the Darboux system."""

    c: float
    window: tuple

    def __post_init__(self):
        self.window = normalize_window(self.window)

    def s(self, xi):
        return self.c + np.sum(xi, axis=-1)

    def value(self, row, col, derivs, xi):
        s = self.s(xi)
        if np.any(s == 0):
            raise PoleError(f"pole c + sum(xi) = 0 hit at c={self.c}")
        m = len(derivs)
        # d^m/ds^m (-1/s) = -(-1)^m m! s^(-m-1)
        return -((-1) ** m) * math.factorial(m) * s ** (-(m + 1))

    def check_domain(self, lo, hi):
        lo = np.broadcast_to(np.asarray(lo, float), (len(self.window),))
        hi = np.broadcast_to(np.asarray(hi, float), (len(self.window),))
        smin, smax = self.c + lo.sum(), self.c + hi.sum()
        if smin <= 0 <= smax:
            # pole hyperplane sum(xi) = -c; report the point on the box diagonal
            t = (0 - smin) / (smax - smin) if smax > smin else 0.0
            where = lo + t * (hi - lo)
            raise PoleError(
                f"pole of -1/(c + sum xi) inside the domain (c={self.c}): "
                f"sum(xi) = {-self.c:g}, e.g. at xi = {np.round(where, 6).tolist()}"
            )


@dataclass
class ConstantField(Field):
    b: float
    window: tuple

    def __post_init__(self):
        self.window = normalize_window(self.window)

    def value(self, row, col, derivs, xi):
        shape = np.shape(xi)[:-1]
        return np.full(shape, 0.0 if derivs else float(self.b))


@dataclass
class PolynomialField(Field):
    """Each ``B_ij`` is a polynomial ``sum coeff * prod xi^e`` given per field.

    ``polys[(i, j)]`` maps exponent tuples (ordered like ``window``) to
    coefficients; missing fields are zero.
    """

    window: tuple
    polys: dict = field(default_factory=dict)

    def __post_init__(self):
        self.window = normalize_window(self.window)

    def value(self, row, col, derivs, xi):
        poly = self.polys.get((row, col), {})
        shape = np.shape(xi)[:-1]
        out = np.zeros(shape)
        dcount = [0] * len(self.window)
        for d in derivs:
            dcount[self.col(d)] += 1
        for exps, coeff in poly.items():
            factor = float(coeff)
            term = np.full(shape, 1.0)
            for axis, (e, k) in enumerate(zip(exps, dcount)):
                if k > e:
                    factor = 0.0
                    break
                factor *= math.factorial(e) // math.factorial(e - k)
                if e - k:
                    term = term * xi[..., axis] ** (e - k)
            if factor:
                out = out + factor * term
        return out


def coordinate_field(window) -> PolynomialField:
    """``B_ij = xi_i``, an off-shell field."""
    w = normalize_window(window)
    polys = {}
    for i in w:
        e = tuple(1 if m == i else 0 for m in w)
        for j in w:
            if i != j:
                polys[(i, j)] = {e: 1.0}
    return PolynomialField(w, polys)


def random_polynomial_field(rng: np.random.Generator, window, degree=2, scale=1.0, n_terms=4) -> PolynomialField:
    w = normalize_window(window)
    polys = {}
    for i in w:
        for j in w:
            if i == j:
                continue
            terms = {}
            for _ in range(n_terms):
                e = [0] * len(w)
                for _ in range(int(rng.integers(0, degree + 1))):
                    e[int(rng.integers(0, len(w)))] += 1
                terms[tuple(e)] = terms.get(tuple(e), 0.0) + scale * float(rng.normal())
            polys[(i, j)] = terms
    return PolynomialField(w, polys)


def linear_offshell_field(window, strength=4.0) -> PolynomialField:
    """Fixed off-shell field ``B_ij = (i - j)/N + strength * sum_m w_ijm xi_m``.

    The weights ``w_ijm`` are a fixed pattern in {-2, ..., 2}, so every field
    feels every coordinate and the Darboux residuals are O(strength).
    """
    w = normalize_window(window)
    polys = {}
    zero = tuple(0 for _ in w)
    for i in w:
        for j in w:
            if i == j:
                continue
            terms = {zero: (i - j) / len(w)}
            for m in w:
                e = tuple(1 if x == m else 0 for x in w)
                weight = (i + 2 * j + 3 * m) % 5 - 2
                if weight:
                    terms[e] = strength * weight
            polys[(i, j)] = terms
    return PolynomialField(w, polys)


class MatrixSolution(Field):
    """``B_ij = -u_i^T S^{-1} v_j`` with ``S = C + sum_m xi_m v_m u_m^T``.

    Solves the Darboux system for any vectors ``u_m, v_m`` in R^r and any
    invertible ``C``, since ``d_k S^{-1} = -S^{-1} v_k u_k^T S^{-1}``.  With
    ``r = 1`` and all vectors equal to 1 it is :class:`ExactSolution`.  For
    ``r >= 2`` the Lagrangian components are not identically zero.
    """

    def __init__(self, window, u: dict, v: dict, c0: np.ndarray):
        self.window = normalize_window(window)
        self.u = {i: np.asarray(u[i], float) for i in self.window}
        self.v = {i: np.asarray(v[i], float) for i in self.window}
        self.c0 = np.asarray(c0, float)

    @classmethod
    def random(cls, rng: np.random.Generator, window, rank=2, scale=1.0, shift=3.0):
        w = normalize_window(window)
        u = {i: scale * rng.normal(size=rank) for i in w}
        v = {i: scale * rng.normal(size=rank) for i in w}
        return cls(w, u, v, shift * np.eye(rank) + 0.3 * rng.normal(size=(rank, rank)))

    def s_inv(self, xi):
        s = np.broadcast_to(self.c0, np.shape(xi)[:-1] + self.c0.shape).copy()
        for a, i in enumerate(self.window):
            s += xi[..., a, None, None] * np.outer(self.v[i], self.u[i])
        det = np.linalg.det(s)
        if np.any(np.abs(det) < 1e-12):
            raise PoleError("S(xi) is singular on the evaluation points")
        return np.linalg.inv(s)

    def value(self, row, col, derivs, xi):
        sinv = self.s_inv(xi)
        total = 0.0
        # d_{k1..km} S^{-1} = (-1)^m sum over orderings of S^{-1} v_k u_k^T S^{-1} ...
        for order in permutations(derivs):
            vec = np.einsum("...ab,b->...a", sinv, self.v[col])
            for k in reversed(order):
                vec = np.einsum("...ab,b->...a", sinv, self.v[k]) * np.einsum("a,...a->...", self.u[k], vec)[..., None]
            total = total + np.einsum("a,...a->...", self.u[row], vec)
        return -((-1) ** len(derivs)) * total

    def check_domain(self, lo, hi):
        lo = np.asarray(lo, float)
        hi = np.asarray(hi, float)
        corners = np.array(list(product(*zip(lo, hi))))
        self.s_inv(corners)


def evaluate_poly(poly: dict, fld: Field, xi: np.ndarray, cache: dict | None = None) -> np.ndarray:
    """Value of a coefficient polynomial with atoms taken from ``fld`` at ``xi``."""
    if cache is None:
        cache = {}
    shape = np.shape(xi)[:-1]
    total = np.zeros(shape)
    for m, c in poly.items():
        term = np.full(shape, float(c))
        for a in m:
            v = cache.get(a)
            if v is None:
                v = cache[a] = fld.atom(a, xi)
            term = term * v
        total = total + term
    return total


def darboux_residuals(fld: Field, xi: np.ndarray) -> dict:
    """``d_k B_ij - B_ik B_kj`` for every distinct ordered triple, evaluated at ``xi``."""
    w = fld.window
    out = {}
    for i in w:
        for j in w:
            for k in w:
                if len({i, j, k}) == 3:
                    out[(i, j, k)] = fld.value(i, j, (k,), xi) - fld.value(i, k, (), xi) * fld.value(k, j, (), xi)
    return out
