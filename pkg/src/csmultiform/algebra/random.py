"""Seeded random expressions and forms for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from . import atoms
from .forms import MatrixForm, ScalarForm, normalize_window
from .scalar import ScalarExpr


def random_atom(rng: random.Random, window, kind=atoms.B, max_deriv=1) -> int:
    w = normalize_window(window)
    k, l = rng.sample(w, 2)
    derivs = [rng.choice(w) for _ in range(rng.randint(0, max_deriv))]
    return atoms.encode(kind, k, l, derivs)


def random_expr(rng: random.Random, window, n_terms=3, max_degree=2, kind=atoms.B,
                max_deriv=1, fractions=True) -> ScalarExpr:
    acc: dict = {}
    for _ in range(n_terms):
        mono = tuple(sorted(random_atom(rng, window, kind, max_deriv)
                            for _ in range(rng.randint(0, max_degree))))
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        if fractions and rng.random() < 0.3:
            c = Fraction(c, rng.choice([2, 3, 5]))
        acc[mono] = acc.get(mono, 0) + c
    return ScalarExpr(acc)


def random_matrix_form(rng: random.Random, window, degree: int, n_terms=4, diagonal=True,
                       **expr_kw) -> MatrixForm:
    """Sparse homogeneous matrix form with random polynomial coefficients."""
    w = normalize_window(window)
    words = list(combinations(w, degree))
    items = []
    for _ in range(n_terms):
        if diagonal:
            k, l = rng.choice(w), rng.choice(w)
        else:
            k, l = rng.sample(w, 2)
        items.append((k, l, rng.choice(words), random_expr(rng, w, **expr_kw)))
    return MatrixForm.from_terms(w, items)


def random_scalar_form(rng: random.Random, window, degree: int, n_terms=3, **expr_kw) -> ScalarForm:
    w = normalize_window(window)
    words = list(combinations(w, degree))
    items = [(rng.choice(words), random_expr(rng, w, **expr_kw)) for _ in range(n_terms)]
    return ScalarForm.from_terms(w, items)


def random_restricted_variation(rng: random.Random, window, n_terms=4, **expr_kw) -> MatrixForm:
    """``sum eta_pq dxi_p E_pq`` with random coefficients, the shape allowed for variations."""
    w = normalize_window(window)
    items = []
    for _ in range(n_terms):
        p, q = rng.sample(w, 2)
        items.append((p, q, (p,), random_expr(rng, w, kind=atoms.ETA, **expr_kw)))
    return MatrixForm.from_terms(w, items)
