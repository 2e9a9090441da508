"""Darboux gauge field, curvature and Chern-Simons Lagrangians of odd degree.

Everything here is exact: the lambda-integral in the general formula

    CS_{2n+1} = (n+1) int_0^1 Tr(A ^ F_lam^n) dlam,   F_lam = lam dA + lam^2 A^A

is carried out on polynomial coefficients in lambda.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .algebra import atoms
from .algebra import scalar as sc
from .algebra.forms import (
    MatrixForm,
    ScalarForm,
    exterior_derivative,
    identity_form,
    normalize_window,
    trace,
    trace_wedge,
    wedge,
    word_mask,
)
from .algebra.scalar import ScalarExpr


class VacuousIdentityWarning(UserWarning):
    """The window has fewer directions than the top-degree form needs."""


def _require_one_form(a: MatrixForm, what: str) -> None:
    if not isinstance(a, MatrixForm):
        raise TypeError(f"{what} expects a MatrixForm")
    if not a.is_homogeneous() or a.degree() not in (-1, 1):
        raise ValueError(f"{what} expects a homogeneous degree-1 form, got degrees {sorted(a.degrees())}")


def darboux_gauge_field(window) -> MatrixForm:
    """``B = sum_{k != l} B_kl dxi_k E_kl`` over the window."""
    w = normalize_window(window)
    if len(w) < 2:
        raise ValueError(f"window {w} is too small for an off-diagonal gauge field")
    terms = {(k, l, 1 << k): {(atoms.field(k, l),): 1} for k in w for l in w if k != l}
    return MatrixForm(w, terms)


def curvature(a: MatrixForm) -> MatrixForm:
    """``F = dA + A ^ A``."""
    _require_one_form(a, "curvature")
    return exterior_derivative(a) + wedge(a, a)


def cs3(a: MatrixForm) -> ScalarForm:
    """``Tr(A ^ dA + 2/3 A ^ A ^ A)``."""
    _require_one_form(a, "cs3")
    da = exterior_derivative(a)
    aa = wedge(a, a)
    return trace_wedge(a, da) + trace_wedge(a, aa).scale(Fraction(2, 3))


def cs5(a: MatrixForm) -> ScalarForm:
    """``Tr(A ^ dA ^ dA + 3/2 A^3 ^ dA + 3/5 A^5)``."""
    _require_one_form(a, "cs5")
    da = exterior_derivative(a)
    aa = wedge(a, a)
    aaa = wedge(aa, a)
    return (
        trace_wedge(wedge(a, da), da)
        + trace_wedge(aaa, da).scale(Fraction(3, 2))
        + trace_wedge(aaa, aa).scale(Fraction(3, 5))
    )


# ---------------------------------------------------------------- lambda forms


@dataclass
class LambdaForm:
    """Polynomial in a formal scalar lambda with matrix-form coefficients."""

    window: tuple
    coeffs: dict = field(default_factory=dict)  # power -> MatrixForm

    def __post_init__(self):
        self.window = normalize_window(self.window)
        self.coeffs = {p: f for p, f in self.coeffs.items() if f}

    def __add__(self, other: "LambdaForm") -> "LambdaForm":
        out = dict(self.coeffs)
        for p, f in other.coeffs.items():
            out[p] = out[p] + f if p in out else f
        return LambdaForm(self.window, out)

    def wedge(self, other: "LambdaForm") -> "LambdaForm":
        out: dict = {}
        for p, f in self.coeffs.items():
            for q, g in other.coeffs.items():
                prod = wedge(f, g)
                out[p + q] = out[p + q] + prod if p + q in out else prod
        return LambdaForm(self.window, out)

    def left_wedge(self, a: MatrixForm) -> "LambdaForm":
        return LambdaForm(self.window, {p: wedge(a, f) for p, f in self.coeffs.items()})


def scaled_curvature(a: MatrixForm) -> LambdaForm:
    """``F_lam = lam dA + lam^2 A ^ A``."""
    return LambdaForm(a.window, {1: exterior_derivative(a), 2: wedge(a, a)})


def lambda_power(f: LambdaForm, n: int) -> LambdaForm:
    out = LambdaForm(f.window, {0: identity_form(f.window)})
    for _ in range(n):
        out = out.wedge(f)
    return out


def integrate_unit_interval(power: int) -> Fraction:
    return Fraction(1, power + 1)


def is_vacuous(window, n: int) -> bool:
    """True when ``d CS_{2n+1}`` cannot be checked: fewer than 2n+2 directions."""
    return len(normalize_window(window)) < 2 * n + 2


def cs_odd(a: MatrixForm, n: int) -> ScalarForm:
    """General ``CS_{2n+1}`` from the lambda-integral formula; ``n = 0`` gives ``Tr(A)``."""
    _require_one_form(a, "cs_odd")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if is_vacuous(a.window, n):
        warnings.warn(
            f"window of size {len(a.window)} has no {2 * n + 2}-forms; d CS_{2 * n + 1} is trivially zero",
            VacuousIdentityWarning,
            stacklevel=2,
        )
    if n == 0:
        return trace(a)
    f_lam = scaled_curvature(a)
    # Tr(A ^ F^n) = Tr((A ^ F^h) ^ F^(n-h)) keeps only the diagonal of the last product
    head = lambda_power(f_lam, n // 2).left_wedge(a)
    tail = lambda_power(f_lam, n - n // 2)
    total: dict = {}
    for p, f in head.coeffs.items():
        for q, g in tail.coeffs.items():
            weight = (n + 1) * integrate_unit_interval(p + q)
            part = trace_wedge(f, g)
            for w, poly in part.terms.items():
                sc.add_into(total.setdefault(w, {}), poly, weight)
    return ScalarForm(a.window, total)


def curvature_power(a: MatrixForm, m: int, f: MatrixForm | None = None) -> MatrixForm:
    if f is None:
        f = curvature(a)
    out = identity_form(f.window)
    for _ in range(m):
        out = wedge(out, f)
    return out


def trace_curvature_power(a: MatrixForm, m: int, f: MatrixForm | None = None) -> ScalarForm:
    """``Tr(F^m)`` computed as ``Tr(F^h ^ F^(m-h))``."""
    if f is None:
        f = curvature(a)
    if m == 0:
        raise ValueError("Tr(F^0) is not a form of positive degree")
    h = m // 2
    if h == 0:
        return trace(f)
    left = curvature_power(a, h, f)
    right = left if m - h == h else curvature_power(a, m - h, f)
    return trace_wedge(left, right)


# ---------------------------------------------------------------- word expansions


def cs_word_expansion(n: int) -> dict[tuple[str, ...], Fraction]:
    """``CS_{2n+1}`` as a weighted sum of words in the letters ``A`` and ``dA``.

    Obtained combinatorially from ``A (lam dA + lam^2 AA)^n`` integrated over
    lambda, with no use of forms.  Words are left as ordered strings, so
    cyclically equivalent words are kept separate.
    """
    if n == 0:
        return {("A",): Fraction(1)}
    out: dict = {}
    for choice in range(1 << n):
        word = ["A"]
        power = 0
        for i in range(n):
            if choice >> i & 1:
                word += ["A", "A"]
                power += 2
            else:
                word.append("dA")
                power += 1
        key = tuple(word)
        out[key] = out.get(key, 0) + (n + 1) * integrate_unit_interval(power)
    return out


def evaluate_word(word, letters: dict) -> MatrixForm:
    """Wedge product of ``letters[w]`` along ``word``."""
    out = letters[word[0]]
    for w in word[1:]:
        out = wedge(out, letters[w])
    return out


def trace_word(word, letters: dict) -> ScalarForm:
    if len(word) == 1:
        return trace(letters[word[0]])
    h = len(word) // 2
    return trace_wedge(evaluate_word(word[:h], letters), evaluate_word(word[h:], letters))


def cs_from_words(a: MatrixForm, n: int) -> ScalarForm:
    """``CS_{2n+1}`` by summing traced words; an independent route to :func:`cs_odd`."""
    letters = {"A": a, "dA": exterior_derivative(a)}
    total = ScalarForm(a.window, {})
    for word, c in sorted(cs_word_expansion(n).items()):
        total = total + trace_word(word, letters).scale(c)
    return total


# ---------------------------------------------------------------- components


@dataclass
class ComponentTable:
    """Antisymmetric components of a homogeneous d-form.

    The form is ``sum over all ordered index tuples of L_{i1..id} dxi_i1 ^ ... ^ dxi_id``,
    so the coefficient of a sorted word is ``d! * L`` of that sorted tuple.
    """

    window: tuple
    degree: int
    components: dict  # sorted index tuple -> ScalarExpr

    def __getitem__(self, indices) -> ScalarExpr:
        """Component for any ordering of the indices, with the permutation sign."""
        sign, _ = word_mask(indices)
        if not sign:
            return ScalarExpr()
        key = tuple(sorted(indices))
        value = self.components.get(key)
        if value is None:
            return ScalarExpr()
        return value * sign

    def coefficient(self, indices) -> ScalarExpr:
        """Coefficient of the basis word ``dxi_{sorted indices}``."""
        return self[tuple(sorted(indices))] * math.factorial(self.degree)

    def __len__(self):
        return len(self.components)

    def reassemble(self) -> ScalarForm:
        fact = math.factorial(self.degree)
        return ScalarForm.from_terms(self.window, ((k, v * fact) for k, v in self.components.items()))


def extract_components(f: ScalarForm, degree: int) -> ComponentTable:
    """Split a homogeneous scalar form into its antisymmetric components."""
    if f and f.degree() != degree:
        raise ValueError(f"form has degree {f.degree()}, expected {degree}")
    inv = Fraction(1, math.factorial(degree))
    comps = {idx: expr * inv for idx, expr in f.entries()}
    return ComponentTable(f.window, degree, comps)


def _b(i, j, *d):
    return ScalarExpr.atom(atoms.field(i, j, *d))


def _distinct(indices, what):
    if len(set(indices)) != len(indices):
        raise ValueError(f"{what} needs pairwise distinct indices, got {indices}")


def reference_L3(p: int, q: int, r: int) -> ScalarExpr:
    """Darboux Lagrangian 3-form component ``L_pqr`` written out term by term."""
    _distinct((p, q, r), "reference_L3")
    half = Fraction(1, 2)
    kinetic = (
        (_b(r, q) * _b(q, r, p) - _b(q, r) * _b(r, q, p))
        + (_b(q, p) * _b(p, q, r) - _b(p, q) * _b(q, p, r))
        + (_b(p, r) * _b(r, p, q) - _b(r, p) * _b(p, r, q))
    ) * half
    cubic = _b(r, p) * _b(p, q) * _b(q, r) - _b(r, q) * _b(q, p) * _b(p, r)
    return kinetic + cubic


def _levi_civita(perm) -> int:
    sign, _ = word_mask(perm)
    return sign


def reference_L5(j: int, k: int, l: int, m: int, n: int) -> ScalarExpr:
    """Lagrangian 5-form component: Levi-Civita antisymmetrization of the CS5 shapes.

    For each ordering ``(j',k',l',m',n')`` of the five indices the bracket is
    ``B_{j'l'} d_{k'}B_{l'n'} d_{m'}B_{n'j'} + 3/2 B_{j'k'}B_{k'l'}B_{l'n'} d_{m'}B_{n'j'}
    + 3/5 B_{j'k'}B_{k'l'}B_{l'm'}B_{m'n'}B_{n'j'}``.
    """
    idx = (j, k, l, m, n)
    _distinct(idx, "reference_L5")
    acc: dict = {}
    for perm in permutations(idx):
        eps = _levi_civita(perm) * _levi_civita(idx)
        a, b, c, d, e = perm
        bracket = (
            _b(a, c) * _b(c, e, b) * _b(e, a, d)
            + _b(a, b) * _b(b, c) * _b(c, e) * _b(e, a, d) * Fraction(3, 2)
            + _b(a, b) * _b(b, c) * _b(c, d) * _b(d, e) * _b(e, a) * Fraction(3, 5)
        )
        sc.add_into(acc, bracket.terms, eps)
    return ScalarExpr(acc) * Fraction(1, math.factorial(5))


def fit_constant(target: ScalarExpr, reference: ScalarExpr) -> Fraction | None:
    """The ``c`` with ``target == c * reference`` exactly, or None if none exists."""
    if reference.is_zero():
        return Fraction(0) if target.is_zero() else None
    m, c_ref = reference.sorted_items()[0]
    c = Fraction(target.coefficient(m)) / c_ref
    return c if target == reference * c else None


def all_triples(window):
    return list(combinations(normalize_window(window), 3))
