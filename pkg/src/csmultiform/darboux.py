"""The generalised Darboux system: on-shell reduction, consistency, zero
certificates and the restricted first variation of the CS action.

The system is ``d_k B_ij = B_ik B_kj`` for pairwise distinct ``i, j, k``.
Nothing is prescribed for ``d_i B_ij`` or ``d_j B_ij``; those atoms are
irreducible and stay as they are.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from . import chern_simons as cs
from .algebra import atoms
from .algebra import scalar as sc
from .algebra.forms import (
    MatrixForm,
    ScalarForm,
    exterior_derivative,
    normalize_window,
    trace,
    wedge,
)
from .algebra.scalar import ScalarExpr
from .linsolve import solve_exact


def darboux_rhs(i: int, j: int, k: int) -> ScalarExpr:
    """Prescribed value ``B_ik B_kj`` of ``d_k B_ij``."""
    if len({i, j, k}) != 3:
        raise ValueError(f"no Darboux equation for repeated indices ({i},{j},{k})")
    return ScalarExpr({(atoms.field(i, k), atoms.field(k, j)): 1})


# ---------------------------------------------------------------- reduction


def reducible_directions(code: int) -> list[int]:
    a = atoms.decode(code)
    if a.kind != atoms.B:
        return []
    return sorted({d for d in a.derivs if d not in (a.row, a.col)})


def _remove_one(derivs, d):
    lst = list(derivs)
    lst.remove(d)
    return lst


class OnShellReducer:
    """Rewrites derivative atoms with the Darboux system until none is reducible.

    ``rng`` picks which transverse direction to rewrite first; with
    ``rng=None`` the smallest one is used and atoms are memoized.
    """

    def __init__(self, rng: random.Random | None = None):
        self.rng = rng
        self._memo: dict[int, dict] = {}

    def atom(self, code: int) -> dict:
        if self.rng is None and code in self._memo:
            return self._memo[code]
        dirs = reducible_directions(code)
        if not dirs:
            out = {(code,): 1}
        else:
            k = self.rng.choice(dirs) if self.rng is not None else dirs[0]
            a = atoms.decode(code)
            rest = _remove_one(a.derivs, k)
            p: dict = {(atoms.field(a.row, k), atoms.field(k, a.col)): 1}
            for d in rest:
                p = sc.partial(p, d)
            out = self.poly(p)
        if self.rng is None:
            self._memo[code] = out
        return out

    def poly(self, p: dict) -> dict:
        acc: dict = {}
        for m, c in p.items():
            term: dict = {(): c}
            for a in m:
                term = sc.mul(term, self.atom(a))
            sc.add_into(acc, term)
        return sc.normalize(sc.clean(acc))


def reduce_on_shell(e: ScalarExpr, rng: random.Random | None = None) -> ScalarExpr:
    return ScalarExpr._wrap(OnShellReducer(rng).poly(e.terms))


def reduce_form_on_shell(f, rng=None):
    r = OnShellReducer(rng)
    return f.map_coefficients(r.poly)


@dataclass
class MDCReport:
    window: tuple
    n_tuples: int
    failures: list = field(default_factory=list)
    example: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures


def cross_derivative(i: int, j: int, k: int, l: int) -> ScalarExpr:
    """``d_l`` of the right-hand side ``B_ik B_kj``, reduced on shell."""
    return reduce_on_shell(darboux_rhs(i, j, k).partial(l))


def mdc_check(window) -> MDCReport:
    """``d_l d_k B_ij`` computed in both orders agrees for every distinct 4-tuple."""
    w = normalize_window(window)
    if len(w) < 4:
        raise ValueError(f"consistency needs four directions, window is {w}")
    tuples = list(permutations(w, 4))
    rep = MDCReport(w, len(tuples))
    for i, j, k, l in tuples:
        one = cross_derivative(i, j, k, l)
        two = cross_derivative(i, j, l, k)
        if one != two:
            rep.failures.append((i, j, k, l))
        if not rep.example:
            rep.example = {"tuple": [i, j, k, l], "value": str(one)}
    return rep


# ---------------------------------------------------------------- zero certificates


def _curvature_replacement(code: int):
    a = atoms.decode(code)
    if a.kind != atoms.B or len(a.derivs) != 1:
        return None
    j = a.derivs[0]
    k, l = a.row, a.col
    if j in (k, l):
        return None
    return {(atoms.curvature_atom(j, k, l),): 1, tuple(sorted((atoms.field(k, j), atoms.field(j, l)))): 1}


def substitute_curvature(p: dict) -> dict:
    """Replace each ``d_j B_kl`` (j, k, l distinct) by ``G_{j;kl} + B_kj B_jl``."""
    cache: dict = {}
    acc: dict = {}
    for m, c in p.items():
        plain = []
        subs = []
        for a in m:
            if a not in cache:
                cache[a] = _curvature_replacement(a)
            rep = cache[a]
            if rep is None:
                plain.append(a)
            else:
                subs.append(rep)
        if not subs:
            acc[m] = acc.get(m, 0) + c
            continue
        term = {tuple(plain): c}
        for rep in subs:
            term = sc.mul(term, rep)
        sc.add_into(acc, term)
    return sc.normalize(sc.clean(acc))


def g_degree(monomial) -> int:
    return sum(1 for a in monomial if atoms.decode(a).kind == atoms.G)


def set_curvature_to_zero(p: dict) -> dict:
    return {m: c for m, c in p.items() if g_degree(m) == 0}


@dataclass
class ZeroCertificate:
    target: str
    n: int
    window: tuple
    n_monomials: int
    n_substituted_monomials: int
    min_g_degree: int | None
    expected_fold: int
    residual: ScalarForm
    on_shell_reduced_zero: bool

    @property
    def passed(self) -> bool:
        return (
            self.residual.is_zero()
            and self.on_shell_reduced_zero
            and (self.min_g_degree is None or self.min_g_degree >= self.expected_fold)
        )


def nfold_zero_certificate(n: int, window=None, expected_fold: int | None = None) -> ZeroCertificate:
    """Certify that ``Tr(F_B^(n+1)) = d CS_{2n+1}(B)`` vanishes to order ``n+1`` on shell."""
    if n < 1:
        raise ValueError("n must be positive")
    w = normalize_window(window if window is not None else 2 * n + 2)
    if len(w) < 2 * n + 2:
        raise ValueError(f"window of size {len(w)} has no {2 * n + 2}-forms")
    b = cs.darboux_gauge_field(w)
    target = cs.trace_curvature_power(b, n + 1)
    substituted = target.map_coefficients(substitute_curvature)
    degrees = [g_degree(m) for p in substituted.terms.values() for m in p]
    residual = substituted.map_coefficients(set_curvature_to_zero)
    reduced = reduce_form_on_shell(target)
    return ZeroCertificate(
        target=f"Tr(F_B^{n + 1})",
        n=n,
        window=w,
        n_monomials=target.n_monomials(),
        n_substituted_monomials=substituted.n_monomials(),
        min_g_degree=min(degrees) if degrees else None,
        expected_fold=n + 1 if expected_fold is None else expected_fold,
        residual=residual,
        on_shell_reduced_zero=reduced.is_zero(),
    )


@dataclass
class RemarkReport:
    n: int
    window: tuple
    vacuous: bool
    untraced_min_g_degree: int | None
    low_fold_entries: list
    traced_min_g_degree: int | None

    @property
    def exhibits_remark(self) -> bool:
        return bool(self.low_fold_entries)


def remark_check(n: int, window) -> RemarkReport:
    """Search the untraced ``F_B^(n+1)`` for entries vanishing to lower order than n+1."""
    w = normalize_window(window)
    if len(w) < 2 * n + 2:
        return RemarkReport(n, w, True, None, [], None)
    b = cs.darboux_gauge_field(w)
    power = cs.curvature_power(b, n + 1)
    sub = power.map_coefficients(substitute_curvature)
    low = []
    min_deg = None
    for (r, c, wd), p in sorted(sub.terms.items()):
        d = min(g_degree(m) for m in p)
        min_deg = d if min_deg is None else min(min_deg, d)
        if d < n + 1:
            low.append((r, c, wd, d))
    traced = trace(power).map_coefficients(substitute_curvature)
    tdeg = [g_degree(m) for p in traced.terms.values() for m in p]
    return RemarkReport(n, w, False, min_deg, low, min(tdeg) if tdeg else None)


# ---------------------------------------------------------------- variations


def symbolic_variation(window) -> MatrixForm:
    """``eta = sum_{p != q} eta_pq dxi_p E_pq``."""
    w = normalize_window(window)
    return MatrixForm(w, {(p, q, 1 << p): {(atoms.variation(p, q),): 1} for p in w for q in w if p != q})


def is_restricted_variation(eta: MatrixForm) -> bool:
    return all(r != c and wd == 1 << r for (r, c, wd) in eta.terms)


def _letters(a: MatrixForm, eta: MatrixForm) -> dict:
    return {"A": a, "dA": exterior_derivative(a), "eta": eta, "deta": exterior_derivative(eta)}


_VARIED = {"A": "eta", "dA": "deta"}


def linear_part(a: MatrixForm, eta: MatrixForm, n: int) -> ScalarForm:
    """t-linear part of ``CS_{2n+1}(a + t eta)``: one letter of each word varied at a time."""
    letters = _letters(a, eta)
    total = ScalarForm(a.window, {})
    for word, c in sorted(cs.cs_word_expansion(n).items()):
        for pos, letter in enumerate(word):
            varied = word[:pos] + (_VARIED[letter],) + word[pos + 1 :]
            total = total + cs.trace_word(varied, letters).scale(c)
    return total


def _potential_words(n: int) -> list[tuple[str, ...]]:
    """Words of total degree 2n in a, da, eta, deta with exactly one eta-letter."""
    deg = {"A": 1, "dA": 2, "eta": 1, "deta": 2}
    out = []

    def extend(word, total, n_eta):
        if total == 2 * n:
            if n_eta == 1:
                out.append(tuple(word))
            return
        for letter, d in deg.items():
            e = n_eta + (letter in ("eta", "deta"))
            if total + d <= 2 * n and e <= 1:
                extend(word + [letter], total + d, e)

    extend([], 0, 0)
    return out


@dataclass
class VariationResult:
    n: int
    linear: ScalarForm
    bulk: ScalarForm
    potential: ScalarForm
    residual: ScalarForm
    ansatz: dict  # word -> coefficient in the potential
    restricted: bool

    @property
    def passed(self) -> bool:
        return self.residual.is_zero()


def first_variation(a: MatrixForm, eta: MatrixForm, n: int = 1) -> VariationResult:
    """Split the linear part of ``CS_{2n+1}(a + t eta)`` as ``(n+1) Tr(eta F^n) + d(potential)``.

    The potential is found by solving for rational weights on every traced
    word of degree 2n that is linear in eta.
    """
    cs._require_one_form(a, "first_variation")
    cs._require_one_form(eta, "first_variation")
    lin = linear_part(a, eta, n)
    f = cs.curvature(a)
    bulk = cs.trace_wedge(eta, cs.curvature_power(a, n, f)).scale(n + 1)
    target = lin - bulk
    letters = _letters(a, eta)
    words = _potential_words(n)
    basis = [cs.trace_word(wd, letters) for wd in words]
    columns = [_flatten(exterior_derivative(bf)) for bf in basis]
    x = solve_exact(columns, _flatten(target))
    if x is None:
        raise ArithmeticError("no potential within the trace-word ansatz")
    potential = ScalarForm(a.window, {})
    ansatz = {}
    for wd, bf, xi in zip(words, basis, x):
        if xi:
            ansatz[wd] = xi
            potential = potential + bf.scale(xi)
    residual = target - exterior_derivative(potential)
    return VariationResult(n, lin, bulk, potential, residual, ansatz, is_restricted_variation(eta))


def _flatten(f: ScalarForm) -> dict:
    return {(w, m): c for w, p in f.terms.items() for m, c in p.items()}


def curvature_variation(a: MatrixForm, eta: MatrixForm, n: int) -> ScalarForm:
    """Residual of ``delta Tr(F^(n+1)) = (n+1) Tr(F^n ^ delta F)``; zero when the identity holds."""
    da, deta = exterior_derivative(a), exterior_derivative(eta)
    f = da + wedge(a, a)
    delta_f = deta + wedge(a, eta) + wedge(eta, a)
    # linear part of Tr((F + t dF)^(n+1)), one factor varied at a time
    lin = ScalarForm(a.window, {})
    for pos in range(n + 1):
        factors = [f] * (n + 1)
        factors[pos] = delta_f
        lin = lin + trace(cs.evaluate_word(tuple(range(n + 1)), dict(enumerate(factors))))
    rhs = cs.trace_wedge(cs.curvature_power(a, n, f), delta_f).scale(n + 1)
    return lin - rhs


def explicit_bulk(window) -> ScalarForm:
    """``2 sum_{a,b,c} (d_a B_bc - B_ba B_ac) eta_cb dxi_a ^ dxi_b ^ dxi_c`` written out directly."""
    w = normalize_window(window)
    items = []
    for a_, b_, c_ in permutations(w, 3):
        g = ScalarExpr.atom(atoms.field(b_, c_, a_)) - ScalarExpr(
            {(atoms.field(b_, a_), atoms.field(a_, c_)): 1}
        )
        items.append(((a_, b_, c_), g * ScalarExpr.atom(atoms.variation(c_, b_)) * 2))
    return ScalarForm.from_terms(w, items)


def restricted_el_equations(window) -> list[tuple[tuple[int, int, int], ScalarExpr]]:
    """``d_a B_bc - B_ba B_ac`` for every ordered triple of distinct indices."""
    w = normalize_window(window)
    if len(w) < 3:
        raise ValueError(f"window {w} has no distinct triples")
    out = []
    for a_, b_, c_ in permutations(w, 3):
        e = ScalarExpr.atom(atoms.field(b_, c_, a_)) - ScalarExpr({(atoms.field(b_, a_), atoms.field(a_, c_)): 1})
        out.append(((a_, b_, c_), e))
    return out
