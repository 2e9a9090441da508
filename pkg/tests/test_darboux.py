"""Darboux system reduction, consistency, certificates and first variation."""

import random

import pytest

from csmultiform import chern_simons as cs
from csmultiform import darboux as dx
from csmultiform.algebra import atoms
from csmultiform.algebra.forms import MatrixForm
from csmultiform.algebra.random import random_expr, random_matrix_form, random_restricted_variation
from csmultiform.algebra.scalar import ScalarExpr


def B(i, j, *d):
    return ScalarExpr.atom(atoms.field(i, j, *d))


def eta(i, j):
    return ScalarExpr.atom(atoms.variation(i, j))


def test_darboux_rhs():
    assert dx.darboux_rhs(1, 2, 3) == B(1, 3) * B(3, 2)
    assert dx.darboux_rhs(2, 1, 3) == B(2, 3) * B(3, 1)
    with pytest.raises(ValueError):
        dx.darboux_rhs(1, 2, 1)


def test_reduce_examples():
    assert dx.reduce_on_shell(B(1, 2, 3)) == B(1, 3) * B(3, 2)
    assert dx.reduce_on_shell(B(1, 2, 3, 4)) == B(1, 4) * B(4, 3) * B(3, 2) + B(1, 3) * B(3, 4) * B(4, 2)
    assert dx.reduce_on_shell(B(1, 2, 1)) == B(1, 2, 1)
    # d_1 (B13 B32): d_1 B13 is irreducible, d_1 B32 reduces again to B31 B12
    assert dx.reduce_on_shell(B(1, 2, 1, 3)) == B(1, 3, 1) * B(3, 2) + B(1, 3) * B(3, 1) * B(1, 2)


def test_reduction_is_confluent():
    rng = random.Random(0)
    for trial in range(500):
        e = random_expr(rng, 5, n_terms=3, max_degree=2, max_deriv=3)
        fixed = dx.reduce_on_shell(e)
        assert dx.reduce_on_shell(e, random.Random(trial)) == fixed
        for code in fixed.atoms():
            assert not dx.reducible_directions(code)


def test_mdc_example_tuple():
    lhs = dx.cross_derivative(1, 2, 3, 4)
    rhs = dx.cross_derivative(1, 2, 4, 3)
    assert lhs == rhs == B(1, 4) * B(4, 3) * B(3, 2) + B(1, 3) * B(3, 4) * B(4, 2)


def test_mdc_windows():
    rep = dx.mdc_check(4)
    assert rep.passed and rep.n_tuples == 24
    rep6 = dx.mdc_check(6)
    assert rep6.passed and rep6.n_tuples == 360
    with pytest.raises(ValueError):
        dx.mdc_check(3)


@pytest.mark.parametrize("n", [1, 2])
def test_zero_certificates(n):
    cert = dx.nfold_zero_certificate(n)
    assert cert.passed
    assert cert.min_g_degree == n + 1
    assert cert.residual.is_zero() and cert.on_shell_reduced_zero


def test_certificate_n1_is_exactly_quadratic():
    target = cs.trace_curvature_power(cs.darboux_gauge_field(4), 2)
    sub = target.map_coefficients(dx.substitute_curvature)
    assert {dx.g_degree(m) for p in sub.terms.values() for m in p} == {2}


def test_certificate_rejects_small_window():
    with pytest.raises(ValueError):
        dx.nfold_zero_certificate(2, 5)


def test_overclaimed_fold_fails():
    assert not dx.nfold_zero_certificate(1, expected_fold=3).passed


def test_remark():
    rep = dx.remark_check(1, 4)
    assert rep.exhibits_remark and rep.untraced_min_g_degree == 1
    assert rep.traced_min_g_degree >= 2
    vac = dx.remark_check(1, 3)
    assert vac.vacuous and not vac.exhibits_remark


def test_first_variation_darboux_field():
    w = (1, 2, 3)
    res = dx.first_variation(cs.darboux_gauge_field(w), dx.symbolic_variation(w))
    assert res.passed and res.restricted
    assert res.bulk == dx.explicit_bulk(w)
    c = res.bulk.coefficient((1, 2, 3))
    assert c.coefficient(tuple(sorted((atoms.field(2, 3, 1), atoms.variation(3, 2))))) == 2
    assert c.coefficient(tuple(sorted((atoms.field(2, 1), atoms.field(1, 3), atoms.variation(3, 2))))) == -2
    assert res.ansatz == {("A", "eta"): -1}


def test_first_variation_zero_eta():
    res = dx.first_variation(cs.darboux_gauge_field(4), MatrixForm(4, {}))
    assert res.linear.is_zero() and res.potential.is_zero() and res.passed


def test_first_variation_random():
    rng = random.Random(8)
    for _ in range(30):
        a = random_matrix_form(rng, 4, 1, 3)
        e = random_restricted_variation(rng, 4, 3)
        assert dx.first_variation(a, e).passed


def test_unrestricted_variation_flagged():
    a = cs.darboux_gauge_field(3)
    e = MatrixForm.from_terms(3, [(1, 2, (3,), eta(1, 2))])
    res = dx.first_variation(a, e)
    assert not res.restricted and res.passed


def test_higher_variation():
    b = cs.darboux_gauge_field(5)
    eta5 = dx.symbolic_variation(5)
    assert dx.first_variation(b, eta5, 2).passed
    assert dx.curvature_variation(b, eta5, 2).is_zero()


def test_restricted_el_equations():
    eqs = dx.restricted_el_equations(3)
    assert len(eqs) == 6
    for (a, b, c), e in eqs:
        assert dx.substitute_curvature(e.terms) == {(atoms.curvature_atom(a, b, c),): 1}
        assert atoms.field(1, 2, 1) not in e.atoms()
