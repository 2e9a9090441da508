"""Matrix-valued and scalar differential forms."""

import random

import pytest

from csmultiform.algebra import atoms
from csmultiform.algebra.forms import (
    MatrixForm,
    ScalarForm,
    exterior_derivative,
    trace,
    wedge,
    word_mask,
)
from csmultiform.algebra.random import random_matrix_form, random_scalar_form
from csmultiform.algebra.scalar import ScalarExpr
from csmultiform.algebra.serialize import format_form, parse_form

W3 = (1, 2, 3)


def B(i, j, *d):
    return ScalarExpr.atom(atoms.field(i, j, *d))


def unit(row, col, word, coeff=1, window=W3):
    return MatrixForm.from_terms(window, [(row, col, word, coeff)])


def test_word_sign_and_nilpotency():
    assert word_mask((2, 1)) == (-1, 0b110)
    assert word_mask((1, 3, 2))[0] == -1
    assert word_mask((1, 1))[0] == 0


def test_wedge_matching_units():
    assert wedge(unit(1, 2, (1,)), unit(2, 3, (2,))) == unit(1, 3, (1, 2))


def test_wedge_nonmatching_units_vanish():
    w = (1, 2, 3, 4)
    assert wedge(unit(1, 2, (1,), window=w), unit(3, 4, (2,), window=w)).is_zero()


def test_wedge_repeated_direction_vanishes():
    assert wedge(unit(1, 2, (1,), B(1, 2)), unit(2, 1, (1,), B(2, 1))).is_zero()


def test_d_of_single_term():
    a = unit(1, 2, (1,), B(1, 2))
    expected = MatrixForm.from_terms(W3, [(1, 2, (j, 1), B(1, 2, j)) for j in (2, 3)])
    assert exterior_derivative(a) == expected


def test_d_of_cubic_trace_matches_rearrangement():
    from csmultiform.chern_simons import darboux_gauge_field
    for window in (W3, (1, 2, 3, 4)):
        b = darboux_gauge_field(window)
        db = exterior_derivative(b)
        lhs = exterior_derivative(trace(wedge(wedge(b, b), b)))
        assert lhs == trace(wedge(wedge(db, b), b)).scale(3)
    # three coordinates carry no 4-forms; with four the identity is not vacuous
    assert not lhs.is_zero()


def test_trace_examples():
    assert trace(unit(1, 2, (1,))).is_zero()
    f = unit(1, 1, (1, 2), B(1, 2) * B(2, 1))
    assert trace(f) == ScalarForm.from_terms(W3, [((1, 2), B(1, 2) * B(2, 1))])


def test_canonical_order_independence():
    rng = random.Random(5)
    items = [(rng.randint(1, 4), rng.randint(1, 4), tuple(rng.sample(range(1, 5), 2)), B(1, 2) * rng.randint(-3, 3))
             for _ in range(30)]
    a = MatrixForm.from_terms(4, items)
    for _ in range(5):
        rng.shuffle(items)
        b = MatrixForm.from_terms(4, items)
        assert a == b and format_form(a) == format_form(b)


def test_mismatched_windows_rejected():
    with pytest.raises(ValueError):
        unit(1, 2, (1,)) + unit(1, 2, (1,), window=(1, 2, 3, 4))


@pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
def test_d_squared_is_zero(degree):
    rng = random.Random(degree)
    for _ in range(1000):
        a = random_matrix_form(rng, 5, degree, n_terms=2, max_degree=2)
        assert exterior_derivative(exterior_derivative(a)).is_zero()
        s = random_scalar_form(rng, 5, degree, n_terms=2)
        assert exterior_derivative(exterior_derivative(s)).is_zero()


def test_graded_leibniz():
    rng = random.Random(11)
    for _ in range(200):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        a, b = random_matrix_form(rng, 5, p), random_matrix_form(rng, 5, q)
        lhs = exterior_derivative(wedge(a, b))
        rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale((-1) ** p)
        assert lhs == rhs


def test_graded_anticommutativity():
    rng = random.Random(12)
    for _ in range(300):
        p, q = rng.randint(0, 3), rng.randint(0, 2)
        a, b = random_scalar_form(rng, 6, p), random_scalar_form(rng, 6, q)
        assert a.wedge(b) == b.wedge(a).scale((-1) ** (p * q))


def test_trace_cyclicity():
    rng = random.Random(13)
    for _ in range(300):
        p, q = rng.randint(0, 3), rng.randint(0, 2)
        a, b = random_matrix_form(rng, 5, p), random_matrix_form(rng, 5, q)
        assert trace(wedge(a, b)) == trace(wedge(b, a)).scale((-1) ** (p * q))


def test_wedge_associative_and_bilinear():
    rng = random.Random(14)
    for _ in range(100):
        a, b, c = (random_matrix_form(rng, 5, rng.randint(0, 2)) for _ in range(3))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
        assert wedge(a, b + c) == wedge(a, b) + wedge(a, c)


def test_form_serialization_roundtrip():
    rng = random.Random(15)
    for _ in range(100):
        a = random_matrix_form(rng, 5, rng.randint(0, 3), max_deriv=2)
        assert parse_form(format_form(a)) == a
        s = random_scalar_form(rng, 5, rng.randint(0, 3))
        assert parse_form(format_form(s)) == s
    text = format_form(unit(1, 2, (1,), B(1, 2)))
    assert text.splitlines()[0] == "MatrixForm window=[1,2,3]"


def test_degree_bookkeeping():
    assert unit(1, 2, (1, 3)).degree() == 2
    assert MatrixForm(W3, {}).degree() == -1
    with pytest.raises(ValueError):
        (unit(1, 2, (1,)) + unit(1, 2, (1, 2))).degree()
