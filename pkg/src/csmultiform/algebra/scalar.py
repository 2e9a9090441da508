"""Sparse polynomials with exact rational coefficients over field atoms.

The hot loops work on raw dicts ``{monomial: coefficient}`` where a
monomial is a sorted tuple of atom ids (repeated for powers) and a
coefficient is an ``int`` or ``Fraction``.  :class:`ScalarExpr` is the
immutable public wrapper around one such dict.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from . import atoms

Poly = dict  # monomial tuple -> int | Fraction

ONE: tuple = ()


def clean(p: Poly) -> Poly:
    """Drop zero coefficients in place and return ``p``."""
    zeros = [m for m, c in p.items() if not c]
    for m in zeros:
        del p[m]
    return p


def add_into(acc: Poly, p: Poly, scale=1) -> None:
    get = acc.get
    if scale == 1:
        for m, c in p.items():
            acc[m] = get(m, 0) + c
    else:
        for m, c in p.items():
            acc[m] = get(m, 0) + c * scale


def mul_into(acc: Poly, p: Poly, q: Poly, scale=1) -> None:
    get = acc.get
    for m1, c1 in p.items():
        cs = c1 * scale
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
            acc[m] = get(m, 0) + cs * c2


def mul(p: Poly, q: Poly) -> Poly:
    acc: Poly = {}
    mul_into(acc, p, q)
    return clean(acc)


def partial_into(acc: Poly, p: Poly, j: int, scale=1) -> None:
    """Accumulate ``scale * d_j p`` by the Leibniz rule."""
    get = acc.get
    dj = atoms.partial_atom
    for m, c in p.items():
        prev = None
        for i, a in enumerate(m):
            if a == prev:
                continue
            prev = a
            mult = m.count(a)
            rest = m[:i] + m[i + mult :] + (a,) * (mult - 1)
            new = tuple(sorted(rest + (dj(a, j),)))
            acc[new] = get(new, 0) + c * mult * scale


def partial(p: Poly, j: int) -> Poly:
    acc: Poly = {}
    partial_into(acc, p, j)
    return clean(acc)


def as_coefficient(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return as_coefficient(Fraction(x.numerator, x.denominator))
    raise TypeError(f"coefficients must be exact rationals, got {type(x).__name__}")


def normalize(p: Poly) -> Poly:
    """Collapse integral Fractions to ints so equal values print identically."""
    for m, c in p.items():
        if isinstance(c, Fraction) and c.denominator == 1:
            p[m] = c.numerator
    return p


class ScalarExpr:
    """Immutable exact polynomial in field atoms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {ONE: as_coefficient(terms)}
        else:
            terms = {tuple(sorted(m)): as_coefficient(c) for m, c in terms.items()}
        self._terms = normalize(clean(terms))
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Poly) -> "ScalarExpr":
        # trusted constructor: caller guarantees sorted monomials
        obj = cls.__new__(cls)
        obj._terms = normalize(clean(terms))
        obj._hash = None
        return obj

    @classmethod
    def atom(cls, code: int, power: int = 1) -> "ScalarExpr":
        return cls._wrap({(code,) * power: 1})

    @classmethod
    def constant(cls, value) -> "ScalarExpr":
        return cls._wrap({ONE: as_coefficient(value)})

    @property
    def terms(self) -> Poly:
        """The underlying dict.  Treat as read-only."""
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> Poly:
        if isinstance(other, ScalarExpr):
            return other._terms
        c = as_coefficient(other)
        return {ONE: c} if c else {}

    def __add__(self, other):
        acc = dict(self._terms)
        add_into(acc, self._coerce(other))
        return ScalarExpr._wrap(acc)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        acc = dict(self._terms)
        add_into(acc, self._coerce(other), -1)
        return ScalarExpr._wrap(acc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ScalarExpr):
            return ScalarExpr._wrap(mul(self._terms, other._terms))
        c = as_coefficient(other)
        return ScalarExpr._wrap({m: v * c for m, v in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ScalarExpr.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, ScalarExpr):
            return self._terms == other._terms
        try:
            return self._terms == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def partial(self, j: int) -> "ScalarExpr":
        return ScalarExpr._wrap(partial(self._terms, j))

    def atoms(self) -> set[int]:
        return {a for m in self._terms for a in m}

    def coefficient(self, monomial) -> Fraction | int:
        return self._terms.get(tuple(sorted(monomial)), 0)

    def sorted_items(self):
        """Terms in the canonical print order: by degree, then monomial."""
        return sorted(self._terms.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def __str__(self) -> str:
        from .serialize import format_expr

        return format_expr(self)

    def __repr__(self) -> str:
        return f"ScalarExpr({str(self)!r})"

    def evaluate(self, values):
        """Numeric value given ``values[atom_id]`` (floats or numpy arrays)."""
        total = 0.0
        for m, c in self._terms.items():
            term = float(c)
            for a in m:
                term = term * values[a]
            total = total + term
        return total
