"""Matrix-valued and scalar differential forms over a finite coordinate window.

A wedge word ``dxi_{i1} ^ ... ^ dxi_{id}`` with ``i1 < ... < id`` is stored
as the bitmask ``sum(1 << i)``.  Reordering signs are folded into the
coefficients when a word is built, so every stored word is sorted.

Matrix forms map ``(row, col, word)`` to a coefficient polynomial; scalar
forms map ``word`` to one.  Absent keys are zero.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from . import scalar as sc
from .scalar import ScalarExpr

# ---------------------------------------------------------------- words


def word_mask(indices: Iterable[int]) -> tuple[int, int]:
    """Return ``(sign, mask)`` for the wedge of ``indices`` in the given order.

    ``sign`` is 0 when an index repeats.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, 0
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    mask = 0
    for i in idx:
        mask |= 1 << i
    return (-1 if inversions & 1 else 1), mask


def word_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def word_degree(mask: int) -> int:
    return bin(mask).count("1")


_merge_cache: dict[tuple[int, int], int] = {}


def merge_sign(w1: int, w2: int) -> int:
    """Sign of sorting ``w1 ^ w2`` (concatenated); 0 if they share an index."""
    key = (w1, w2)
    s = _merge_cache.get(key)
    if s is None:
        if w1 & w2:
            s = 0
        else:
            swaps = 0
            rest = w2
            i = 0
            while rest:
                if rest & 1:
                    swaps += bin(w1 >> (i + 1)).count("1")
                rest >>= 1
                i += 1
            s = -1 if swaps & 1 else 1
        _merge_cache[key] = s
    return s


def _front_sign(j: int, mask: int) -> int:
    """Sign of moving dxi_j from the front into sorted position in ``mask``."""
    below = bin(mask & ((1 << j) - 1)).count("1")
    return -1 if below & 1 else 1


def normalize_window(window) -> tuple[int, ...]:
    if isinstance(window, int):
        window = range(1, window + 1)
    w = tuple(sorted(set(window)))
    if not w or w[0] < 1:
        raise ValueError(f"window indices must be positive integers, got {window!r}")
    return w


# ---------------------------------------------------------------- forms


class _Form:
    __slots__ = ("window", "terms")

    def __init__(self, window, terms=None):
        self.window = normalize_window(window)
        self.terms = {} if terms is None else terms
        for key in [k for k, p in self.terms.items() if not sc.clean(p)]:
            del self.terms[key]
        for p in self.terms.values():
            sc.normalize(p)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.window == other.window and self.terms == other.terms

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.window != self.window:
            raise ValueError(f"window mismatch: {self.window} vs {other.window}")

    def _combine(self, other, scale):
        self._check(other)
        acc = {k: dict(p) for k, p in self.terms.items()}
        for k, p in other.terms.items():
            sc.add_into(acc.setdefault(k, {}), p, scale)
        return type(self)(self.window, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        """Multiply by an exact rational or a :class:`ScalarExpr`."""
        if isinstance(factor, ScalarExpr):
            return type(self)(self.window, {k: sc.mul(p, factor.terms) for k, p in self.terms.items()})
        c = sc.as_coefficient(factor)
        return type(self)(self.window, {k: {m: v * c for m, v in p.items()} for k, p in self.terms.items()})

    __rmul__ = scale

    def __mul__(self, factor):
        return self.scale(factor)

    def degrees(self) -> set[int]:
        return {word_degree(self._word(k)) for k in self.terms}

    def degree(self) -> int:
        """Degree of a homogeneous form; a zero form has degree -1."""
        ds = self.degrees()
        if not ds:
            return -1
        if len(ds) > 1:
            raise ValueError(f"form is not homogeneous: degrees {sorted(ds)}")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def n_monomials(self) -> int:
        return sum(len(p) for p in self.terms.values())

    def map_coefficients(self, fn):
        """New form with ``fn(poly) -> poly`` applied to every coefficient."""
        return type(self)(self.window, {k: fn(p) for k, p in self.terms.items()})

    def d(self):
        return exterior_derivative(self)

    def __str__(self):
        from .serialize import format_form

        return format_form(self)


class MatrixForm(_Form):
    """Sparse sum of ``coefficient * E_{row,col} * word``."""

    __slots__ = ()

    @staticmethod
    def _word(key):
        return key[2]

    @classmethod
    def from_terms(cls, window, items: Iterable) -> "MatrixForm":
        """Build from ``(row, col, indices, coefficient)`` in any order."""
        acc: dict = {}
        for row, col, indices, coeff in items:
            sign, mask = word_mask(indices)
            if not sign:
                continue
            poly = coeff.terms if isinstance(coeff, ScalarExpr) else {(): sc.as_coefficient(coeff)}
            sc.add_into(acc.setdefault((row, col, mask), {}), poly, sign)
        return cls(window, acc)

    def coefficient(self, row: int, col: int, indices) -> ScalarExpr:
        sign, mask = word_mask(indices)
        if not sign:
            return ScalarExpr()
        return ScalarExpr._wrap(dict(self.terms.get((row, col, mask), {}))) * sign

    def entries(self):
        """Sorted ``(row, col, indices, ScalarExpr)`` tuples."""
        for (r, c, w) in sorted(self.terms, key=lambda k: (k[0], k[1], word_indices(k[2]))):
            yield r, c, word_indices(w), ScalarExpr._wrap(dict(self.terms[(r, c, w)]))

    def wedge(self, other: "MatrixForm") -> "MatrixForm":
        return wedge(self, other)

    def __xor__(self, other):
        return wedge(self, other)


class ScalarForm(_Form):
    """Sparse sum of ``coefficient * word``, e.g. the trace of a matrix form."""

    __slots__ = ()

    @staticmethod
    def _word(key):
        return key

    @classmethod
    def from_terms(cls, window, items: Iterable) -> "ScalarForm":
        acc: dict = {}
        for indices, coeff in items:
            sign, mask = word_mask(indices)
            if not sign:
                continue
            poly = coeff.terms if isinstance(coeff, ScalarExpr) else {(): sc.as_coefficient(coeff)}
            sc.add_into(acc.setdefault(mask, {}), poly, sign)
        return cls(window, acc)

    def coefficient(self, indices) -> ScalarExpr:
        sign, mask = word_mask(indices)
        if not sign:
            return ScalarExpr()
        return ScalarExpr._wrap(dict(self.terms.get(mask, {}))) * sign

    def entries(self):
        for w in sorted(self.terms, key=word_indices):
            yield word_indices(w), ScalarExpr._wrap(dict(self.terms[w]))

    def wedge(self, other: "ScalarForm") -> "ScalarForm":
        return scalar_wedge(self, other)

    def __xor__(self, other):
        return scalar_wedge(self, other)


# ---------------------------------------------------------------- operations


def wedge(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    """Wedge product of matrix forms, matrix units multiplied as matrices."""
    a._check(b)
    by_row: dict[int, list] = {}
    for (r, c, w), p in b.terms.items():
        by_row.setdefault(r, []).append((c, w, p))
    acc: dict = {}
    for (k, l, w1), p1 in a.terms.items():
        for n, w2, p2 in by_row.get(l, ()):
            s = merge_sign(w1, w2)
            if not s:
                continue
            key = (k, n, w1 | w2)
            target = acc.get(key)
            if target is None:
                target = acc[key] = {}
            sc.mul_into(target, p1, p2, s)
    return MatrixForm(a.window, acc)


def wedge_all(*forms: MatrixForm) -> MatrixForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def scalar_wedge(a: ScalarForm, b: ScalarForm) -> ScalarForm:
    a._check(b)
    acc: dict = {}
    for w1, p1 in a.terms.items():
        for w2, p2 in b.terms.items():
            s = merge_sign(w1, w2)
            if s:
                sc.mul_into(acc.setdefault(w1 | w2, {}), p1, p2, s)
    return ScalarForm(a.window, acc)


def trace(a: MatrixForm) -> ScalarForm:
    acc: dict = {}
    for (r, c, w), p in a.terms.items():
        if r == c:
            sc.add_into(acc.setdefault(w, {}), p)
    return ScalarForm(a.window, acc)


def trace_wedge(a: MatrixForm, b: MatrixForm, scale=1) -> ScalarForm:
    """``Tr(a ^ b)`` without forming the off-diagonal blocks of the product."""
    a._check(b)
    by_pair: dict[tuple[int, int], list] = {}
    for (r, c, w), p in b.terms.items():
        by_pair.setdefault((r, c), []).append((w, p))
    acc: dict = {}
    for (k, l, w1), p1 in a.terms.items():
        for w2, p2 in by_pair.get((l, k), ()):
            s = merge_sign(w1, w2)
            if not s:
                continue
            target = acc.get(w1 | w2)
            if target is None:
                target = acc[w1 | w2] = {}
            sc.mul_into(target, p1, p2, s * scale)
    return ScalarForm(a.window, acc)


def exterior_derivative(a):
    """Formal exterior derivative over the form's window (Leibniz on atoms)."""
    acc: dict = {}
    is_matrix = isinstance(a, MatrixForm)
    for key, p in a.terms.items():
        w = key[2] if is_matrix else key
        for j in a.window:
            bit = 1 << j
            if w & bit:
                continue
            new = (key[0], key[1], w | bit) if is_matrix else (w | bit)
            sc.partial_into(acc.setdefault(new, {}), p, j, _front_sign(j, w))
    return type(a)(a.window, acc)


def identity_form(window) -> MatrixForm:
    """The 0-form identity matrix (useful as the empty wedge product)."""
    w = normalize_window(window)
    return MatrixForm(w, {(k, k, 0): {(): 1} for k in w})


def scalar_zero(window) -> ScalarForm:
    return ScalarForm(window, {})


def to_scalar_form(window, table: Mapping[tuple, ScalarExpr]) -> ScalarForm:
    return ScalarForm.from_terms(window, table.items())
