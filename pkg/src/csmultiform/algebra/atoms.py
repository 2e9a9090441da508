"""Field atoms and their integer encoding.

An atom is one of

* ``B[k,l;a,b,...]`` -- a partial derivative of the gauge-field entry B_kl,
* ``eta[k,l;...]``   -- the same for a variation field,
* ``G[k,l;j]``       -- the curvature residual d_j B_kl - B_kj B_jl.

Atoms are packed into Python ints so that monomials are tuples of small
ints.  The packing preserves the lexicographic order of
``(kind, row, col, derivs)``, so sorting ids sorts atoms by that key and
canonical monomials do not depend on creation order.
"""

from __future__ import annotations

from typing import NamedTuple

B, ETA, G = 0, 1, 2
KIND_NAMES = ("B", "eta", "G")
KIND_BY_NAME = {name: kind for kind, name in enumerate(KIND_NAMES)}

MAX_INDEX = 255
MAX_DERIVS = 15

_DIGIT = 8
_SLOTS = MAX_DERIVS + 2  # row, col, derivs...
_MASK = (1 << _DIGIT) - 1


class FieldAtom(NamedTuple):
    kind: int
    row: int
    col: int
    derivs: tuple[int, ...]

    def __str__(self) -> str:
        return atom_str(encode(self.kind, self.row, self.col, self.derivs))


_decode_cache: dict[int, FieldAtom] = {}
_partial_cache: dict[tuple[int, int], int] = {}


def encode(kind: int, row: int, col: int, derivs=()) -> int:
    """Pack an atom into its integer id; ``derivs`` is sorted here."""
    if not (1 <= row <= MAX_INDEX and 1 <= col <= MAX_INDEX):
        raise ValueError(f"index out of range 1..{MAX_INDEX}: ({row}, {col})")
    if row == col:
        raise ValueError(f"diagonal atom {KIND_NAMES[kind]}[{row},{col}] is excluded")
    derivs = tuple(sorted(derivs))
    if len(derivs) > MAX_DERIVS:
        raise ValueError(f"derivative order {len(derivs)} exceeds {MAX_DERIVS}")
    if kind == G and len(derivs) != 1:
        raise ValueError("a curvature atom carries exactly one direction")
    code = kind
    for digit in (row, col):
        code = (code << _DIGIT) | digit
    for i in range(MAX_DERIVS):
        d = derivs[i] if i < len(derivs) else 0
        if d and not 1 <= d <= MAX_INDEX:
            raise ValueError(f"derivative index out of range: {d}")
        code = (code << _DIGIT) | d
    return code


def decode(code: int) -> FieldAtom:
    atom = _decode_cache.get(code)
    if atom is None:
        digits = []
        c = code
        for _ in range(_SLOTS):
            digits.append(c & _MASK)
            c >>= _DIGIT
        digits.reverse()
        derivs = tuple(d for d in digits[2:] if d)
        atom = FieldAtom(c, digits[0], digits[1], derivs)
        _decode_cache[code] = atom
    return atom


def field(row: int, col: int, *derivs: int) -> int:
    """Id of the atom d_{derivs} B_{row,col}."""
    return encode(B, row, col, derivs)


def variation(row: int, col: int, *derivs: int) -> int:
    """Id of the atom d_{derivs} eta_{row,col}."""
    return encode(ETA, row, col, derivs)


def curvature_atom(direction: int, row: int, col: int) -> int:
    """Id of G_{direction; row col}; all three indices must differ."""
    if direction in (row, col):
        raise ValueError(f"G[{row},{col};{direction}] needs a transverse direction")
    return encode(G, row, col, (direction,))


def partial_atom(code: int, j: int) -> int:
    """Atom obtained by one more partial derivative in direction ``j``."""
    key = (code, j)
    out = _partial_cache.get(key)
    if out is None:
        a = decode(code)
        if a.kind == G:
            raise ValueError("curvature atoms are not differentiated")
        out = encode(a.kind, a.row, a.col, a.derivs + (j,))
        _partial_cache[key] = out
    return out


def atom_str(code: int) -> str:
    a = decode(code)
    name = KIND_NAMES[a.kind]
    if a.derivs:
        return f"{name}[{a.row},{a.col};{','.join(map(str, a.derivs))}]"
    return f"{name}[{a.row},{a.col}]"
