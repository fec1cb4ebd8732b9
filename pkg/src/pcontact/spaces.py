"""Finite-dimensional subspaces of invariant forms and vector forms.

Vectors are sparse dicts keyed by basis labels: ``(I, J)`` monomials for
forms and ``(lam, J)`` for vector forms.  Labels are sorted to fix the
column order, so every echelon basis produced here is canonical.
"""

from __future__ import annotations

from .linalg import ColumnMap, Echelon
from .scalars import GaussianRational, as_gq

__all__ = [
    "Span",
    "combine",
    "solution_space",
    "image_of",
    "preimage_solve",
    "unit_vectors",
]


def combine(basis, coeffs: dict) -> dict:
    """``sum_k coeffs[k] * basis[k]`` for sparse vectors."""
    out: dict = {}
    for k, c in coeffs.items():
        for key, v in basis[k].items():
            s = out.get(key)
            s = c * v if s is None else s + c * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


class Span:
    """Span of sparse vectors, kept as a reduced echelon basis.

    The column order is the sorted order of all labels seen; labels are
    compared with ``sorted`` so they must be mutually comparable.
    """

    def __init__(self, vectors=()):
        vectors = [dict(v) for v in vectors if v]
        labels = sorted({key for v in vectors for key in v})
        self._labels = labels
        self._index = {key: i for i, key in enumerate(labels)}
        ech = Echelon(len(labels))
        for v in vectors:
            ech.add({self._index[key]: as_gq(c) for key, c in v.items() if c})
        self._ech = ech
        self.basis = [{labels[i]: c for i, c in row.items()} for row in ech.basis()]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def contains(self, v: dict) -> bool:
        if any(key not in self._index for key, c in v.items() if c):
            return False
        reduced, _ = self._ech.reduce({self._index[key]: as_gq(c) for key, c in v.items() if c})
        return not reduced

    def contains_all(self, vectors) -> bool:
        return all(self.contains(v) for v in vectors)

    def __add__(self, other: "Span") -> "Span":
        return Span(self.basis + other.basis)

    def intersection_dim(self, other: "Span") -> int:
        return self.dim + other.dim - (self + other).dim

    def quotient_basis(self, sub: "Span"):
        """Vectors of ``self`` completing a basis of ``sub`` (representatives of self/sub)."""
        acc = Span(sub.basis)
        reps = []
        for v in self.basis:
            if not acc.contains(v):
                reps.append(v)
                acc = Span(acc.basis + [v])
        return reps


def image_of(basis, f) -> Span:
    """Span of ``f(b)`` over a basis (``f`` maps sparse vectors to sparse vectors)."""
    return Span(f(b) for b in basis)


def solution_space(basis, zero=(), inside=()):
    """Basis of ``{x in span(basis) : f(x) = 0 for f in zero, g(x) in W for (g, W) in inside}``.

    ``basis`` lists ambient vectors, each ``f``/``g`` is linear on sparse
    vectors, and each ``W`` is a :class:`Span` (or list of vectors).  The
    result is a reduced echelon basis in the ambient coordinates.
    """
    basis = [dict(b) for b in basis]
    if not basis:
        return []
    columns = [dict() for _ in basis]
    for ci, f in enumerate(zero):
        for j, b in enumerate(basis):
            for key, v in f(b).items():
                columns[j][("z", ci, key)] = v
    extra = []
    for mi, (g, W) in enumerate(inside):
        w_basis = W.basis if isinstance(W, Span) else list(W)
        for j, b in enumerate(basis):
            for key, v in g(b).items():
                columns[j][("m", mi, key)] = v
        for w in w_basis:
            extra.append({("m", mi, key): -v for key, v in w.items()})
    cmap = ColumnMap(columns + extra)
    kernel = cmap.kernel()
    nb = len(basis)
    vectors = [combine(basis, {k: c for k, c in vec.items() if k < nb}) for vec in kernel]
    return Span(vectors).basis


def preimage_solve(basis, f, target: dict):
    """Echelon-canonical coefficients ``x`` with ``f(sum x_k basis[k]) = target``.

    Returns the combined vector, or raises :class:`InfeasibleSystem`.
    """
    cmap = ColumnMap([f(b) for b in basis])
    coeffs = cmap.solve(target)
    return combine(basis, coeffs)


def unit_vectors(labels):
    one = GaussianRational(1)
    return [{key: one} for key in labels]

