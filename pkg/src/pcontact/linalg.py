"""Exact Gauss-Jordan elimination over the Gaussian rationals.

Rows are held sparsely (``{column: value}``) because every matrix in this
package comes from a sparse operator on exterior-algebra monomials.  Rows are
processed in the order given and the pivot of each new row is its first
nonzero column, so the reduced echelon form is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import GaussianRational, as_gq

__all__ = [
    "LinearSystem",
    "InfeasibleSystem",
    "Echelon",
    "solve",
    "nullspace",
    "particular",
    "membership",
    "rank",
    "span_basis",
    "in_span",
    "ColumnMap",
]


class InfeasibleSystem(ValueError):
    """Raised by :func:`particular` when ``A x = b`` has no solution.

    ``certificate`` is a left-null vector ``y`` (``y^T A = 0``) with
    ``y^T b != 0``, given as a dense list over the rows of ``A``.
    """

    def __init__(self, certificate, message="linear system is infeasible"):
        super().__init__(message)
        self.certificate = certificate


def _sparse(row):
    if isinstance(row, dict):
        return {c: as_gq(v) for c, v in row.items() if v}
    return {c: as_gq(v) for c, v in enumerate(row) if v}


@dataclass(frozen=True)
class LinearSystem:
    """``matrix`` is a list of rows, each a dense list or a ``{col: value}`` dict."""

    matrix: list
    ncols: int
    rhs: list | None = None

    @classmethod
    def from_dense(cls, matrix, rhs=None):
        ncols = len(matrix[0]) if matrix else 0
        return cls(matrix, ncols, rhs)

    def sparse_rows(self):
        return [_sparse(r) for r in self.matrix]


class Echelon:
    """Incremental reduced row echelon form.

    Rows may be added one at a time.  Each stored pivot row is normalised
    (pivot entry 1) and kept fully reduced against the other pivot rows.
    If ``track`` is set, each pivot row also records the combination of
    input rows that produced it (used for infeasibility certificates).
    """

    def __init__(self, ncols: int, track: bool = False):
        self.ncols = ncols
        self.track = track
        self.pivots: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}
        self.inconsistent = None
        self._count = 0

    def reduce(self, row: dict, combo: dict | None = None):
        """Reduce ``row`` against the current pivots (returns new dicts)."""
        row = dict(row)
        combo = dict(combo) if combo is not None else None
        for col in sorted(c for c in row if c in self.pivots):
            factor = row.get(col)
            if not factor:
                continue
            _axpy(row, -factor, self.pivots[col])
            if combo is not None:
                _axpy(combo, -factor, self.combos[col])
        return row, combo

    def add(self, row: dict, rhs=None):
        """Insert a row; returns the new pivot column or ``None`` if dependent.

        ``rhs`` (if given) is carried in column ``ncols``.
        """
        row = dict(row)
        if rhs is not None and rhs:
            row[self.ncols] = as_gq(rhs)
        combo = {self._count: GaussianRational(1)} if self.track else None
        self._count += 1
        row, combo = self.reduce(row, combo)
        lead = min((c for c in row if c < self.ncols), default=None)
        if lead is None:
            if row.get(self.ncols) and self.inconsistent is None:
                self.inconsistent = combo if combo is not None else {}
            return None
        inv = row[lead].inv()
        row = {c: v * inv for c, v in row.items()}
        if combo is not None:
            combo = {c: v * inv for c, v in combo.items()}
        for col, prow in self.pivots.items():
            factor = prow.get(lead)
            if factor:
                _axpy(prow, -factor, row)
                if combo is not None:
                    _axpy(self.combos[col], -factor, combo)
        self.pivots[lead] = row
        if combo is not None:
            self.combos[lead] = combo
        return lead

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, row: dict) -> bool:
        reduced, _ = self.reduce(row)
        return not any(c < self.ncols for c in reduced)

    def basis(self):
        """Pivot rows sorted by pivot column (the RREF rows)."""
        return [
            {c: v for c, v in self.pivots[p].items() if c < self.ncols}
            for p in sorted(self.pivots)
        ]


def _axpy(target: dict, a, source: dict):
    """target += a * source, dropping zeros."""
    for c, v in source.items():
        s = target.get(c)
        s = a * v if s is None else s + a * v
        if s:
            target[c] = s
        else:
            target.pop(c, None)


def _to_dense(vec: dict, n: int):
    zero = GaussianRational(0)
    return [vec.get(k, zero) for k in range(n)]


def nullspace(system: LinearSystem, dense: bool = True):
    """Reduced-echelon basis of ``{x : A x = 0}``.

    One basis vector per free column ``f``: ``x_f = 1``, the other free
    variables are 0 and pivot variables are read from the RREF.
    """
    ech = Echelon(system.ncols)
    for row in system.sparse_rows():
        ech.add(row)
    free = [c for c in range(system.ncols) if c not in ech.pivots]
    basis = []
    for f in free:
        vec = {f: GaussianRational(1)}
        for p, prow in ech.pivots.items():
            v = prow.get(f)
            if v:
                vec[p] = -v
        basis.append(_to_dense(vec, system.ncols) if dense else vec)
    return basis


def particular(system: LinearSystem, dense: bool = True):
    """Echelon-canonical solution of ``A x = rhs`` (free variables set to 0).

    Raises :class:`InfeasibleSystem` carrying a left-null certificate.
    """
    rows = system.sparse_rows()
    rhs = system.rhs if system.rhs is not None else [0] * len(rows)
    ech = Echelon(system.ncols, track=True)
    for row, b in zip(rows, rhs):
        ech.add(row, as_gq(b))
        if ech.inconsistent is not None:
            combo = ech.inconsistent
            cert = [combo.get(k, GaussianRational(0)) for k in range(len(rows))]
            raise InfeasibleSystem(cert)
    vec = {}
    for p, prow in ech.pivots.items():
        v = prow.get(system.ncols)
        if v:
            vec[p] = v
    return _to_dense(vec, system.ncols) if dense else vec


def rank(system: LinearSystem) -> int:
    ech = Echelon(system.ncols)
    for row in system.sparse_rows():
        ech.add(row)
    return ech.rank


def span_basis(vectors, ncols: int):
    """RREF basis (sparse rows) of the span of the given vectors."""
    ech = Echelon(ncols)
    for v in vectors:
        ech.add(_sparse(v))
    return ech.basis()


def in_span(vectors, v, ncols: int) -> bool:
    ech = Echelon(ncols)
    for w in vectors:
        ech.add(_sparse(w))
    return ech.contains(_sparse(v))


def membership(system: LinearSystem, v) -> bool:
    """Decide whether ``v`` lies in the column span of ``system.matrix``."""
    rows = system.sparse_rows()
    columns = [dict() for _ in range(system.ncols)]
    for r, row in enumerate(rows):
        for c, val in row.items():
            columns[c][r] = val
    return in_span(columns, v, len(rows))


def solve(system: LinearSystem, mode: str):
    """Dispatch to ``nullspace``, ``particular`` or ``membership``.

    For ``membership`` the vector to test is taken from ``system.rhs``.
    """
    if mode == "nullspace":
        return nullspace(system)
    if mode == "particular":
        return particular(system)
    if mode == "membership":
        return membership(system, system.rhs)
    raise ValueError(f"unknown solve mode {mode!r}")


class ColumnMap:
    """A linear map given by the images of basis vectors.

    ``columns[j]`` is a sparse dict ``{row_key: value}`` with arbitrary
    hashable row keys (typically exterior-algebra monomials).  This is how
    every operator on invariant forms is turned into a matrix.
    """

    def __init__(self, columns):
        self.columns = [dict(c) for c in columns]
        self.row_index: dict = {}
        for col in self.columns:
            for key in col:
                if key not in self.row_index:
                    self.row_index[key] = len(self.row_index)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def _index(self, key):
        idx = self.row_index.get(key)
        if idx is None:
            idx = self.row_index[key] = len(self.row_index)
        return idx

    def system(self, target: dict | None = None) -> LinearSystem:
        rows: list = [dict() for _ in self.row_index]
        for j, col in enumerate(self.columns):
            for key, v in col.items():
                rows[self.row_index[key]][j] = v
        rhs = None
        if target is not None:
            for key in target:
                if key not in self.row_index:
                    self._index(key)
                    rows.append({})
            rhs = [GaussianRational(0)] * len(rows)
            for key, v in target.items():
                rhs[self.row_index[key]] = v
        return LinearSystem(rows, self.ncols, rhs)

    def kernel(self):
        """Reduced-echelon kernel basis as sparse ``{col: value}`` dicts."""
        return nullspace(self.system(), dense=False)

    def rank(self) -> int:
        return rank(self.system())

    def solve(self, target: dict) -> dict:
        """Echelon-canonical preimage of ``target``; raises :class:`InfeasibleSystem`."""
        return particular(self.system(target), dense=False)

    def in_image(self, target: dict) -> bool:
        try:
            self.solve(target)
        except InfeasibleSystem:
            return False
        return True
