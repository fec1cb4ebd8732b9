"""Nilpotent complex Lie algebras given by structure equations.

An algebra of complex dimension ``n`` is described by the differentials of a
holomorphic coframe ``phi1..phin``::

    d phi^k = sum_{i<j} A^k_ij phi^i ^ phi^j + sum_{i,j} B^k_ij phi^i ^ phi~j

The differentials of the conjugate generators are always obtained by
conjugation.  Multi-indices are stored as a pair ``(I, J)`` of sorted tuples:
``I`` holomorphic, ``J`` antiholomorphic, with every holomorphic factor placed
before every antiholomorphic one.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field

from .scalars import as_gq

__all__ = [
    "AlgebraSpec",
    "ValidationReport",
    "AlgebraError",
    "validate",
    "bracket_table",
    "frame_bracket",
    "torus",
]


class AlgebraError(ValueError):
    """Raised when structure equations violate an algebra invariant."""


def _conj_terms(terms: dict) -> dict:
    out = {}
    for (I, J), c in terms.items():
        sign = -1 if (len(I) * len(J)) % 2 else 1
        out[(J, I)] = c.conj() * sign
    return out


class AlgebraSpec:
    """Immutable structure equations of a complex Lie algebra.

    ``dphi`` maps each generator index ``k`` (1-based) to a dict of
    two-form terms ``{(I, J): coefficient}``.  Generators with zero
    differential may be omitted.
    """

    __slots__ = ("name", "n", "dphi", "_cache")

    def __init__(self, name: str, n: int, dphi: dict | None = None):
        if n < 1:
            raise AlgebraError("dimension must be positive")
        clean = {}
        for k, terms in (dphi or {}).items():
            if not 1 <= k <= n:
                raise AlgebraError(f"generator phi{k} out of range for dim {n}")
            t = {}
            for (I, J), c in terms.items():
                I, J = tuple(I), tuple(J)
                if len(I) + len(J) != 2:
                    raise AlgebraError(f"d phi{k} must be a 2-form")
                if any(not 1 <= x <= n for x in I + J):
                    raise AlgebraError(f"index out of range in d phi{k}")
                if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
                    raise AlgebraError(f"unsorted or repeated indices in d phi{k}")
                c = as_gq(c)
                if c:
                    t[(I, J)] = c
            if t:
                clean[k] = t
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dphi", clean)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraSpec is immutable")

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self is other or (self.n == other.n and self.dphi == other.dphi)

    def __hash__(self):
        return hash((self.n, tuple(sorted((k, tuple(sorted(t.items(), key=str))) for k, t in self.dphi.items()))))

    def __repr__(self):
        return f"AlgebraSpec(name={self.name!r}, n={self.n})"

    def renamed(self, name: str) -> "AlgebraSpec":
        return AlgebraSpec(name, self.n, self.dphi)

    # -- structure constants --------------------------------------------
    @property
    def A(self) -> dict:
        """``{k: {(i, j): A^k_ij}}`` for the (2,0) parts, ``i < j``."""
        return {
            k: {I: c for (I, J), c in t.items() if len(I) == 2}
            for k, t in self.dphi.items()
            if any(len(I) == 2 for (I, J) in t)
        }

    @property
    def B(self) -> dict:
        """``{k: {(i, j): B^k_ij}}`` for the (1,1) parts ``phi^i ^ phi~j``."""
        return {
            k: {(I[0], J[0]): c for (I, J), c in t.items() if len(I) == 1}
            for k, t in self.dphi.items()
            if any(len(I) == 1 for (I, J) in t)
        }

    @property
    def parallelisable(self) -> bool:
        return all(len(I) == 2 for t in self.dphi.values() for (I, J) in t)

    @property
    def rational(self) -> bool:
        return all(c.is_real() for t in self.dphi.values() for c in t.values())

    def gen_d(self, k: int, anti: bool = False) -> dict:
        """Terms of ``d phi^k`` (or ``d phi~k`` when ``anti``)."""
        key = ("gen", k, anti)
        cached = self._cache.get(key)
        if cached is None:
            terms = self.dphi.get(k, {})
            cached = _conj_terms(terms) if anti else dict(terms)
            self._cache[key] = cached
        return cached

    def gen_part(self, k: int, anti: bool, part: str) -> dict:
        """The ``part`` (``"d"``, ``"del"`` or ``"delbar"``) of a generator's differential.

        For a holomorphic generator of bidegree (1,0), ``del`` is the (2,0)
        component and ``delbar`` the (1,1) component; for an antiholomorphic
        one they are the (1,1) and (0,2) components.
        """
        key = ("part", k, anti, part)
        cached = self._cache.get(key)
        if cached is None:
            full = self.gen_d(k, anti)
            if part == "d":
                cached = full
            else:
                p0, q0 = (0, 1) if anti else (1, 0)
                target = (p0 + 1, q0) if part == "del" else (p0, q0 + 1)
                cached = {m: c for m, c in full.items() if (len(m[0]), len(m[1])) == target}
            self._cache[key] = cached
        return cached

    @property
    def cache(self) -> dict:
        return self._cache


def torus(n: int, name: str | None = None) -> AlgebraSpec:
    return AlgebraSpec(name or f"torus{n}", n, {})


# -- validation ---------------------------------------------------------


@dataclass
class ValidationReport:
    """Outcome of :func:`validate`: one boolean per invariant plus messages."""

    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"kind": "algebra", "valid": self.valid, "checks": dict(self.checks), "failures": list(self.failures)}


def validate(a: AlgebraSpec) -> ValidationReport:
    """Check integrability, d^2 = 0 and the nilpotency filtration."""
    from .exterior import Form, d

    report = ValidationReport()

    bad02 = [k for k, t in sorted(a.dphi.items()) if any(len(J) == 2 for (I, J) in t)]
    report.checks["integrability"] = not bad02
    for k in bad02:
        report.failures.append(f"(0,2) component in d phi{k}")

    d2_bad = []
    for k in range(1, a.n + 1):
        for anti in (False, True):
            dk = Form(a, a.gen_d(k, anti))
            if d(dk):
                d2_bad.append(f"phi~{k}" if anti else f"phi{k}")
    report.checks["d2"] = not d2_bad
    for g in d2_bad:
        report.failures.append(f"d² ≠ 0 on {g}")

    graph = {
        k: {x for (I, J) in a.dphi.get(k, {}) for x in I + J}
        for k in range(1, a.n + 1)
    }
    try:
        order = tuple(graphlib.TopologicalSorter(graph).static_order())
        report.checks["nilpotency"] = True
        report.checks["filtration_order"] = list(order)
    except graphlib.CycleError as exc:
        cycle = exc.args[1]
        report.checks["nilpotency"] = False
        report.failures.append(
            "nilpotency filtration fails: cycle " + " -> ".join(f"phi{k}" for k in cycle)
        )
    return report


# -- frame brackets -----------------------------------------------------


def bracket_table(a: AlgebraSpec) -> dict:
    """``{(i, j): {k: c^k_ij}}`` for all ordered pairs with a nonzero bracket.

    With the convention ``d alpha(X, Y) = X alpha(Y) - Y alpha(X) - alpha([X, Y])``
    one gets ``[e_i, e_j] = -sum_k A^k_ij e_k``.
    """
    if not a.parallelisable:
        raise AlgebraError(
            "frame brackets need a parallelisable algebra: with (1,1) terms in d the "
            "frame fields e_k are not holomorphic"
        )
    table: dict = {}
    for k, terms in a.A.items():
        for (i, j), c in terms.items():
            table.setdefault((i, j), {})[k] = -c
            table.setdefault((j, i), {})[k] = c
    return {key: table[key] for key in sorted(table)}


def frame_bracket(a: AlgebraSpec, i: int, j: int):
    """``[e_i, e_j]`` as a vector field (a :class:`~pcontact.exterior.VectorForm` with q = 0)."""
    from .exterior import VectorForm

    if not (1 <= i <= a.n and 1 <= j <= a.n):
        raise AlgebraError("frame index out of range")
    coeffs = bracket_table(a).get((i, j), {})
    return VectorForm(a, 0, {(k, ()): c for k, c in coeffs.items()})
