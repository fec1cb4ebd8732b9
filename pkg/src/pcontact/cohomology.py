"""Invariant Frölicher pages E1 and E2.

E2 is computed from the closed/exact description

    Z2^{p,q} = {u : delbar u = 0, del u in Im delbar}
    C2^{p,q} = {del z + delbar x : delbar z = 0}

so ``dim E2 = dim Z2 - dim C2``.  Spaces are cached on the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraSpec
from .exterior import Form, del_, delbar, monomials
from .spaces import Span, solution_space, unit_vectors

__all__ = [
    "INVARIANT_COMPLEX",
    "PageReport",
    "delbar_image",
    "delbar_kernel",
    "del_image",
    "z2_space",
    "c2_span",
    "e1_dim",
    "e2_dim",
    "e1_dims",
    "e2_dims",
    "page_report",
    "z2_member",
    "c2_member",
    "D1ClassReport",
    "check_d1_nonzero",
    "ddbar_inclusion",
]

INVARIANT_COMPLEX = "invariant complex"


def _in_range(a: AlgebraSpec, p: int, q: int) -> bool:
    return 0 <= p <= a.n and 0 <= q <= a.n


def _cached(a: AlgebraSpec, key, build):
    cache = a.cache
    hit = cache.get(key)
    if hit is None:
        hit = build()
        cache[key] = hit
    return hit


def _basis(a, p, q):
    return unit_vectors(monomials(a.n, p, q)) if _in_range(a, p, q) else []


def _db(a):
    return lambda v: delbar(Form._make(a, v)).terms


def _dl(a):
    return lambda v: del_(Form._make(a, v)).terms


def delbar_image(a: AlgebraSpec, p: int, q: int) -> Span:
    """``delbar(A^{p,q})`` as a subspace of ``A^{p,q+1}``."""
    return _cached(a, ("im_delbar", p, q), lambda: Span(_db(a)(v) for v in _basis(a, p, q)))


def del_image(a: AlgebraSpec, p: int, q: int) -> Span:
    """``del(A^{p,q})`` as a subspace of ``A^{p+1,q}``."""
    return _cached(a, ("im_del", p, q), lambda: Span(_dl(a)(v) for v in _basis(a, p, q)))


def delbar_kernel(a: AlgebraSpec, p: int, q: int) -> list:
    return _cached(a, ("ker_delbar", p, q), lambda: solution_space(_basis(a, p, q), zero=[_db(a)]))


def z2_space(a: AlgebraSpec, p: int, q: int) -> list:
    """Basis of the E2-closed invariant (p,q)-forms."""

    def build():
        if not _in_range(a, p, q):
            return []
        return solution_space(_basis(a, p, q), zero=[_db(a)], inside=[(_dl(a), delbar_image(a, p + 1, q - 1))])

    return _cached(a, ("z2", p, q), build)


def c2_span(a: AlgebraSpec, p: int, q: int) -> Span:
    """The E2-exact invariant (p,q)-forms."""

    def build():
        dl = _dl(a)
        vectors = [dl(z) for z in delbar_kernel(a, p - 1, q)] if p >= 1 else []
        return Span(vectors) + delbar_image(a, p, q - 1)

    return _cached(a, ("c2", p, q), build)


def e1_dim(a: AlgebraSpec, p: int, q: int) -> int:
    if not _in_range(a, p, q):
        return 0
    return len(delbar_kernel(a, p, q)) - delbar_image(a, p, q - 1).dim


def e2_dim(a: AlgebraSpec, p: int, q: int) -> int:
    if not _in_range(a, p, q):
        return 0
    return len(z2_space(a, p, q)) - c2_span(a, p, q).dim


def _table(a, f, bidegrees):
    if bidegrees is None:
        bidegrees = [(p, q) for p in range(a.n + 1) for q in range(a.n + 1)]
    return {(p, q): f(a, p, q) for p, q in bidegrees}


def e1_dims(a: AlgebraSpec, bidegrees=None) -> dict:
    return _table(a, e1_dim, bidegrees)


def e2_dims(a: AlgebraSpec, bidegrees=None) -> dict:
    return _table(a, e2_dim, bidegrees)


@dataclass
class PageReport:
    algebra: str
    e1: dict
    e2: dict
    label: str = INVARIANT_COMPLEX
    flags: dict = field(default_factory=dict)

    @property
    def degenerates_at_e1(self) -> bool:
        return self.e1 == self.e2

    def totals(self, page: dict) -> dict:
        out: dict = {}
        for (p, q), v in page.items():
            out[p + q] = out.get(p + q, 0) + v
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        fmt = lambda t: {f"{p},{q}": v for (p, q), v in sorted(t.items())}
        return {
            "algebra": self.algebra,
            "label": self.label,
            "E1": fmt(self.e1),
            "E2": fmt(self.e2),
            "degenerates_at_E1": self.degenerates_at_e1,
            "flags": {f"{p},{q}": v for (p, q), v in sorted(self.flags.items())},
        }

    def text(self) -> str:
        n = max((p for p, _ in self.e1), default=0)
        lines = [f"Frölicher pages of {self.algebra} ({self.label})"]
        for name, page in (("E1", self.e1), ("E2", self.e2)):
            lines.append(f"{name}: rows p = 0..{n}, columns q = 0..{n}")
            for p in range(n + 1):
                lines.append("  " + " ".join(f"{page.get((p, q), 0):4d}" for q in range(n + 1)))
        return "\n".join(lines)


def page_report(a: AlgebraSpec, bidegrees=None) -> PageReport:
    e1 = e1_dims(a, bidegrees)
    e2 = e2_dims(a, bidegrees)
    flags = {k: e2[k] <= e1[k] for k in e1}
    return PageReport(a.name, e1, e2, flags=flags)


# -- membership ---------------------------------------------------------------


def _homogeneous(u: Form):
    if not u:
        return None
    bideg = u.bidegree
    if bideg is None:
        raise ValueError("membership needs a homogeneous form")
    return bideg


def z2_member(u: Form) -> bool:
    """``delbar u = 0`` and ``del u`` is delbar-exact."""
    bideg = _homogeneous(u)
    if bideg is None:
        return True
    p, q = bideg
    if delbar(u):
        return False
    return delbar_image(u.algebra, p + 1, q - 1).contains(del_(u).terms) if q >= 1 else not del_(u)


def c2_member(u: Form) -> bool:
    bideg = _homogeneous(u)
    if bideg is None:
        return True
    return c2_span(u.algebra, *bideg).contains(u.terms)


# -- non-degeneration at E1 ---------------------------------------------------


@dataclass
class D1ClassReport:
    holds: bool
    p: int
    del_gamma: str
    bidegree_argument: str
    linear_check: bool
    e1_dim: int
    label: str = INVARIANT_COMPLEX

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_d1_nonzero(a: AlgebraSpec, g: Form) -> D1ClassReport:
    """``d1[Gamma] = [del Gamma]`` is nonzero in E1^{p+1,0}.

    On (p+1,0)-forms the delbar-exact space is zero for bidegree reasons, so
    the class vanishes exactly when ``del Gamma = 0``.  Both that argument and
    the explicit membership test are reported.
    """
    from .geometry import check_p_contact

    cert = check_p_contact(a, g)
    if not cert.valid:
        raise ValueError("Gamma is not a p-contact structure: " + ", ".join(cert.failures))
    p = cert.p
    dg = del_(g)
    exact = delbar_image(a, p + 1, -1)  # empty basis: nothing maps into (p+1, 0)
    linear_nonzero = not exact.contains(dg.terms)
    bidegree_nonzero = bool(dg)
    return D1ClassReport(
        holds=linear_nonzero and bidegree_nonzero,
        p=p,
        del_gamma=str(dg),
        bidegree_argument=f"Im delbar in bidegree ({p + 1},0) is zero, and del Gamma {'≠' if dg else '='} 0",
        linear_check=linear_nonzero,
        e1_dim=e1_dim(a, p + 1, 0),
    )


def ddbar_inclusion(a: AlgebraSpec, p: int, q: int) -> dict:
    """Compare ``Im(del delbar)`` with ``del(Z2^{p-1,q})`` inside ``A^{p,q}``.

    The inclusion of the first in the second always holds; equality is the
    invariant-level page-1 indicator and is reported, never assumed.
    """
    dl = _dl(a)
    ddb = Span(del_(delbar(Form._make(a, v))).terms for v in _basis(a, p - 1, q - 1))
    dz2 = Span(dl(z) for z in z2_space(a, p - 1, q)) if p >= 1 else Span()
    inclusion = dz2.contains_all(ddb.basis)
    return {
        "bidegree": (p, q),
        "dim_im_ddbar": ddb.dim,
        "dim_del_Z2": dz2.dim,
        "inclusion": inclusion,
        "equality": inclusion and ddb.dim == dz2.dim,
        "label": INVARIANT_COMPLEX,
    }
