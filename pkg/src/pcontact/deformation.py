"""Essential horizontal deformations and the order-by-order Kuranishi recursion.

The recursion solves, for ``nu >= 2``,

    delbar psi_nu = 1/2 * sum_{mu=1}^{nu-1} [psi_mu, psi_{nu-mu}]

inside the invariant complex.  Odd orders are expected to have a vanishing
right-hand side; even orders are solved with a constantly vertical
solution.  Every step returns a :class:`StepCertificate` recording which of
these expectations held, so a run never silently assumes them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import del_image, z2_space
from .exterior import Form, VectorForm, bracket, del_, delbar, vcontract, vector_monomials, wedge
from .geometry import cy_form, kernel_F, kernel_G, predicates
from .linalg import ColumnMap, InfeasibleSystem
from .scalars import GaussianRational
from .spaces import Span, combine, solution_space, unit_vectors

__all__ = [
    "HorizontalSpace",
    "essential_horizontal_space",
    "horizontal_representative",
    "StepCertificate",
    "kuranishi_step",
    "DeformationSeries",
    "run_recursion",
    "MaurerCartanReport",
    "verify_maurer_cartan",
    "bracket_rhs",
    "second_order_identity",
    "contraction_exactness",
]

HALF = GaussianRational(Fraction(1, 2))


def _vf(a, q, terms) -> VectorForm:
    return VectorForm._make(a, q, dict(terms))


def _zero(a, q) -> VectorForm:
    return VectorForm._make(a, q, {})


# -- essential horizontal space ------------------------------------------------


@dataclass
class HorizontalSpace:
    """Invariant representatives of essential horizontal (0,1) classes."""

    dim: int
    basis: list
    closed_dim: int
    exact_dim: int
    label: str = "invariant-level"

    def to_dict(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "closed_dim": self.closed_dim,
            "exact_dim": self.exact_dim,
            "basis": [str(t) for t in self.basis],
        }


def _closed_horizontal(g: Form) -> list:
    a = g.algebra
    p = g.bidegree[0] if g else 0
    dg = del_(g)
    full = unit_vectors(vector_monomials(a.n, 1))
    z2 = Span(z2_space(a, p, 1))
    return solution_space(
        full,
        zero=[lambda v: _vf(a, 1, v).delbar().terms, lambda v: vcontract(_vf(a, 1, v), g).terms],
        inside=[(lambda v: vcontract(_vf(a, 1, v), dg).terms, z2)],
    )


def _exact_horizontal(g: Form) -> Span:
    """``delbar`` of invariant vector fields with values in the kernel of Gamma."""
    return Span(x.delbar().terms for x in kernel_F(g).basis)


def essential_horizontal_space(g: Form) -> HorizontalSpace:
    a = g.algebra
    closed = _closed_horizontal(g)
    exact = _exact_horizontal(g)
    reps = Span(closed).quotient_basis(exact)
    return HorizontalSpace(len(reps), [_vf(a, 1, v) for v in reps], len(closed), exact.dim)


def horizontal_representative(t: VectorForm, g: Form) -> VectorForm:
    """A constantly horizontal ``t - delbar(xi)`` with ``xi`` annihilating Gamma.

    Solves ``del(t -| dGamma) = del delbar(xi -| dGamma)`` for ``xi``;
    raises :class:`InfeasibleSystem` when no invariant ``xi`` exists.
    """
    a = g.algebra
    if t and not Span(_closed_horizontal(g)).contains(t.terms):
        raise ValueError(f"{t} is not an essential horizontal representative")
    dg = del_(g)
    target = del_(vcontract(t, dg)).terms
    if not target:
        return t
    F = kernel_F(g).basis
    cmap = ColumnMap([del_(delbar(vcontract(x, dg))).terms for x in F])
    coeffs = cmap.solve(target)
    xi = combine([dict(x.terms) for x in F], coeffs)
    return t - _vf(a, 0, xi).delbar()


# -- one step -----------------------------------------------------------------


def bracket_rhs(prior: list, nu: int) -> VectorForm:
    """``1/2 * sum_{mu=1}^{nu-1} [psi_mu, psi_{nu-mu}]`` (``prior[k]`` is ``psi_{k+1}``)."""
    a = prior[0].algebra
    total = _zero(a, 2)
    for mu in range(1, nu):
        x, y = _get(prior, mu), _get(prior, nu - mu)
        if x and y:
            total = total + bracket(x, y)
    return total * HALF


def _paired_rhs(prior: list, nu: int) -> VectorForm:
    """Same sum, using ``[x, y] = [y, x]`` to keep only ``mu <= nu - mu``."""
    a = prior[0].algebra
    total = _zero(a, 2)
    for mu in range(1, nu // 2 + 1):
        x, y = _get(prior, mu), _get(prior, nu - mu)
        if not (x and y):
            continue
        b = bracket(x, y)
        total = total + (b * HALF if 2 * mu == nu else b)
    return total


def _get(prior, mu):
    return prior[mu - 1] if 1 <= mu <= len(prior) else None


def second_order_identity(psi1: VectorForm, g: Form) -> bool:
    """``del([psi1, psi1] -| Gamma) = 0``."""
    return not del_(vcontract(bracket(psi1, psi1), g))


def contraction_exactness(psi: VectorForm, g: Form) -> bool:
    """``psi -| u_Gamma = del(-(psi -| Gamma) ^ Gamma)``."""
    return vcontract(psi, cy_form(g)) == del_(wedge(-vcontract(psi, g), g))


@dataclass
class StepCertificate:
    nu: int
    parity: str
    rhs: VectorForm
    paired_rhs_matches: bool
    method: str = ""
    residual_zero: bool = False
    odd_rhs_zero: bool | None = None
    vertical: bool = False
    constantly_vertical: bool = False
    contraction_exact: bool | None = None
    contraction_in_ker_del: bool = False
    contraction_in_im_del: bool = False
    obstructed: bool = False
    witness: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def matches_expected_pattern(self) -> bool:
        if self.obstructed or not self.residual_zero:
            return False
        if self.parity == "odd":
            return bool(self.odd_rhs_zero)
        return self.constantly_vertical and self.contraction_in_im_del

    def to_dict(self):
        return {
            "nu": self.nu,
            "parity": self.parity,
            "rhs": str(self.rhs),
            "paired_rhs_matches": self.paired_rhs_matches,
            "method": self.method,
            "residual_zero": self.residual_zero,
            "odd_rhs_zero": self.odd_rhs_zero,
            "vertical": self.vertical,
            "constantly_vertical": self.constantly_vertical,
            "contraction_exact": self.contraction_exact,
            "contraction_in_ker_del": self.contraction_in_ker_del,
            "contraction_in_im_del": self.contraction_in_im_del,
            "obstructed": self.obstructed,
            "witness": self.witness,
            "matches_expected_pattern": self.matches_expected_pattern,
            "notes": list(self.notes),
        }


def _solve_in(basis: list, a, rhs: VectorForm):
    """Echelon-canonical ``psi`` in ``span(basis)`` with ``delbar psi = rhs``."""
    cmap = ColumnMap([_vf(a, 1, b).delbar().terms for b in basis])
    coeffs = cmap.solve(rhs.terms)
    return _vf(a, 1, combine(basis, coeffs))


def _witness(a, rhs: VectorForm) -> dict:
    """Left-null certificate that ``rhs`` is not delbar-exact."""
    full = unit_vectors(vector_monomials(a.n, 1))
    cmap = ColumnMap([_vf(a, 1, b).delbar().terms for b in full])
    try:
        cmap.solve(rhs.terms)
    except InfeasibleSystem as exc:
        labels = {i: key for key, i in cmap.row_index.items()}
        return {
            str(_vf(a, 2, {labels[i]: GaussianRational(1)})): str(y)
            for i, y in enumerate(exc.certificate)
            if y
        }
    return {}


def kuranishi_step(nu: int, prior: list, g: Form):
    """Solve order ``nu`` given ``prior = [psi_1, ..., psi_{nu-1}]``.

    Returns ``(psi_nu, certificate)``; ``psi_nu`` is ``None`` when the
    right-hand side is not delbar-exact in the invariant complex.
    """
    if nu < 2 or len(prior) < nu - 1:
        raise ValueError("kuranishi_step needs nu >= 2 and all earlier terms")
    a = g.algebra
    prior = list(prior[: nu - 1])
    rhs = bracket_rhs(prior, nu)
    cert = StepCertificate(nu, "odd" if nu % 2 else "even", rhs, rhs == _paired_rhs(prior, nu))
    dg = del_(g)
    full = unit_vectors(vector_monomials(a.n, 1))
    contract_dg = lambda v: vcontract(_vf(a, 1, v), dg).terms
    del_contract_g = lambda v: del_(vcontract(_vf(a, 1, v), g)).terms

    psi = None
    if nu % 2:
        cert.odd_rhs_zero = not rhs
        if not rhs:
            psi, cert.method = _zero(a, 1), "zero right-hand side"
        else:
            cert.notes.append("odd-order right-hand side is nonzero")
    if psi is None:
        try:
            psi = _solve_in(solution_space(full, zero=[contract_dg]), a, rhs)
            cert.method = "vertical solve"
            if del_contract_g(psi.terms):
                psi = _ddbar_correct(psi, g)
                cert.method = "vertical solve + ddbar correction"
        except InfeasibleSystem:
            psi = None
        if psi is None:
            try:
                psi = _solve_in(solution_space(full, zero=[contract_dg, del_contract_g]), a, rhs)
                cert.method = "joint constantly vertical solve"
            except InfeasibleSystem:
                psi = None
        if psi is None:
            try:
                psi = _solve_in(full, a, rhs)
                cert.method = "unconstrained solve"
                cert.notes.append("no vertical solution exists at invariant level")
            except InfeasibleSystem:
                cert.obstructed = True
                cert.method = "obstructed at invariant level"
                cert.witness = _witness(a, rhs)
                return None, cert

    cert.residual_zero = psi.delbar() == rhs
    flags = predicates(psi, g)
    cert.vertical = flags.vertical
    cert.constantly_vertical = flags.constantly_vertical
    _contraction_checks(psi, g, cert)
    return psi, cert


def _ddbar_correct(psi: VectorForm, g: Form) -> VectorForm:
    """``psi - delbar(xi)`` with vertical ``xi`` and ``del delbar(xi -| Gamma) = del(psi -| Gamma)``."""
    a = g.algebra
    G = kernel_G(g).basis
    cmap = ColumnMap([del_(delbar(vcontract(x, g))).terms for x in G])
    coeffs = cmap.solve(del_(vcontract(psi, g)).terms)
    xi = combine([dict(x.terms) for x in G], coeffs)
    return psi - _vf(a, 0, xi).delbar()


def _contraction_checks(psi: VectorForm, g: Form, cert: StepCertificate):
    a = g.algebra
    w = vcontract(psi, cy_form(g))
    cert.contraction_in_ker_del = not del_(w)
    if cert.constantly_vertical:
        cert.contraction_exact = contraction_exactness(psi, g)
    if not w:
        cert.contraction_in_im_del = True
    elif cert.contraction_exact:
        cert.contraction_in_im_del = True
    else:
        p, q = w.bidegree
        cert.contraction_in_im_del = del_image(a, p - 1, q).contains(w.terms)


# -- the full run -------------------------------------------------------------


@dataclass
class DeformationSeries:
    psi: list
    steps: list
    terminated: bool
    obstructed: bool = False
    second_order: bool | None = None
    first_order: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.psi)

    @property
    def matches_expected_pattern(self) -> bool:
        return not self.obstructed and all(s.matches_expected_pattern for s in self.steps)

    def to_dict(self):
        return {
            "order": self.order,
            "terminated": self.terminated,
            "obstructed": self.obstructed,
            "psi": [str(p) for p in self.psi],
            "second_order_identity": self.second_order,
            "first_order": dict(self.first_order),
            "steps": [s.to_dict() for s in self.steps],
            "matches_expected_pattern": self.matches_expected_pattern,
        }


def _tail_vanishes(psi: list) -> bool:
    """All right-hand sides beyond the last computed order vanish.

    With ``N = len(psi)`` and ``psi_k = 0`` for ``k > N``, the right-hand side
    at order ``k`` only involves pairs with ``mu, k - mu <= N``; it suffices
    to check ``N < k <= 2N``.
    """
    n = len(psi)
    return all(not bracket_rhs(psi, k) for k in range(n + 1, 2 * n + 1))


def run_recursion(psi1: VectorForm, max_order: int, g: Form) -> DeformationSeries:
    """Iterate :func:`kuranishi_step` until termination or ``max_order``."""
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    flags = predicates(psi1, g)
    if not flags.constantly_horizontal:
        raise ValueError(f"psi1 = {psi1} is not constantly horizontal")
    psi = [psi1]
    first = {
        "constantly_horizontal": True,
        "delbar_closed": not psi1.delbar(),
        "contraction_in_ker_del": not del_(vcontract(psi1, cy_form(g))),
    }
    series = DeformationSeries(psi, [], False, first_order=first)
    if psi1:
        series.second_order = second_order_identity(psi1, g)
    if not psi1:
        series.terminated = True
        return series
    while not _tail_vanishes(psi):
        if len(psi) >= max_order:
            return series
        nu = len(psi) + 1
        nxt, cert = kuranishi_step(nu, psi, g)
        series.steps.append(cert)
        if nxt is None:
            series.obstructed = True
            return series
        psi.append(nxt)
    series.terminated = True
    return series


# -- Maurer-Cartan --------------------------------------------------------------


@dataclass
class MaurerCartanReport:
    exact: bool
    label: str
    orders_checked: int
    residuals: dict

    @property
    def holds(self) -> bool:
        return all(not r for r in self.residuals.values())

    def to_dict(self):
        return {
            "label": self.label,
            "holds": self.holds,
            "orders_checked": self.orders_checked,
            "residuals": {str(k): str(v) for k, v in sorted(self.residuals.items())},
        }


def verify_maurer_cartan(series: DeformationSeries, g: Form | None = None) -> MaurerCartanReport:
    """Compare ``delbar psi(t)`` with ``1/2 [psi(t), psi(t)]`` coefficientwise in ``t``.

    A terminated series is checked at every order where either side can be
    nonzero (up to ``2N``); otherwise only up to ``N`` and labelled truncated.
    """
    psi = series.psi
    if not psi:
        return MaurerCartanReport(True, "exact", 0, {})
    a = psi[0].algebra
    n = len(psi)
    top = 2 * n if series.terminated else n
    residuals = {}
    for k in range(1, top + 1):
        lhs = psi[k - 1].delbar() if k <= n else _zero(a, 2)
        rhs = bracket_rhs(psi, k) if k >= 2 else _zero(a, 2)
        residuals[k] = lhs - rhs
    label = "exact" if series.terminated else "truncated"
    return MaurerCartanReport(series.terminated, label, top, residuals)
