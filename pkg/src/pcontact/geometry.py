"""Contact and symplectic certificates, the kernels of Gamma and dGamma,
horizontality predicates, directional properties and symbolic
non-existence arguments.

Everything here is evaluated on invariant forms.  Quantified statements
("for every theta ... there is xi ...") become finite linear-algebra checks
and every such report carries the label ``"invariant-level"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import AlgebraError, AlgebraSpec
from .cohomology import delbar_image, z2_space
from .exterior import (
    Form,
    VectorForm,
    bracket,
    del_,
    delbar,
    invert_contraction,
    lieT,
    monomials,
    vcontract,
    vector_monomials,
    vf_bracket,
    wedge,
)
from .poly import Poly
from .scalars import GaussianRational
from .spaces import Span, combine, solution_space, unit_vectors

__all__ = [
    "INVARIANT_LEVEL",
    "ContactCertificate",
    "SymplecticCertificate",
    "Subspace",
    "check_p_contact",
    "check_s_symplectic",
    "cy_form",
    "cy_invert",
    "kernel_F",
    "kernel_G",
    "kernel_of_form",
    "SplittingReport",
    "splitting_checks",
    "IntegrabilityReport",
    "kernel_integrability",
    "g_integrability",
    "Predicates",
    "predicates",
    "DirectionalReport",
    "directional_properties",
    "NonExistenceReport",
    "no_invariant_contact",
    "no_invariant_symplectic",
    "vform",
    "vterms",
]

INVARIANT_LEVEL = "invariant-level"


def vform(a: AlgebraSpec, q: int, terms: dict) -> VectorForm:
    return VectorForm._make(a, q, dict(terms))


def vterms(t: VectorForm) -> dict:
    return dict(t.terms)


def _require_gq(u: Form, what: str):
    for c in u.terms.values():
        if not isinstance(c, GaussianRational):
            raise TypeError(f"{what} must have Gaussian-rational coefficients")


# -- certificates -------------------------------------------------------------


@dataclass
class ContactCertificate:
    valid: bool
    p: int
    top_coefficient: GaussianRational
    failures: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": "p-contact",
            "valid": self.valid,
            "p": self.p,
            "top_coefficient": str(self.top_coefficient),
            "checks": _stringify(self.checks),
            "failures": list(self.failures),
        }


@dataclass
class SymplecticCertificate:
    valid: bool
    s: int
    top_coefficient: GaussianRational
    failures: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def s_even(self) -> bool:
        return self.s % 2 == 0

    def to_dict(self) -> dict:
        return {
            "kind": "s-symplectic",
            "valid": self.valid,
            "s": self.s,
            "s_parity": "even" if self.s_even else "odd",
            "top_coefficient": str(self.top_coefficient),
            "checks": _stringify(self.checks),
            "failures": list(self.failures),
        }


def _stringify(obj):
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return str(obj)


def check_p_contact(a: AlgebraSpec, g: Form) -> ContactCertificate:
    """Certificate for ``g`` being a holomorphic p-contact structure, ``n = 2p+1``.

    Raises ``ValueError`` when ``n`` is even or ``g`` is not a (p,0)-form.
    """
    if a.n % 2 == 0:
        raise ValueError(f"n must be odd for a p-contact structure (n = {a.n})")
    p = (a.n - 1) // 2
    if g.algebra != a:
        raise AlgebraError("form does not live on the given algebra")
    _require_gq(g, "Gamma")
    if g and g.bidegree != (p, 0):
        raise ValueError(f"Gamma must be a ({p},0)-form on a {a.n}-dimensional algebra")
    dg = del_(g)
    c = wedge(g, dg).top_coefficient()
    # Second wedge path: dGamma first, then Gamma; (-1)^{p(p+1)} = 1.
    c_alt = wedge(dg, g).top_coefficient()
    failures = []
    closed = not delbar(g)
    if not closed:
        failures.append("∂̄Γ≠0")
    if p % 2 == 0:
        failures.append("p even")
    if not c:
        failures.append("c=0")
    if c != c_alt:
        failures.append("wedge paths disagree")
    checks = {"delbar_closed": closed, "p_odd": p % 2 == 1, "c_nonzero": bool(c), "c_second_path": c_alt}
    return ContactCertificate(not failures, p, c, failures, checks)


def check_s_symplectic(a: AlgebraSpec, w: Form) -> SymplecticCertificate:
    """Certificate for ``w`` being a holomorphic s-symplectic structure, ``n = 2s``."""
    if a.n % 2:
        raise ValueError(f"n must be even for an s-symplectic structure (n = {a.n})")
    s = a.n // 2
    if w.algebra != a:
        raise AlgebraError("form does not live on the given algebra")
    _require_gq(w, "Omega")
    if w and w.bidegree != (s, 0):
        raise ValueError(f"Omega must be an ({s},0)-form on a {a.n}-dimensional algebra")
    c = wedge(w, w).top_coefficient()
    closed = not delbar(w)
    failures = []
    if not closed:
        failures.append("∂̄Ω≠0")
    if not c:
        failures.append("c=0")
    checks = {"delbar_closed": closed, "c_nonzero": bool(c), "s_even": s % 2 == 0}
    return SymplecticCertificate(not failures, s, c, failures, checks)


def cy_form(g: Form) -> Form:
    """``Gamma ^ del Gamma``."""
    return wedge(g, del_(g))


def cy_invert(w: Form, u: Form, q: int | None = None) -> VectorForm:
    """The unique ``theta`` with ``theta -| u = w``."""
    if q is None:
        if not w:
            q = 0
        else:
            bideg = w.bidegree
            if bideg is None or bideg[0] != u.algebra.n - 1:
                raise ValueError("w must be an (n-1, q)-form")
            q = bideg[1]
    return invert_contraction(w, u, q)


# -- kernels ------------------------------------------------------------------


@dataclass
class Subspace:
    """Subspace of invariant vector fields with a reduced echelon basis."""

    algebra: AlgebraSpec
    basis: list

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coefficient_vectors(self) -> list:
        return [{lam: c for (lam, _), c in v.terms.items()} for v in self.basis]

    def span(self) -> Span:
        return Span([dict(v.terms) for v in self.basis])

    def contains(self, x: VectorForm) -> bool:
        return self.span().contains(dict(x.terms))

    def to_dict(self) -> dict:
        return {"rank": self.rank, "basis": [str(v) for v in self.basis]}


def kernel_of_form(beta: Form) -> Subspace:
    """``{xi : xi -| beta = 0}`` inside the invariant vector fields."""
    a = beta.algebra
    labels = [(k, ()) for k in range(1, a.n + 1)]
    basis = solution_space(unit_vectors(labels), zero=[lambda v: vcontract(vform(a, 0, v), beta).terms])
    return Subspace(a, [vform(a, 0, v) for v in basis])


def kernel_F(g: Form) -> Subspace:
    return kernel_of_form(g)


def kernel_G(g: Form) -> Subspace:
    return kernel_of_form(del_(g))


# -- splitting ----------------------------------------------------------------


@dataclass
class SplittingReport:
    rank_F: int
    rank_G: int
    direct: bool
    complementary: bool
    projector_F: dict | None = None
    projector_G: dict | None = None
    degree_checks: dict = field(default_factory=dict)
    label: str = INVARIANT_LEVEL

    @property
    def ok(self) -> bool:
        return self.direct and all(v.get("ok", True) for v in self.degree_checks.values())

    def decompose(self, theta: VectorForm):
        """``(theta_F, theta_G)`` with ``theta = theta_F + theta_G``."""
        if not self.complementary:
            raise ValueError("F + G is not all of the tangent space; no decomposition")
        return _project(theta, self.projector_F), _project(theta, self.projector_G)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "rank_F": self.rank_F,
            "rank_G": self.rank_G,
            "direct": self.direct,
            "complementary": self.complementary,
            "degree_checks": _stringify(self.degree_checks),
        }


def _project(theta: VectorForm, proj: dict) -> VectorForm:
    out: dict = {}
    for (lam, J), c in theta.terms.items():
        for mu, v in proj.get(lam, {}).items():
            key = (mu, J)
            s = out.get(key)
            s = c * v if s is None else s + c * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return VectorForm._make(theta.algebra, theta.q, out)


def _valued_basis(a: AlgebraSpec, sub: Subspace, q: int) -> list:
    """Basis of (0,q) vector forms with values in ``sub``: ``phi~J (x) f``."""
    out = []
    for J in combinations(range(1, a.n + 1), q):
        for f in sub.basis:
            out.append({(lam, J): c for (lam, _), c in f.terms.items()})
    return out


def _delbar_v(a, q):
    return lambda v: vform(a, q, v).delbar().terms


def splitting_checks(g: Form, degrees=(1,)) -> SplittingReport:
    """Direct-sum, decomposition and cohomology bookkeeping for F and G."""
    a = g.algebra
    F, G = kernel_F(g), kernel_G(g)
    both = Span([dict(v.terms) for v in F.basis + G.basis])
    direct = both.dim == F.rank + G.rank
    complementary = direct and both.dim == a.n
    report = SplittingReport(F.rank, G.rank, direct, complementary)
    if not complementary:
        return report

    # e_lam = sum x_f f + sum x_g g, solved column by column.
    from .linalg import ColumnMap

    cols = [dict(v.terms) for v in F.basis + G.basis]
    cmap = ColumnMap(cols)
    pF: dict = {}
    pG: dict = {}
    for lam in range(1, a.n + 1):
        x = cmap.solve({(lam, ()): GaussianRational(1)})
        partF = combine(cols, {k: c for k, c in x.items() if k < F.rank})
        partG = combine(cols, {k: c for k, c in x.items() if k >= F.rank})
        pF[lam] = {mu: c for (mu, _), c in partF.items()}
        pG[lam] = {mu: c for (mu, _), c in partG.items()}
    report.projector_F, report.projector_G = pF, pG

    if a.parallelisable:
        for q in degrees:
            report.degree_checks[q] = _cohomology_split(a, F, G, report, q)
    return report


def _cohomology_split(a, F, G, report, q):
    db = _delbar_v(a, q)
    db_prev = _delbar_v(a, q - 1)
    full = unit_vectors(vector_monomials(a.n, q))
    Z = solution_space(full, zero=[db])
    B = Span(db_prev(v) for v in unit_vectors(vector_monomials(a.n, q - 1))) if q >= 1 else Span()
    FV, GV = _valued_basis(a, F, q), _valued_basis(a, G, q)
    ZF = solution_space(FV, zero=[db])
    ZG = solution_space(GV, zero=[db])
    BF = Span(db_prev(v) for v in _valued_basis(a, F, q - 1)) if q >= 1 else Span()
    BG = Span(db_prev(v) for v in _valued_basis(a, G, q - 1)) if q >= 1 else Span()

    closed_ok = True
    exact_ok = True
    witness = None
    for z in Z:
        tF, tG = report.decompose(vform(a, q, z))
        if tF.delbar() or tG.delbar():
            closed_ok = False
            witness = witness or str(vform(a, q, z))
    for b in B.basis:
        tF, tG = report.decompose(vform(a, q, b))
        if not BF.contains(tF.terms) or not BG.contains(tG.terms):
            exact_ok = False
            witness = witness or str(vform(a, q, b))

    h_T = len(Z) - B.dim
    h_F = len(ZF) - BF.dim
    h_G = len(ZG) - BG.dim
    targets = BF + BG
    rank_phi = (targets + Span(Z)).dim - targets.dim
    injective = rank_phi == h_T
    surjective = rank_phi == h_F + h_G
    ok = closed_ok and exact_ok and injective and surjective and h_T == h_F + h_G
    return {
        "ok": ok,
        "closed_equivalence": closed_ok,
        "exact_equivalence": exact_ok,
        "dim_H_T": h_T,
        "dim_H_F": h_F,
        "dim_H_G": h_G,
        "rank_Phi": rank_phi,
        "Phi_injective": injective,
        "Phi_surjective": surjective,
        "witness": witness,
    }


# -- integrability of the kernel of dGamma -----------------------------------


@dataclass
class IntegrabilityReport:
    holds: bool
    rank: int
    witness: tuple | None = None

    def to_dict(self):
        return {"holds": self.holds, "rank": self.rank, "witness": None if self.witness is None else [str(w) for w in self.witness]}


def kernel_integrability(beta: Form) -> IntegrabilityReport:
    """Is ``ker(xi -> xi -| beta)`` closed under brackets?  Checked on basis pairs."""
    K = kernel_of_form(beta)
    span = K.span()
    for i, x in enumerate(K.basis):
        for y in K.basis[i + 1:]:
            br = vf_bracket(x, y)
            if not span.contains(br.terms):
                return IntegrabilityReport(False, K.rank, (x, y, br))
    return IntegrabilityReport(True, K.rank)


def g_integrability(g: Form) -> IntegrabilityReport:
    if not g.algebra.parallelisable:
        raise AlgebraError("g_integrability needs a parallelisable algebra")
    return kernel_integrability(del_(g))


# -- predicates ---------------------------------------------------------------


@dataclass
class Predicates:
    horizontal: bool
    vertical: bool
    constantly_horizontal: bool
    constantly_vertical: bool
    consistent: bool = True

    def to_dict(self):
        return dict(self.__dict__)


def predicates(t: VectorForm, g: Form) -> Predicates:
    """Horizontality flags; both equivalent formulations are evaluated and compared."""
    dg = del_(g)
    tg = vcontract(t, g)
    tdg = vcontract(t, dg)
    horizontal = not tg
    vertical = not tdg
    ch_lie = horizontal and not lieT(t, dg)
    ch_del = horizontal and not del_(tdg)
    cv_lie = vertical and not lieT(t, g)
    cv_del = vertical and not del_(tg)
    consistent = ch_lie == ch_del and cv_lie == cv_del
    if not consistent:
        raise AssertionError(f"Lie-derivative and del formulations disagree for {t}")
    return Predicates(horizontal, vertical, ch_del, cv_del, consistent)


# -- directional properties ---------------------------------------------------


@dataclass
class DirectionalReport:
    entries: dict = field(default_factory=dict)
    label: str = INVARIANT_LEVEL

    @property
    def all_hold(self) -> bool:
        return all(e["holds"] for e in self.entries.values())

    def to_dict(self):
        return {"label": self.label, "entries": _stringify(self.entries)}


def _forms_basis(n, p, q):
    if p < 0 or q < 0 or p > n or q > n:
        return []
    return unit_vectors(monomials(n, p, q))


def _image_delbar(a, p, q) -> Span:
    """Span of delbar(A^{p,q}) inside A^{p,q+1}."""
    return delbar_image(a, p, q)


def ch_space(g: Form) -> list:
    """Constantly horizontal (0,1) vector forms (sparse basis)."""
    a = g.algebra
    dg = del_(g)
    full = unit_vectors(vector_monomials(a.n, 1))
    return solution_space(
        full,
        zero=[lambda v: vcontract(vform(a, 1, v), g).terms, lambda v: del_(vcontract(vform(a, 1, v), dg)).terms],
    )


def cv_space(g: Form) -> list:
    """Constantly vertical (0,1) vector forms (sparse basis)."""
    a = g.algebra
    dg = del_(g)
    full = unit_vectors(vector_monomials(a.n, 1))
    return solution_space(
        full,
        zero=[lambda v: vcontract(vform(a, 1, v), dg).terms, lambda v: del_(vcontract(vform(a, 1, v), g)).terms],
    )


def _inclusion_entry(a, source_basis, T1, target_vectors):
    target = Span(target_vectors)
    witness = None
    for b in source_basis:
        img = T1(b)
        if not target.contains(img):
            witness = str(vform(a, 1, b))
            break
    return {"holds": witness is None, "source_dim": len(source_basis), "target_rank": target.dim, "witness": witness}


def directional_properties(g: Form) -> DirectionalReport:
    """The directional page-1 and integrability-type properties of ``g``.

    Names: ``F-directional``, ``G-directional``, ``vertical-3a``,
    ``vertical-3b``, ``cohomologically-integrable`` and
    ``constantly-maximally-non-integrable``.
    """
    a = g.algebra
    if not a.parallelisable:
        raise AlgebraError("directional properties need a parallelisable algebra")
    n = a.n
    p = g.bidegree[0] if g else 0
    dg = del_(g)
    V = lambda v: vform(a, 1, v)
    full = unit_vectors(vector_monomials(n, 1))
    F, G = kernel_F(g), kernel_G(g)
    report = DirectionalReport()

    contract_g = lambda v: vcontract(V(v), g).terms
    contract_dg = lambda v: vcontract(V(v), dg).terms
    delbar_v = _delbar_v(a, 1)

    # F-directional page-1 property.
    z2_p1 = Span(z2_space(a, p, 1))
    S1 = solution_space(full, zero=[contract_g, delbar_v], inside=[(contract_dg, z2_p1)])
    T1 = lambda v: del_(vcontract(V(v), dg)).terms
    targets = [del_(delbar(vcontract(x, dg))).terms for x in F.basis]
    report.entries["F-directional"] = _inclusion_entry(a, S1, T1, targets)

    # G-directional page-1 property.
    z2_pm1 = Span(z2_space(a, p - 1, 1)) if p >= 1 else Span()
    S2 = solution_space(full, zero=[contract_dg, delbar_v], inside=[(contract_g, z2_pm1)])
    T2 = lambda v: del_(vcontract(V(v), g)).terms
    targets_g = [del_(delbar(vcontract(x, g))).terms for x in G.basis]
    report.entries["G-directional"] = _inclusion_entry(a, S2, T2, targets_g)

    # Vertical property (3a).
    S3 = solution_space(full, zero=[contract_dg, lambda v: delbar(del_(vcontract(V(v), g))).terms])
    report.entries["vertical-3a"] = _inclusion_entry(a, S3, T2, targets_g)

    # Vertical property (3b): span of del(theta -| (theta' -| Gamma)) over
    # constantly vertical pairs, intersected with ker delbar, inside Im delbar.
    cv = cv_space(g)
    W = Span(del_(vcontract(V(x), vcontract(V(y), g))).terms for x in cv for y in cv)
    closed_in_W = solution_space(W.basis, zero=[lambda u: delbar(Form._make(a, u)).terms])
    im = _image_delbar(a, p - 1, 1) if p >= 1 else Span()
    wit = next((str(Form._make(a, u)) for u in closed_in_W if not im.contains(u)), None)
    report.entries["vertical-3b"] = {
        "holds": wit is None,
        "cv_dim": len(cv),
        "span_dim": W.dim,
        "closed_dim": len(closed_in_W),
        "witness": wit,
    }

    # Cohomological integrability in bidegree (0,1).
    im_pm1_0 = _image_delbar(a, p - 1, 0) if p >= 1 else Span()
    S4 = solution_space(full, zero=[delbar_v], inside=[(contract_g, im_pm1_0)])
    im_pm1_1 = _image_delbar(a, p - 1, 1) if p >= 1 else Span()
    wit = None
    for i, x in enumerate(S4):
        for y in S4[i:]:
            br = vcontract(bracket(V(x), V(y)), g)
            if not im_pm1_1.contains(br.terms):
                wit = f"[{V(x)}, {V(y)}]"
                break
        if wit:
            break
    report.entries["cohomologically-integrable"] = {"holds": wit is None, "source_dim": len(S4), "witness": wit}

    # Constantly maximally non-integrable: brackets of constantly horizontal
    # forms are vertical.
    ch = ch_space(g)
    wit = None
    for i, x in enumerate(ch):
        for y in ch[i:]:
            if vcontract(bracket(V(x), V(y)), dg):
                wit = f"[{V(x)}, {V(y)}]"
                break
        if wit:
            break
    report.entries["constantly-maximally-non-integrable"] = {"holds": wit is None, "ch_dim": len(ch), "witness": wit}
    return report


# -- non-existence ------------------------------------------------------------


@dataclass
class NonExistenceReport:
    kind: str
    verdict: str
    steps: list = field(default_factory=list)
    note: str = ""

    def to_dict(self):
        return {"kind": self.kind, "verdict": self.verdict, "steps": [list(s) for s in self.steps], "note": self.note}


def _poly_form_str(u: Form) -> str:
    return str(u) if u else "≡ 0"


def no_invariant_contact(a: AlgebraSpec) -> NonExistenceReport:
    """Show symbolically that no invariant holomorphic 1-form is contact.

    With ``gamma = sum lam_i phi^i`` the form ``gamma ^ (del gamma)^p`` is
    expanded with polynomial coefficients; an identically zero result means
    no contact structure (every holomorphic 1-form is invariant on a
    parallelisable nilmanifold).
    """
    if not a.parallelisable:
        raise AlgebraError("the symbolic argument needs a parallelisable algebra")
    if a.n % 2 == 0:
        raise ValueError("contact structures need odd dimension")
    p = (a.n - 1) // 2
    gamma = Form._make(a, {((i,), ()): Poly.var(f"lam{i}") for i in range(1, a.n + 1)})
    dgamma = del_(gamma)
    steps = [("gamma", str(gamma)), ("del gamma", _poly_form_str(dgamma))]
    power = Form._make(a, {((), ()): GaussianRational(1)})
    for k in range(1, p + 1):
        power = wedge(power, dgamma)
        if k >= 2:
            steps.append((f"(del gamma)^{k}", _poly_form_str(power)))
        if not power:
            break
    final = wedge(gamma, power) if power else power
    steps.append((f"gamma ^ (del gamma)^{p}", _poly_form_str(final)))
    verdict = "no structure" if not final else "inconclusive"
    return NonExistenceReport("contact", verdict, steps)


def no_invariant_symplectic(a: AlgebraSpec) -> NonExistenceReport:
    """Show that every closed invariant (2,0)-form is degenerate.

    The closed forms are found by a linear solve, the solution space is
    reparametrised by fresh symbols ``mu1, mu2, ...`` and the top power is
    expanded symbolically.  By Nomizu's theorem the de Rham class of a closed
    (2,0)-form on the nilmanifold has a closed invariant representative, so a
    degenerate top power for all of them rules out holomorphic symplectic
    structures.
    """
    from .exterior import d

    if a.n % 2:
        raise ValueError("symplectic structures need even dimension")
    labels = monomials(a.n, 2, 0)
    closed = solution_space(unit_vectors(labels), zero=[lambda v: d(Form._make(a, v)).terms])
    omega_terms: dict = {}
    for k, v in enumerate(closed, start=1):
        mu = Poly.var(f"mu{k}")
        for key, c in v.items():
            omega_terms[key] = omega_terms.get(key, Poly()) + mu * c
    omega = Form(a, {k: c for k, c in omega_terms.items() if c})
    top = omega ** (a.n // 2)
    steps = [
        ("closed (2,0)-forms", f"dimension {len(closed)}"),
        ("omega", str(omega) if omega else "0"),
        (f"omega^{a.n // 2}", _poly_form_str(top)),
    ]
    verdict = "no structure" if not top else "inconclusive"
    note = (
        "Nomizu: the de Rham class of a closed (2,0)-form is represented by an "
        "invariant closed (2,0)-form, so degeneracy of all of these suffices."
    )
    return NonExistenceReport("symplectic", verdict, steps, note)
