"""Example families of p-contact and s-symplectic structures, products,
the symplectic-base construction and the fibration verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from .algebra import AlgebraError, AlgebraSpec, torus, validate
from .exterior import (
    Form,
    d,
    del_,
    frame_field,
    phi,
    vcontract,
    vf_bracket,
    wedge,
)
from .geometry import check_p_contact, check_s_symplectic, cy_form, kernel_F
from .linalg import ColumnMap, InfeasibleSystem
from .scalars import GaussianRational, as_gq

__all__ = [
    "ExampleResult",
    "class_I_matrix",
    "gen_class_I",
    "class_I_gamma",
    "class_I_induction",
    "gen_class_II",
    "gen_heisenberg_line",
    "gen_g2_analogue",
    "g2_omegas",
    "gen_contact_power",
    "build_over_symplectic_base",
    "ProductResult",
    "build_product",
    "FibrationSpec",
    "StructureReport",
    "verify_structure_theorem",
    "restrict_algebra",
    "EXAMPLES",
    "make_example",
]

ONE = GaussianRational(1)


@dataclass
class ExampleResult:
    algebra: AlgebraSpec
    form: Form
    kind: str  # "p-contact" or "s-symplectic"
    fibration: "FibrationSpec | None" = None
    notes: dict = field(default_factory=dict)


def _alg(name, n, dphi) -> AlgebraSpec:
    a = AlgebraSpec(name, n, dphi)
    report = validate(a)
    if not report.valid:
        raise AlgebraError("; ".join(report.failures))
    return a


def _sum(a, forms) -> Form:
    out = Form.zero(a)
    for f in forms:
        out = out + f
    return out


def _wedge_all(a, forms) -> Form:
    out = Form._make(a, {((), ()): ONE})
    for f in forms:
        out = wedge(out, f)
    return out


# -- class I ------------------------------------------------------------------


def class_I_matrix(l: int, kind="identity") -> list:
    """The (4l+1)x(4l+1) upper triangular matrix indexed by 3..4l+3 (as a list of rows)."""
    size = 4 * l + 1
    if kind == "identity":
        return [[ONE if i == j else GaussianRational(0) for j in range(size)] for i in range(size)]
    if kind == "ones":
        return [[ONE if i <= j else GaussianRational(0) for j in range(size)] for i in range(size)]
    rows = [[as_gq(x) for x in row] for row in kind]
    if len(rows) != size or any(len(r) != size for r in rows):
        raise ValueError(f"matrix must be {size}x{size} for l = {l}")
    if any(rows[i][j] for i in range(size) for j in range(i)):
        raise ValueError("matrix must be upper triangular")
    if any(not rows[i][i] for i in range(size)):
        raise ValueError("matrix is singular (zero on the diagonal)")
    return rows


def _class_I_algebra(n: int) -> AlgebraSpec:
    # d phi_k = phi_{k-1} ^ phi_1 = -phi_1 ^ phi_{k-1}
    return _alg(f"class_I_n{n}", n, {k: {((1, k - 1), ()): -1} for k in range(3, n + 1)})


def _gamma_u(a, A, u: int, v: int) -> Form:
    """``sum_{i=u}^{v} a_{ui} phi_i`` with ``A`` indexed from 3."""
    return Form(a, {((i,), ()): A[u - 3][i - 3] for i in range(u, v + 1)})


def class_I_gamma(a: AlgebraSpec, A, l: int, v: int | None = None) -> Form:
    """``g3 ^ prod_k (g_{4k} g_{4k+1} + g_{4k+1} g_{4k+2} + g_{4k+2} g_{4k+3})``,
    each ``g_u`` truncated at index ``v`` (default ``4l+3``)."""
    v = 4 * l + 3 if v is None else v
    g = lambda u: _gamma_u(a, A, u, v)
    factors = [g(3)]
    for k in range(1, l + 1):
        b = 4 * k
        factors.append(wedge(g(b), g(b + 1)) + wedge(g(b + 1), g(b + 2)) + wedge(g(b + 2), g(b + 3)))
    return _wedge_all(a, factors)


def gen_class_I(l: int, A="identity") -> ExampleResult:
    if l < 1:
        raise ValueError("class I needs l >= 1")
    n = 4 * l + 3
    mat = class_I_matrix(l, A)
    a = _class_I_algebra(n)
    det = prod((mat[i][i] for i in range(len(mat))), start=ONE)
    return ExampleResult(a, class_I_gamma(a, mat, l), "p-contact", notes={"matrix_det": det, "a33": mat[0][0]})


def class_I_induction(l: int, A="identity") -> dict:
    """Both sides of the step from ``l`` to ``l+1`` in the class I induction.

    Left: ``G_{l+1} ^ del G_{l+1}``.  Right: ``2 * (product of the four new
    diagonal entries) * (G_l ^ del G_l) ^ phi_{4l+4..4l+7}``, with ``G_l``
    built from the top-left block of the same matrix on the larger algebra.
    """
    mat = class_I_matrix(l + 1, A)
    n = 4 * l + 7
    a = _class_I_algebra(n)
    big = class_I_gamma(a, mat, l + 1)
    lhs = wedge(big, del_(big))
    small = class_I_gamma(a, mat, l, v=4 * l + 3)
    diag = prod((mat[j - 3][j - 3] for j in range(4 * l + 4, 4 * l + 8)), start=ONE)
    tail = _wedge_all(a, [phi(a, j) for j in range(4 * l + 4, 4 * l + 8)])
    rhs = wedge(wedge(small, del_(small)), tail) * (2 * diag)
    return {"l": l, "lhs": lhs, "rhs": rhs, "holds": lhs == rhs, "diagonal_product": diag}


# -- class II, examples 3.5 / 3.6 ------------------------------------------------


def gen_class_II(l: int) -> ExampleResult:
    if l < 1:
        raise ValueError("class II needs l >= 1")
    n = 4 * l + 3
    a = _alg(f"class_II_l{l}", n, {n: {((2 * j + 1, 2 * j + 2), ()): 1 for j in range(2 * l + 1)}})
    g = wedge(phi(a, n), del_(phi(a, n)) ** l)
    return ExampleResult(a, g, "p-contact")


def gen_heisenberg_line(l: int) -> ExampleResult:
    """Heisenberg-times-line algebra of dimension ``4l`` with the canonical s-symplectic form."""
    if l < 2:
        raise ValueError("this family needs l >= 2")
    n = 4 * l
    a = _alg(f"heisenberg_line_l{l}", n, {n: {((2 * j + 1, 2 * j + 2), ()): 1 for j in range(2 * l - 1)}})
    omega = _wedge_all(a, [phi(a, k) for k in range(1, 2 * l + 1)]) + _wedge_all(
        a, [phi(a, k) for k in range(2 * l + 1, 4 * l + 1)]
    )
    return ExampleResult(a, omega, "s-symplectic")


def g2_omegas(a: AlgebraSpec) -> tuple:
    f = lambda i, j: wedge(phi(a, i), phi(a, j))
    return (f(1, 2) + f(3, 4), f(1, 3) - f(2, 4), f(1, 4) + f(2, 3))


def gen_g2_analogue() -> ExampleResult:
    t = torus(7)
    w = g2_omegas(t)
    a = _alg("g2_analogue", 7, {5: w[0].terms, 6: w[1].terms, 7: w[2].terms})
    w = g2_omegas(a)
    p5, p6, p7 = phi(a, 5), phi(a, 6), phi(a, 7)
    g = wedge(p5, w[0]) + wedge(p6, w[1]) + wedge(p7, w[2]) + _wedge_all(a, [p5, p6, p7])
    return ExampleResult(a, g, "p-contact")


def gen_contact_power(a: AlgebraSpec, eta: Form, s: int) -> ExampleResult:
    """``eta ^ (del eta)^(s-1)`` from a holomorphic contact form ``eta``."""
    if s < 1:
        raise ValueError("s must be positive")
    return ExampleResult(a, wedge(eta, del_(eta) ** (s - 1)), "p-contact")


# -- symplectic base construction ---------------------------------------------------


def _rehost(u: Form, a: AlgebraSpec, shift: int = 0) -> Form:
    return Form._make(
        a, {(tuple(i + shift for i in I), tuple(j + shift for j in J)): c for (I, J), c in u.terms.items()}
    )


def build_over_symplectic_base(base: AlgebraSpec, omega: Form, sigma: Form | None = None, name: str | None = None) -> ExampleResult:
    """Extend ``base`` (dimension ``4l``) by three generators with
    ``d phi_{4l+3} = phi_{4l+1} ^ phi_{4l+2} + sigma`` and return
    ``Gamma = Omega ^ phi_{4l+3}`` together with its fibration data."""
    cert = check_s_symplectic(base, omega)
    if not cert.valid:
        raise ValueError("base form is not s-symplectic: " + ", ".join(cert.failures))
    m = base.n
    if m % 4:
        raise ValueError("the base must have dimension 4l")
    sigma = sigma if sigma is not None else Form.zero(base)
    if sigma and sigma.bidegree != (2, 0):
        raise ValueError("sigma must be a (2,0)-form")
    if d(sigma):
        raise ValueError(f"sigma is not d-closed: d sigma = {d(sigma)}")
    rational = all(c.is_real() for c in sigma.terms.values())
    n = m + 3
    dphi = {k: dict(t) for k, t in base.dphi.items()}
    top = {((m + 1, m + 2), ()): ONE}
    for key, c in sigma.terms.items():
        top[key] = top.get(key, 0) + c
    dphi[n] = {k: c for k, c in top.items() if c}
    a = _alg(name or f"{base.name}_ext", n, dphi)
    gamma = wedge(_rehost(omega, a), phi(a, n))
    fib = FibrationSpec(a, tuple(range(1, m + 1)), (frame_field(a, m + 2), frame_field(a, m + 1), frame_field(a, n)), phi(a, n))
    return ExampleResult(a, gamma, "p-contact", fib, {"sigma_rational": rational, "sigma": str(sigma)})


# -- products -------------------------------------------------------------------


@dataclass
class ProductResult:
    algebra: AlgebraSpec
    gamma: Form
    c: GaussianRational
    c_X: GaussianRational
    c_Y: GaussianRational
    interleave_sign: int
    order: str

    @property
    def consistent(self) -> bool:
        return self.c == self.c_X * self.c_Y * self.interleave_sign


def build_product(X: tuple, Y: tuple, order: str = "xy", name: str | None = None) -> ProductResult:
    """Direct sum of a p-contact ``X = (algebra, Gamma)`` and an s-symplectic
    ``Y = (algebra, Omega)`` with ``Gamma_X ^ Omega_Y``.

    ``order`` chooses which factor's coframe comes first.  Then
    ``c = c_X * c_Y * (-1)^(n_X n_Y)`` when ``Y`` comes first, and
    ``c = c_X * c_Y`` otherwise.
    """
    (aX, gX), (aY, oY) = X, Y
    cx = check_p_contact(aX, gX)
    cy = check_s_symplectic(aY, oY)
    if not cx.valid or not cy.valid:
        raise ValueError("both factors must carry valid structures")
    nX, nY = aX.n, aY.n
    if order not in ("xy", "yx"):
        raise ValueError("order must be 'xy' or 'yx'")
    sX, sY = (0, nX) if order == "xy" else (nY, 0)
    dphi = {}
    for src, shift in ((aX, sX), (aY, sY)):
        for k, t in src.dphi.items():
            dphi[k + shift] = {
                (tuple(i + shift for i in I), tuple(j + shift for j in J)): c for (I, J), c in t.items()
            }
    a = _alg(name or f"{aX.name}_x_{aY.name}", nX + nY, dphi)
    gamma = wedge(_rehost(gX, a, sX), _rehost(oY, a, sY))
    c = check_p_contact(a, gamma).top_coefficient
    sign = 1 if order == "xy" or (nX * nY) % 2 == 0 else -1
    return ProductResult(a, gamma, c, cx.top_coefficient, cy.top_coefficient, sign, order)


# -- fibration verifier ------------------------------------------------------------------


@dataclass
class FibrationSpec:
    total: AlgebraSpec
    base_indices: tuple
    eta: tuple
    psi3: Form

    @classmethod
    def from_decl(cls, doc, decl) -> "FibrationSpec":
        return cls(doc.algebra(decl.algebra), tuple(decl.base), tuple(decl.eta), decl.psi3)

    @property
    def E_basis(self) -> list:
        return [frame_field(self.total, b) for b in self.base_indices]

    def dual_coframe(self) -> tuple:
        """``(psi1, psi2, psi3)`` with ``psi_j(eta_k) = delta_jk`` and ``psi_j(E) = 0``."""
        a = self.total
        columns = []
        for k in range(1, a.n + 1):
            col = {("E", b): ONE for b in self.base_indices if b == k}
            for m, eta in enumerate(self.eta, start=1):
                c = eta.terms.get((k, ()))
                if c:
                    col[("H", m)] = c
            columns.append(col)
        cmap = ColumnMap(columns)
        if cmap.rank() != a.n:
            raise ValueError("E and H do not span the tangent space")
        out = []
        for j in (1, 2, 3):
            coeffs = cmap.solve({("H", j): ONE})
            out.append(Form._make(a, {((k + 1,), ()): c for k, c in coeffs.items()}))
        return tuple(out)


@dataclass
class StructureReport:
    checks: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    omega_tilde: Form | None = None
    omega: Form | None = None
    base: AlgebraSpec | None = None
    symplectic: object = None
    qualifier: str = (
        "invariant-level: bracket closure stands in for Frobenius integrability, and the "
        "absence of fibre-coframe monomials in Omega~ stands in for leafwise constancy"
    )

    @property
    def failures(self) -> list:
        return [name for name, ok in self.checks.items() if not ok]

    @property
    def valid(self) -> bool:
        return not self.failures

    def record(self, name: str, ok: bool, residual=None):
        self.checks[name] = bool(ok)
        if not ok and residual is not None:
            self.residuals[name] = str(residual)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": dict(self.checks),
            "failures": self.failures,
            "residuals": dict(self.residuals),
            "omega_tilde": None if self.omega_tilde is None else str(self.omega_tilde),
            "omega": None if self.omega is None else str(self.omega),
            "symplectic": None if self.symplectic is None else self.symplectic.to_dict(),
            "qualifier": self.qualifier,
        }


def restrict_algebra(a: AlgebraSpec, indices: tuple, name: str | None = None):
    """Subalgebra of the dual generated by ``phi_i, i in indices``, reindexed 1..m.

    Returns ``None`` when the differentials leave the span.
    """
    pos = {b: i + 1 for i, b in enumerate(indices)}
    dphi = {}
    for b in indices:
        t = {}
        for (I, J), c in a.dphi.get(b, {}).items():
            if any(x not in pos for x in I + J):
                return None
            t[(tuple(pos[x] for x in I), tuple(pos[x] for x in J))] = c
        if t:
            dphi[pos[b]] = t
    return AlgebraSpec(name or f"{a.name}_base", len(indices), dphi)


def verify_structure_theorem(f: FibrationSpec, g: Form) -> StructureReport:
    a = f.total
    rep = StructureReport()
    cert = check_p_contact(a, g)
    rep.record("p-contact certificate", cert.valid, ", ".join(cert.failures))
    eta1, eta2, eta3 = f.eta

    # hypotheses
    br = lambda x, y: vf_bracket(x, y)
    rep.record("[eta1, eta2] = eta3", br(eta1, eta2) == eta3, br(eta1, eta2) - eta3)
    rep.record("[eta2, eta1] = -eta3", br(eta2, eta1) == -eta3, br(eta2, eta1) + eta3)
    others = [(j, k) for j in range(3) for k in range(3) if (j, k) not in ((0, 1), (1, 0))]
    bad = [(j + 1, k + 1) for j, k in others if br(f.eta[j], f.eta[k])]
    rep.record("[eta_j, eta_k] = 0 for other pairs", not bad, bad)
    F = kernel_F(g)
    rep.record("eta1, eta2 in kernel of Gamma", F.contains(eta1) and F.contains(eta2))
    psi3_gamma = wedge(f.psi3, g)
    rep.record("psi3 ^ Gamma = 0", not psi3_gamma, psi3_gamma)
    try:
        psi = f.dual_coframe()
        split_ok = True
    except (ValueError, InfeasibleSystem):
        psi, split_ok = None, False
    rep.record("E + H = T (ranks 4l and 3)", split_ok and len(f.base_indices) + 3 == a.n)
    if psi is not None:
        rep.record("psi3 dual to the eta frame", psi[2] == f.psi3, psi[2] - f.psi3)
    from .spaces import Span

    H = Span([dict(e.terms) for e in f.eta])
    rep.record("H closed under brackets", all(H.contains(br(x, y).terms) for x in f.eta for y in f.eta))

    # Omega~ two ways
    dg = del_(g)
    via_dgamma = vcontract(eta1, vcontract(eta2, dg))
    via_gamma = vcontract(eta3, g)
    rep.record("eta1 -| (eta2 -| dGamma) = eta3 -| Gamma", via_dgamma == via_gamma, via_dgamma - via_gamma)
    ot = via_gamma
    rep.omega_tilde = ot

    d_ot = vcontract(eta1, vcontract(eta2, del_(ot)))
    rep.record("eta1 -| (eta2 -| dOmega~) = 0", not d_ot, d_ot)
    rep.record("eta3 -| Omega~ = 0", not vcontract(eta3, ot), vcontract(eta3, ot))

    sq = wedge(ot, ot)
    triple = vcontract(eta1, vcontract(eta2, vcontract(eta3, cy_form(g))))
    rep.record("Omega~^2 = eta1 -| eta2 -| eta3 -| u_Gamma", sq == triple, sq - triple)
    if psi is not None:
        vol = _wedge_all(a, [sq, psi[0], psi[1], psi[2]])
        rep.record("Omega~^2 ^ psi1 ^ psi2 ^ psi3 != 0", bool(vol.top_coefficient()))
    no_fibre = all(vcontract(e, ot) == 0 for e in f.eta)
    rep.record("eta_k -| Omega~ = 0 for k = 1, 2, 3", no_fibre)
    base = set(f.base_indices)
    fibre_terms = {m: c for m, c in ot.terms.items() if any(x not in base for x in m[0] + m[1])}
    rep.record("Omega~ has no fibre-coframe monomials", not fibre_terms, Form._make(a, fibre_terms))

    # extract Omega on the base and certify it
    base_alg = restrict_algebra(a, f.base_indices)
    rep.record("base coframe closed under d", base_alg is not None)
    if base_alg is not None and not fibre_terms:
        pos = {b: i + 1 for i, b in enumerate(f.base_indices)}
        omega = Form._make(base_alg, {(tuple(pos[x] for x in I), ()): c for (I, J), c in ot.terms.items()})
        rep.base, rep.omega = base_alg, omega
        if omega and omega.bidegree and base_alg.n % 2 == 0 and omega.bidegree[0] == base_alg.n // 2:
            sym = check_s_symplectic(base_alg, omega)
            rep.symplectic = sym
            rep.record("extracted Omega is s-symplectic", sym.valid, ", ".join(sym.failures))
        else:
            rep.record("extracted Omega is s-symplectic", False, omega)

    recon = wedge(ot, f.psi3)
    rep.record("Gamma = Omega~ ^ psi3", recon == g, recon - g)
    return rep


# -- named examples (used by the CLI) ---------------------------------------------------


def _torus4_omega():
    t = torus(4, "torus4")
    return t, wedge(phi(t, 1), phi(t, 2)) + wedge(phi(t, 3), phi(t, 4))


def _symplectic_base(sigma_kind: str) -> ExampleResult:
    t, omega = _torus4_omega()
    sigma = wedge(phi(t, 1), phi(t, 2)) if sigma_kind == "phi12" else None
    return build_over_symplectic_base(t, omega, sigma, name="symplectic_base_sigma_" + sigma_kind)


def _product() -> ExampleResult:
    iw = AlgebraSpec("iwasawa", 3, {3: {((1, 2), ()): 1}})
    t, omega = _torus4_omega()
    r = build_product((iw, phi(iw, 3)), (t, omega), name="iwasawa_x_torus4")
    return ExampleResult(r.algebra, r.gamma, "p-contact", notes={"interleave_sign": r.interleave_sign})


EXAMPLES = {
    "class-I": lambda l=1, matrix="identity": gen_class_I(l, matrix),
    "class-II": lambda l=1, matrix=None: gen_class_II(l),
    "heisenberg-line": lambda l=2, matrix=None: gen_heisenberg_line(l),
    "g2-analogue": lambda l=None, matrix=None: gen_g2_analogue(),
    "symplectic-base": lambda l=None, matrix=None: _symplectic_base("zero"),
    "symplectic-base-twisted": lambda l=None, matrix=None: _symplectic_base("phi12"),
    "product": lambda l=None, matrix=None: _product(),
}


def make_example(family: str, l: int | None = None, matrix="identity") -> ExampleResult:
    try:
        builder = EXAMPLES[family]
    except KeyError:
        raise ValueError(f"unknown example family {family!r}; known: {', '.join(EXAMPLES)}") from None
    kwargs = {}
    if l is not None:
        kwargs["l"] = l
    if matrix is not None and family == "class-I":
        kwargs["matrix"] = matrix
    return builder(**kwargs)
