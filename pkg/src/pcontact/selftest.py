"""Seeded property suites over the example corpus.

Each suite draws its inputs from ``random.Random(seed)`` and checks exact
identities, so a different seed changes what is sampled but never whether a
correct engine passes.  ``run_selftest`` returns one :class:`SuiteResult`
per suite; a corpus file that fails to parse or validate shows up as a
failure of the ``corpus-parse`` suite naming that file.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus
from .algebra import validate
from .cohomology import check_d1_nonzero, e1_dim, e2_dim
from .dsl import parse_document, serialize_document
from .exterior import (
    Form,
    VectorForm,
    bracket,
    bracket_oracle,
    contract,
    del_,
    delbar,
    lie10,
    lieT,
    monomials,
    vcontract,
    vf_bracket,
    wedge,
)
from .geometry import ch_space, check_p_contact, cv_space, g_integrability, kernel_F, kernel_G, vform
from .deformation import contraction_exactness
from .linalg import InfeasibleSystem, LinearSystem, nullspace, particular
from .poly import Poly
from .scalars import GaussianRational, parse_scalar

SAMPLES = 200
SCALAR_SAMPLES = 1000
# d^2 = 0 is checked on every basis monomial up to this dimension; above it,
# on the generators, on all monomials of total degree <= 2 and on samples.
EXHAUSTIVE_DIM = 8
# Full E1/E2 tables up to this dimension, total degree <= 2 above it.
PAGE_DIM = 4


@dataclass
class SuiteResult:
    name: str
    samples: int = 0
    failed: int = 0
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.samples > 0

    def check(self, ok: bool, label: str = ""):
        self.samples += 1
        if not ok:
            self.failed += 1
            if len(self.examples) < 5:
                self.examples.append(label)

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        text = f"{mark} {self.name}: {self.samples - self.failed}/{self.samples}"
        if self.examples:
            text += "  (" + "; ".join(self.examples) + ")"
        return text

    def to_dict(self) -> dict:
        return {"suite": self.name, "samples": self.samples, "failed": self.failed, "examples": list(self.examples)}


@dataclass
class SelftestResult:
    seed: int
    suites: list

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        return next(s for s in self.suites if s.name == name)


# -- random inputs -----------------------------------------------------------------


class Sampler:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def scalar(self, nonzero=False) -> GaussianRational:
        r = self.rng
        while True:
            z = GaussianRational(Fraction(r.randint(-9, 9), r.randint(1, 5)), Fraction(r.randint(-9, 9), r.randint(1, 5)))
            if z or not nonzero:
                return z

    def small(self) -> GaussianRational:
        return GaussianRational(self.rng.randint(-3, 3), self.rng.randint(-2, 2))

    def poly(self, names=("x", "y", "z")) -> Poly:
        out = Poly()
        for _ in range(self.rng.randint(0, 4)):
            term = Poly.const(self.small())
            for v in names:
                term = term * Poly.var(v) ** self.rng.randint(0, 2)
            out = out + term
        return out

    def form(self, a, p=None, q=None, terms=4) -> Form:
        p = self.rng.randint(0, min(a.n, 4)) if p is None else p
        q = self.rng.randint(0, min(a.n, 3)) if q is None else q
        return Form(a, {self._monomial(a.n, p, q): self.small() for _ in range(terms)})

    def vector(self, a, q=1, terms=4) -> VectorForm:
        return VectorForm(
            a, q, {(self.rng.randint(1, a.n), self._indices(a.n, q)): self.small() for _ in range(terms)}
        )

    def _indices(self, n, k) -> tuple:
        return tuple(sorted(self.rng.sample(range(1, n + 1), k)))

    def _monomial(self, n, p, q) -> tuple:
        return (self._indices(n, p), self._indices(n, q))


# -- corpus ----------------------------------------------------------------------------


def _load_corpus(directory, suite: SuiteResult) -> dict:
    docs = {}
    for name in corpus.names(directory):
        try:
            doc = corpus.load(name, directory)
            bad = [a.name for a in doc.algebras.values() if not validate(a).valid]
            suite.check(not bad, f"{name}: invalid algebra {', '.join(bad)}")
            if not bad:
                docs[name] = doc
        except ValueError as exc:
            suite.check(False, f"{name}: {exc}")
    return docs


def _algebras(docs: dict) -> list:
    seen, out = set(), []
    for name in sorted(docs):
        for a in docs[name].algebras.values():
            if a.name not in seen:
                seen.add(a.name)
                out.append(a)
    return out


def _contact_forms(docs: dict) -> list:
    out = []
    for name in sorted(docs):
        doc = docs[name]
        for fname, g in doc.forms.items():
            a = doc.algebra(doc.form_owner.get(fname))
            if a.n % 2 and g.bidegree == ((a.n - 1) // 2, 0) and check_p_contact(a, g).valid:
                out.append((f"{name}:{fname}", a, g))
    return out


# -- suites ------------------------------------------------------------------------------


def suite_scalars(s: Sampler) -> SuiteResult:
    r = SuiteResult("scalar-field-axioms")
    zero, one = GaussianRational(0), GaussianRational(1)
    for _ in range(SCALAR_SAMPLES):
        x, y, z = s.scalar(), s.scalar(), s.scalar(nonzero=True)
        ok = (
            (x + y) + z == x + (y + z)
            and x * y == y * x
            and (x * y) * z == x * (y * z)
            and x * (y + z) == x * y + x * z
            and x + zero == x
            and x * one == x
            and x - x == zero
            and z * (one / z) == one
            and (x / z) * z == x
            and parse_scalar(str(x)) == x
        )
        r.check(ok, f"{x}, {y}, {z}")
    return r


def suite_polys(s: Sampler) -> SuiteResult:
    r = SuiteResult("polynomial-ring-laws")
    for _ in range(SAMPLES):
        f, g, h = s.poly(), s.poly(), s.poly()
        c = s.small()
        ok = (
            f * (g + h) == f * g + f * h
            and f * g == g * f
            and (f * g) * h == f * (g * h)
            and f - f == Poly()
            and (f * g).substitute({"x": c}) == f.substitute({"x": c}) * g.substitute({"x": c})
        )
        r.check(ok, f"{f} | {g} | {h}")
    return r


def suite_linear_solve(s: Sampler) -> SuiteResult:
    r = SuiteResult("linear-solve-residuals")
    rng = s.rng
    for _ in range(SAMPLES):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = [{j: s.small() for j in range(n) if rng.random() < 0.6} for _ in range(m)]
        rows = [{j: v for j, v in row.items() if v} for row in rows]
        b = [s.small() for _ in range(m)]
        apply = lambda x, row: sum((row.get(j, 0) * x.get(j, 0) for j in range(n)), GaussianRational(0))
        kernel_ok = all(not apply(k, row) for k in nullspace(LinearSystem(rows, n), dense=False) for row in rows)
        try:
            x = particular(LinearSystem(rows, n, b), dense=False)
            solve_ok = all(apply(x, row) == bi for row, bi in zip(rows, b))
        except InfeasibleSystem as exc:
            y = exc.certificate
            left = [sum((y[i] * rows[i].get(j, 0) for i in range(m)), GaussianRational(0)) for j in range(n)]
            solve_ok = not any(left) and bool(sum((y[i] * b[i] for i in range(m)), GaussianRational(0)))
        r.check(kernel_ok and solve_ok, f"{m}x{n} system")
    return r


def _d_squared_ok(u: Form) -> bool:
    return not del_(del_(u)) and not delbar(delbar(u)) and not (del_(delbar(u)) + delbar(del_(u)))


def suite_d_squared(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("d-squared")
    for a in algebras:
        if a.n <= EXHAUSTIVE_DIM:
            bideg = [(p, q) for p in range(a.n + 1) for q in range(a.n + 1)]
        else:
            bideg = [(p, q) for p in range(3) for q in range(3) if p + q <= 2]
        for p, q in bideg:
            for m in monomials(a.n, p, q):
                r.check(_d_squared_ok(Form(a, {m: 1})), f"{a.name} {m}")
        if a.n > EXHAUSTIVE_DIM:
            for _ in range(SAMPLES):
                u = s.form(a, s.rng.randint(0, a.n), s.rng.randint(0, a.n))
                r.check(_d_squared_ok(u), f"{a.name} {u}")
    return r


def _cycle(algebras: list, k: int):
    return algebras[k % len(algebras)]


def suite_contraction_leibniz(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("contraction-leibniz")
    for k in range(SAMPLES if algebras else 0):
        a = _cycle(algebras, k)
        u = s.form(a)
        x, th = s.vector(a, 0), s.vector(a, 1)
        ok0 = delbar(contract(x, u)) == -contract(x, delbar(u))
        ok1 = delbar(vcontract(th, u)) == vcontract(th.delbar(), u) + vcontract(th, delbar(u))
        r.check(ok0 and ok1, f"{a.name}: {u}")
    return r


def suite_lie_identities(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("lie-derivative-identities")
    for k in range(SAMPLES if algebras else 0):
        a = _cycle(algebras, k)
        u, v = s.form(a), s.form(a)
        th, ps = s.vector(a), s.vector(a)
        dbt = th.delbar()
        br = bracket(th, ps)
        deg = u.degree or 0
        checks = [
            lieT(th, delbar(u)) + delbar(lieT(th, u)) == -(vcontract(dbt, del_(u)) + del_(vcontract(dbt, u))),
            lieT(th, del_(u)) == -del_(lieT(th, u)),
            lieT(th, wedge(u, v)) == wedge(lieT(th, u), v) + wedge(u, lieT(th, v)) * (-1) ** deg,
            vcontract(th, lieT(ps, u)) - lieT(ps, vcontract(th, u)) == vcontract(br, u),
            -(lieT(th, vcontract(ps, u)) - vcontract(ps, lieT(th, u))) == vcontract(br, u),
            lieT(th, lieT(ps, u)) + lieT(ps, lieT(th, u)) == lieT(br, u),
        ]
        r.check(all(checks), f"{a.name}: identity {[i for i, c in enumerate(checks) if not c]}")
    return r


def suite_tian_todorov(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("generalised-tian-todorov")
    for k in range(SAMPLES if algebras else 0):
        a = _cycle(algebras, k)
        u = s.form(a, s.rng.randint(0, a.n), s.rng.randint(0, 2))
        t1, t2 = s.vector(a), s.vector(a)
        lhs = vcontract(bracket(t1, t2), u)
        rhs = (
            -del_(vcontract(t1, vcontract(t2, u)))
            + vcontract(t1, lieT(t2, u))
            + vcontract(t2, lieT(t1, u))
            + vcontract(t1, vcontract(t2, del_(u)))
        )
        r.check(lhs == rhs, f"{a.name}: {t1}, {t2}, {u}")
    return r


def suite_vector_field_lie(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("vector-field-lie-derivative")
    for k in range(SAMPLES if algebras else 0):
        a = _cycle(algebras, k)
        u, v = s.form(a), s.form(a)
        x, y = s.vector(a, 0), s.vector(a, 0)
        xy = vf_bracket(x, y)
        checks = [
            contract(x, lie10(y, u)) - lie10(y, contract(x, u)) == contract(xy, u),
            lie10(x, lie10(y, u)) - lie10(y, lie10(x, u)) == lie10(xy, u),
            lie10(x, wedge(u, v)) == wedge(lie10(x, u), v) + wedge(u, lie10(x, v)),
        ]
        r.check(all(checks), f"{a.name}: {x}, {y}")
    return r


def suite_bracket_symmetry(s: Sampler, algebras: list) -> SuiteResult:
    r = SuiteResult("bracket-graded-symmetry")
    for k in range(SAMPLES if algebras else 0):
        a = _cycle(algebras, k)
        t1, t2 = s.vector(a), s.vector(a)
        r.check(bracket(t1, t2) == bracket(t2, t1), f"{a.name}: {t1}, {t2}")
    return r


def suite_bracket_routes(s: Sampler, algebras: list) -> SuiteResult:
    """The operator-identity bracket against the Calabi-Yau route, per algebra."""
    r = SuiteResult("bracket-vs-oracle")
    for a in algebras:
        vol = Form(a, {(tuple(range(1, a.n + 1)), ()): 1})
        for _ in range(SAMPLES):
            t1, t2 = s.vector(a), s.vector(a)
            r.check(bracket(t1, t2) == bracket_oracle(t1, t2, vol), f"{a.name}: {t1}, {t2}")
    return r


def suite_roundtrip(docs: dict) -> SuiteResult:
    r = SuiteResult("dsl-roundtrip")
    for name in sorted(docs):
        doc = docs[name]
        again = parse_document(serialize_document(doc))
        ok = (
            {k: a.dphi for k, a in doc.algebras.items()} == {k: a.dphi for k, a in again.algebras.items()}
            and {k: (u.terms, doc.form_owner.get(k)) for k, u in doc.forms.items()}
            == {k: (u.terms, again.form_owner.get(k)) for k, u in again.forms.items()}
            and {k: t.terms for k, t in doc.vectors.items()} == {k: t.terms for k, t in again.vectors.items()}
            and [(f.base, [e.terms for e in f.eta], f.psi3.terms) for f in doc.fibrations.values()]
            == [(f.base, [e.terms for e in f.eta], f.psi3.terms) for f in again.fibrations.values()]
        )
        r.check(ok, name)
    return r


def suite_contact_certificates(contacts: list) -> SuiteResult:
    r = SuiteResult("contact-certificates")
    for label, a, g in contacts:
        F, G = kernel_F(g), kernel_G(g)
        trivial_meet = (F.span() + G.span()).dim == F.rank + G.rank
        obs = check_d1_nonzero(a, g).holds
        integrable = g_integrability(g).holds if a.parallelisable else True
        # a contact form (p = 1) has kernels of rank n - 1 and 1
        p = (a.n - 1) // 2
        ranks = p != 1 or (F.rank, G.rank) == (a.n - 1, 1)
        r.check(ranks and trivial_meet and obs and integrable, label)
    return r


def suite_horizontal_vertical(contacts: list) -> SuiteResult:
    """Brackets of constantly horizontal with constantly vertical forms vanish,
    and every constantly vertical form has an exact contraction with u_Gamma."""
    r = SuiteResult("horizontal-vertical")
    for label, a, g in contacts:
        if a.n > 7:
            continue
        ch = [vform(a, 1, v) for v in ch_space(g)]
        cv = [vform(a, 1, v) for v in cv_space(g)]
        for t0 in ch:
            for t1 in cv:
                r.check(not bracket(t0, t1), f"{label}: [{t0}, {t1}]")
        for t1 in cv:
            r.check(contraction_exactness(t1, g), f"{label}: contraction of {t1}")
    return r


def suite_pages(algebras: list) -> SuiteResult:
    r = SuiteResult("e2-below-e1")
    for a in algebras:
        for p in range(a.n + 1):
            for q in range(a.n + 1):
                if a.n > PAGE_DIM and p + q > 2:
                    continue
                r.check(e2_dim(a, p, q) <= e1_dim(a, p, q), f"{a.name} ({p},{q})")
    return r


# -- driver ----------------------------------------------------------------------------------


def run_selftest(seed: int = 0, corpus_dir=None) -> SelftestResult:
    s = Sampler(seed)
    parse_suite = SuiteResult("corpus-parse")
    docs = _load_corpus(corpus_dir, parse_suite)
    algebras = _algebras(docs)
    contacts = _contact_forms(docs)
    suites = [
        parse_suite,
        suite_scalars(s),
        suite_polys(s),
        suite_linear_solve(s),
        suite_d_squared(s, algebras),
        suite_contraction_leibniz(s, algebras),
        suite_lie_identities(s, algebras),
        suite_tian_todorov(s, algebras),
        suite_vector_field_lie(s, algebras),
        suite_bracket_symmetry(s, algebras),
        suite_bracket_routes(s, algebras),
        suite_roundtrip(docs),
        suite_contact_certificates(contacts),
        suite_horizontal_vertical(contacts),
        suite_pages(algebras),
    ]
    return SelftestResult(seed, suites)
