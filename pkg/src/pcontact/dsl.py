"""Text format for algebras, forms, vector forms and fibrations (``.cnil`` files).

Example::

    # Iwasawa manifold
    algebra iwasawa {
      dim 3
      d phi3 = phi1^phi2
    }
    form Gamma on iwasawa (1,0) = phi3
    vector psi1 on iwasawa = phi~1*e2 + phi~2*e1
    fibration F on thm34 { base = 1..4; eta = e6, e5, e7; psi3 = phi7 }

Coefficients use the scalar literal syntax (``-3/2``, ``2i``); a coefficient
with both real and imaginary parts is written in parentheses, ``(1-2i)*phi1``.
A source containing no ``algebra`` block, such as ``dim 3; d phi3 = phi1^phi2``,
is read as the body of a single anonymous algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import AlgebraError, AlgebraSpec, validate
from .exterior import Form, VectorForm, format_terms, mono_str
from .scalars import GaussianRational, parse_scalar

__all__ = [
    "DSLError",
    "DSLSyntaxError",
    "DSLSemanticError",
    "Document",
    "FibrationDecl",
    "parse",
    "parse_document",
    "parse_form",
    "parse_vector",
    "serialize_algebra",
    "serialize_form",
    "serialize_vector",
    "serialize_fibration",
    "serialize_document",
]


class DSLError(ValueError):
    pass


class DSLSyntaxError(DSLError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DSLSemanticError(DSLError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<gen>phi~?\d+(?![A-Za-z0-9_]))
  | (?P<evec>e\d+(?![A-Za-z0-9_]))
  | (?P<num>\d+(?:/\d+)?i?(?![A-Za-z0-9_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<range>\.\.)
  | (?P<tensor>⊗)
  | (?P<punct>[{}(),;=+\-*^])
    """,
    re.VERBOSE,
)


_KIND_NAMES = {
    "gen": "a generator (phiK or phi~K)",
    "evec": "a frame field eK",
    "num": "a number",
    "ident": "a name",
}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str):
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind in ("punct", "range", "tensor"):
                kind = text if kind != "tensor" else "*"
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class FibrationDecl:
    """A ``fibration`` block: base coframe indices, the ordered frame
    ``eta = (eta1, eta2, eta3)`` and the form ``psi3``."""

    name: str
    algebra: str
    base: tuple
    eta: tuple
    psi3: Form


@dataclass
class Document:
    algebras: dict = field(default_factory=dict)
    forms: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)
    fibrations: dict = field(default_factory=dict)
    form_owner: dict = field(default_factory=dict)
    vector_owner: dict = field(default_factory=dict)

    def algebra(self, name: str | None = None) -> AlgebraSpec:
        if name is None:
            if not self.algebras:
                raise DSLSemanticError("no algebra defined")
            return next(iter(self.algebras.values()))
        try:
            return self.algebras[name]
        except KeyError:
            raise DSLSemanticError(f"unknown algebra {name!r}") from None


class _Parser:
    def __init__(self, source: str, algebras: dict | None = None, check: bool = True):
        self.tokens = tokenize(source)
        self.pos = 0
        self.doc = Document()
        if algebras:
            self.doc.algebras.update(algebras)
        self.check = check

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return DSLSyntaxError(message, tok.line, tok.col)

    def take(self, kind=None, text=None) -> Token:
        tok = self.tok
        if kind is not None and tok.kind != kind:
            want = text or _KIND_NAMES.get(kind, kind)
            raise self.error(f"expected {want}, found {tok.text or 'end of input'!r}")
        if text is not None and tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        self.pos += 1
        return tok

    def at(self, kind, text=None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def skip_separators(self):
        while self.at(";"):
            self.pos += 1

    def integer(self) -> int:
        tok = self.take("num")
        if not tok.text.isdigit():
            raise self.error("expected an integer", tok)
        return int(tok.text)

    # -- top level --------------------------------------------------------
    def document(self) -> Document:
        self.skip_separators()
        if self.at("ident", "dim"):
            self.algebra_body("anonymous", closing=False)
            self.skip_separators()
        while not self.at("eof"):
            tok = self.tok
            if self.at("ident", "algebra"):
                self.algebra_block()
            elif self.at("ident", "form"):
                self.form_decl()
            elif self.at("ident", "vector"):
                self.vector_decl()
            elif self.at("ident", "fibration"):
                self.fibration_decl()
            else:
                raise self.error(f"expected 'algebra', 'form', 'vector' or 'fibration', found {tok.text!r}")
            self.skip_separators()
        return self.doc

    def algebra_block(self):
        self.take("ident", "algebra")
        name = self.take("ident").text
        self.take("{")
        self.algebra_body(name, closing=True)

    def algebra_body(self, name: str, closing: bool):
        self.take("ident", "dim")
        n = self.integer()
        self.skip_separators()
        dphi: dict = {}
        while self.at("ident", "d"):
            self.pos += 1
            gtok = self.take("gen")
            if "~" in gtok.text:
                raise self.error("differentials of conjugate generators are derived, not given", gtok)
            k = int(gtok.text[3:])
            if not 1 <= k <= n:
                raise self.error(f"generator {gtok.text} out of range for dim {n}", gtok)
            if k in dphi:
                raise self.error(f"d {gtok.text} given twice", gtok)
            self.take("=")
            terms = {m: c for m, c in self.expr(n).items() if c}
            for (I, J) in terms:
                if len(I) + len(J) != 2:
                    raise self.error(f"d {gtok.text} must be a 2-form", gtok)
            dphi[k] = terms
            self.skip_separators()
        if closing:
            self.take("}")
        try:
            spec = AlgebraSpec(name, n, {k: _canonical(t, n) for k, t in dphi.items()})
        except AlgebraError as exc:
            raise DSLSemanticError(str(exc)) from None
        if self.check:
            report = validate(spec)
            if not report.valid:
                raise DSLSemanticError(f"algebra {name}: " + "; ".join(report.failures))
        if name in self.doc.algebras and name != "anonymous":
            raise DSLSemanticError(f"algebra {name!r} defined twice")
        self.doc.algebras[name] = spec

    # -- expressions ------------------------------------------------------
    def scalar(self):
        """Parse a scalar if one starts here, else return ``None``."""
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return parse_scalar(tok.text)
        if tok.kind == "ident" and tok.text == "i":
            self.pos += 1
            return GaussianRational(0, 1)
        if tok.kind == "(":
            start = self.pos
            self.pos += 1
            text = ""
            while not self.at(")"):
                if self.at("eof"):
                    raise self.error("unterminated scalar")
                text += self.tok.text
                self.pos += 1
            self.pos += 1
            try:
                return parse_scalar(text)
            except ValueError:
                raise self.error(f"bad scalar literal {text!r}", self.tokens[start]) from None
        return None

    def gens(self, n: int):
        hol, anti = [], []
        while True:
            tok = self.take("gen")
            k = int(tok.text.lstrip("phi~"))
            if not 1 <= k <= n:
                raise self.error(f"generator {tok.text} out of range for dim {n}", tok)
            (anti if "~" in tok.text else hol).append(k)
            if self.at("^"):
                self.pos += 1
                continue
            return hol, anti

    def term(self, n: int):
        """``[scalar *] GEN (^ GEN)*`` or a bare scalar; returns (hol, anti, coeff)."""
        coeff = self.scalar()
        if coeff is not None:
            if self.at("*"):
                self.pos += 1
            else:
                return [], [], coeff
        else:
            coeff = GaussianRational(1)
        if not self.at("gen"):
            raise self.error(f"expected a generator, found {self.tok.text or 'end of input'!r}")
        hol, anti = self.gens(n)
        return hol, anti, coeff

    def expr(self, n: int) -> dict:
        """Returns raw ``{(hol, anti): coeff}`` with unsorted tuples summed after sorting."""
        terms = []
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
        while True:
            hol, anti, c = self.term(n)
            terms.append(((tuple(hol), tuple(anti)), c * sign))
            if self.at("+") or self.at("-"):
                sign = -1 if self.take().text == "-" else 1
                continue
            break
        out: dict = {}
        for key, c in terms:
            out[key] = out.get(key, 0) + c
        return out

    def vterm(self, n: int):
        coeff = self.scalar()
        if coeff is not None:
            self.take("*")
        else:
            coeff = GaussianRational(1)
        anti = []
        if self.at("gen"):
            tok = self.tok
            hol, anti = self.gens(n)
            if hol:
                raise self.error("vector form coefficients must be (0,q)-forms", tok)
            self.take("*")
        etok = self.take("evec")
        lam = int(etok.text[1:])
        if not 1 <= lam <= n:
            raise self.error(f"frame field {etok.text} out of range for dim {n}", etok)
        return lam, tuple(anti), coeff

    def vexpr(self, n: int):
        terms = []
        sign = 1
        if self.at("num") and self.tok.text == "0" and self.peek().kind != "*":
            self.pos += 1
            return []
        if self.at("+") or self.at("-"):
            sign = -1 if self.take().text == "-" else 1
        while True:
            lam, J, c = self.vterm(n)
            terms.append((lam, J, c * sign))
            if self.at("+") or self.at("-"):
                sign = -1 if self.take().text == "-" else 1
                continue
            return terms

    def bidegree(self):
        self.take("(")
        p = self.integer()
        self.take(",")
        q = self.integer()
        self.take(")")
        return p, q

    def algebra_ref(self) -> AlgebraSpec:
        tok = self.take("ident")
        if tok.text not in self.doc.algebras:
            raise DSLSemanticError(f"line {tok.line}: unknown algebra {tok.text!r}")
        return self.doc.algebras[tok.text]

    def form_decl(self):
        self.take("ident", "form")
        name = self.take("ident").text
        self.take("ident", "on")
        owner = self.tok.text
        a = self.algebra_ref()
        p, q = self.bidegree()
        self.take("=")
        form = Form(a, self.expr(a.n))
        if form and form.bidegrees() != {(p, q)}:
            raise DSLSemanticError(f"form {name} is declared ({p},{q}) but has terms of bidegree " + ", ".join(f"({x},{y})" for x, y in sorted(form.bidegrees())))
        self.doc.forms[name] = form
        self.doc.form_owner[name] = owner

    def vector_decl(self):
        self.take("ident", "vector")
        name = self.take("ident").text
        self.take("ident", "on")
        owner = self.tok.text
        a = self.algebra_ref()
        declared = None
        if self.at("("):
            p, declared = self.bidegree()
            if p != 0:
                raise DSLSemanticError(f"vector {name} must have bidegree (0,q)")
        self.take("=")
        terms = self.vexpr(a.n)
        qs = {len(J) for _, J, _ in terms}
        if len(qs) > 1:
            raise DSLSemanticError(f"vector {name} mixes (0,q) degrees {sorted(qs)}")
        q = qs.pop() if qs else (declared or 0)
        if declared is not None and q != declared:
            raise DSLSemanticError(f"vector {name} is declared (0,{declared}) but has degree {q}")
        raw: dict = {}
        for lam, J, c in terms:
            vf = VectorForm(a, q, {(lam, J): c})
            for key, v in vf.terms.items():
                raw[key] = raw.get(key, 0) + v
        self.doc.vectors[name] = VectorForm(a, q, raw)
        self.doc.vector_owner[name] = owner

    def fibration_decl(self):
        self.take("ident", "fibration")
        name = "fibration"
        if self.at("ident") and self.tok.text != "on":
            name = self.take("ident").text
        if self.at("ident", "on"):
            self.pos += 1
            owner = self.tok.text
            a = self.algebra_ref()
        else:
            if not self.doc.algebras:
                raise DSLSemanticError("fibration block before any algebra")
            owner = next(reversed(self.doc.algebras))
            a = self.doc.algebras[owner]
        self.take("{")
        base = eta = psi3 = None
        while not self.at("}"):
            key = self.take("ident")
            self.take("=")
            if key.text == "base":
                first = self.integer()
                if self.at(".."):
                    self.pos += 1
                    last = self.integer()
                    base = tuple(range(first, last + 1))
                else:
                    items = [first]
                    while self.at(","):
                        self.pos += 1
                        items.append(self.integer())
                    base = tuple(items)
            elif key.text == "eta":
                fields = [self.vexpr(a.n)]
                while self.at(","):
                    self.pos += 1
                    fields.append(self.vexpr(a.n))
                eta = tuple(VectorForm(a, 0, {(lam, ()): c for lam, J, c in f if not J}) for f in fields)
                if any(J for f in fields for _, J, _ in f):
                    raise DSLSemanticError("eta entries must be vector fields")
            elif key.text == "psi3":
                psi3 = Form(a, self.expr(a.n))
            else:
                raise self.error(f"unknown fibration key {key.text!r}", key)
            self.skip_separators()
        self.take("}")
        if base is None or eta is None or psi3 is None:
            raise DSLSemanticError(f"fibration {name} needs base, eta and psi3")
        if len(eta) != 3:
            raise DSLSemanticError(f"fibration {name} needs exactly three eta fields")
        self.doc.fibrations[name] = FibrationDecl(name, owner, base, eta, psi3)


def _canonical(raw: dict, n: int) -> dict:
    """Sort raw index tuples with their signs (via :class:`Form`)."""
    return dict(Form(AlgebraSpec("_", n, {}), raw).terms)


def parse_document(source: str, check: bool = True) -> Document:
    return _Parser(source, check=check).document()


def parse(source: str) -> AlgebraSpec:
    """Parse and validate the first algebra in ``source``."""
    return parse_document(source).algebra()


def parse_form(text: str, a: AlgebraSpec) -> Form:
    """Parse an expression such as ``phi1^phi2 - 2*phi3`` on ``a``."""
    p = _Parser(text, {a.name: a})
    form = Form(a, p.expr(a.n))
    if not p.at("eof"):
        raise p.error(f"unexpected {p.tok.text!r}")
    return form


def parse_vector(text: str, a: AlgebraSpec, q: int | None = None) -> VectorForm:
    p = _Parser(text, {a.name: a})
    terms = p.vexpr(a.n)
    if not p.at("eof"):
        raise p.error(f"unexpected {p.tok.text!r}")
    qs = {len(J) for _, J, _ in terms}
    if len(qs) > 1:
        raise DSLSemanticError("vector form mixes degrees")
    deg = qs.pop() if qs else (q or 0)
    raw: dict = {}
    for lam, J, c in terms:
        for key, v in VectorForm(a, deg, {(lam, J): c}).terms.items():
            raw[key] = raw.get(key, 0) + v
    return VectorForm(a, deg, raw)


# -- serialization ------------------------------------------------------------


def serialize_algebra(a: AlgebraSpec) -> str:
    lines = [f"algebra {a.name} {{", f"  dim {a.n}"]
    for k in sorted(a.dphi):
        rhs = format_terms([(mono_str(m), c) for m, c in sorted(a.dphi[k].items(), key=lambda mc: (-len(mc[0][0]), mc[0]))])
        lines.append(f"  d phi{k} = {rhs}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_form(name: str, u: Form, owner: str | None = None) -> str:
    owner = owner or u.algebra.name
    bideg = u.bidegree or (0, 0)
    return f"form {name} on {owner} ({bideg[0]},{bideg[1]}) = {u}\n"


def serialize_vector(name: str, t: VectorForm, owner: str | None = None) -> str:
    owner = owner or t.algebra.name
    return f"vector {name} on {owner} (0,{t.q}) = {t}\n"


def serialize_fibration(f: FibrationDecl) -> str:
    base = f.base
    if base == tuple(range(base[0], base[-1] + 1)):
        base_text = f"{base[0]}..{base[-1]}"
    else:
        base_text = ", ".join(map(str, base))
    eta = ", ".join(str(e) for e in f.eta)
    return f"fibration {f.name} on {f.algebra} {{ base = {base_text}; eta = {eta}; psi3 = {f.psi3} }}\n"


def serialize_document(doc: Document) -> str:
    parts = [serialize_algebra(a) for a in doc.algebras.values()]
    for name, u in doc.forms.items():
        parts.append(serialize_form(name, u, doc.form_owner.get(name)))
    for name, t in doc.vectors.items():
        parts.append(serialize_vector(name, t, doc.vector_owner.get(name)))
    for f in doc.fibrations.values():
        parts.append(serialize_fibration(f))
    return "".join(parts)
