"""Invariant forms, vector-valued forms and the operators acting on them.

A :class:`Form` is a sparse map ``(I, J) -> coefficient`` meaning
``sum c * phi^I ^ phi~J``.  Coefficients are Gaussian rationals, or
:class:`~pcontact.poly.Poly` values when a symbolic form is needed.

A :class:`VectorForm` of degree ``q`` stores ``theta = sum theta^lam (x) e_lam``
as the sparse map ``(lam, J) -> coefficient`` where ``theta^lam`` is the
``(0, q)``-form ``sum_J c phi~J``.  Contraction puts the form part on the left::

    theta -| u = sum_lam theta^lam ^ (e_lam -| u)

Lie derivatives::

    lieT(theta, u) = del(theta -| u) - (-1)**(q - 1) * theta -| del(u)

and the bracket of two (0,1) vector forms is read off from the graded
commutator ``[theta -|, L_psi] = [theta, psi] -|`` applied to each
``phi^lam``.  :func:`bracket_oracle` recomputes it from a nonvanishing
``(n, 0)`` form by a generalised Tian-Todorov formula and a linear solve.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from itertools import combinations

from .algebra import AlgebraError, AlgebraSpec
from .linalg import LinearSystem, InfeasibleSystem, particular
from .scalars import GaussianRational, as_gq

__all__ = [
    "Form",
    "VectorForm",
    "wedge",
    "d",
    "del_",
    "delbar",
    "conj",
    "interior",
    "contract",
    "vcontract",
    "lie10",
    "lieT",
    "bracket",
    "bracket_oracle",
    "invert_contraction",
    "monomials",
    "vector_monomials",
    "frame_field",
    "phi",
    "phibar",
    "vf_bracket",
]

_SCALARS = (GaussianRational, int, Fraction)


# -- monomial kernels -------------------------------------------------------


def _merge(a: tuple, b: tuple):
    """Sorted union of two increasing tuples with the sign of the shuffle,
    or ``None`` when they share an index."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    sa = set(a)
    la = len(a)
    for x in b:
        if x in sa:
            return None
        inversions += la - bisect_right(a, x)
    merged = tuple(sorted(a + b))
    return (-1 if inversions % 2 else 1), merged


def mono_wedge(m1, m2):
    """``(sign, monomial)`` with ``phi^I1 phi~J1 ^ phi^I2 phi~J2 = sign * monomial``."""
    I1, J1 = m1
    I2, J2 = m2
    sign = -1 if (len(J1) * len(I2)) % 2 else 1
    r = _merge(I1, I2)
    if r is None:
        return None
    s1, I = r
    r = _merge(J1, J2)
    if r is None:
        return None
    s2, J = r
    return sign * s1 * s2, (I, J)


def _acc(out: dict, key, value):
    s = out.get(key)
    s = value if s is None else s + value
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _sort_with_sign(idx):
    """Sort a sequence of indices, returning ``(sign, sorted_tuple)`` or ``None``."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


def monomials(n: int, p: int, q: int):
    """Canonical basis keys of invariant (p,q)-forms."""
    return [(I, J) for I in combinations(range(1, n + 1), p) for J in combinations(range(1, n + 1), q)]


def vector_monomials(n: int, q: int):
    """Canonical basis keys ``(lam, J)`` of (0,q) vector forms."""
    return [(lam, J) for lam in range(1, n + 1) for J in combinations(range(1, n + 1), q)]


# -- forms --------------------------------------------------------------------


class Form:
    """Sparse invariant differential form on ``algebra``.

    Index tuples passed to the constructor may be unsorted; they are
    sorted with the corresponding sign and repeated indices give zero.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraSpec, terms: dict | None = None):
        clean: dict = {}
        n = algebra.n
        for (I, J), c in (terms or {}).items():
            if not isinstance(c, _SCALARS):
                if not hasattr(c, "terms"):
                    raise TypeError(f"unsupported coefficient type {type(c).__name__}")
            elif not isinstance(c, GaussianRational):
                c = GaussianRational(c)
            if not c:
                continue
            if any(not 1 <= x <= n for x in tuple(I) + tuple(J)):
                raise ValueError(f"index out of range for dimension {n}")
            rI = _sort_with_sign(I)
            rJ = _sort_with_sign(J)
            if rI is None or rJ is None:
                continue
            _acc(clean, (rI[1], rJ[1]), c if rI[0] * rJ[0] == 1 else -c)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _make(cls, algebra, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "algebra", algebra)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    @classmethod
    def zero(cls, algebra):
        return cls._make(algebra, {})

    @classmethod
    def monomial(cls, algebra, hol=(), anti=(), coeff=1):
        return cls(algebra, {(tuple(hol), tuple(anti)): coeff})

    # -- structure --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set:
        return {(len(I), len(J)) for (I, J) in self.terms}

    @property
    def bidegree(self):
        """The bidegree of a homogeneous nonzero form, else ``None``."""
        degs = self.bidegrees()
        return next(iter(degs)) if len(degs) == 1 else None

    @property
    def degree(self):
        degs = {p + q for p, q in self.bidegrees()}
        return next(iter(degs)) if len(degs) == 1 else None

    def component(self, p: int, q: int) -> "Form":
        return Form._make(self.algebra, {m: c for m, c in self.terms.items() if len(m[0]) == p and len(m[1]) == q})

    def homogeneous_parts(self) -> list:
        """Mixed forms split into homogeneous summands, ordered by bidegree."""
        return [self.component(p, q) for p, q in sorted(self.bidegrees())]

    def coefficient(self, hol=(), anti=()):
        return self.terms.get((tuple(hol), tuple(anti)), GaussianRational(0))

    def top_coefficient(self):
        """Coefficient of ``phi^1 ^ ... ^ phi^n``."""
        return self.coefficient(tuple(range(1, self.algebra.n + 1)), ())

    def _check(self, other):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraError("forms live on different algebras")

    # -- linear structure -------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return Form._make(self.algebra, out)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return Form._make(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Form):
            return NotImplemented
        if not isinstance(scalar, GaussianRational) and isinstance(scalar, (int, Fraction)):
            scalar = GaussianRational(scalar)
        if not scalar:
            return Form._make(self.algebra, {})
        out = {}
        for m, c in self.terms.items():
            v = scalar * c
            if v:
                out[m] = v
        return Form._make(self.algebra, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Form):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self):
        return hash(str(self))

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __pow__(self, k: int):
        """Wedge power (``u**0`` is the constant 1)."""
        result = Form._make(self.algebra, {((), ()): GaussianRational(1)})
        for _ in range(k):
            result = wedge(result, self)
        return result

    # -- text ---------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (len(mc[0][0]) + len(mc[0][1]), len(mc[0][0]), mc[0]))

    def __str__(self):
        return format_terms([(mono_str(m), c) for m, c in self.sorted_terms()])

    def __repr__(self):
        return f"Form({self.algebra.name}: {self})"


def mono_str(m) -> str:
    I, J = m
    parts = [f"phi{i}" for i in I] + [f"phi~{j}" for j in J]
    return "^".join(parts)


def scalar_str(c) -> str:
    s = str(c)
    if isinstance(c, GaussianRational):
        return f"({s})" if (c.re and c.im) else s
    return f"({s})"


def format_terms(items) -> str:
    """Join ``(basis_text, coefficient)`` pairs as ``a*x + b*y`` text."""
    if not items:
        return "0"
    pieces = []
    for basis, c in items:
        if not basis:
            piece = scalar_str(c)
        elif isinstance(c, GaussianRational) and c == 1:
            piece = basis
        elif isinstance(c, GaussianRational) and c == -1:
            piece = "-" + basis
        else:
            piece = f"{scalar_str(c)}*{basis}"
        pieces.append(piece)
    text = pieces[0]
    for p in pieces[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


def phi(a: AlgebraSpec, k: int) -> Form:
    return Form._make(a, {((k,), ()): GaussianRational(1)})


def phibar(a: AlgebraSpec, k: int) -> Form:
    return Form._make(a, {((), (k,)): GaussianRational(1)})


# -- wedge and differentials --------------------------------------------------


def wedge(u: Form, v: Form) -> Form:
    """Exterior product with Koszul signs from interleaving sorted indices."""
    u._check(v)
    a = u.algebra
    out: dict = {}
    if not u.terms or not v.terms:
        return Form._make(a, out)
    n = a.n
    # Fast path: when the holomorphic degrees add up to n only complementary
    # index sets can meet, so look them up instead of scanning all pairs.
    hol_u = {len(m[0]) for m in u.terms}
    hol_v = {len(m[0]) for m in v.terms}
    if len(hol_u) == 1 and len(hol_v) == 1 and next(iter(hol_u)) + next(iter(hol_v)) == n and len(v.terms) > 8:
        full = frozenset(range(1, n + 1))
        by_hol: dict = {}
        for m2, c2 in v.terms.items():
            by_hol.setdefault(m2[0], []).append((m2, c2))
        for m1, c1 in u.terms.items():
            comp = tuple(sorted(full.difference(m1[0])))
            for m2, c2 in by_hol.get(comp, ()):
                r = mono_wedge(m1, m2)
                if r is not None:
                    s, m = r
                    _acc(out, m, c1 * c2 if s == 1 else -(c1 * c2))
        return Form._make(a, out)
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            r = mono_wedge(m1, m2)
            if r is not None:
                s, m = r
                _acc(out, m, c1 * c2 if s == 1 else -(c1 * c2))
    return Form._make(a, out)


def _d_mono(a: AlgebraSpec, m, part: str) -> dict:
    key = (part, m)
    cache = a.cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    I, J = m
    out: dict = {}
    seq = [(i, False) for i in I] + [(j, True) for j in J]
    for pos, (k, anti) in enumerate(seq):
        dg = a.gen_part(k, anti, part)
        if not dg:
            continue
        rest = (I, tuple(x for x in J if x != k)) if anti else (tuple(x for x in I if x != k), J)
        sign = -1 if pos % 2 else 1
        for m2, c in dg.items():
            r = mono_wedge(m2, rest)
            if r is not None:
                s, mm = r
                _acc(out, mm, c if s * sign == 1 else -c)
    cache[key] = out
    return out


def _apply_d(u: Form, part: str) -> Form:
    a = u.algebra
    out: dict = {}
    for m, c in u.terms.items():
        for mm, v in _d_mono(a, m, part).items():
            _acc(out, mm, c * v)
    return Form._make(a, out)


def d(u: Form) -> Form:
    """Exterior derivative, extended from the generators as an antiderivation."""
    return _apply_d(u, "d")


def del_(u: Form) -> Form:
    """The (p+1, q) component of ``d``."""
    return _apply_d(u, "del")


def delbar(u):
    """The (p, q+1) component of ``d``; on vector forms it acts componentwise."""
    if isinstance(u, VectorForm):
        return u.delbar()
    return _apply_d(u, "delbar")


def conj(u: Form) -> Form:
    """Complex conjugate: ``conj(c phi^I phi~J) = conj(c) (-1)^{|I||J|} phi^J phi~I``."""
    out = {}
    for (I, J), c in u.terms.items():
        if not isinstance(c, GaussianRational):
            raise TypeError("conjugation needs Gaussian-rational coefficients")
        out[(J, I)] = c.conj() if (len(I) * len(J)) % 2 == 0 else -c.conj()
    return Form._make(u.algebra, out)


# -- vector forms -------------------------------------------------------------


class VectorForm:
    """``sum theta^lam (x) e_lam`` with (0,q)-form coefficients; ``q = 0`` gives a vector field."""

    __slots__ = ("algebra", "q", "terms")

    def __init__(self, algebra: AlgebraSpec, q: int, terms: dict | None = None):
        clean: dict = {}
        n = algebra.n
        for (lam, J), c in (terms or {}).items():
            if not isinstance(c, GaussianRational):
                c = as_gq(c)
            if not c:
                continue
            if not 1 <= lam <= n or any(not 1 <= x <= n for x in J):
                raise ValueError(f"index out of range for dimension {n}")
            if len(J) != q:
                raise ValueError(f"component of degree {len(J)} in a (0,{q}) vector form")
            r = _sort_with_sign(J)
            if r is None:
                continue
            _acc(clean, (lam, r[1]), c if r[0] == 1 else -c)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _make(cls, algebra, q, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "algebra", algebra)
        object.__setattr__(obj, "q", q)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("VectorForm is immutable")

    @classmethod
    def zero(cls, algebra, q: int):
        return cls._make(algebra, q, {})

    @classmethod
    def from_components(cls, algebra, q: int, components: dict):
        """Build from ``{lam: Form}`` with every form of bidegree (0, q)."""
        terms: dict = {}
        for lam, f in components.items():
            for (I, J), c in f.terms.items():
                if I or len(J) != q:
                    raise ValueError(f"component {lam} is not a (0,{q})-form")
                _acc(terms, (lam, J), c)
        return cls._make(algebra, q, terms)

    def component(self, lam: int) -> Form:
        return Form._make(self.algebra, {((), J): c for (l, J), c in self.terms.items() if l == lam})

    def components(self) -> dict:
        out: dict = {}
        for (lam, J), c in self.terms.items():
            out.setdefault(lam, {})[((), J)] = c
        return {lam: Form._make(self.algebra, t) for lam, t in sorted(out.items())}

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if not isinstance(other, VectorForm):
            raise TypeError("expected a VectorForm")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraError("vector forms live on different algebras")
        if other.q != self.q and other.terms and self.terms:
            raise ValueError("vector forms of different degree")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        q = self.q if self.terms or not other.terms else other.q
        return VectorForm._make(self.algebra, q, out)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return VectorForm._make(self.algebra, self.q, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (Form, VectorForm)):
            return NotImplemented
        scalar = as_gq(scalar)
        if not scalar:
            return VectorForm._make(self.algebra, self.q, {})
        return VectorForm._make(self.algebra, self.q, {m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, VectorForm):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            return False
        if not self.terms and not other.terms:
            return True
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.q, str(self)))

    def delbar(self) -> "VectorForm":
        """Componentwise ``delbar``; the frame is holomorphic when parallelisable."""
        a = self.algebra
        _require_parallelisable(a, "delbar of a vector form")
        out: dict = {}
        for (lam, J), c in self.terms.items():
            for (I2, J2), v in _d_mono(a, ((), J), "delbar").items():
                _acc(out, (lam, J2), c * v)
        return VectorForm._make(a, self.q + 1, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (mc[0][1], mc[0][0]))

    def __str__(self):
        items = []
        for (lam, J), c in self.sorted_terms():
            form = mono_str(((), J))
            basis = f"{form}*e{lam}" if form else f"e{lam}"
            items.append((basis, c))
        return format_terms(items)

    def __repr__(self):
        return f"VectorForm({self.algebra.name}, q={self.q}: {self})"


def _require_parallelisable(a: AlgebraSpec, what: str):
    if not a.parallelisable:
        raise AlgebraError(f"{what} needs a parallelisable algebra (the frame fields are not holomorphic)")


def frame_field(a: AlgebraSpec, k: int) -> VectorForm:
    return VectorForm._make(a, 0, {(k, ()): GaussianRational(1)})


# -- contractions -------------------------------------------------------------


def _interior_mono(k: int, m):
    I, J = m
    for pos, x in enumerate(I):
        if x == k:
            return (-1 if pos % 2 else 1), (I[:pos] + I[pos + 1:], J)
        if x > k:
            break
    return None


def interior(k: int, u: Form) -> Form:
    """Contraction ``e_k -| u`` (antiderivation of degree -1 on holomorphic indices)."""
    out: dict = {}
    for m, c in u.terms.items():
        r = _interior_mono(k, m)
        if r is not None:
            s, mm = r
            _acc(out, mm, c if s == 1 else -c)
    return Form._make(u.algebra, out)


def vcontract(t: VectorForm, u: Form) -> Form:
    """``sum_lam t^lam ^ (e_lam -| u)``."""
    if t.algebra is not u.algebra and t.algebra != u.algebra:
        raise AlgebraError("vector form and form live on different algebras")
    out: dict = {}
    by_lam: dict = {}
    for (lam, J), c in t.terms.items():
        by_lam.setdefault(lam, []).append((J, c))
    for m, c in u.terms.items():
        for lam in m[0]:
            entries = by_lam.get(lam)
            if not entries:
                continue
            s, rest = _interior_mono(lam, m)
            for J, ct in entries:
                r = mono_wedge(((), J), rest)
                if r is not None:
                    s2, mm = r
                    v = ct * c
                    _acc(out, mm, v if s * s2 == 1 else -v)
    return Form._make(u.algebra, out)


def contract(x: VectorForm, u: Form) -> Form:
    """Contraction by a vector field (``x.q == 0``)."""
    if x.q != 0 and x.terms:
        raise ValueError("contract expects a vector field; use vcontract for vector forms")
    return vcontract(x, u)


# -- Lie derivatives ----------------------------------------------------------


def lie10(x: VectorForm, u: Form) -> Form:
    """``del(x -| u) + x -| del(u)`` for a vector field ``x``."""
    return del_(contract(x, u)) + contract(x, del_(u))


def lieT(t: VectorForm, u: Form) -> Form:
    """``del(t -| u) - (-1)**(q-1) t -| del(u)`` for a (0,q) vector form ``t``."""
    first = del_(vcontract(t, u))
    second = vcontract(t, del_(u))
    return first + second if t.q % 2 == 0 else first - second


# -- brackets -----------------------------------------------------------------


def vf_bracket(x: VectorForm, y: VectorForm) -> VectorForm:
    """Bracket of two invariant vector fields, from the frame bracket table."""
    from .algebra import bracket_table

    if x.q or y.q:
        raise ValueError("vf_bracket expects vector fields")
    table = bracket_table(x.algebra)
    out: dict = {}
    for (i, _), ci in x.terms.items():
        for (j, _), cj in y.terms.items():
            for k, c in table.get((i, j), {}).items():
                _acc(out, (k, ()), ci * cj * c)
    return VectorForm._make(x.algebra, 0, out)


def _check_01(t1: VectorForm, t2: VectorForm):
    for t in (t1, t2):
        if t.q != 1 and t.terms:
            raise ValueError("the bracket is defined here for (0,1) vector forms")
    if t1.algebra is not t2.algebra and t1.algebra != t2.algebra:
        raise AlgebraError("vector forms live on different algebras")
    _require_parallelisable(t1.algebra, "the bracket of vector forms")


def bracket(t1: VectorForm, t2: VectorForm) -> VectorForm:
    """``[t1, t2]`` with ``[t1,t2]^lam = t1 -| L_t2(phi^lam) - L_t2(t1 -| phi^lam)``."""
    _check_01(t1, t2)
    a = t1.algebra
    if not t1.terms or not t2.terms:
        return VectorForm._make(a, 2, {})
    out: dict = {}
    for lam in range(1, a.n + 1):
        g = phi(a, lam)
        comp = vcontract(t1, lieT(t2, g)) - lieT(t2, vcontract(t1, g))
        for (I, J), c in comp.terms.items():
            if I or len(J) != 2:
                raise AssertionError(f"bracket component {lam} is not a (0,2)-form: {comp}")
            out[(lam, J)] = c
    return VectorForm._make(a, 2, out)


def invert_contraction(w: Form, u: Form, q: int) -> VectorForm:
    """Solve ``theta -| u = w`` for a (0,q) vector form ``theta``.

    ``u`` must be a nonvanishing (n,0)-form; then the map is injective and
    the solution, if any, is unique.
    """
    a = u.algebra
    n = a.n
    if u.bidegree != (n, 0) or not u.top_coefficient():
        raise ValueError("u must be a nonvanishing (n,0)-form")
    unknowns, columns, rows_index, diagonal = _contraction_matrix(u, q)
    for m in w.terms:
        if m not in rows_index:
            raise ValueError(f"{mono_str(m)} is not in the image of contraction with u")
    if diagonal is not None:
        # every unknown maps to a single distinct monomial: invert term by term
        out = {}
        for m, c in w.terms.items():
            k, scale = diagonal[m]
            out[unknowns[k]] = c / scale
        return VectorForm._make(a, q, out)
    rows = [dict() for _ in rows_index]
    for col, image in enumerate(columns):
        for m, c in image.items():
            rows[rows_index[m]][col] = c
    rhs = [GaussianRational(0)] * len(rows_index)
    for m, c in w.terms.items():
        rhs[rows_index[m]] = c
    try:
        x = particular(LinearSystem(rows, len(unknowns), rhs), dense=False)
    except InfeasibleSystem as exc:
        raise ValueError("w is not a contraction against u") from exc
    return VectorForm._make(a, q, {unknowns[k]: c for k, c in x.items()})


def _contraction_matrix(u: Form, q: int):
    """Columns of ``theta -> theta -| u`` on (0,q) monomials, cached on the algebra."""
    a = u.algebra
    key = ("contraction_matrix", q, tuple(sorted(u.terms.items(), key=lambda kv: kv[0])))
    hit = a.cache.get(key)
    if hit is not None:
        return hit
    unknowns = vector_monomials(a.n, q)
    columns = []
    rows_index: dict = {}
    for mono in unknowns:
        image = vcontract(VectorForm._make(a, q, {mono: GaussianRational(1)}), u)
        columns.append(image.terms)
        for m in image.terms:
            rows_index.setdefault(m, len(rows_index))
    diagonal: dict | None = {}
    for k, image in enumerate(columns):
        if len(image) != 1:
            diagonal = None
            break
        (m, c), = image.items()
        if m in diagonal:
            diagonal = None
            break
        diagonal[m] = (k, c)
    hit = (unknowns, columns, rows_index, diagonal)
    a.cache[key] = hit
    return hit


def bracket_oracle(t1: VectorForm, t2: VectorForm, u: Form) -> VectorForm:
    """Recompute ``[t1, t2]`` from a nonvanishing (n,0)-form ``u``.

    ``[t1,t2] -| u = -del(t1 -| (t2 -| u)) + t1 -| del(t2 -| u) + t2 -| del(t1 -| u)``
    (using ``del u = 0``), followed by inversion of ``theta -> theta -| u``.
    """
    _check_01(t1, t2)
    a = u.algebra
    if u.bidegree != (a.n, 0) or not u.top_coefficient():
        raise ValueError("u is degenerate: a nonvanishing (n,0)-form is required")
    w = (
        -del_(vcontract(t1, vcontract(t2, u)))
        + vcontract(t1, del_(vcontract(t2, u)))
        + vcontract(t2, del_(vcontract(t1, u)))
    )
    return invert_contraction(w, u, 2)
