"""Sparse multivariate polynomials with Gaussian-rational coefficients.

Only ring operations and affine substitution are provided; the symbolic
non-existence arguments built on top of this never need division.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussianRational, as_gq

__all__ = ["Poly"]


class Poly:
    """Polynomial in named variables.

    ``variables`` is an ordered tuple of names and ``terms`` maps exponent
    vectors (aligned with ``variables``) to nonzero coefficients.  Operations
    between polynomials over different variable lists work on the union.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables=(), terms=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise ValueError("exponent vector does not match variables")
            c = as_gq(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, variables, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw((name,), {(1,): GaussianRational(1)})

    @classmethod
    def const(cls, c, variables=()) -> "Poly":
        c = as_gq(c)
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    # -- alignment ------------------------------------------------------
    def _aligned(self, variables):
        if variables == self.variables:
            return self.terms
        pos = [variables.index(v) for v in self.variables]
        out = {}
        width = len(variables)
        for exps, c in self.terms.items():
            full = [0] * width
            for k, e in zip(pos, exps):
                full[k] = e
            out[tuple(full)] = c
        return out

    def _union(self, other: "Poly"):
        if other.variables == self.variables:
            return self.variables
        extra = tuple(v for v in other.variables if v not in self.variables)
        return self.variables + extra

    @staticmethod
    def _coerce(x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (GaussianRational, int, Fraction)):
            return Poly.const(x)
        return None

    # -- ring operations ------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        variables = self._union(other)
        out = dict(self._aligned(variables))
        for exps, c in other._aligned(variables).items():
            s = out.get(exps)
            s = c if s is None else s + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Poly._raw(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            if not other:
                return Poly._raw(self.variables, {})
            return Poly._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        variables = self._union(other)
        left = self._aligned(variables)
        right = other._aligned(variables)
        out = {}
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                s = c1 * c2 if s is None else s + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.const(1, self.variables)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(str(self))

    def substitute(self, mapping: dict) -> "Poly":
        """Replace the named variables by polynomials (or scalars).

        Intended for affine replacements, but any polynomial is accepted.
        Variables not listed in ``mapping`` are kept.
        """
        result = Poly()
        for exps, c in self.terms.items():
            term = Poly.const(c)
            for name, e in zip(self.variables, exps):
                if not e:
                    continue
                base = mapping.get(name)
                base = Poly.var(name) if base is None else Poly._coerce(base)
                term = term * (base ** e)
            result = result + term
        return result.trimmed()

    def trimmed(self) -> "Poly":
        """Drop variables that no longer occur."""
        used = [k for k in range(len(self.variables)) if any(e[k] for e in self.terms)]
        if len(used) == len(self.variables):
            return self
        variables = tuple(self.variables[k] for k in used)
        return Poly._raw(variables, {tuple(e[k] for k in used): c for e, c in self.terms.items()})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_value(self):
        """The value of a constant polynomial, else ``None``."""
        if not self.terms:
            return GaussianRational(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        return None

    # -- canonical order and text ---------------------------------------
    def sorted_terms(self):
        """Terms in degree-lexicographic order, highest first, with variables
        compared by name so the order does not depend on union history."""
        names = self.variables
        order = sorted(range(len(names)), key=lambda k: names[k])

        def key(item):
            exps = item[0]
            return (-sum(exps), tuple(-exps[k] for k in order))

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in sorted(zip(self.variables, exps))
                if e
            )
            if not mono:
                pieces.append(_wrap(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{_wrap(c)}*{mono}")
        text = pieces[0]
        for p in pieces[1:]:
            text += p if p.startswith("-") else "+" + p
        return text

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _wrap(c: GaussianRational) -> str:
    s = str(c)
    return f"({s})" if c.re and c.im else s
