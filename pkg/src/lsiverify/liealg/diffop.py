"""Matrix-valued differential operators with Laurent-monomial coefficients.

A :class:`DiffOp` is a finite sum ``sum_k A_k * m_k(coords) * d^{alpha_k}``
with ``A_k`` a 2x2 matrix over :class:`ParamScalar`, ``m_k`` a monomial with
rational exponents and ``alpha_k`` a multi-index of partial derivatives.
Scalar operators are carried as ``s * Identity``.  Products are normal
ordered (derivatives to the right) by the Leibniz rule.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Iterable, Mapping

from ..symcore import ClosedForm, Coordinate, ParamScalar, differentiate
from ..symcore.scalars import as_bindings

ZERO = ParamScalar()
ONE = ParamScalar.const(1)


class Mat2:
    """2x2 matrix ``[[a, b], [c, d]]`` over ParamScalar."""

    __slots__ = ("e",)

    def __init__(self, a=0, b=0, c=0, d=0):
        self.e = tuple(ParamScalar.coerce(v) for v in (a, b, c, d))

    @classmethod
    def scalar(cls, s) -> "Mat2":
        s = ParamScalar.coerce(s)
        return cls(s, 0, 0, s)

    def __getitem__(self, ij):
        i, j = ij
        return self.e[2 * i + j]

    def is_zero(self):
        return not any(self.e)

    def is_scalar(self):
        a, b, c, d = self.e
        return not b and not c and a == d

    def is_upper_triangular(self):
        return not self.e[2]

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.e == other.e

    def __hash__(self):
        return hash(self.e)

    def __add__(self, other):
        return Mat2(*(x + y for x, y in zip(self.e, other.e)))

    def __neg__(self):
        return Mat2(*(-x for x in self.e))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Mat2":
        s = ParamScalar.coerce(s)
        return Mat2(*(x * s for x in self.e))

    def __matmul__(self, other):
        a, b, c, d = self.e
        p, q, r, s = other.e
        return Mat2(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)

    def subs(self, bindings):
        return Mat2(*(x.subs(bindings) for x in self.e))

    def __str__(self):
        if self.is_scalar():
            return str(self.e[0])
        a, b, c, d = self.e
        return f"[[{a}, {b}], [{c}, {d}]]"

    __repr__ = __str__


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for n, e in m2:
        v = acc.get(n, 0) + e
        if v:
            acc[n] = v
        else:
            acc.pop(n, None)
    return tuple(sorted(acc.items()))


def _mono_deriv(mono, gamma):
    """Apply d^gamma to a monomial: returns (rational factor, monomial) or None."""
    factor = Fraction(1)
    acc = dict(mono)
    for name, k in gamma:
        e = acc.get(name, Fraction(0))
        if e == 0:
            return None
        for j in range(k):
            factor *= (e - j)
        if factor == 0:
            return None
        new = e - k
        if new:
            acc[name] = new
        else:
            acc.pop(name)
    return factor, tuple(sorted(acc.items()))


def _sub_multi_indices(alpha):
    names = [n for n, _ in alpha]
    for ks in iproduct(*(range(k + 1) for _, k in alpha)):
        gamma = tuple((n, k) for n, k in zip(names, ks) if k)
        weight = 1
        for (_, a), k in zip(alpha, ks):
            weight *= comb(a, k)
        rest = tuple((n, a - k) for (n, a), k in zip(alpha, ks) if a - k)
        yield gamma, weight, rest


class DiffOp:
    """Immutable matrix-valued differential operator in normal order."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable = ()):
        acc: dict = {}
        for (mono, derivs), mat in terms:
            mono = tuple(sorted((n, Fraction(e)) for n, e in mono if e))
            derivs = tuple(sorted((n, k) for n, k in derivs if k))
            key = (mono, derivs)
            acc[key] = mat if key not in acc else acc[key] + mat
        items = [(k, m) for k, m in acc.items() if not m.is_zero()]
        items.sort(key=lambda km: km[0])
        self.terms = tuple(items)
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def scalar(cls, s) -> "DiffOp":
        return cls([(((), ()), Mat2.scalar(s))])

    @classmethod
    def matrix(cls, a=0, b=0, c=0, d=0) -> "DiffOp":
        return cls([(((), ()), Mat2(a, b, c, d))])

    @classmethod
    def var(cls, name: str, exponent=1) -> "DiffOp":
        return cls([((((name, Fraction(exponent)),), ()), Mat2.scalar(1))])

    @classmethod
    def d(cls, name: str, order: int = 1) -> "DiffOp":
        return cls([(((), ((name, order),)), Mat2.scalar(1))])

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls()

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        return max((sum(k for _, k in d) for (_, d), _ in self.terms), default=0)

    def coordinates(self) -> set:
        out = set()
        for (mono, derivs), _ in self.terms:
            out.update(n for n, _ in mono)
            out.update(n for n, _ in derivs)
        return out

    def params(self) -> set:
        out = set()
        for _, mat in self.terms:
            for x in mat.e:
                out |= x.params()
        return out

    def is_scalar(self) -> bool:
        return all(m.is_scalar() for _, m in self.terms)

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    # -- algebra --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        return DiffOp(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp((k, -m) for k, m in self.terms)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        s = ParamScalar.coerce(other)
        return DiffOp((k, m.scale(s)) for k, m in self.terms)

    def __rmul__(self, other):
        if isinstance(other, DiffOp):
            return compose(other, self)
        return self * other

    def __truediv__(self, other):
        return self * ParamScalar.coerce(other).inverse()

    def __pow__(self, k: int):
        out = DiffOp.scalar(1)
        for _ in range(k):
            out = compose(out, self)
        return out

    def subs(self, bindings: Mapping[str, object]) -> "DiffOp":
        b = as_bindings(bindings)
        return DiffOp((k, m.subs(b)) for k, m in self.terms)

    def rename(self, mapping: Mapping[str, str]) -> "DiffOp":
        """Rename coordinates (used to put an operator on a given leg)."""
        def mv(pairs):
            return tuple((mapping.get(n, n), e) for n, e in pairs)
        return DiffOp(((mv(mono), mv(derivs)), m) for (mono, derivs), m in self.terms)

    def filter(self, keep) -> "DiffOp":
        """Keep the terms for which ``keep(mono, derivs, mat)`` is true."""
        return DiffOp(((mono, derivs), m) for (mono, derivs), m in self.terms
                      if keep(mono, derivs, m))

    def entry(self, i: int, j: int) -> "DiffOp":
        """Scalar operator formed by the (i, j) matrix entries."""
        return DiffOp((k, Mat2.scalar(m[i, j])) for k, m in self.terms)

    # -- action on functions --------------------------------------------
    def apply(self, f: ClosedForm, entry: tuple = (0, 0),
              coords: Mapping[str, Coordinate] | None = None) -> ClosedForm:
        """Apply the ``entry`` matrix component of this operator to ``f``."""
        coords = coords or {}
        cache: dict = {}
        out = ClosedForm()
        for (mono, derivs), mat in self.terms:
            c = mat[entry]
            if not c:
                continue
            g = _derivative(f, derivs, coords, cache)
            if not g.terms:
                continue
            m = ClosedForm.const(c)
            for name, e in mono:
                m = m * ClosedForm.coord(coords.get(name) or Coordinate(name), e)
            out = out + m * g
        return out

    # -- rendering ------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mono, derivs), mat in self.terms:
            factors = []
            for n, e in mono:
                factors.append(n if e == 1 else f"{n}^({e})")
            for n, k in derivs:
                factors.append(f"d_{n}" if k == 1 else f"d_{n}^{k}")
            body = "*".join(factors)
            if mat.is_scalar():
                s = mat.e[0]
                cs = str(s) if s.is_monomial() else f"({s})"
                if body:
                    parts.append(body if s == 1 else ("-" + body if s == -1 else f"{cs}*{body}"))
                else:
                    parts.append(cs)
            else:
                parts.append(f"{mat}*{body}" if body else str(mat))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"DiffOp({self})"


def _coerce(x) -> DiffOp:
    if isinstance(x, DiffOp):
        return x
    return DiffOp.scalar(x)


def _derivative(f, derivs, coords, cache):
    if derivs in cache:
        return cache[derivs]
    g = f
    for name, k in derivs:
        c = coords.get(name) or Coordinate(name)
        for _ in range(k):
            g = differentiate(g, c)
    cache[derivs] = g
    return g


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """Normal-ordered product ``A o B``."""
    out = []
    for (ma, da), Ma in A.terms:
        for (mb, db), Mb in B.terms:
            M = Ma @ Mb
            if M.is_zero():
                continue
            for gamma, weight, rest in _sub_multi_indices(da):
                dm = _mono_deriv(mb, gamma) if gamma else (Fraction(1), mb)
                if dm is None:
                    continue
                factor, mono = dm
                derivs = dict(rest)
                for n, k in db:
                    derivs[n] = derivs.get(n, 0) + k
                out.append(((_mono_mul(ma, mono), tuple(sorted(derivs.items()))),
                            M.scale(ParamScalar.const(factor * weight))))
    return DiffOp(out)


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    """``[A, B] = AB - BA`` with matrix parts multiplied in order."""
    return compose(A, B) - compose(B, A)
