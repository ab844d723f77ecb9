"""Exact coefficient arithmetic.

Three value types live here:

* :class:`GaussQ` -- Gaussian rationals ``a + b*I`` with ``a, b`` in Q.
* :class:`ParamScalar` -- Laurent polynomials in named parameters with
  Gaussian-rational coefficients.
* :class:`ExponentExpr` -- affine forms ``c + sum w_p * p`` with rational
  weights, used as (possibly symbolic) exponents of coordinates.

Everything is immutable and hashable; nothing here ever touches a float.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class SymcoreError(Exception):
    """Base class for errors raised by the symbolic engine."""


class UnsupportedSubstitution(SymcoreError):
    pass


def _q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class GaussQ:
    """Gaussian rational ``re + im*I``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def coerce(cls, value) -> "GaussQ":
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        return cls(value)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, GaussQ):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        if not isinstance(other, _EXACT):
            return NotImplemented
        other = GaussQ.coerce(other)
        return GaussQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, _EXACT):
            return NotImplemented
        return self + (-GaussQ.coerce(other))

    def __rsub__(self, other):
        return GaussQ.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, _EXACT):
            return NotImplemented
        other = GaussQ.coerce(other)
        return GaussQ(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def inverse(self) -> "GaussQ":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussQ(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if not isinstance(other, _EXACT):
            return NotImplemented
        return self * GaussQ.coerce(other).inverse()

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "I" if self.im == 1 else ("-I" if self.im == -1 else f"{self.im}*I")
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        tail = "I" if mag == 1 else f"{mag}*I"
        return f"({self.re} {sign} {tail})"


_EXACT = (int, Fraction, GaussQ)

I = GaussQ(0, 1)

# A parameter monomial: sorted tuple of (name, nonzero int exponent).
Mono = tuple


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for name, e in b:
        v = acc.get(name, 0) + e
        if v:
            acc[name] = v
        else:
            acc.pop(name, None)
    return tuple(sorted(acc.items()))


class ParamScalar:
    """Laurent polynomial in parameters over the Gaussian rationals.

    Canonical: terms sorted by monomial, no zero coefficients, no duplicate
    monomials.  Negative parameter exponents are allowed (``1/theta``).
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable = ()):
        acc: dict = {}
        for mono, c in terms:
            c = GaussQ.coerce(c)
            if not c:
                continue
            mono = tuple(sorted((n, e) for n, e in dict(mono).items() if e))
            prev = acc.get(mono)
            acc[mono] = c if prev is None else prev + c
        self.terms = tuple(sorted((m, c) for m, c in acc.items() if c))
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def const(cls, value) -> "ParamScalar":
        return cls([((), GaussQ.coerce(value))])

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "ParamScalar":
        return cls([(((name, power),), GaussQ(1))])

    @classmethod
    def coerce(cls, value) -> "ParamScalar":
        if isinstance(value, ParamScalar):
            return value
        if isinstance(value, ExponentExpr):
            return value.to_scalar()
        if isinstance(value, str):
            return cls.symbol(value)
        return cls.const(value)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    def constant_value(self) -> GaussQ:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms[0][1] if self.terms else GaussQ(0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def params(self) -> set:
        return {n for m, _ in self.terms for n, _ in m}

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ParamScalar):
            try:
                other = ParamScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __add__(self, other):
        other = ParamScalar.coerce(other)
        return ParamScalar(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar((m, -c) for m, c in self.terms)

    def __sub__(self, other):
        return self + (-ParamScalar.coerce(other))

    def __rsub__(self, other):
        return ParamScalar.coerce(other) - self

    def __mul__(self, other):
        other = ParamScalar.coerce(other)
        if not self.terms or not other.terms:
            return ParamScalar()
        return ParamScalar((_mono_mul(m1, m2), c1 * c2)
                           for m1, c1 in self.terms for m2, c2 in other.terms)

    __rmul__ = __mul__

    def inverse(self) -> "ParamScalar":
        if len(self.terms) != 1:
            raise ZeroDivisionError(f"cannot invert non-monomial scalar {self}")
        mono, c = self.terms[0]
        return ParamScalar([(tuple((n, -e) for n, e in mono), c.inverse())])

    def __truediv__(self, other):
        return self * ParamScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ParamScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("ParamScalar powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        out = ParamScalar.const(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return ParamScalar((m, c.conjugate()) for m, c in self.terms)

    def content(self) -> Fraction:
        """Positive rational gcd-like normaliser: first nonzero component."""
        if not self.terms:
            return Fraction(1)
        c = self.terms[0][1]
        return abs(c.re) if c.re else abs(c.im)

    def normalized(self) -> "ParamScalar":
        """Scale so the leading coefficient is 1 (exact)."""
        if not self.terms:
            return self
        return self * self.terms[0][1].inverse()

    # -- substitution ---------------------------------------------------
    def subs(self, bindings: Mapping[str, "ParamScalar"]) -> "ParamScalar":
        if not bindings or not (self.params() & set(bindings)):
            return self
        out = ParamScalar()
        for mono, c in self.terms:
            term = ParamScalar.const(c)
            for name, e in mono:
                if name in bindings:
                    b = ParamScalar.coerce(bindings[name])
                    if e < 0 and not b.is_monomial():
                        raise UnsupportedSubstitution(
                            f"cannot substitute non-monomial {b} for {name}^{e}")
                    term = term * (b ** e)
                else:
                    term = term * ParamScalar.symbol(name, e)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        total = 0j
        for mono, c in self.terms:
            v = complex(c)
            for name, e in mono:
                v *= complex(values[name]) ** e
            total += v
        return total

    def to_sympy(self):
        import sympy
        expr = sympy.Integer(0)
        for mono, c in self.terms:
            coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
                c.im.numerator, c.im.denominator)
            term = coeff
            for name, e in mono:
                term *= sympy.Symbol(name) ** e
            expr += term
        return expr

    # -- rendering ------------------------------------------------------
    def __repr__(self):
        return f"ParamScalar({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            factors = [_render_power(n, e) for n, e in mono]
            if not factors:
                parts.append(_render_gauss(c))
                continue
            body = "*".join(factors)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{_render_gauss(c)}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _render_gauss(c: GaussQ) -> str:
    if c.im == 0:
        return _render_q(c.re)
    if c.re == 0:
        if c.im == 1:
            return "I"
        if c.im == -1:
            return "-I"
        return f"{_render_q(c.im)}*I"
    return f"({_render_q(c.re)} + {_render_q(c.im)}*I)"


def _render_q(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _render_power(name: str, e) -> str:
    if e == 1:
        return name
    return f"{name}^({_render_q(Fraction(e))})"


class ExponentExpr:
    """Affine exponent ``constant + sum(weight * param)`` over Q."""

    __slots__ = ("constant", "linear", "_hash")

    def __init__(self, constant: Rational = 0, linear: Mapping[str, Rational] | Iterable = ()):
        self.constant = _q(constant)
        items = linear.items() if isinstance(linear, Mapping) else linear
        acc: dict = {}
        for name, w in items:
            acc[name] = acc.get(name, Fraction(0)) + _q(w)
        self.linear = tuple(sorted((n, w) for n, w in acc.items() if w))
        self._hash = None

    @classmethod
    def coerce(cls, value) -> "ExponentExpr":
        if isinstance(value, ExponentExpr):
            return value
        if isinstance(value, str):
            return cls(0, {value: 1})
        if isinstance(value, ParamScalar):
            return cls.from_scalar(value)
        return cls(value)

    @classmethod
    def from_scalar(cls, s: ParamScalar) -> "ExponentExpr":
        const = Fraction(0)
        lin = {}
        for mono, c in s.terms:
            if not c.is_real():
                raise UnsupportedSubstitution(f"complex exponent {s}")
            if not mono:
                const += c.re
            elif len(mono) == 1 and mono[0][1] == 1:
                lin[mono[0][0]] = lin.get(mono[0][0], 0) + c.re
            else:
                raise UnsupportedSubstitution(f"exponent {s} is not affine in parameters")
        return cls(const, lin)

    def is_numeric(self) -> bool:
        return not self.linear

    def is_integer(self) -> bool:
        return not self.linear and self.constant.denominator == 1

    def is_zero(self) -> bool:
        return not self.linear and self.constant == 0

    def symbolic_class(self) -> tuple:
        """Exponent modulo the integers: (linear part, fractional constant)."""
        return (self.linear, self.constant - (self.constant.numerator // self.constant.denominator))

    def to_scalar(self) -> ParamScalar:
        terms = [((), GaussQ(self.constant))]
        terms += [(((n, 1),), GaussQ(w)) for n, w in self.linear]
        return ParamScalar(terms)

    def params(self) -> set:
        return {n for n, _ in self.linear}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not self.linear and self.constant == other
        if not isinstance(other, ExponentExpr):
            return NotImplemented
        return self.constant == other.constant and self.linear == other.linear

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.constant, self.linear))
        return self._hash

    def sort_key(self):
        return (self.linear, self.constant)

    def __add__(self, other):
        other = ExponentExpr.coerce(other)
        return ExponentExpr(self.constant + other.constant, self.linear + other.linear)

    __radd__ = __add__

    def __neg__(self):
        return ExponentExpr(-self.constant, [(n, -w) for n, w in self.linear])

    def __sub__(self, other):
        return self + (-ExponentExpr.coerce(other))

    def __rsub__(self, other):
        return ExponentExpr.coerce(other) - self

    def __mul__(self, k):
        k = _q(k)
        return ExponentExpr(self.constant * k, [(n, w * k) for n, w in self.linear])

    __rmul__ = __mul__

    def subs(self, bindings: Mapping[str, ParamScalar]) -> "ExponentExpr":
        if not bindings or not (self.params() & set(bindings)):
            return self
        return ExponentExpr.from_scalar(self.to_scalar().subs(bindings))

    def evaluate(self, values: Mapping[str, float]) -> float:
        return float(self.constant) + sum(float(w) * values[n] for n, w in self.linear)

    def __repr__(self):
        return f"ExponentExpr({self})"

    def __str__(self):
        return str(self.to_scalar())


def as_bindings(bindings: Mapping[str, object]) -> dict:
    """Coerce a user mapping ``name -> value`` to ``name -> ParamScalar``."""
    return {k: ParamScalar.coerce(v) for k, v in bindings.items()}
