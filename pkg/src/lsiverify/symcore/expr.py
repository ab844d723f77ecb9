"""Closed-form expressions: power-log-exponential sums over coordinates.

A :class:`ClosedForm` is a finite sum of terms

    coeff * prod(c ** e_c) * prod(ln(c) ** k_c) * exp(K)

with ``coeff`` a :class:`ParamScalar`, ``e_c`` an :class:`ExponentExpr`,
``k_c`` a nonnegative integer and ``K`` an optional *kernel-grade*
ClosedForm (numeric exponents, no logs, no nested kernels).  Coordinates
are either base coordinates or composites defined as polynomials in base
coordinates (``u = 2*(zeta1-zeta2)*(t1-t2) + I*(r1-r2)^2``).

Construction always merges like terms.  :func:`canonicalize` additionally
rewrites every term against a per-class reference monomial with composite
coordinates expanded, which is what makes :meth:`ClosedForm.is_zero`
decide equality of functions rather than of spellings.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .scalars import (ExponentExpr, GaussQ, ParamScalar, SymcoreError,
                      UnsupportedSubstitution, as_bindings)


class ClosureError(SymcoreError):
    """A kernel left the differential-closed basis."""


class BranchRequired(SymcoreError):
    """An absolute value or sign was requested without a branch assumption."""


class Coordinate:
    """A base coordinate, or a composite defined by a base-coordinate polynomial."""

    __slots__ = ("name", "definition", "branch_sign", "_hash", "_partials")

    def __init__(self, name: str, definition: Optional["ClosedForm"] = None,
                 branch_sign: Optional[int] = None):
        self.name = name
        self.definition = definition
        self.branch_sign = branch_sign
        self._hash = hash((name, definition))
        self._partials = {}
        if definition is not None:
            for key, _ in definition.terms:
                powers, logs, kernel = key
                if logs or kernel is not None:
                    raise ClosureError(f"composite {name} must be polynomial")
                for c, e in powers:
                    if not c.is_base:
                        raise SymcoreError(f"composite {name} references composite {c.name}")
                    if not (e.is_integer() and e.constant > 0):
                        raise ClosureError(f"composite {name} must be polynomial")

    @property
    def is_base(self) -> bool:
        return self.definition is None

    def base_coordinates(self) -> set:
        if self.is_base:
            return {self}
        return {c for key, _ in self.definition.terms for c, _ in key[0]}

    def partial(self, base: "Coordinate") -> "ClosedForm":
        """d(self)/d(base) as a ClosedForm (composites only reference base coords)."""
        if self.is_base:
            return ClosedForm.const(1 if self == base else 0)
        if base not in self._partials:
            self._partials[base] = differentiate(self.definition, base)
        return self._partials[base]

    def negated(self, name: Optional[str] = None) -> "Coordinate":
        """Composite coordinate equal to ``-self`` (the ``|t|`` of a negative branch)."""
        definition = -(self.definition if self.definition is not None else ClosedForm.coord(self))
        return Coordinate(name or f"neg_{self.name}", definition, branch_sign=1)

    def __eq__(self, other):
        if not isinstance(other, Coordinate) or self.name != other.name:
            return False
        if self.definition is None or other.definition is None:
            return self.definition is other.definition
        return self.definition.terms == other.definition.terms

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.name < other.name

    def __repr__(self):
        return f"Coordinate({self.name!r})" if self.is_base else f"Coordinate({self.name!r}, {self.definition})"


# ---------------------------------------------------------------------------
# term keys: (powers, logs, kernel)
#   powers: tuple of (Coordinate, ExponentExpr) sorted by coordinate name
#   logs:   tuple of (Coordinate, int) sorted by coordinate name
#   kernel: ClosedForm or None

EMPTY_KEY = ((), (), None)


def _key_sort(key):
    powers, logs, kernel = key
    return (tuple((c.name, e.sort_key()) for c, e in powers),
            tuple((c.name, k) for c, k in logs),
            kernel.sort_key() if kernel is not None else ())


def _merge_powers(a, b):
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for c, e in b:
        v = acc[c] + e if c in acc else e
        if v.is_zero():
            acc.pop(c, None)
        else:
            acc[c] = v
    return tuple(sorted(acc.items(), key=lambda ce: ce[0].name))


def _merge_logs(a, b):
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for c, k in b:
        acc[c] = acc.get(c, 0) + k
    return tuple(sorted(acc.items(), key=lambda ck: ck[0].name))


def _key_mul(k1, k2):
    p1, l1, K1 = k1
    p2, l2, K2 = k2
    if K1 is None:
        kernel = K2
    elif K2 is None:
        kernel = K1
    else:
        kernel = K1 + K2
        if not kernel.terms:
            kernel = None
    return (_merge_powers(p1, p2), _merge_logs(l1, l2), kernel)


class ClosedForm:
    """Immutable sum of power-log-kernel terms with ParamScalar coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable = ()):
        acc: dict = {}
        for key, coeff in terms:
            coeff = ParamScalar.coerce(coeff)
            if not coeff:
                continue
            prev = acc.get(key)
            acc[key] = coeff if prev is None else prev + coeff
        items = [(k, c) for k, c in acc.items() if c]
        items.sort(key=lambda kc: _key_sort(kc[0]))
        self.terms = tuple(items)
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value) -> "ClosedForm":
        return cls([(EMPTY_KEY, ParamScalar.coerce(value))])

    @classmethod
    def coord(cls, c: Coordinate, exponent=1) -> "ClosedForm":
        e = ExponentExpr.coerce(exponent)
        if e.is_zero():
            return cls.const(1)
        return cls([((((c, e),), (), None), ParamScalar.const(1))])

    @classmethod
    def log(cls, c: Coordinate, power: int = 1) -> "ClosedForm":
        if power == 0:
            return cls.const(1)
        return cls([(((), ((c, power),), None), ParamScalar.const(1))])

    @classmethod
    def exp(cls, kernel: "ClosedForm") -> "ClosedForm":
        check_kernel_grade(kernel)
        if not kernel.terms:
            return cls.const(1)
        return cls([(((), (), kernel), ParamScalar.const(1))])

    @classmethod
    def coerce(cls, value) -> "ClosedForm":
        if isinstance(value, ClosedForm):
            return value
        if isinstance(value, Coordinate):
            return cls.coord(value)
        return cls.const(value)

    # -- predicates / accessors -----------------------------------------
    def is_zero(self) -> bool:
        """Exact zero test of the represented function."""
        return not canonicalize(self).terms

    def is_literally_zero(self) -> bool:
        return not self.terms

    def coordinates(self) -> set:
        out = set()
        for (powers, logs, kernel), _ in self.terms:
            out.update(c for c, _ in powers)
            out.update(c for c, _ in logs)
            if kernel is not None:
                out |= kernel.coordinates()
        return out

    def params(self) -> set:
        out = set()
        for (powers, logs, kernel), coeff in self.terms:
            out |= coeff.params()
            for _, e in powers:
                out |= e.params()
            if kernel is not None:
                out |= kernel.params()
        return out

    def has_logs(self) -> bool:
        return any(key[1] for key, _ in self.terms)

    def sort_key(self):
        return tuple((_key_sort(k), str(c)) for k, c in self.terms)

    def __eq__(self, other):
        if not isinstance(other, ClosedForm):
            try:
                other = ClosedForm.coerce(other)
            except TypeError:
                return NotImplemented
        if self.terms == other.terms:
            return True
        return (self - other).is_zero()

    def same_terms(self, other: "ClosedForm") -> bool:
        return self.terms == other.terms

    def __hash__(self):
        # hash on the stored terms; __eq__ may identify differently-spelled
        # forms, so ClosedForms used as dict keys must be canonical spellings
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = ClosedForm.coerce(other)
        return ClosedForm(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ClosedForm((k, -c) for k, c in self.terms)

    def __sub__(self, other):
        return self + (-ClosedForm.coerce(other))

    def __rsub__(self, other):
        return ClosedForm.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (ParamScalar, int, Fraction, GaussQ)):
            s = ParamScalar.coerce(other)
            return ClosedForm((k, c * s) for k, c in self.terms)
        other = ClosedForm.coerce(other)
        return ClosedForm((_key_mul(k1, k2), c1 * c2)
                          for k1, c1 in self.terms for k2, c2 in other.terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ClosedForm):
            return self * other.reciprocal()
        return self * ParamScalar.coerce(other).inverse()

    def reciprocal(self) -> "ClosedForm":
        if len(self.terms) != 1:
            raise SymcoreError(f"cannot divide by the sum {self}")
        (powers, logs, kernel), coeff = self.terms[0]
        if logs:
            raise SymcoreError(f"cannot divide by a logarithm in {self}")
        inv_kernel = -kernel if kernel is not None else None
        key = (tuple((c, -e) for c, e in powers), (), inv_kernel)
        return ClosedForm([(key, coeff.inverse())])

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("use ClosedForm.coord for symbolic powers")
        if k < 0:
            return self.reciprocal() ** (-k)
        out = ClosedForm.const(1)
        for _ in range(k):
            out = out * self
        return out

    def map_coeffs(self, fn) -> "ClosedForm":
        return ClosedForm((k, fn(c)) for k, c in self.terms)

    # -- rendering ------------------------------------------------------
    def __repr__(self):
        return f"ClosedForm({render(self)!r})"

    def __str__(self):
        return render(self)


def check_kernel_grade(kernel: ClosedForm) -> None:
    for (powers, logs, inner), _ in kernel.terms:
        if logs or inner is not None:
            raise ClosureError(f"kernel term carries logs or a nested exponential: {kernel}")
        for c, e in powers:
            if not e.is_numeric():
                raise ClosureError(
                    f"kernel term {c.name}^({e}) has a symbolic exponent; its derivative leaves the basis")


def _term(key, coeff) -> ClosedForm:
    return ClosedForm([(key, coeff)])


def differentiate(expr: ClosedForm, coord: Coordinate) -> ClosedForm:
    """Exact partial derivative with respect to a base coordinate."""
    if not coord.is_base:
        raise SymcoreError(f"differentiate with respect to base coordinates only, got {coord.name}")
    out = []
    for key, coeff in expr.terms:
        powers, logs, kernel = key
        for i, (c, e) in enumerate(powers):
            dc = c.partial(coord)
            if not dc.terms:
                continue
            rest = powers[:i] + powers[i + 1:]
            shifted = e - 1
            new_powers = rest if shifted.is_zero() else _merge_powers(rest, ((c, shifted),))
            piece = _term((new_powers, logs, kernel), coeff * e.to_scalar()) * dc
            out.extend(piece.terms)
        for i, (c, k) in enumerate(logs):
            dc = c.partial(coord)
            if not dc.terms:
                continue
            rest = logs[:i] + logs[i + 1:]
            if k > 1:
                rest = _merge_logs(rest, ((c, k - 1),))
            new_powers = _merge_powers(powers, ((c, ExponentExpr(-1)),))
            piece = _term((new_powers, rest, kernel), coeff * k) * dc
            out.extend(piece.terms)
        if kernel is not None:
            dk = differentiate(kernel, coord)
            if dk.terms:
                check_kernel_grade(dk)
                out.extend((_term(key, coeff) * dk).terms)
    return ClosedForm(out)


# ---------------------------------------------------------------------------
# canonical reduction

@lru_cache(maxsize=4096)
def _composite_power(c: Coordinate, k: int) -> ClosedForm:
    return c.definition ** k


def canonicalize(expr: ClosedForm) -> ClosedForm:
    """Normal form used for exact zero testing.

    Terms are grouped into classes that share kernel, logs and the
    non-integer part of every exponent.  Within a class every term is a
    polynomial multiple of the class reference monomial (componentwise
    minimum exponents); composites in that polynomial part are expanded into
    base coordinates.  Distinct classes are linearly independent over
    polynomials, so the expression vanishes iff every class polynomial does.
    """
    if not expr.terms:
        return expr
    classes: dict = {}
    for key, coeff in expr.terms:
        powers, logs, kernel = key
        sym = tuple((c, e.symbolic_class()) for c, e in powers if not e.is_integer())
        classes.setdefault((sym, logs, kernel), []).append((powers, coeff))

    out = []
    for (sym, logs, kernel), members in classes.items():
        if len(members) == 1 and not _has_composite_integer(members[0][0]):
            powers, coeff = members[0]
            out.append(((powers, logs, kernel), coeff))
            continue
        ref: dict = {}
        for powers, _ in members:
            for c, e in powers:
                if c not in ref or e.constant < ref[c].constant:
                    ref[c] = e
        for c in list(ref):
            if ref[c].is_integer() and ref[c].constant > 0:
                if any(c not in dict(p) for p, _ in members):
                    ref[c] = ExponentExpr(0)
        ref_powers = tuple(sorted(((c, e) for c, e in ref.items() if not e.is_zero()),
                                  key=lambda ce: ce[0].name))
        poly = ClosedForm()
        for powers, coeff in members:
            pd = dict(powers)
            piece = ClosedForm.const(coeff)
            for c, r in ref.items():
                shift = (pd[c] - r) if c in pd else -r
                k = shift.constant
                if k == 0:
                    continue
                k = int(k)
                if c.is_base:
                    piece = piece * ClosedForm.coord(c, k)
                else:
                    piece = piece * _composite_power(c, k)
            poly = poly + piece
        if poly.terms:
            head = _term((ref_powers, logs, kernel), ParamScalar.const(1))
            out.extend((head * poly).terms)
    return ClosedForm(out)


def _has_composite_integer(powers) -> bool:
    return any((not c.is_base) and e.is_integer() and e.constant > 0 for c, e in powers)


def is_zero(expr: ClosedForm) -> bool:
    return not canonicalize(expr).terms


def class_polynomials(expr: ClosedForm):
    """Yield the coefficient ParamScalars of the canonical form.

    Each yielded scalar must vanish for the expression to vanish; this is
    what the constraint extractor turns into algebraic conditions.
    """
    for _, coeff in canonicalize(expr).terms:
        yield coeff


# ---------------------------------------------------------------------------
# substitution

def substitute_params(expr: ClosedForm, bindings: Mapping[str, object]) -> ClosedForm:
    """Replace parameters everywhere, including (affinely) inside exponents."""
    b = as_bindings(bindings)
    if not b:
        return expr
    out = []
    for (powers, logs, kernel), coeff in expr.terms:
        new_powers = []
        for c, e in powers:
            try:
                ne = e.subs(b)
            except UnsupportedSubstitution as err:
                raise UnsupportedSubstitution(
                    f"non-affine binding inside exponent of {c.name}: {err}") from None
            if not ne.is_zero():
                new_powers.append((c, ne))
        new_powers = tuple(sorted(new_powers, key=lambda ce: ce[0].name))
        new_kernel = substitute_params(kernel, b) if kernel is not None else None
        if new_kernel is not None:
            check_kernel_grade(new_kernel)
            if not new_kernel.terms:
                new_kernel = None
        out.append(((new_powers, logs, new_kernel), coeff.subs(b)))
    return ClosedForm(out)


# ---------------------------------------------------------------------------
# branches

class BranchContext:
    """Sign assumptions per coordinate, used to rewrite ``|t|`` and ``sign(t)``."""

    def __init__(self, signs: Mapping[str, int] | None = None):
        self.signs = {}
        for name, s in (signs or {}).items():
            if s not in (1, -1):
                raise ValueError(f"branch sign for {name} must be +1 or -1")
            self.signs[name] = s

    @classmethod
    def parse(cls, text: str) -> "BranchContext":
        """Parse ``"t>0"`` / ``"t<0"`` (comma separated)."""
        signs = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            for op, s in ((">", 1), ("<", -1)):
                if op in part:
                    name, rhs = part.split(op, 1)
                    if rhs.strip() != "0":
                        raise ValueError(f"branch must compare with 0: {part!r}")
                    signs[name.strip()] = s
                    break
            else:
                raise ValueError(f"cannot parse branch {part!r}")
        return cls(signs)

    def sign(self, c: Coordinate | str) -> int:
        name = c if isinstance(c, str) else c.name
        if name not in self.signs:
            raise BranchRequired(f"no sign assumption for {name}")
        return self.signs[name]

    def abs(self, c: Coordinate) -> Coordinate:
        """Coordinate equal to ``|c|`` on this branch."""
        return c if self.sign(c) > 0 else c.negated()

    def __repr__(self):
        return "BranchContext(" + ", ".join(
            f"{n}{'>' if s > 0 else '<'}0" for n, s in sorted(self.signs.items())) + ")"

    def __str__(self):
        return ",".join(f"{n}{'>' if s > 0 else '<'}0" for n, s in sorted(self.signs.items()))


# ---------------------------------------------------------------------------
# rendering (grammar of the parser)

def _render_exp(e: ExponentExpr) -> str:
    if e.is_integer() and e.constant >= 0:
        return str(e.constant.numerator)
    return f"({e})"


def render(expr: ClosedForm) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for (powers, logs, kernel), coeff in expr.terms:
        factors = []
        for c, e in powers:
            factors.append(c.name if e == 1 else f"{c.name}^{_render_exp(e)}")
        for c, k in logs:
            factors.append(f"ln({c.name})" if k == 1 else f"ln({c.name})^{k}")
        if kernel is not None:
            factors.append(f"exp({render(kernel)})")
        if coeff == 1:
            body = "*".join(factors) if factors else "1"
        elif coeff.is_monomial() or not factors:
            cs = str(coeff)
            if not coeff.is_monomial():
                cs = f"({cs})"
            body = "*".join([cs] + factors)
        else:
            body = "*".join([f"({coeff})"] + factors)
        pieces.append(body)
    out = pieces[0]
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out
