"""Two-body action of a generator on the quartet of two-point functions.

Each field is a doublet (psi, phi) with index 0 = psi, 1 = phi, so that a
Jordan constant [[x, x'], [0, x]] acts as ``X psi = x psi + x' phi`` and
``X phi = x phi``.  The correlator matrix is ``C[a][b] = <field_a(1) field_b(2)>``:

    C = [[H, G21], [G12, F]]

and covariance under a generator with leg operators D1, D2 reads

    sum_c D1[a][c] C[c][b] + sum_d D2[b][d] C[a][d] = 0   for all a, b.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from ..liealg.catalog import Representation
from ..liealg.diffop import DiffOp
from ..liealg.tables import Label
from ..symcore import (BranchContext, ClosedForm, Coordinate, ParamScalar,
                       canonicalize, parse_closed_form)

Value = Union[str, int, Fraction, ParamScalar]
ENTRIES = ("F", "G12", "G21", "H")
# quartet entry -> correlator index (a, b)
INDEX = {"H": (0, 0), "G21": (0, 1), "G12": (1, 0), "F": (1, 1)}
LEG_COORDS = ("zeta", "t", "r", "gamma", "eta")


def _ps(v: Value) -> ParamScalar:
    if isinstance(v, str) and not v.isidentifier():
        cf = parse_closed_form(v)
        if len(cf.terms) > 1 or (cf.terms and cf.terms[0][0] != ((), (), None)):
            raise ValueError(f"{v!r} is not a parameter expression")
        return cf.terms[0][1] if cf.terms else ParamScalar()
    return ParamScalar.coerce(v)


@dataclass
class DoubletSpec:
    """Per-leg constants of a pair of (possibly logarithmic) doublets.

    Values are parameter names or exact rationals.  ``log`` False means the
    off-diagonal Jordan entries are zero.
    """

    x1: Value = "x1"
    x2: Value = "x2"
    xp1: Value = "xp1"
    xp2: Value = "xp2"
    xi1: Value = "xi1"
    xi2: Value = "xi2"
    xip1: Value = "xip1"
    xip2: Value = "xip2"
    xipp1: Value = 0
    xipp2: Value = 0
    M1: Value = "M1"
    M2: Value = "M2"
    gamma1: Value = "gamma1"
    gamma2: Value = "gamma2"
    log: bool = True

    def leg(self, i: int) -> dict:
        """Bindings from catalog parameter names to this leg's values."""
        g = lambda name: getattr(self, f"{name}{i}")
        out = {"x": g("x"), "xi": g("xi"), "M": g("M"), "gamma": g("gamma"),
               "xipp": g("xipp")}
        out["xp"] = g("xp") if self.log else 0
        out["xip"] = g("xip") if self.log else 0
        return {k: _ps(v) for k, v in out.items()}

    def replace(self, **changes) -> "DoubletSpec":
        data = dict(self.__dict__)
        data.update(changes)
        return DoubletSpec(**data)

    def validate(self) -> None:
        for name in ("xp1", "xp2"):
            v = _ps(getattr(self, name))
            if v.is_constant() and v.constant_value() not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1 when numeric")
        for name in ("xipp1", "xipp2"):
            if _ps(getattr(self, name)):
                raise ValueError(f"{name} must vanish (the lower Jordan entry of N is set to zero)")


@dataclass
class Quartet:
    F: ClosedForm = field(default_factory=ClosedForm)
    G12: ClosedForm = field(default_factory=ClosedForm)
    G21: ClosedForm = field(default_factory=ClosedForm)
    H: ClosedForm = field(default_factory=ClosedForm)
    branch: Optional[BranchContext] = None
    coords: dict = field(default_factory=dict)

    def entry(self, name: str) -> ClosedForm:
        return getattr(self, name)

    def matrix(self):
        return [[self.H, self.G21], [self.G12, self.F]]

    def map(self, fn) -> "Quartet":
        return Quartet(*(fn(self.entry(e)) for e in ENTRIES), branch=self.branch,
                       coords=self.coords)


@dataclass
class WardResidual:
    generator: str
    residuals: dict

    @property
    def is_zero(self) -> bool:
        return all(not r.terms for r in self.residuals.values())

    def nonzero(self) -> dict:
        return {k: v for k, v in self.residuals.items() if v.terms}


def leg_coordinates() -> dict:
    """Base coordinates of both legs, keyed by name (zeta1, t1, r1, ...)."""
    return {f"{c}{i}": Coordinate(f"{c}{i}") for c in LEG_COORDS for i in (1, 2)}


def leg_operator(rep: Representation, label: Label, spec: DoubletSpec, i: int) -> DiffOp:
    """The generator acting on leg ``i`` (coordinates and constants suffixed)."""
    op = rep.image(label)
    bindings = {k: v for k, v in spec.leg(i).items()}
    op = op.subs(bindings)
    return op.rename({c: f"{c}{i}" for c in LEG_COORDS})


def apply_two_body(rep: Representation, label: Label, spec: DoubletSpec, q: Quartet,
                   ops: Optional[tuple] = None) -> WardResidual:
    """Residual of the covariance condition of ``label`` on each quartet entry."""
    D1, D2 = ops if ops is not None else (leg_operator(rep, label, spec, 1),
                                          leg_operator(rep, label, spec, 2))
    coords = dict(leg_coordinates())
    coords.update(q.coords)
    C = q.matrix()
    res = {}
    for name in ENTRIES:
        a, b = INDEX[name]
        total = ClosedForm()
        for c in (0, 1):
            if C[c][b].terms:
                total = total + D1.apply(C[c][b], entry=(a, c), coords=coords)
        for d_ in (0, 1):
            if C[a][d_].terms:
                total = total + D2.apply(C[a][d_], entry=(b, d_), coords=coords)
        res[name] = canonicalize(total)
    return WardResidual(str(label), res)
