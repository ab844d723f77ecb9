"""Re-deriving algebraic consequences of the Ward identities.

Residuals of an ansatz with undetermined exponents and amplitudes are split
into linearly independent basis functions; each coefficient is an exact
polynomial condition on the parameters.  Implications between conditions are
decided by radical ideal membership (sympy Groebner bases); all parameters
are real, so complex conditions are split into real and imaginary parts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import sympy

from ..liealg.catalog import Representation, build_representation
from ..liealg.diffop import DiffOp, commutator
from ..liealg.tables import L, Label
from ..symcore import BranchContext, ClosedForm, GaussQ, ParamScalar, class_polynomials
from .cases import HALF, _ln, _pow, _const, pair_coordinates, dual_cga_exponents
from .twobody import DoubletSpec, Quartet, apply_two_body

POSITIVE = BranchContext({"t": 1})


class AnsatzError(ValueError):
    pass


def _p(v) -> ParamScalar:
    return ParamScalar.coerce(v)


def _split(c: ParamScalar) -> list:
    re = ParamScalar([(m, GaussQ(g.re)) for m, g in c.terms if g.re])
    im = ParamScalar([(m, GaussQ(g.im)) for m, g in c.terms if g.im])
    return [x for x in (re, im) if x]


def _clear_denominators(c: ParamScalar) -> ParamScalar:
    """Multiply by the parameter monomial that removes negative powers."""
    lowest: dict = {}
    for mono, _ in c.terms:
        for name, e in mono:
            if e < 0:
                lowest[name] = min(lowest.get(name, 0), e)
    for name, e in lowest.items():
        c = c * ParamScalar.symbol(name, -e)
    return c


def _dedupe(conds: Iterable[ParamScalar]) -> list:
    out, seen = [], set()
    for c in conds:
        for part in _split(_clear_denominators(c)):
            n = part.normalized()
            if n and n not in seen:
                seen.add(n)
                out.append(n)
    return out


# ---------------------------------------------------------------------------
# ansatz families (t > 0 branch, tau = t1 - t2 > 0)

@dataclass
class Ansatz:
    quartet: Quartet
    entries: tuple
    unknowns: tuple


def build_ansatz(family: str, spec: DoubletSpec) -> Ansatz:
    cs = pair_coordinates()
    tau, u = cs["tau"], cs["u"]
    a, b = _p("alpha"), _p("beta")
    pw = _pow(tau, a) * _pow(u, b)
    Z = ClosedForm()
    if family == "power-F":
        q = Quartet(pw * _const("f0"), Z, Z, Z, POSITIVE, cs)
        return Ansatz(q, ("F",), ("alpha", "beta", "f0"))
    if family == "power-FG":
        q = Quartet(pw * _const("f0"), pw * _const("g12"), pw * _const("g21"), Z, POSITIVE, cs)
        return Ansatz(q, ("F", "G12", "G21"), ("alpha", "beta", "f0", "g12", "g21"))
    if family == "power-G":
        q = Quartet(Z, pw * _const("g12"), Z, Z, POSITIVE, cs)
        return Ansatz(q, ("G12",), ("alpha", "beta", "g12"))
    if family == "power-log-H":
        H = pw * (_const("h0") + _ln(tau) * _const("h1") + _ln(u) * _const("h2"))
        q = Quartet(Z, pw * _const("g12"), pw * _const("g21"), H, POSITIVE, cs)
        return Ansatz(q, ("G12", "G21", "H"), ("alpha", "beta", "g12", "g21", "h0", "h1", "h2"))
    if family == "cga-power":
        p, qq, _ = dual_cga_exponents(spec)
        F = (_pow(tau, p - b) * _pow(cs["t1"], qq) * _pow(cs["t2"], -qq)
             * _pow(u, b) * _const("f0"))
        return Ansatz(Quartet(F, Z, Z, Z, POSITIVE, cs), ("F",), ("beta", "f0"))
    raise AnsatzError(f"unknown ansatz family {family!r}")


ANSATZ_FAMILIES = ("power-F", "power-FG", "power-G", "power-log-H", "cga-power")


def extract_constraints(family: str, gens: Sequence[Label], spec: Optional[DoubletSpec] = None,
                        rep: Optional[Representation] = None) -> list:
    """Exact polynomial conditions (each must vanish) for the ansatz to be covariant."""
    spec = spec or DoubletSpec()
    rep = rep or build_representation("log-dual-sch")
    ans = build_ansatz(family, spec)
    conds = []
    for lab in gens:
        w = apply_two_body(rep, lab, spec, ans.quartet)
        for name in ans.entries:
            conds.extend(class_polynomials(w.residuals[name]))
    return _dedupe(conds)


def bracket_constraints(rep: Representation, a: Label, b: Label,
                        expected: Optional[DiffOp] = None) -> list:
    """Conditions for [a, b] to equal ``expected`` (default 0)."""
    residual = commutator(rep.image(a), rep.image(b)) - (expected or DiffOp.zero())
    return _dedupe(x for _, mat in residual.terms for x in mat.e if x)


# ---------------------------------------------------------------------------
# implication checks

def to_sympy(c) -> sympy.Expr:
    return sympy.expand(ParamScalar.coerce(c).to_sympy())


def implies(conditions: Sequence[ParamScalar], target, assume_nonzero: Sequence[str] = ()) -> bool:
    """Does ``target = 0`` hold on every real point where all conditions vanish?

    Decided (over C) by radical membership: 1 - s*target lies in the ideal of
    the conditions (plus 1 - s_k*v_k for each assumed-nonzero v_k).
    """
    polys = [to_sympy(c) for c in conditions]
    tgt = to_sympy(target)
    if tgt == 0:
        return True
    s = sympy.Dummy("s")
    extra = [1 - s * tgt]
    for i, name in enumerate(assume_nonzero):
        extra.append(1 - sympy.Dummy(f"n{i}") * sympy.Symbol(name))
    gens = sorted({sym for p in polys + extra for sym in p.free_symbols}, key=str)
    G = sympy.groebner(polys + extra, *gens, order="grevlex")
    return G.exprs == [1]


def solve_for(conditions: Sequence[ParamScalar], unknown: str,
              assume_nonzero: Sequence[str] = ()) -> list:
    """Values of ``unknown`` forced by the conditions (after dividing out nonzero factors)."""
    sym = sympy.Symbol(unknown)
    nz = [sympy.Symbol(n) for n in assume_nonzero]
    out = set()
    for c in conditions:
        e = sympy.factor(to_sympy(c))
        factors = [f for f, _ in sympy.factor_list(e)[1] if f not in nz]
        for f in factors:
            if sym in f.free_symbols and sympy.degree(f, sym) == 1:
                out.add(sympy.simplify(sympy.solve(f, sym)[0]))
    return sorted(out, key=str)


# ---------------------------------------------------------------------------
# the named derivations

@dataclass
class Derivation:
    name: str
    conditions: list
    target: object
    holds: bool


def derive_all() -> list:
    """Re-derive the Ward-identity consequences; each entry reports whether it holds."""
    X01 = [L("X", 0), L("X", 1)]
    out = []
    s = DoubletSpec()
    c = extract_constraints("power-F", X01, s)
    tgt = (_p("x1") - _p("x2")) * _p("f0")
    out.append(Derivation("(x1-x2) F = 0", c, tgt, implies(c, tgt)))

    c = extract_constraints("power-FG", X01, s)
    for name, tgt in (("(x1-x2) G12 = x2' F", (_p("x1") - _p("x2")) * _p("g12") - _p("xp2") * _p("f0")),
                      ("(x1-x2) G21 = x1' F", (_p("x1") - _p("x2")) * _p("g21") - _p("xp1") * _p("f0"))):
        out.append(Derivation(name, c, tgt, implies(c, tgt)))

    c = extract_constraints("power-log-H", X01, s.replace(x2="x1"))
    tgt = _p("xp1") * _p("g12") - _p("xp2") * _p("g21")
    out.append(Derivation("x1' G12 = x2' G21", c, tgt, implies(c, tgt)))

    c = extract_constraints("power-G", X01, s.replace(x2="x1"))
    tgt = _p("alpha") + _p("beta") + _p("x1")
    out.append(Derivation("G12 scaling: alpha + beta = -x", c, tgt,
                          implies(c, tgt, assume_nonzero=["g12"])))

    c = extract_constraints("power-G", [L("N")], s)
    tgt = _p("alpha") - _p("xi1") - _p("xi2")
    out.append(Derivation("N alone: one exponent condition alpha = xi1 + xi2", c, tgt,
                          len(c) == 1 and implies(c, tgt, assume_nonzero=["g12"])))

    rep = build_representation("log-dual-sch", xipp=True)
    c = bracket_constraints(rep, L("X", 0), L("N"))
    tgt = _p("xp") * _p("xipp")
    out.append(Derivation("[X0, N] = 0  =>  x' xi'' = 0", c, tgt,
                          implies(c, tgt) and implies([tgt], c[0]) if c else False))

    cga = build_representation("dual-cga")
    c = extract_constraints("cga-power", [L("N")], s.replace(log=False), cga)
    beta = -(_p("x1") + _p("xi1") * 3 + _p("x2") + _p("xi2") * 3) * HALF
    tgt = _p("beta") - beta
    out.append(Derivation("N: beta = -(x1+3xi1+x2+3xi2)/2", c, tgt,
                          implies(c, tgt, assume_nonzero=["f0"])))
    return out
