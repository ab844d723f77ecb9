"""Closed-form two-point functions and their covariance checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..liealg.catalog import Representation, build_representation
from ..liealg.tables import L, Label
from ..report import Report, timed
from ..symcore import (BranchContext, BranchRequired, ClosedForm, Coordinate, I,
                       ParamScalar)
from .twobody import DoubletSpec, Quartet, _ps, apply_two_body, leg_coordinates

HALF = Fraction(1, 2)


class CaseError(ValueError):
    pass


def pair_coordinates() -> dict:
    """Leg coordinates plus the composites tau = t1-t2, rho = r1-r2 and u."""
    base = leg_coordinates()
    c = {k: ClosedForm.coord(v) for k, v in base.items()}
    tau = Coordinate("tau", c["t1"] - c["t2"])
    rho = Coordinate("rho", c["r1"] - c["r2"])
    u = Coordinate("u", (c["zeta1"] - c["zeta2"]) * (c["t1"] - c["t2"]) * 2
                   + (c["r1"] - c["r2"]) ** 2 * ClosedForm.const(I))
    out = dict(base)
    out.update(tau=tau, rho=rho, u=u)
    return out


def abs_tau(coords: dict, branch: Optional[BranchContext]) -> Coordinate:
    """|t1 - t2| on the given branch."""
    if branch is None:
        raise BranchRequired("|t1-t2| needs a branch assumption (t>0 or t<0)")
    return coords["tau"] if branch.sign("t") > 0 else coords["tau"].negated("abs_tau")


def _p(v) -> ParamScalar:
    return _ps(v)


def _pow(c: Coordinate, e) -> ClosedForm:
    return ClosedForm.coord(c, _p(e))


def _ln(c: Coordinate) -> ClosedForm:
    return ClosedForm.log(c)


def _const(v) -> ClosedForm:
    return ClosedForm.const(_p(v))


# ---------------------------------------------------------------------------

@dataclass
class Case:
    case_id: str
    representation: Callable[[], Representation]
    generators: list
    prepare: Callable[[DoubletSpec], DoubletSpec]
    build: Callable[[DoubletSpec, dict, Optional[BranchContext]], Quartet]
    branches: tuple = ("t>0", "t<0")
    description: str = ""


SCH1 = [L("X", -1), L("X", 0), L("X", 1), L("Y", -HALF), L("Y", HALF), L("M", 0)]


def _symmetric_spec(s: DoubletSpec) -> DoubletSpec:
    _require_log(s)
    return s.replace(x2=s.x1, xp1=1, xp2=1)


def _asymmetric_spec(s: DoubletSpec) -> DoubletSpec:
    _require_log(s)
    return s.replace(x2=s.x1, xp1=0, xp2=1)


def _require_log(s: DoubletSpec):
    if not s.log:
        raise CaseError("case needs logarithmic doublets (log=True)")


def _check_consistent(original: DoubletSpec, prepared: DoubletSpec, names: Iterable[str]):
    """Numeric values in the user's spec must agree with what the case demands."""
    for name in names:
        given, need = _p(getattr(original, name)), _p(getattr(prepared, name))
        if given.is_constant() and need.is_constant() and given != need:
            raise CaseError(f"inconsistent spec: case requires {name} = {need}, got {given}")


def _dual_symmetric(s, cs, branch):
    A = abs_tau(cs, branch)
    x, xi = _p(s.x1), _p(s.xi1) + _p(s.xi2)
    g0, h0 = _p("g0"), _p("h0")
    base = _pow(A, xi) * _pow(cs["u"], -x - xi)
    a = -g0 * (1 + _p(s.xip1) + _p(s.xip2))
    G = base * _const(g0)
    H = base * (_const(h0) + (_ln(cs["u"]) - _ln(A)) * _const(a) - _ln(A) * _const(g0))
    return Quartet(ClosedForm(), G, G, H, branch, cs)


def _dual_free_scaling(s, cs, branch):
    A = abs_tau(cs, branch)
    x, beta = _p(s.x1), _p("beta")
    g0, h0, h1 = _p("g0"), _p("h0"), _p("h1")
    base = _pow(A, -x - beta) * _pow(cs["u"], beta)
    G = base * _const(g0)
    H = base * (_const(h0) + (_ln(cs["u"]) - _ln(A)) * _const(h1) - _ln(A) * _const(g0))
    return Quartet(ClosedForm(), G, G, H, branch, cs)


def _dual_asymmetric(s, cs, branch):
    A = abs_tau(cs, branch)
    x, xi = _p(s.x1), _p(s.xi1) + _p(s.xi2)
    g0, h0 = _p("g0"), _p("h0")
    base = _pow(A, xi) * _pow(cs["u"], -x - xi)
    G12 = base * _const(g0)
    H = base * (_const(h0) - (_ln(cs["u"]) - _ln(A)) * _const(_p(s.xip1) * g0))
    return Quartet(ClosedForm(), G12, ClosedForm(), H, branch, cs)


def _gauss_kernel(s, cs) -> ClosedForm:
    """exp(-(M1/2) rho^2 / tau)."""
    k = _pow(cs["rho"], 2) * _pow(cs["tau"], -1) * _const(-_p(s.M1) * HALF)
    return ClosedForm.exp(k)


def _fixed_mass(s, cs, branch):
    if branch is None:
        raise BranchRequired("fixed-mass forms are branch dependent (t>0 or t<0)")
    if branch.sign("t") < 0:
        return Quartet(branch=branch, coords=cs)
    tau = cs["tau"]
    K = _pow(tau, -_p(s.x1)) * _gauss_kernel(s, cs)
    G = K * _const("G0")
    H = K * (_const("H0") - _ln(tau) * _const("G0"))
    return Quartet(ClosedForm(), G, G, H, branch, cs)


def _nonlog_sch(s, cs, branch):
    A = abs_tau(cs, branch)
    K = _pow(A, -_p(s.x1)) * _gauss_kernel(s, cs)
    return Quartet(K * _const("f0"), K * _const("g12"), K * _const("g21"), K * _const("h0"),
                   branch, cs)


def _log_cga(s, cs, branch):
    A = abs_tau(cs, branch)
    x = _p(s.x1)
    k = _pow(cs["rho"], 1) * _pow(cs["tau"], -1) * _const(-2 * _p(s.gamma1))
    K = _pow(A, -2 * x) * ClosedForm.exp(k)
    G = K * _const("G0")
    H = K * (_const("H0") - _ln(A) * _const(2 * _p("G0")))
    return Quartet(ClosedForm(), G, G, H, branch, cs)


def dual_cga_exponents(s: DoubletSpec):
    """(p, q, beta) of the dual-cga two-point function."""
    k1 = _p(s.x1) + _p(s.xi1)
    k2 = _p(s.x2) + _p(s.xi2)
    p = -(k1 + k2) * HALF
    q = (k2 - k1) * HALF
    beta = -(_p(s.x1) + _p(s.xi1) * 3 + _p(s.x2) + _p(s.xi2) * 3) * HALF
    return p, q, beta


def _dual_cga_power(s, cs, branch):
    A = abs_tau(cs, branch)
    p, q, beta = dual_cga_exponents(s)
    # f(zeta + (I/2) rho^2/tau) = f0 (u / 2tau)^beta; the 2^-beta is absorbed in f0
    F = (_pow(A, p - beta) * _pow(cs["t1"], q) * _pow(cs["t2"], -q)
         * _pow(cs["u"], beta) * _const("f0"))
    return Quartet(F, branch=branch, coords=cs)


def _nonlog(s: DoubletSpec) -> DoubletSpec:
    return s.replace(log=False)


CASES = {
    "log-sch-dual-symmetric": Case(
        "log-sch-dual-symmetric", lambda: build_representation("log-dual-sch"),
        SCH1 + [L("N")], _symmetric_spec, _dual_symmetric,
        description="dual log-Schroedinger, symmetric doublets, with N"),
    "log-sch-dual-H": Case(
        "log-sch-dual-H", lambda: build_representation("log-dual-sch"),
        SCH1, _symmetric_spec, _dual_free_scaling,
        description="dual log-Schroedinger, free scaling functions g, h (power-log samples)"),
    "fixed-mass-symmetric": Case(
        "fixed-mass-symmetric", lambda: build_representation("sch", log=True),
        SCH1, lambda s: _symmetric_spec(s).replace(M2=-_p(s.M1)), _fixed_mass,
        description="causal fixed-mass forms (zero on t<0)"),
    "nonlog-sch": Case(
        "nonlog-sch", lambda: build_representation("sch"),
        SCH1, lambda s: _nonlog(s).replace(x2=s.x1, M2=-_p(s.M1)), _nonlog_sch,
        description="non-logarithmic Schroedinger two-point functions"),
    "asymmetric": Case(
        "asymmetric", lambda: build_representation("log-dual-sch"),
        SCH1 + [L("N")], _asymmetric_spec, _dual_asymmetric,
        description="asymmetric doublets x1'=0, x2'=1"),
    "log-cga": Case(
        "log-cga", lambda: build_representation("cga", log=True, gamma_param=True),
        [L("X", -1), L("X", 0), L("X", 1), L("Y", -1), L("Y", 0), L("Y", 1)],
        lambda s: _symmetric_spec(s).replace(gamma2=s.gamma1), _log_cga,
        description="logarithmic conformal Galilean invariance, d=1"),
    "dual-cga-remark-e": Case(
        "dual-cga-remark-e", lambda: build_representation("dual-cga"),
        [L("X", 1), L("Y", -HALF), L("Y", HALF), L("M", 0), L("Vp"), L("D"), L("N")],
        _nonlog, _dual_cga_power,
        description="dual cga(1) with N: power law in u"),
}
CASE_IDS = tuple(CASES)

_SPEC_FIELDS = ("x1", "x2", "xp1", "xp2", "M1", "M2", "gamma1", "gamma2")


def get_case(case_id: str) -> Case:
    if case_id not in CASES:
        raise CaseError(f"unknown case id {case_id!r}")
    return CASES[case_id]


def prepared_spec(case_id: str, spec: Optional[DoubletSpec] = None) -> DoubletSpec:
    case = get_case(case_id)
    spec = spec or DoubletSpec()
    spec.validate()
    out = case.prepare(spec)
    _check_consistent(spec, out, _SPEC_FIELDS)
    return out


def catalog_solution(case_id: str, spec: Optional[DoubletSpec] = None,
                     branch: Optional[BranchContext | str] = None) -> Quartet:
    """The closed-form quartet of ``case_id`` with amplitudes left symbolic."""
    case = get_case(case_id)
    s = prepared_spec(case_id, spec)
    if isinstance(branch, str):
        branch = BranchContext.parse(branch)
    return case.build(s, pair_coordinates(), branch)


def verify_covariance(case_id: str, gens: Optional[Iterable[Label]] = None,
                      spec: Optional[DoubletSpec] = None,
                      branch: Optional[BranchContext | str] = "t>0",
                      rep: Optional[Representation] = None,
                      quartet: Optional[Quartet] = None) -> Report:
    """Apply every generator two-body and require all residuals to vanish."""
    case = get_case(case_id)
    if isinstance(branch, str):
        branch = BranchContext.parse(branch)
    s = prepared_spec(case_id, spec)
    rep = rep or case.representation()
    q = quartet or case.build(s, pair_coordinates(), branch)
    report = Report(f"verify ward {case_id} {branch}")
    with timed(report):
        for lab in (list(gens) if gens is not None else case.generators):
            w = apply_two_body(rep, lab, s, q)
            bad = {k: str(v) for k, v in w.nonzero().items()}
            report.add(str(lab), not bad, **({"residual": bad} if bad else {}))
    return report
