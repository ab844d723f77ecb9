"""Command-line front end: ``lsiverify <group> <command> [flags]``.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import suites
from .causality import (ContourError, ContourSpec, DualizationError, DualizationTask,
                        ResponseExponents, causality_report, collapse_residual,
                        dualize_pointwise, integral_I, scaling_samples)
from .liealg import (CATALOG_IDS, CatalogError, build_representation,
                     central_charge_table, closure_check, jacobi_check, table_for,
                     verify_dynamical_symmetry, verify_matrix_central_charges, verify_structure)
from .liealg.catalog import Representation
from .liealg.virasoro import ResourceLimit
from .report import Report, timed
from .symcore import ParamScalar, SymcoreError, parse_closed_form
from .ward import CASE_IDS, CaseError, DoubletSpec, derive_all, mutation_suite, verify_covariance
from .ward.cases import get_case

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """What a single invocation asked for, after parsing."""

    command: tuple
    ids: dict
    bindings: dict
    window: Optional[tuple]
    fmt: str = "text"
    out: Optional[str] = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        ids = {k: getattr(args, k) for k in ("id", "case", "dim", "branch") if getattr(args, k, None)}
        window = parse_window(args.window) if getattr(args, "window", None) else None
        return cls((args.group, args.command), ids, parse_bindings(args.bind), window,
                   args.format, args.out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# argument helpers

def parse_window(text: str) -> tuple:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise ConfigError(f"window must look like a..b, got {text!r}") from None
    if lo > hi:
        raise ConfigError("window lower bound exceeds upper bound")
    return lo, hi


def parse_bindings(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"binding must be name=value, got {item!r}")
        name, value = (s.strip() for s in item.split("=", 1))
        if not name.isidentifier():
            raise ConfigError(f"bad parameter name {name!r}")
        out[name] = value
    return out


def exact_value(text: str) -> ParamScalar:
    """A rational (p/q or decimal) or a parameter expression, kept exact."""
    try:
        return ParamScalar.const(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        cf = parse_closed_form(text)
    except SymcoreError as e:
        raise ConfigError(f"cannot parse {text!r}: {e}") from None
    if not cf.terms:
        return ParamScalar()
    if len(cf.terms) != 1 or cf.terms[0][0] != ((), (), None):
        raise ConfigError(f"{text!r} is not a parameter expression")
    return cf.terms[0][1]


def real_value(name: str, text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name} must be a real number, got {text!r}") from None


def bind_representation(rep: Representation, bindings: dict) -> Representation:
    if not bindings:
        return rep
    unknown = set(bindings) - set(rep.parameters)
    if unknown:
        raise ConfigError(f"{rep.catalog_id} has no parameters {sorted(unknown)}")
    b = {k: exact_value(v) for k, v in bindings.items()}
    gens = {lab: op.subs(b) for lab, op in rep.generators.items()}
    base = rep.factory
    central = {lab: op.subs(b) for lab, op in rep.central.items()}
    return Representation(rep.catalog_id, rep.d, rep.coordinates,
                          [p for p in rep.parameters if p not in b], gens,
                          lambda lab: base(lab).subs(b), central)


def bind_spec(bindings: dict) -> Optional[DoubletSpec]:
    if not bindings:
        return None
    fields = set(DoubletSpec.__dataclass_fields__) - {"log"}
    unknown = set(bindings) - fields
    if unknown:
        raise ConfigError(f"unknown doublet constants {sorted(unknown)}; allowed: {sorted(fields)}")
    return DoubletSpec(**{k: exact_value(v) for k, v in bindings.items()})


# ---------------------------------------------------------------------------
# commands

def cmd_verify_algebra(args) -> Report:
    cid = args.id or "sch"
    window = parse_window(args.window) if args.window else None
    bindings = parse_bindings(args.bind)
    if cid == "central-charges":
        lo, hi = window or (-2, 2)
        report = Report(f"verify algebra --id central-charges --window {lo}..{hi}")
        report.extend(verify_matrix_central_charges(range(lo, hi + 1)))
        report.extend(jacobi_check(central_charge_table(range(lo, hi + 1))), prefix="jacobi ")
        return report
    if cid not in CATALOG_IDS:
        raise ConfigError(f"unknown catalog id {cid!r}; choose from {CATALOG_IDS + ('central-charges',)}")
    kw = {"window": window} if cid in ("sv", "av") else {}
    rep = build_representation(cid, args.dim, log=args.log, **kw)
    rep = bind_representation(rep, bindings)
    table = table_for(cid, rep.labels() + list(rep.central), args.dim)
    report = Report(f"verify algebra --id {cid} --dim {args.dim}")
    report.extend(verify_structure(rep, table))
    report.extend(jacobi_check(table), prefix="jacobi ")
    if args.closure:
        report.extend(closure_check(rep), prefix="closure ")
    return report


def cmd_verify_symmetry(args) -> Report:
    cid = args.id or "dual-cga"
    rep = bind_representation(build_representation(cid), parse_bindings(args.bind))
    labels = suites.SYMMETRY_LABELS if cid == "dual-cga" else None
    return verify_dynamical_symmetry(rep, labels=labels)


def _branches(case_id: str, branch: str) -> list:
    if branch == "both":
        return list(get_case(case_id).branches)
    if branch not in ("t>0", "t<0"):
        raise ConfigError("branch must be t>0, t<0 or both")
    return [branch]


def cmd_verify_ward(args) -> Report:
    if not args.case:
        raise ConfigError("--case is required")
    spec = bind_spec(parse_bindings(args.bind))
    report = Report(f"verify ward --case {args.case} --branch {args.branch}")
    for br in _branches(args.case, args.branch):
        report.extend(verify_covariance(args.case, spec=spec, branch=br), prefix=f"{br} ")
        if args.mutations:
            report.extend(mutation_suite(args.case, spec, br), prefix=f"{br} mutation ")
    return report


def cmd_verify_constraints(args) -> Report:
    report = Report("verify constraints")
    with timed(report):
        for d in derive_all():
            report.add(d.name, d.holds, conditions=[str(c) for c in d.conditions],
                       target=str(d.target))
    return report


def cmd_verify_all(args) -> Report:
    return suites.run_all()


def _contour(args) -> ContourSpec:
    kw = {}
    for flag, key in (("epsilon", "epsilon"), ("L", "L"), ("tail_depth", "tail_depth"),
                      ("tol", "tol")):
        val = getattr(args, flag, None)
        if val is not None:
            kw[key] = real_value(flag, val)
    if getattr(args, "nodes", None) is not None:
        kw["nodes_per_segment"] = args.nodes
    if getattr(args, "half_plane", None):
        kw["half_plane"] = args.half_plane
    return ContourSpec(**kw)


def cmd_causality_integral(args) -> Report:
    spec = _contour(args)
    x = real_value("x", args.x)
    report = Report(f"causality integral --n {args.n} --x {args.x} --half-plane {spec.half_plane}")
    with timed(report):
        res = integral_I(args.n, x, spec, scheme=args.scheme)
        detail = {"re": res.value.real, "im": res.value.imag, "err": res.total_error}
        if res.warning:
            report.warn("convergence", message=res.warning)
        if spec.half_plane == "below":
            report.add("|I| <= tol", abs(res.value) <= spec.tol, abs=abs(res.value), **detail)
        else:
            other = integral_I(args.n, x, spec, scheme="staple" if args.scheme != "staple" else "keyhole")
            rel = abs(res.value - other.value) / abs(res.value)
            report.add("cross-scheme agreement", rel <= args.agreement, rel=rel, **detail)
    report.data["value"] = [res.value.real, res.value.imag]
    return report


def _task(args) -> DualizationTask:
    x, xi = real_value("x", args.x), real_value("xi", args.xi)
    kw = {"M": real_value("M", args.M), "g0": real_value("g0", args.g0),
          "h0": real_value("h0", args.h0)}
    if args.asymmetric:
        return DualizationTask.asymmetric(x, xi, real_value("xip", args.xip), **kw)
    return DualizationTask.symmetric(x, xi, real_value("xip", args.xip), **kw)


def cmd_causality_dualize(args) -> Report:
    task = _task(args)
    t, r = real_value("t", args.t), real_value("r", args.r)
    report = Report(f"causality dualize --t {args.t} --r {args.r} --entry {args.entry}")
    with timed(report):
        res = dualize_pointwise(task, t, r, args.entry, _contour(args))
        report.add("quadrature error", res.total_error <= 1e-7 * max(abs(res.value), 1e-300)
                   or res.total_error <= 1e-10,
                   re=res.value.real, im=res.value.imag, err=res.total_error)
    report.data.update(task=task.to_dict(), t=t, r=r, entry=args.entry,
                       re=res.value.real, im=res.value.imag, err=res.total_error)
    return report


def cmd_causality_report(args) -> Report:
    rep = causality_report(_task(args), _contour(args), workers=args.workers).to_report()
    return rep


def cmd_response_collapse(args) -> Report:
    e = ResponseExponents(*(real_value(n, getattr(args, n)) for n in ("a", "ap", "lambda_R", "z", "f0")))
    ss = [real_value("s", v) for v in args.s.split(",")]
    ys = [real_value("y", v) for v in args.y.split(",")]
    samples = scaling_samples([(y * s, s) for y in ys for s in ss], e)
    report = Report("response collapse")
    with timed(report):
        res = collapse_residual(samples, e)
        report.add("collapse residual", res <= args.tol, residual=res, samples=len(samples))
        below = [R for t, s, R in samples if t / s < 1]
        if below:
            report.add("R = 0 for t/s < 1", all(R == 0 for R in below), samples=len(below))
    return report


COMMANDS = {
    ("verify", "algebra"): cmd_verify_algebra,
    ("verify", "symmetry"): cmd_verify_symmetry,
    ("verify", "ward"): cmd_verify_ward,
    ("verify", "constraints"): cmd_verify_constraints,
    ("verify", "all"): cmd_verify_all,
    ("causality", "integral"): cmd_causality_integral,
    ("causality", "dualize"): cmd_causality_dualize,
    ("causality", "report"): cmd_causality_report,
    ("response", "collapse"): cmd_response_collapse,
}


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE")


def _contour_flags(p):
    p.add_argument("--epsilon")
    p.add_argument("--L")
    p.add_argument("--tail-depth", dest="tail_depth")
    p.add_argument("--nodes", type=int)
    p.add_argument("--tol")


def _task_flags(p):
    p.add_argument("--x", required=True)
    p.add_argument("--xi", default="0")
    p.add_argument("--xip", default="0")
    p.add_argument("--M", default="1")
    p.add_argument("--g0", default="1")
    p.add_argument("--h0", default="0")
    p.add_argument("--asymmetric", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="lsiverify", description=__doc__.splitlines()[0])
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    verify = groups.add_parser("verify").add_subparsers(dest="command", required=True,
                                                        parser_class=_Parser)
    p = verify.add_parser("algebra")
    p.add_argument("--id")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--window")
    p.add_argument("--log", action="store_true")
    p.add_argument("--closure", action="store_true", help="also solve closure exactly")
    _common(p)
    p = verify.add_parser("symmetry")
    p.add_argument("--id")
    _common(p)
    p = verify.add_parser("ward")
    p.add_argument("--case", choices=CASE_IDS)
    p.add_argument("--branch", default="both")
    p.add_argument("--mutations", action="store_true")
    _common(p)
    for name in ("constraints", "all"):
        _common(verify.add_parser(name))

    caus = groups.add_parser("causality").add_subparsers(dest="command", required=True,
                                                         parser_class=_Parser)
    p = caus.add_parser("integral")
    p.add_argument("--n", type=int, choices=(0, 1), default=0)
    p.add_argument("--x", required=True)
    p.add_argument("--half-plane", dest="half_plane", choices=("above", "below"), default="below")
    p.add_argument("--scheme", choices=("staple", "keyhole"))
    p.add_argument("--agreement", type=float, default=1e-8)
    _contour_flags(p)
    _common(p)
    p = caus.add_parser("dualize")
    _task_flags(p)
    p.add_argument("--t", required=True)
    p.add_argument("--r", default="0")
    p.add_argument("--entry", choices=("G", "H"), default="G")
    _contour_flags(p)
    _common(p)
    p = caus.add_parser("report")
    _task_flags(p)
    p.add_argument("--workers", type=int, default=1)
    _contour_flags(p)
    _common(p)

    resp = groups.add_parser("response").add_subparsers(dest="command", required=True,
                                                        parser_class=_Parser)
    p = resp.add_parser("collapse")
    for name, default in (("a", "0"), ("ap", "0"), ("lambda_R", "1"), ("z", "1"), ("f0", "1")):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, default=default)
    p.add_argument("--s", default="1,2,4")
    p.add_argument("--y", default="3")
    p.add_argument("--tol", type=float, default=0.0)
    _common(p)
    return root


def _attach_negative_values(argv: Sequence[str]) -> list:
    """Rewrite ``--flag -2..2`` as ``--flag=-2..2`` (argparse would read -2..2 as an option)."""
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and re.match(r"^-\d", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def render(report: Report, fmt: str) -> str:
    return report.to_json() if fmt == "json" else report.to_text()


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Parse, dispatch and return (exit code, report or None)."""
    try:
        argv = sys.argv[1:] if argv is None else argv
        args = build_parser().parse_args(_attach_negative_values(argv))
        config = RunConfig.from_args(args)
        report = COMMANDS[config.command](args)
    except (ConfigError, CatalogError, CaseError, ContourError, DualizationError,
            ResourceLimit, SymcoreError, ValueError, KeyError) as e:
        print(f"lsiverify: error: {e}", file=sys.stderr)
        return EXIT_USAGE, None
    text = render(report, config.fmt)
    if config.out:
        Path(config.out).write_text(text + "\n")
    else:
        print(text)
    return (EXIT_OK if report.ok else EXIT_FAIL), report


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
