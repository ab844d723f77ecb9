"""Mechanical checks of bracket tables, Jacobi identities and dynamical symmetries."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional

from ..report import Report, timed
from ..symcore import GaussQ, ParamScalar
from ..symcore.scalars import as_bindings
from .catalog import Representation, dynamical_operator
from .diffop import DiffOp, Mat2, commutator, compose
from .tables import Label, StructureTable, lc, lc_add, lc_str


def verify_structure(rep: Representation, table: StructureTable,
                     labels: Optional[Iterable[Label]] = None) -> Report:
    """Compare every computed commutator with the table prediction."""
    report = Report(f"verify structure {rep.catalog_id} d={rep.d}")
    labels = list(labels) if labels is not None else rep.labels()
    with timed(report):
        for a, b in combinations(labels, 2):
            computed = commutator(rep.image(a), rep.image(b))
            expected = table.bracket(a, b)
            residual = computed - rep.image_lc(expected)
            detail = {"expected": lc_str(expected)}
            if residual:
                detail["residual"] = str(residual)
            report.add(f"[{a},{b}]", residual.is_zero(), **detail)
    return report


def jacobi_check(table: StructureTable, labels: Optional[Iterable[Label]] = None) -> Report:
    """Cyclic Jacobi sums of the table, evaluated in the free span of labels."""
    report = Report(f"jacobi {table.name}")
    labels = [x for x in (labels if labels is not None else table.labels) if not x.is_central]
    window = set(table.labels)
    with timed(report):
        for a, b, c in combinations(labels, 3):
            total: dict = {}
            outside = False
            for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
                inner = table.bracket(p, q)
                outside |= any(lab not in window and not lab.is_central for lab in inner)
                total = lc_add(total, table.bracket_lc(inner, {r: ParamScalar.const(1)}))
            detail = {"outside_window": True} if outside else {}
            if total:
                detail["violation"] = lc_str(total)
            report.add(f"({a},{b},{c})", not total, **detail)
    return report


def operator_jacobi(A: DiffOp, B: DiffOp, C: DiffOp) -> DiffOp:
    return (commutator(commutator(A, B), C) + commutator(commutator(B, C), A)
            + commutator(commutator(C, A), B))


def _pivot(S: DiffOp):
    """Highest-order term of S with a constant scalar coefficient."""
    best = None
    for (mono, derivs), mat in S.terms:
        if mono or not mat.is_scalar() or not mat[0, 0].is_constant():
            continue
        order = sum(k for _, k in derivs)
        if best is None or order > best[0]:
            best = (order, derivs, mat[0, 0])
    if best is None:
        raise ValueError("operator has no constant-coefficient term to match against")
    return best[1], best[2]


def symmetry_multiplier(S: DiffOp, X: DiffOp):
    """Return (lambda, residual) with [S, X] = lambda * S + residual."""
    C = commutator(S, X)
    derivs, coeff = _pivot(S)
    inv = coeff.inverse()
    lam = DiffOp([((mono, ()), mat.scale(inv)) for (mono, dv), mat in C.terms if dv == derivs])
    return lam, C - compose(lam, S)


def verify_dynamical_symmetry(rep: Representation, S: Optional[DiffOp] = None,
                              labels: Optional[Iterable[Label]] = None) -> Report:
    """Find lambda_X with [S, X] = lambda_X S for each generator."""
    S = S if S is not None else dynamical_operator()
    report = Report(f"dynamical symmetry {rep.catalog_id}")
    labels = list(labels) if labels is not None else rep.labels()
    with timed(report):
        for lab in labels:
            lam, residual = symmetry_multiplier(S, rep.image(lab))
            detail = {"lambda": str(lam)}
            if residual:
                detail["residual"] = str(residual)
            report.add(str(lab), residual.is_zero(), **detail)
            report.data[str(lab)] = str(lam)
    return report


# ---------------------------------------------------------------------------
# closure of commutators in the span of the generators

def _specialize(op: DiffOp, bindings) -> dict:
    vec = {}
    for (mono, derivs), mat in op.subs(bindings).terms:
        for idx in range(4):
            s = mat.e[idx]
            if s:
                if not s.is_constant():
                    raise ValueError(f"coefficient {s} still symbolic after specialisation")
                vec[(mono, derivs, idx)] = s.constant_value()
    return vec


def _solve(columns: list, target: dict):
    """Exact least-norm-free solve of sum_j c_j columns[j] = target; None if inconsistent."""
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    n = len(columns)
    rows = [[col.get(k, GaussQ(0)) for col in columns] + [target.get(k, GaussQ(0))] for k in keys]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [GaussQ(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


DEFAULT_SPECIALISATION = {"M": Fraction(3, 7), "x": Fraction(5, 11), "xi": Fraction(2, 13),
                          "lam": Fraction(7, 5), "theta": Fraction(3, 4), "xp": 1, "xip": 1}


def closure_check(rep: Representation, bindings: Optional[Mapping] = None) -> Report:
    """Each commutator of generators is solved as an exact linear combination.

    Parameters are specialised to fixed rationals so that the linear system is
    over the Gaussian rationals.
    """
    b = as_bindings(dict(DEFAULT_SPECIALISATION, **(bindings or {})))
    b = {k: v for k, v in b.items() if k in set(rep.parameters)}
    labels = rep.labels() + list(rep.central)
    cols = [_specialize(rep.image(lab), b) for lab in labels]
    report = Report(f"closure {rep.catalog_id}")
    with timed(report):
        for x, y in combinations(rep.labels(), 2):
            target = _specialize(commutator(rep.image(x), rep.image(y)), b)
            sol = _solve(cols, target)
            detail = {}
            if sol is not None:
                detail["combination"] = lc_str(lc(*((lab, ParamScalar.const(s))
                                                    for lab, s in zip(labels, sol) if s)))
            report.add(f"[{x},{y}]", sol is not None, **detail)
    return report
