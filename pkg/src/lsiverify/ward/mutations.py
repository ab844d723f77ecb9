"""Corrupted generators that every verified case must detect.

A passing covariance check is only meaningful if the same check fails once
a single generator term is damaged.  Each mutation removes or rescales one
kind of term; the suite runs every mutation against every generator of a
case and records which ones produce a nonzero residual.
"""
from __future__ import annotations

from typing import Callable, Optional

from ..liealg.catalog import drop_param_terms, mutate, scale_terms
from ..liealg.diffop import DiffOp
from ..report import Report, timed
from ..symcore import BranchContext
from .cases import get_case, prepared_spec, pair_coordinates
from .twobody import ENTRIES, DoubletSpec, apply_two_body


def _second_order(mono, derivs, mat) -> bool:
    return sum(e for _, e in derivs) >= 1 and sum(e for _, e in mono) >= 2


MUTATIONS: dict[str, Callable[[DiffOp], DiffOp]] = {
    "drop-x": lambda op: drop_param_terms(op, "x"),
    "drop-xp": lambda op: drop_param_terms(op, "xp"),
    "drop-xi": lambda op: drop_param_terms(op, "xi"),
    "drop-M": lambda op: drop_param_terms(op, "M"),
    "drop-gamma": lambda op: drop_param_terms(op, "gamma"),
    "double-quadratic": lambda op: scale_terms(op, 2, _second_order),
}


def mutation_suite(case_id: str, spec: Optional[DoubletSpec] = None,
                   branch: BranchContext | str = "t>0") -> Report:
    """Some single-term mutation must be detected; kills are listed per family.

    Pure translations contain no mutable term and are listed with no kills.
    A branch on which the catalog form vanishes identically cannot detect
    anything; it passes with ``vacuous`` set in the detail.
    """
    case = get_case(case_id)
    if isinstance(branch, str):
        branch = BranchContext.parse(branch)
    s = prepared_spec(case_id, spec)
    rep = case.representation()
    q = case.build(s, pair_coordinates(), branch)
    report = Report(f"mutations {case_id} {branch}")
    with timed(report):
        if not any(q.entry(e).terms for e in ENTRIES):
            report.add("killed", True, vacuous="catalog form vanishes on this branch")
            return report
        kills: dict = {}
        for lab in case.generators:
            fam = lab.family
            kills.setdefault(fam, [])
            for name, fn in MUTATIONS.items():
                bad = mutate(rep, lab, fn)
                if bad.image(lab) == rep.image(lab):
                    continue
                if not apply_two_body(bad, lab, s, q).is_zero:
                    kills[fam].append(f"{name}@{lab}")
        report.add("killed", any(kills.values()), kills=kills)
    return report
