"""Numerical dualization of the scaling forms back to fixed mass.

For a dual form G(t, u) = |t|^{-x} g((2 zeta t + i r^2)/|t|) with
g(v) = g0 v^{-kappa}, kappa = x + xi, the fixed-mass form is

    G(t, r) = |t|^{-x} int dzeta e^{-i M zeta} g((2 zeta t + i r^2)/|t|),   M > 0.

v^{-kappa} carries the +i0 prescription, i.e. the branch of ``log_rotated``.
Its branch point zeta0 = -i r^2/(2t) lies below the real axis for t > 0
and above it for t < 0, so the integration line is shifted by +eps or -eps
respectively to pass on the correct side, and its tails are folded into
decaying rays (rate M) as in ``staple_integral``.  For t < 0 the enclosed
region holds no singularity and the result is a pure cancellation.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..report import Report
from .contour import ContourSpec, QuadResult, integral_I, log_rotated, staple_integral

DEFAULT_T = (-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0)
DEFAULT_R = (0.0, 0.5, 1.0, 2.0)
DEFAULT_GRID = tuple((t, r) for t in DEFAULT_T for r in DEFAULT_R)


class DualizationError(ValueError):
    pass


@dataclass(frozen=True)
class DualizationTask:
    """Parameters of one dualization run.

    H's integrand is v^{-kappa} [h0 + g0 (log_mix ln v + ln_t_coeff ln|t|)]:
    the symmetric doublet has log_mix = -(1 + xi1' + xi2'), ln_t_coeff = -1;
    the asymmetric one (x1' = 0) has log_mix = -xi1', ln_t_coeff = 0.
    """

    x: float
    xi_sum: float
    log_mix: float = -1.0
    ln_t_coeff: float = -1.0
    M: float = 1.0
    grid: tuple = DEFAULT_GRID
    g0: float = 1.0
    h0: float = 0.0
    label: str = "symmetric"

    def __post_init__(self):
        if not self.x > 0:
            raise DualizationError("x must be positive")
        if not self.x + self.xi_sum > 0:
            raise DualizationError("x + xi_sum must be positive")
        if not self.M > 0:
            raise DualizationError("M must be positive")
        if not self.grid:
            raise DualizationError("empty grid")
        object.__setattr__(self, "grid", tuple((float(t), float(r)) for t, r in self.grid))

    @property
    def kappa(self) -> float:
        return self.x + self.xi_sum

    @classmethod
    def symmetric(cls, x, xi_sum, xip_sum=0.0, **kw) -> "DualizationTask":
        return cls(x, xi_sum, log_mix=-(1.0 + xip_sum), ln_t_coeff=-1.0, label="symmetric", **kw)

    @classmethod
    def asymmetric(cls, x, xi_sum, xip1=0.0, **kw) -> "DualizationTask":
        return cls(x, xi_sum, log_mix=-xip1, ln_t_coeff=0.0, label="asymmetric", **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = [list(p) for p in self.grid]
        return d


def _dual_integral(task: DualizationTask, t: float, r: float, with_log: bool,
                   spec: ContourSpec) -> QuadResult:
    kappa, M, at = task.kappa, task.M, abs(t)

    def f(z):
        lv = log_rotated((2 * z * t + 1j * r * r) / at)
        out = np.exp(-1j * M * z - kappa * lv)
        return out * lv if with_log else out
    height = spec.epsilon if t > 0 else -spec.epsilon
    return staple_integral(f, height, spec, decay=M, centre_points=[0.0])


def dualize_pointwise(task: DualizationTask, t: float, r: float, entry: str = "G",
                      spec: Optional[ContourSpec] = None) -> QuadResult:
    if t == 0:
        raise DualizationError("t = 0 is outside the domain")
    if entry not in ("G", "H"):
        raise DualizationError("entry must be G or H")
    spec = spec or ContourSpec(tol=1e-10)
    pref = abs(t) ** (-task.x)
    base = _dual_integral(task, t, r, False, spec)
    if entry == "G":
        return base.scaled(pref * task.g0)
    logged = _dual_integral(task, t, r, True, spec)
    const = task.h0 + task.g0 * task.ln_t_coeff * math.log(abs(t))
    return (base.scaled(pref * const) + logged.scaled(pref * task.g0 * task.log_mix))


def _point(args):
    task, t, r, spec = args
    g = dualize_pointwise(task, t, r, "G", spec)
    h = dualize_pointwise(task, t, r, "H", spec)
    return t, r, g, h


@dataclass
class CausalityReport:
    task: DualizationTask
    points: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        grid = []
        for p in self.points:
            for entry in ("G", "H"):
                v = p[entry]
                grid.append({"t": p["t"], "r": p["r"], "entry": entry, "re": v.value.real,
                             "im": v.value.imag, "err": v.total_error})
        agg = {k: ([v.real, v.imag] if isinstance(v, complex) else v)
               for k, v in self.aggregates.items()}
        return {"task": self.task.to_dict(), "grid": grid, "aggregates": agg}

    def to_report(self) -> Report:
        a, tol = self.aggregates, self.tolerances
        rep = Report(f"causality report {self.task.label} x={self.task.x} xi={self.task.xi_sum}",
                     data=self.to_dict())
        rep.add("causal suppression (t<0)", a["suppression_ratio"] <= tol["suppression"],
                ratio=a["suppression_ratio"])
        rep.add("gaussian factorization (t>0)", a["gaussian_spread"] <= tol["spread"],
                spread=a["gaussian_spread"])
        expected = -1.0 if self.task.ln_t_coeff == -1.0 else 0.0
        dev = abs(complex(a["slope_ratio"], a["slope_ratio_imag"]) - expected)
        rep.add("H log-slope / G0", dev <= tol["slope"],
                slope_ratio=a["slope_ratio"], expected=expected)
        rep.add("G0 identity", a["g0_identity_rel_err"] <= tol["identity"],
                rel_err=a["g0_identity_rel_err"])
        if a["excluded_points"]:
            rep.warn("error filter", excluded=a["excluded_points"])
        return rep


def causality_report(task: DualizationTask, spec: Optional[ContourSpec] = None,
                     workers: int = 1, suppression_tol: float = 1e-6, spread_tol: float = 1e-6,
                     slope_tol: float = 1e-4, identity_tol: float = 1e-8) -> CausalityReport:
    """Evaluate G and H over the grid and compute the causality aggregates.

    Points whose error estimate exceeds spread_tol / 10 relative to their own
    value (t > 0) or to the largest |G| on t > 0 (t < 0) are excluded from
    every aggregate and counted.
    """
    spec = spec or ContourSpec(tol=1e-10)
    ts = {t for t, _ in task.grid}
    if not any(t > 0 for t in ts) or not any(t < 0 for t in ts):
        raise DualizationError("grid must cover both signs of t")
    jobs = [(task, t, r, spec) for t, r in task.grid]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_point, jobs))
    else:
        results = [_point(j) for j in jobs]
    pts = [{"t": t, "r": r, "G": g, "H": h} for t, r, g, h in results]

    scale = max(abs(p["G"].value) for p in pts if p["t"] > 0)

    def accurate(p) -> bool:
        # relative to the point itself on t > 0, to the t > 0 scale on t < 0
        ref = {e: abs(p[e].value) if p["t"] > 0 else scale for e in ("G", "H")}
        return all(p[e].total_error <= spread_tol / 10 * ref[e] for e in ("G", "H"))
    good = [p for p in pts if accurate(p)]
    excluded = len(pts) - len(good)
    pos = [p for p in good if p["t"] > 0]
    neg = [p for p in good if p["t"] < 0]

    x, M = task.x, task.M

    def gauss(t, r):
        return t ** (-x) * math.exp(-M * r * r / (2 * t))

    ratios = {(p["t"], p["r"]): p["G"].value / gauss(p["t"], p["r"]) for p in pos}
    ref = ratios.get((1.0, 0.0), next(iter(ratios.values())))
    spread = max(abs(v - ref) for v in ratios.values()) / abs(ref)
    suppression = max(abs(p["G"].value) for p in neg) / max(abs(p["G"].value) for p in pos)

    # exact least squares of H t^x e^{M r^2/2t} = A + B ln t
    A = np.array([[1.0, math.log(p["t"])] for p in pos], dtype=complex)
    y = np.array([p["H"].value / gauss(p["t"], p["r"]) for p in pos])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    slope = complex(coef[1])

    ip = integral_I(0, task.kappa, spec.replace(half_plane="above"))
    predicted = 2 ** (-task.kappa) * M ** (task.kappa - 1) * task.g0 * ip.value
    agg = {
        "G0": complex(ref),
        "G0_predicted": complex(predicted),
        "g0_identity_rel_err": abs(ref - predicted) / abs(predicted),
        "suppression_ratio": suppression,
        "gaussian_spread": spread,
        "log_slope": slope,
        "slope_ratio": (slope / ref).real,
        "slope_ratio_imag": (slope / ref).imag,
        "excluded_points": excluded,
        "max_error": float(max(max(p["G"].total_error, p["H"].total_error) for p in pts)),
    }
    tol = {"suppression": suppression_tol, "spread": spread_tol, "slope": slope_tol,
           "identity": identity_tol}
    return CausalityReport(task, pts, agg, tol)
