"""Ageing scaling form of the linear response function.

R(t, s) = s^{-1-a} f_R(t/s),  f_R(y) = f0 y^{1+a'-lambda_R/z} (y-1)^{-1-a'} Theta(y-1).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable


class ResponseSingularity(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ResponseExponents:
    a: float = 0.0
    ap: float = 0.0
    lambda_R: float = 1.0
    z: float = 1.0
    f0: float = 1.0


def scaling_function(y: float, e: ResponseExponents) -> float:
    """f_R(y); zero for y < 1.

    At y = 1 the factor (y-1)^{-1-a'} diverges when a' > -1: a
    ``ResponseSingularity`` warning is issued and inf returned.  Otherwise
    Theta(0) is taken as 0.
    """
    if y < 1:
        return 0.0
    if y == 1:
        if e.ap > -1:
            warnings.warn("f_R diverges at y = 1", ResponseSingularity, stacklevel=2)
            return math.inf
        return 0.0
    return e.f0 * y ** (1 + e.ap - e.lambda_R / e.z) * (y - 1) ** (-1 - e.ap)


def response_scaling(t: float, s: float, a: float = 0.0, ap: float = 0.0,
                     lambda_R: float = 1.0, z: float = 1.0, f0: float = 1.0) -> float:
    if not s > 0:
        raise ValueError("s must be positive")
    e = ResponseExponents(a, ap, lambda_R, z, f0)
    return s ** (-1 - a) * scaling_function(t / s, e)


def collapse_residual(samples: Iterable[tuple], e: ResponseExponents) -> float:
    """max |s^{1+a} R - f_R(t/s)| over samples (t, s, R)."""
    worst = 0.0
    for t, s, R in samples:
        worst = max(worst, abs(s ** (1 + e.a) * R - scaling_function(t / s, e)))
    return worst


def scaling_samples(pairs: Iterable[tuple], e: ResponseExponents) -> list:
    """(t, s, R(t, s)) generated from the scaling form itself."""
    return [(t, s, response_scaling(t, s, e.a, e.ap, e.lambda_R, e.z, e.f0)) for t, s in pairs]
