"""Oscillatory line integrals evaluated on deformed contours.

The integrals of interest are

    I_pm^(n)(x) = int_{R pm i eps} e^{-i z} z^{-x} ln^n z dz,

which converge only conditionally on the line.  Since e^{-iz} decays for
Im z -> -inf, the two tails |Re z| > L are swapped for vertical rays at
Re z = pm L running down to depth ``tail_depth`` (a "staple").  Above the
real axis the principal cut of z^{-x} would cross the left ray, so there the
branch is continued with its cut turned onto the negative imaginary axis;
the two agree everywhere on the upper half plane.  An independent scheme
wraps that rotated cut with a keyhole.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

HALF_PLANES = ("above", "below")
SCHEMES = ("staple", "keyhole")


class ContourError(ValueError):
    pass


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ContourSpec:
    epsilon: float = 0.5
    L: float = 50.0
    tail_depth: float = 40.0
    nodes_per_segment: int = 400
    half_plane: str = "below"
    tol: float = 1e-10

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ContourError("epsilon must lie in (0, 1)")
        if self.L <= 10:
            raise ContourError("L must exceed 10")
        if self.tail_depth <= 0:
            raise ContourError("tail_depth must be positive")
        if self.nodes_per_segment < 1:
            raise ContourError("nodes_per_segment must be a positive integer")
        if self.half_plane not in HALF_PLANES:
            raise ContourError(f"half_plane must be one of {HALF_PLANES}")

    def replace(self, **kw) -> "ContourSpec":
        data = dict(self.__dict__)
        data.update(kw)
        return ContourSpec(**data)


@dataclass
class QuadResult:
    value: complex
    error: float
    tail: float = 0.0
    warning: Optional[str] = None
    pieces: dict = field(default_factory=dict)

    @property
    def total_error(self) -> float:
        return self.error + self.tail

    def __add__(self, other: "QuadResult") -> "QuadResult":
        warn = "; ".join(w for w in (self.warning, other.warning) if w) or None
        return QuadResult(self.value + other.value, self.error + other.error,
                          self.tail + other.tail, warn)

    def scaled(self, c: complex) -> "QuadResult":
        a = abs(c)
        return QuadResult(self.value * c, self.error * a, self.tail * a, self.warning)


# ---------------------------------------------------------------------------
# branches

def log_principal(z: complex) -> complex:
    return complex(np.log(complex(z)))


def log_rotated(z: complex) -> complex:
    """ln z with its cut on the negative imaginary axis (arg in (-pi/2, 3pi/2])."""
    z = complex(z)
    phi = math.atan2(z.imag, z.real)
    if phi <= -math.pi / 2:
        phi += 2 * math.pi
    return complex(math.log(abs(z)), phi)


# ---------------------------------------------------------------------------
# segment quadrature

def _segment(fn: Callable[[float], complex], a: float, b: float, spec: ContourSpec,
             points=None) -> tuple:
    # quad's own warnings (roundoff, subdivision limit) are folded into the
    # returned error estimate, which callers compare against their tolerance
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val, err = quad(fn, a, b, complex_func=True, limit=spec.nodes_per_segment,
                        epsabs=spec.tol / 100, epsrel=1e-13, points=points)
    err = float(abs(complex(err)))
    msg = None
    if caught and err > spec.tol / 10:
        msg = f"segment [{a:g}, {b:g}]: {str(caught[0].message).splitlines()[0]}"
    return complex(val), err, msg


def staple_integral(f: Callable[[complex], complex], height: float, spec: ContourSpec,
                    decay: float = 1.0, centre_points=None) -> QuadResult:
    """int over the line Im z = height of f, with f decaying like e^{decay Im z}.

    The line tails are replaced by vertical rays at Re z = -L (upwards from
    -tail_depth) and Re z = +L (downwards); the part below -tail_depth is
    dropped and estimated from |f| at the ray ends.
    """
    L, D = spec.L, spec.tail_depth
    left = lambda y: f(complex(-L, y)) * 1j
    mid = lambda s: f(complex(s, height))
    right = lambda y: -f(complex(L, y)) * 1j
    pieces, total, err, msgs = {}, 0j, 0.0, []
    for name, fn, a, b, pts in (("left", left, -D, height, None),
                                ("segment", mid, -L, L, centre_points),
                                ("right", right, -D, height, None)):
        v, e, m = _segment(fn, a, b, spec, pts)
        pieces[name] = v
        total += v
        err += e
        if m:
            msgs.append(m)
    tail = (abs(f(complex(-L, -D))) + abs(f(complex(L, -D)))) / decay
    return QuadResult(total, err, tail, "; ".join(msgs) or None, pieces)


# ---------------------------------------------------------------------------
# I_pm^(n)(x)

def _check(n: int, x: float):
    if n not in (0, 1):
        raise ContourError("n must be 0 or 1")
    if not x > 0:
        raise ContourError("x must be positive")


def _staple_I(n: int, x: float, spec: ContourSpec) -> QuadResult:
    log = log_principal if spec.half_plane == "below" else log_rotated
    height = -spec.epsilon if spec.half_plane == "below" else spec.epsilon

    def f(z):
        lz = log(z)
        out = np.exp(-1j * z - x * lz)
        return out * lz if n else out
    return staple_integral(f, height, spec, centre_points=[0.0])


def _keyhole_I(n: int, x: float, spec: ContourSpec) -> QuadResult:
    """Wrap the cut along the negative imaginary axis with a circle of radius epsilon."""
    if spec.half_plane == "below":
        # nothing to wrap: the integrand is analytic below the line
        return QuadResult(0j, 0.0)
    rho, D = spec.epsilon, spec.tail_depth

    def g(s, phi):
        z = s * complex(math.cos(phi), math.sin(phi))
        lz = complex(math.log(s), phi)
        out = np.exp(-1j * z - x * lz)
        return out * lz if n else out

    up, down = 1.5 * math.pi, -0.5 * math.pi
    pieces, msgs = {}, []
    v1, e1, m1 = _segment(lambda s: 1j * g(s, up), rho, D, spec)
    v2, e2, m2 = _segment(lambda p: -g(rho, p) * 1j * rho * complex(math.cos(p), math.sin(p)),
                          down, up, spec)
    v3, e3, m3 = _segment(lambda s: -1j * g(s, down), rho, D, spec)
    pieces.update(left=v1, circle=v2, right=v3)
    msgs = [m for m in (m1, m2, m3) if m]
    tail = 2 * abs(g(D, down))
    return QuadResult(v1 + v2 + v3, e1 + e2 + e3, tail, "; ".join(msgs) or None, pieces)


def integral_I(n: int, x: float, spec: Optional[ContourSpec] = None,
               scheme: Optional[str] = None) -> QuadResult:
    """I_pm^(n)(x) on the line R -/+ i eps ("below"/"above").

    ``scheme`` defaults to the staple below the axis and the keyhole above.
    A warning is attached (and issued) when the error estimate exceeds tol.
    """
    spec = spec or ContourSpec()
    _check(n, x)
    scheme = scheme or ("staple" if spec.half_plane == "below" else "keyhole")
    if scheme not in SCHEMES:
        raise ContourError(f"scheme must be one of {SCHEMES}")
    res = (_staple_I if scheme == "staple" else _keyhole_I)(n, x, spec)
    if res.total_error > spec.tol:
        note = f"error estimate {res.total_error:.3g} exceeds tol {spec.tol:.3g}"
        res.warning = f"{res.warning}; {note}" if res.warning else note
    if res.warning:
        warnings.warn(res.warning, ConvergenceWarning, stacklevel=2)
    return res


def contour_independence(n: int, x: float, spec: Optional[ContourSpec] = None) -> dict:
    """Relative changes of I under doubling L, doubling tail_depth and halving epsilon."""
    spec = spec or ContourSpec()
    base = integral_I(n, x, spec, scheme="staple").value
    scale = max(abs(base), 1.0)
    out = {}
    for name, s in (("double_L", spec.replace(L=2 * spec.L)),
                    ("double_depth", spec.replace(tail_depth=2 * spec.tail_depth)),
                    ("half_epsilon", spec.replace(epsilon=spec.epsilon / 2))):
        out[name] = abs(integral_I(n, x, s, scheme="staple").value - base) / scale
    return out
