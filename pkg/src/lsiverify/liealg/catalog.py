"""Differential-operator representations of the generator families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from ..symcore import I, ParamScalar
from .diffop import DiffOp, Mat2
from .tables import L, Label

HALF = Fraction(1, 2)
CATALOG_IDS = ("sch", "sv", "cga", "av", "ecga", "dual-sch", "dual-cga",
               "log-dual-sch", "age", "parabolic-N")


class CatalogError(ValueError):
    pass


def P(name: str) -> ParamScalar:
    return ParamScalar.symbol(name)


def v(name: str, e=1) -> DiffOp:
    return DiffOp.var(name, e)


def d(name: str, k: int = 1) -> DiffOp:
    return DiffOp.d(name, k)


def tp(e) -> DiffOp:
    """t^e (the identity operator when e == 0)."""
    e = Fraction(e)
    return DiffOp.scalar(1) if e == 0 else v("t", e)


@dataclass
class Representation:
    """A generator family realised by DiffOps on a window of indices.

    ``factory`` builds the operator of any label (also outside the window);
    ``central`` gives the operator image of central labels (e.g. Theta -> theta).
    """

    catalog_id: str
    d: int
    coordinates: list
    parameters: list
    generators: dict
    factory: Callable[[Label], DiffOp]
    central: dict = field(default_factory=dict)

    def image(self, label: Label) -> DiffOp:
        if label.is_central:
            return self.central.get(label, DiffOp.zero())
        if label in self.generators:
            return self.generators[label]
        return self.factory(label)

    def image_lc(self, combo: Mapping[Label, ParamScalar]) -> DiffOp:
        out = DiffOp.zero()
        for label, coeff in combo.items():
            out = out + self.image(label) * coeff
        return out

    def labels(self):
        return list(self.generators)

    def with_generator(self, label: Label, op: DiffOp) -> "Representation":
        gens = dict(self.generators)
        gens[label] = op
        base = self.factory

        def factory(lab):
            return op if lab == label else base(lab)
        return Representation(self.catalog_id, self.d, self.coordinates, self.parameters,
                              gens, factory, dict(self.central))


# ---------------------------------------------------------------------------
# mass representation of sch(d) / sv(d)

def _r(j, d_):
    return "r" if d_ == 1 else f"r{j}"


def _sch_gen(d_: int, mass: str = "M", x: str = "x", log: bool = False):
    M = P(mass)
    X_ = jordan(P(x), P("xp")) if log else DiffOp.scalar(P(x))
    rs = [_r(j, d_) for j in range(1, d_ + 1)]

    def gen(label: Label) -> DiffOp:
        n = label.index
        if label.family == "X":
            op = -tp(n + 1) * d("t")
            for r in rs:
                op = op - tp(n) * v(r) * d(r) * ((n + 1) / 2)
                op = op - tp(n - 1) * v(r, 2) * (M * ((n + 1) * n / 4))
            return op - tp(n) * X_ * ((n + 1) / 2)
        if label.family == "Y":
            (j,) = label.spatial or (1,)
            r = rs[j - 1]
            return -tp(n + HALF) * d(r) - tp(n - HALF) * v(r) * (M * (n + HALF))
        if label.family == "M":
            return -tp(n) * M
        if label.family == "R":
            j, k = label.spatial
            rj, rk = rs[j - 1], rs[k - 1]
            return -tp(n) * (v(rj) * d(rk) - v(rk) * d(rj))
        raise CatalogError(f"label {label} not in sch family")
    return gen, rs


def _sch_labels(d_, ns, ms):
    out = [L("X", n) for n in ns]
    for m in ms:
        out += [L("Y", m, j) if d_ > 1 else L("Y", m) for j in range(1, d_ + 1)]
    return out


def _rotation_labels(d_, ns):
    return [L("R", n, j, k) for n in ns for j in range(1, d_ + 1) for k in range(j + 1, d_ + 1)]


# ---------------------------------------------------------------------------
# conformal Galilean family

def _cga_gen(d_: int, x: str = "x", log: bool = False, gamma_param: bool = False):
    """cga(d); with ``gamma_param`` the gamma_j are parameters instead of coordinates."""
    X_ = jordan(P(x), P("xp")) if log else DiffOp.scalar(P(x))
    rs = [_r(j, d_) for j in range(1, d_ + 1)]
    gs = ["gamma" if d_ == 1 else f"gamma{j}" for j in range(1, d_ + 1)]

    def g(name):
        return DiffOp.scalar(P(name)) if gamma_param else v(name)

    def gen(label: Label) -> DiffOp:
        n = label.index
        if label.family == "X":
            op = -tp(n + 1) * d("t")
            for r, gm in zip(rs, gs):
                op = op - tp(n) * v(r) * d(r) * (n + 1)
                op = op - tp(n - 1) * g(gm) * v(r) * ((n + 1) * n)
            return op - tp(n) * X_ * (n + 1)
        if label.family == "Y":
            (j,) = label.spatial or (1,)
            return -tp(n + 1) * d(rs[j - 1]) - tp(n) * g(gs[j - 1]) * (n + 1)
        if label.family == "R":
            j, k = label.spatial
            op = -tp(n) * (v(rs[j - 1]) * d(rs[k - 1]) - v(rs[k - 1]) * d(rs[j - 1]))
            if not gamma_param:
                op = op - tp(n) * (v(gs[j - 1]) * d(gs[k - 1]) - v(gs[k - 1]) * d(gs[j - 1]))
            return op
        raise CatalogError(f"label {label} not in cga family")
    return gen, rs + ([] if gamma_param else gs)


def _ecga_gen(lam: str = "lam", theta: str = "theta"):
    """ecga with h1 = eta, h2 = -theta d_eta, so that [h1, h2] = theta."""
    Lm, th = P(lam), P(theta)
    h = [v("eta"), -d("eta") * th]
    rs, gs = ["r1", "r2"], ["gamma1", "gamma2"]
    # eps_{jk} r_k: j=1 -> r2, j=2 -> -r1
    eps_r = [v("r2"), -v("r1")]

    def gen(label: Label) -> DiffOp:
        n = label.index
        if label.family == "X":
            op = -tp(n + 1) * d("t") - tp(n) * (Lm * (n + 1))
            for r, g, hj in zip(rs, gs, h):
                op = op - tp(n) * v(r) * d(r) * (n + 1)
                op = op - tp(n - 1) * v(g) * v(r) * ((n + 1) * n)
                op = op - tp(n - 1) * v(r) * hj * ((n + 1) * n)
            return op
        if label.family == "Y":
            (j,) = label.spatial
            return (-tp(n + 1) * d(rs[j - 1]) - tp(n) * v(gs[j - 1]) * (n + 1)
                    - tp(n) * h[j - 1] * (n + 1) - tp(n - 1) * eps_r[j - 1] * (th * ((n + 1) * n)))
        if label.family == "R" and label.index == 0:
            hh = h[0] * h[0] + h[1] * h[1]
            return (-(v("r1") * d("r2") - v("r2") * d("r1"))
                    - (v("gamma1") * d("gamma2") - v("gamma2") * d("gamma1"))
                    - hh * (th.inverse() * Fraction(1, 2)))
        raise CatalogError(f"label {label} not in ecga")
    return gen, ["t", "r1", "r2", "gamma1", "gamma2", "eta"]


# ---------------------------------------------------------------------------
# dual representations (coordinate zeta dual to the mass), d = 1

def jordan(a, b=0, c=0) -> DiffOp:
    """Constant matrix [[a, b], [c, a]]."""
    return DiffOp.matrix(a, b, c, a)


def _dual_gen(x: str = "x", xp: Optional[str] = None, xi: str = "xi",
              xip: Optional[str] = None, xipp: Optional[str] = None,
              age: bool = False):
    """Dual sch(1) family plus N, V+, D.

    ``xp`` / ``xip`` / ``xipp`` switch on the logarithmic (Jordan) parts of the
    constants in X_{0,1} and N; with ``age`` X_1 carries x + xi.
    """
    X_ = P(x)
    Xi = P(xi)
    xmat = jordan(X_, P(xp)) if xp else DiffOp.scalar(X_)
    ximat = jordan(Xi, P(xip) if xip else 0, P(xipp) if xipp else 0) if (xip or xipp) \
        else DiffOp.scalar(Xi)
    kappa = X_ + Xi

    def x_gen(n) -> DiffOp:
        n = Fraction(n)
        op = (tp(n - 1) * v("r", 2) * d("zeta") * (I * ((n + 1) * n / 4))
              - tp(n + 1) * d("t") - tp(n) * v("r") * d("r") * ((n + 1) / 2))
        if age and n == 1:
            return op - tp(1) * kappa
        return op - tp(n) * xmat * ((n + 1) / 2)

    def gen(label: Label) -> DiffOp:
        n = label.index
        fam = label.family
        if fam == "X":
            return x_gen(n)
        if fam == "Y":
            return tp(n - HALF) * v("r") * d("zeta") * (I * (n + HALF)) - tp(n + HALF) * d("r")
        if fam == "M":
            return tp(n) * d("zeta") * I
        if fam == "N":
            return v("zeta") * d("zeta") - v("t") * d("t") + ximat
        if fam == "Vp":
            return (-v("zeta") * v("r") * d("zeta") - v("t") * v("r") * d("t")
                    - (v("zeta") * v("t") * I + v("r", 2) * HALF) * d("r") - v("r") * kappa)
        if fam == "D":
            return x_gen(0) * 2 - gen(L("N"))
        raise CatalogError(f"label {label} not in the dual family")
    return gen


def dynamical_operator(x: str = "x", xi: str = "xi") -> DiffOp:
    """S = -2i d_zeta d_t - d_r^2 - 2i (x + xi - 1/2) t^-1 d_zeta."""
    kappa = P(x) + P(xi) - HALF
    return (-(d("zeta") * d("t")) * (I * 2) - d("r", 2)
            - v("t", -1) * d("zeta") * (I * 2 * kappa))


# ---------------------------------------------------------------------------

def _window(window) -> list:
    if window is None:
        return [-1, 0, 1]
    return list(range(window[0], window[1] + 1)) if isinstance(window, tuple) else list(window)


def build_representation(catalog_id: str, d_: int = 1, window=None,
                         log: bool = False, xipp: bool = False,
                         gamma_param: bool = False) -> Representation:
    """Construct the generators of ``catalog_id``.

    ``window`` is an inclusive ``(a, b)`` range or an iterable of indices and
    only matters for the infinite families sv / av.  ``log`` turns on the
    Jordan constant x' (and xi' for the dual families); ``xipp`` adds the
    lower-left entry xi'' to N; ``gamma_param`` treats the cga constants
    gamma_j as parameters.
    """
    if catalog_id not in CATALOG_IDS:
        raise CatalogError(f"unknown catalog id {catalog_id!r}")
    if d_ < 1:
        raise CatalogError("dimension must be positive")
    fin = [-1, 0, 1]
    if catalog_id in ("sch", "sv"):
        ns = _window(window) if catalog_id == "sv" else fin
        ms = ([Fraction(2 * k + 1, 2) for k in range(ns[0] - 1, ns[-1] + 1)]
              if catalog_id == "sv" else [-HALF, HALF])
        gen, rs = _sch_gen(d_, log=log)
        labels = _sch_labels(d_, ns, ms) + [L("M", n) for n in (ns if catalog_id == "sv" else [0])]
        # for d >= 2 the R_n with n != 0 do not close on Y_m (extra n*M*r terms)
        labels += _rotation_labels(d_, [0])
        return _rep(catalog_id, d_, ["t"] + rs, ["M", "x"] + (["xp"] if log else []), labels, gen)
    if catalog_id in ("cga", "av"):
        ns = _window(window) if catalog_id == "av" else fin
        gen, coords = _cga_gen(d_, log=log, gamma_param=gamma_param)
        labels = [L("X", n) for n in ns]
        labels += [L("Y", n, j) if d_ > 1 else L("Y", n) for n in ns for j in range(1, d_ + 1)]
        labels += _rotation_labels(d_, [0])
        params = ["x"] + (["xp"] if log else [])
        if gamma_param:
            params += ["gamma" if d_ == 1 else f"gamma{j}" for j in range(1, d_ + 1)]
        return _rep(catalog_id, d_, ["t"] + coords, params, labels, gen)
    if catalog_id == "ecga":
        if d_ != 2:
            raise CatalogError("ecga requires d = 2")
        gen, coords = _ecga_gen()
        labels = [L("X", n) for n in fin] + [L("Y", n, j) for n in fin for j in (1, 2)]
        labels.append(L("R", 0, 1, 2))
        rep = _rep(catalog_id, 2, coords, ["lam", "theta"], labels, gen)
        rep.central[L("Theta")] = DiffOp.scalar(P("theta"))
        return rep
    if d_ != 1:
        raise CatalogError(f"{catalog_id} is implemented for d = 1 only")
    coords = ["zeta", "t", "r"]
    sch1 = [L("X", n) for n in fin] + [L("Y", -HALF), L("Y", HALF), L("M", 0)]
    if catalog_id == "dual-sch":
        gen = _dual_gen(xp="xp" if log else None)
        return _rep(catalog_id, 1, coords, ["x"] + (["xp"] if log else []), sch1, gen)
    if catalog_id in ("parabolic-N", "log-dual-sch"):
        lg = log or catalog_id == "log-dual-sch"
        gen = _dual_gen(xp="xp" if lg else None, xip="xip" if lg else None,
                        xipp="xipp" if xipp else None)
        params = ["x", "xi"] + (["xp", "xip"] if lg else []) + (["xipp"] if xipp else [])
        return _rep(catalog_id, 1, coords, params, sch1 + [L("N")], gen)
    if catalog_id == "age":
        gen = _dual_gen(age=True)
        labels = [L("X", 0), L("X", 1), L("Y", -HALF), L("Y", HALF), L("M", 0)]
        return _rep(catalog_id, 1, coords, ["x", "xi"], labels, gen)
    # dual-cga
    gen = _dual_gen(age=True)
    labels = [L("X", 1), L("Y", -HALF), L("Y", HALF), L("M", 0), L("Vp"), L("D"), L("N")]
    return _rep(catalog_id, 1, coords, ["x", "xi"], labels, gen)


def _rep(cid, d_, coords, params, labels, gen) -> Representation:
    return Representation(cid, d_, list(coords), list(params),
                          {lab: gen(lab) for lab in labels}, gen)


# ---------------------------------------------------------------------------
# mutations (for guarding against vacuous passes)

def drop_terms(op: DiffOp, predicate) -> DiffOp:
    """Remove the terms of ``op`` selected by ``predicate(mono, derivs, mat)``."""
    return op.filter(lambda mono, derivs, mat: not predicate(mono, derivs, mat))


def drop_param_terms(op: DiffOp, param: str) -> DiffOp:
    """Drop every term whose matrix coefficient mentions ``param``."""
    return drop_terms(op, lambda mono, derivs, mat: any(param in e.params() for e in mat.e))


def scale_terms(op: DiffOp, factor, predicate) -> DiffOp:
    out = []
    for (mono, derivs), mat in op.terms:
        out.append(((mono, derivs), mat.scale(factor) if predicate(mono, derivs, mat) else mat))
    return DiffOp(out)


def mutate(rep: Representation, label: Label, mutation: Callable[[DiffOp], DiffOp]) -> Representation:
    return rep.with_generator(label, mutation(rep.image(label)))
