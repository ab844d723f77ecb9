"""Block-matrix realisation of two central charges by two commuting Virasoro algebras.

Elements of the universal enveloping algebra are dicts ``word -> ParamScalar``
where a word is a tuple of letters ``(family, n)`` with family ``"L"`` or
``"Lp"``.  Words are kept normally ordered (sorted letters) by rewriting
``L_a L_b -> L_b L_a + [L_a, L_b]`` whenever ``a > b``; L and L' commute.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable

from ..report import Report, timed
from ..symcore import ParamScalar
from .tables import L as label, central_charge_rule, lc_str

CHARGE = {"L": "c", "Lp": "cp"}
MAX_WORD_LENGTH = 6
MAX_WINDOW_INDEX = 64


class ResourceLimit(RuntimeError):
    pass


def _add(out: dict, word: tuple, coeff: ParamScalar) -> None:
    new = out.get(word, ParamScalar()) + coeff
    if new:
        out[word] = new
    else:
        out.pop(word, None)


def _letter_bracket(a, b) -> dict:
    """[a, b] for letters of the same family, as an element."""
    fam, n = a
    _, m = b
    out: dict = {}
    if n != m:
        _add(out, ((fam, n + m),), ParamScalar.const(n - m))
    if n + m == 0 and n ** 3 != n:
        _add(out, (), ParamScalar.symbol(CHARGE[fam]) * Fraction(n ** 3 - n, 12))
    return out


def normal_order(word: tuple, coeff: ParamScalar, out: dict) -> None:
    if len(word) > MAX_WORD_LENGTH:
        raise ResourceLimit(f"word length {len(word)} exceeds bound {MAX_WORD_LENGTH}")
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a > b:
            head, tail = word[:i], word[i + 2:]
            normal_order(head + (b, a) + tail, coeff, out)
            if a[0] == b[0]:
                for w, c in _letter_bracket(a, b).items():
                    normal_order(head + w + tail, coeff * c, out)
            return
    _add(out, word, coeff)


def mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for wa, ca in x.items():
        for wb, cb in y.items():
            normal_order(wa + wb, ca * cb, out)
    return out


def add(x: dict, y: dict, scale=1) -> dict:
    out = dict(x)
    s = ParamScalar.coerce(scale)
    for w, c in y.items():
        _add(out, w, c * s)
    return out


def letter(fam: str, n: int) -> dict:
    return {((fam, n),): ParamScalar.const(1)}


def scalar(s) -> dict:
    s = ParamScalar.coerce(s)
    return {(): s} if s else {}


# 2x2 matrices over the enveloping algebra, stored row-major as 4-tuples
def mat_mul(A, B):
    a, b, c, d = A
    p, q, r, s = B
    return (add(mul(a, p), mul(b, r)), add(mul(a, q), mul(b, s)),
            add(mul(c, p), mul(d, r)), add(mul(c, q), mul(d, s)))


def mat_comm(A, B):
    AB, BA = mat_mul(A, B), mat_mul(B, A)
    return tuple(add(x, y, -1) for x, y in zip(AB, BA))


def mat_add(A, B, scale=1):
    return tuple(add(x, y, scale) for x, y in zip(A, B))


def block_generators(n: int) -> dict:
    """X_n = (L_n + L'_n) Id, Y_n = L_n E12."""
    s = add(letter("L", n), letter("Lp", n))
    return {"X": (s, {}, {}, s), "Y": ({}, letter("L", n), {}, {})}


def central_images() -> dict:
    """c_X -> (c + c') K_X, c_Y -> c K_Y."""
    cc = add(scalar("c"), scalar("cp"))
    return {"CX": (cc, {}, {}, cc), "CY": ({}, scalar("c"), {}, {})}


def _image(lab, coeff):
    if lab.family in ("CX", "CY"):
        m = central_images()[lab.family]
    else:
        m = block_generators(int(lab.index))[lab.family]
    return tuple(add({}, x, coeff) for x in m)


def _fmt(m) -> str:
    def one(x):
        if not x:
            return "0"
        return " + ".join(f"({c})*{''.join(f'{f}{n}' for f, n in w) or '1'}"
                          for w, c in sorted(x.items()))
    return "[" + ", ".join(one(x) for x in m) + "]"


def verify_matrix_central_charges(window: Iterable[int] = range(-2, 3)) -> Report:
    """Check the bracket table with two central charges in the block-matrix realisation."""
    window = list(window)
    if any(abs(n) > MAX_WINDOW_INDEX for n in window):
        raise ResourceLimit(f"window exceeds |n| <= {MAX_WINDOW_INDEX}")
    report = Report("verify central charges (block matrices)")
    labels = [label(f, n) for f in ("X", "Y") for n in window]
    with timed(report):
        for a, b in iproduct(labels, labels):
            if (a.family, a.index) >= (b.family, b.index):
                continue
            computed = mat_comm(_image(a, 1), _image(b, 1))
            expected = central_charge_rule(a, b)
            if expected is None:
                expected = {k: -v for k, v in central_charge_rule(b, a).items()}
            pred = ({}, {}, {}, {})
            for lab, coeff in expected.items():
                pred = mat_add(pred, _image(lab, coeff))
            residual = mat_add(computed, pred, -1)
            detail = {"expected": lc_str(expected)}
            if any(residual):
                detail["residual"] = _fmt(residual)
            report.add(f"[{a},{b}]", not any(residual), **detail)
    return report
