"""JSON encodings of the file formats read and written by the CLI.

Rationals are strings ``"p/q"`` (``"p"`` when q = 1) and never floats.
Complex matrices are nested arrays of ``{"re": x, "im": y}``; floats use
Python's shortest round-trip repr, so parse(print(x)) is bit-identical.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction

import numpy as np

from .correspondence import TripleE, VarietyB, variety_build
from .field import FieldContext, KElement
from .linalg import KMatrix
from .siegel import GUElement, SiegelPoint, gu_validate

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(ValueError):
    """Malformed input; ``field`` names the offending key path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field


def rational_to_str(q: Fraction) -> str:
    return str(Fraction(q))


def rational_from_json(x, where: str = "rational") -> Fraction:
    if isinstance(x, bool):
        raise ParseError(where, "expected a rational string, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str) or not _RATIONAL.match(x.strip()):
        raise ParseError(where, f"expected a rational 'p/q', got {x!r}")
    try:
        return Fraction(x.strip())
    except ZeroDivisionError:
        raise ParseError(where, "zero denominator") from None


def kelement_to_json(x: KElement) -> dict:
    return {"a": rational_to_str(x.a), "b": rational_to_str(x.b)}


def kelement_from_json(obj, ctx: FieldContext, where: str = "element") -> KElement:
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object with keys 'a' and 'b'")
    a = rational_from_json(_get(obj, "a", where), f"{where}.a")
    b = rational_from_json(_get(obj, "b", where), f"{where}.b")
    return KElement(a, b, ctx)


def kmatrix_to_json(M: KMatrix) -> list:
    return [[kelement_to_json(x) for x in row] for row in M.entries]


def kmatrix_from_json(obj, ctx: FieldContext, where: str = "matrix") -> KMatrix:
    rows = _rows(obj, where)
    return KMatrix._trusted(
        [[kelement_from_json(x, ctx, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(rows)],
        ctx,
    )


def _float(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def cmatrix_to_json(M) -> list:
    M = np.asarray(M, dtype=np.complex128)
    return [[{"re": float(x.real), "im": float(x.imag)} for x in row] for row in M]


def cmatrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    rows = _rows(obj, where)
    out = np.empty((len(rows), len(rows[0])), dtype=np.complex128)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            w = f"{where}[{i}][{j}]"
            if not isinstance(x, dict):
                raise ParseError(w, "expected an object with keys 're' and 'im'")
            re_, im_ = _get(x, "re", w), _get(x, "im", w)
            for part, v in (("re", re_), ("im", im_)):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ParseError(f"{w}.{part}", f"expected a finite number, got {v!r}")
            out[i, j] = complex(re_, im_)
    return out


def _rows(obj, where: str) -> list:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError(where, "expected a non-empty array of arrays")
    if not obj[0] or any(len(r) != len(obj[0]) for r in obj):
        raise ParseError(where, "rows must be non-empty and of equal length")
    return obj


def _get(obj: dict, key: str, where: str = ""):
    if not isinstance(obj, dict):
        raise ParseError(where or key, "expected an object")
    if key not in obj:
        raise ParseError(f"{where}.{key}" if where else key, "missing")
    return obj[key]


def _int(obj: dict, key: str) -> int:
    v = _get(obj, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(key, f"expected an integer, got {v!r}")
    return v


def _ctx(obj: dict) -> FieldContext:
    d = _int(obj, "delta")
    try:
        return FieldContext(d)
    except ValueError as exc:
        raise ParseError("delta", str(exc)) from None


# -- file formats -------------------------------------------------------------


def siegel_to_json(p: SiegelPoint) -> dict:
    return {"n": p.n, "m": p.m, "z": cmatrix_to_json(p.z)}


def siegel_from_json(obj) -> SiegelPoint:
    n, m = _int(obj, "n"), _int(obj, "m")
    z = cmatrix_from_json(_get(obj, "z"), "z")
    if z.shape != (n, m):
        raise ParseError("z", f"shape {z.shape} does not match n={n}, m={m}")
    return SiegelPoint.unchecked(z)


def gu_to_json(g: GUElement) -> dict:
    return {"gamma": kmatrix_to_json(g.gamma), "delta": g.ctx.delta, "n": g.n, "m": g.m}


def gu_from_json(obj) -> GUElement:
    ctx = _ctx(obj)
    n, m = _int(obj, "n"), _int(obj, "m")
    gamma = kmatrix_from_json(_get(obj, "gamma"), ctx, "gamma")
    if gamma.shape != (n + m, n + m):
        raise ParseError("gamma", f"shape {gamma.shape} does not match n+m={n + m}")
    return gu_validate(gamma, n, m, ctx)


def variety_to_json(V: VarietyB) -> dict:
    return {"delta": V.delta, "n": V.n, "r": V.r, "z": cmatrix_to_json(V.z.z)}


def variety_from_json(obj, tol: float) -> VarietyB:
    ctx = _ctx(obj)
    n, r = _int(obj, "n"), _int(obj, "r")
    z = cmatrix_from_json(_get(obj, "z"), "z")
    if not 1 <= n < r or z.shape != (n, r - n):
        raise ParseError("z", f"shape {z.shape} does not match n={n}, r={r}")
    return variety_build(ctx, n, r, z, tol)


def triple_to_json(E: TripleE) -> dict:
    return {
        "delta": E.delta,
        "n": E.n,
        "r": E.r,
        "gram": kmatrix_to_json(E.gram),
        "alpha": cmatrix_to_json(E.alpha),
    }


def triple_from_json(obj) -> TripleE:
    ctx = _ctx(obj)
    n, r = _int(obj, "n"), _int(obj, "r")
    gram = kmatrix_from_json(_get(obj, "gram"), ctx, "gram")
    alpha = cmatrix_from_json(_get(obj, "alpha"), "alpha")
    if not 1 <= n <= r:
        raise ParseError("n", f"need 1 <= n <= r, got n={n}, r={r}")
    if gram.shape != (r, r):
        raise ParseError("gram", f"shape {gram.shape} does not match r={r}")
    if alpha.shape != (n, r):
        raise ParseError("alpha", f"shape {alpha.shape} does not match n={n}, r={r}")
    return TripleE(ctx, n, r, gram, alpha)


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _float(x)
    if isinstance(x, Fraction):
        return rational_to_str(x)
    return x
