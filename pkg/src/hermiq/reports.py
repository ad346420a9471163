"""Structured check results shared by the identity and generating-function checks."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .polyring import BiPolynomial


@dataclass
class CheckReport:
    identity: str
    indices: dict[str, Any]
    status: str  # "pass" | "fail"
    first_diff: dict[str, Any] | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"identity": self.identity, "indices": self.indices, "status": self.status}
        if self.first_diff is not None:
            out["first_diff"] = self.first_diff
        if self.detail:
            out["detail"] = self.detail
        return out


def poly_diff(lhs: BiPolynomial, rhs: BiPolynomial) -> dict[str, Any] | None:
    """First differing coefficient in lexicographic exponent order, or None."""
    keys = sorted(set(lhs.coeffs) | set(rhs.coeffs))
    for k in keys:
        a, b = lhs[k], rhs[k]
        if a != b:
            return {"exponent": list(k), "lhs": str(a), "rhs": str(b)}
    return None


def compare_polys(identity: str, indices: dict[str, Any], lhs: BiPolynomial, rhs: BiPolynomial) -> CheckReport:
    diff = poly_diff(lhs, rhs)
    return CheckReport(identity, indices, "pass" if diff is None else "fail", diff)


def rel_err(a, b) -> float:
    """``|a - b| / |b|`` for quaternion arrays (or scalars); ``|a - b|`` when ``b == 0``."""
    d = float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    s = float(np.linalg.norm(np.asarray(b, dtype=float)))
    return d / s if s > 0 else d


def numeric_report(identity: str, indices: dict[str, Any], lhs, rhs, tol: float, **extra) -> CheckReport:
    err = rel_err(lhs, rhs)
    detail = {"lhs": _plain(lhs), "rhs": _plain(rhs), "rel_err": err, "tol": tol}
    detail.update({k: _plain(v) for k, v in extra.items()})
    ok = err <= tol
    first = None if ok else {"lhs": _plain(lhs), "rhs": _plain(rhs)}
    return CheckReport(identity, indices, "pass" if ok else "fail", first, detail)


def _plain(v):
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, Fraction):
        return str(v)
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def dumps(obj, indent: int | None = 2) -> str:
    """JSON with every float written to 17 significant digits, keys in insertion order."""
    return _dump(_plain(obj), indent, 0)


def _dump(obj, indent, level) -> str:
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return json.dumps(str(obj))
        s = format(obj + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0
        if "e" not in s and "." not in s and "n" not in s:
            s += ".0"
        return s
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return _wrap("{", "}", items, indent, level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_dump(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(items) + "]"
        return _wrap("[", "]", items, indent, level)
    if hasattr(obj, "to_json"):
        return _dump(_plain(obj.to_json()), indent, level)
    return json.dumps(obj)


def _wrap(open_, close, items, indent, level):
    if indent is None:
        return open_ + ", ".join(items) + close
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    return open_ + "\n" + ",\n".join(pad + i for i in items) + "\n" + end + close
