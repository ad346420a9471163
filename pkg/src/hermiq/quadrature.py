"""Gaussian-weighted inner products on a slice and on all of H, plus the
quadrature-based checks (integral representation, adjoint, finite differences).

Functions to integrate ("evaluables") are either :class:`BiPolynomial` objects or
callables mapping an array of quaternions of shape ``(N, 4)`` to values of the
same shape.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .hermite import hermite_explicit
from .polyring import BiPolynomial
from .quaternion import (
    SPHERE_AREA,
    Quaternion,
    as_array,
    from_slice,
    qconj,
    qmul,
    sphere_nodes,
    to_slice,
)
from .reports import rel_err

Evaluable = Union[BiPolynomial, Callable[[np.ndarray], np.ndarray]]

# exact-by-construction rules (up to roundoff) vs. mixed schemes vs. finite differences
TOL_EXACT = 1e-9
TOL_MIXED = 1e-8
TOL_FD = 1e-6


def _evaluate(f: Evaluable, pts: np.ndarray) -> np.ndarray:
    if isinstance(f, BiPolynomial):
        return f.eval_many(pts)
    return np.asarray(f(pts), dtype=float)


@dataclass(frozen=True)
class QuadratureScheme:
    """Node counts for the slice, polar and Lebesgue rules.

    The slice rule is an ``slice_nodes x slice_nodes`` Gauss-Hermite tensor grid
    (exact for bivariate polynomials of degree < 2*slice_nodes against
    ``e^{-x^2-y^2}``).  The polar rule uses Gauss-Laguerre in ``t = r^2``, an
    equispaced ``angular_count`` rule in Phi (exact for ``e^{ik Phi}``,
    ``|k| < angular_count``) and a sphere rule for the imaginary unit.
    """

    slice_nodes: int = 48
    radial_nodes: int = 48
    angular_count: int = 64
    sphere_scheme: str = "design"
    sphere_count: int = 50
    lebesgue_nodes: int = 20

    @cached_property
    def slice_rule(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t, w = np.polynomial.hermite.hermgauss(self.slice_nodes)
        X, Y = np.meshgrid(t, t, indexing="ij")
        return X.ravel(), Y.ravel(), np.outer(w, w).ravel()

    @cached_property
    def radial_rule(self) -> tuple[np.ndarray, np.ndarray]:
        return np.polynomial.laguerre.laggauss(self.radial_nodes)

    @cached_property
    def angular_rule(self) -> tuple[np.ndarray, np.ndarray]:
        K = self.angular_count
        return 2 * math.pi * np.arange(K) / K, np.full(K, 2 * math.pi / K)

    @cached_property
    def sphere(self) -> tuple[np.ndarray, np.ndarray]:
        return sphere_nodes(self.sphere_scheme, self.sphere_count)

    @cached_property
    def polar_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Points ``r e^{I Phi}`` and weights for ``int f e^{-r^2} r dr dPhi dsigma(I)``."""
        t, wt = self.radial_rule
        phi, wphi = self.angular_rule
        units, wu = self.sphere
        r = np.sqrt(t)
        R, P, U = np.meshgrid(r, phi, np.arange(len(units)), indexing="ij")
        pts = from_slice(R * np.cos(P), R * np.sin(P), units[U])
        # r dr e^{-r^2} = (1/2) e^{-t} dt
        w = 0.5 * wt[:, None, None] * wphi[None, :, None] * wu[None, None, :]
        return pts.reshape(-1, 4), w.ravel()

    @cached_property
    def lebesgue_grid(self) -> tuple[np.ndarray, np.ndarray]:
        t, w = np.polynomial.hermite.hermgauss(self.lebesgue_nodes)
        grids = np.meshgrid(t, t, t, t, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        W = np.einsum("i,j,k,l->ijkl", w, w, w, w).ravel()
        return pts, W

    def slice_grid(self, unit) -> tuple[np.ndarray, np.ndarray]:
        X, Y, W = self.slice_rule
        return from_slice(X, Y, np.asarray(unit, dtype=float)), W


DEFAULT_SCHEME = QuadratureScheme()


def _inner(f: Evaluable, g: Evaluable, pts: np.ndarray, w: np.ndarray) -> np.ndarray:
    vals = qmul(_evaluate(f, pts), qconj(_evaluate(g, pts)))
    return np.sum(w[:, None] * vals, axis=0)


def slice_inner(f: Evaluable, g: Evaluable, unit=(1.0, 0.0, 0.0), scheme: QuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """``int_{L_I} f(x+Iy) conj(g(x+Iy)) e^{-x^2-y^2} dx dy``."""
    pts, w = scheme.slice_grid(unit)
    return _inner(f, g, pts, w)


def full_inner_polar(f: Evaluable, g: Evaluable, scheme: QuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """``int_0^inf int_S int_0^{2pi} f conj(g) e^{-r^2} r dPhi dsigma(I) dr`` at ``q = r e^{I Phi}``."""
    pts, w = scheme.polar_grid
    return _inner(f, g, pts, w)


def full_inner_lebesgue(f: Evaluable, g: Evaluable, scheme: QuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """``int_{R^4} f conj(g) e^{-|q|^2} dx0 dx1 dx2 dx3`` by a Gauss-Hermite tensor rule."""
    pts, w = scheme.lebesgue_grid
    return _inner(f, g, pts, w)


def lebesgue_witness(scheme: QuadratureScheme = DEFAULT_SCHEME) -> dict:
    """``<q, qbar>`` under the polar measure (0) and under Lebesgue measure (-pi^2)."""
    q, qb = BiPolynomial({(1, 0): 1}), BiPolynomial({(0, 1): 1})
    polar = full_inner_polar(q, qb, scheme)
    leb = full_inner_lebesgue(q, qb, scheme)
    expected = np.array([-math.pi**2, 0.0, 0.0, 0.0])
    return {
        "pair": ["q", "qbar"],
        "polar": polar,
        "lebesgue": leb,
        "lebesgue_expected": expected,
        "lebesgue_rel_err": rel_err(leb, expected),
        "polar_abs": float(np.linalg.norm(polar)),
    }


# -- Gram matrices ----------------------------------------------------------

def _eval_table(indices, pts):
    """Evaluate all H_{m,n} at ``pts`` sharing the power tables."""
    M = max(m for m, _ in indices)
    N = max(n for _, n in indices)
    one = np.zeros_like(pts)
    one[..., 0] = 1.0
    qp, cp = [one], [one]
    qb = qconj(pts)
    for _ in range(M):
        qp.append(qmul(qp[-1], pts))
    for _ in range(N):
        cp.append(qmul(cp[-1], qb))
    mixed = {}
    out = {}
    for m, n in indices:
        acc = np.zeros_like(pts)
        for (a, b), c in hermite_explicit(m, n):
            if (a, b) not in mixed:
                mixed[(a, b)] = qmul(qp[a], cp[b])
            acc = acc + float(c) * mixed[(a, b)]
        out[(m, n)] = acc
    return out


@dataclass
class GramReport:
    measure: str
    indices: list[tuple[int, int]]
    values: np.ndarray  # (len, len, 4)
    expected: np.ndarray | None  # (len, len) real
    rel_err: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.expected is not None and self.rel_err is None:
            diag = np.sqrt(np.abs(np.diag(self.expected)))
            scale = np.outer(diag, diag)
            err = np.linalg.norm(self.values - _embed(self.expected), axis=-1)
            # diagonal: relative to the expected norm; off-diagonal: to sqrt(norm_a * norm_b)
            self.rel_err = err / scale

    @property
    def max_rel_err(self) -> float:
        return float(np.max(self.rel_err)) if self.rel_err is not None else float("nan")

    def rows(self):
        for a, (m, n) in enumerate(self.indices):
            for b, (j, k) in enumerate(self.indices):
                v = self.values[a, b]
                exp = None if self.expected is None else float(self.expected[a, b])
                err = None if self.rel_err is None else float(self.rel_err[a, b])
                yield (m, n, j, k, *map(float, v), exp, err)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "j", "k", "re", "im1", "im2", "im3", "expected", "rel_err"])
        for row in self.rows():
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        keys = ["m", "n", "j", "k", "re", "im1", "im2", "im3", "expected", "rel_err"]
        return {
            "measure": self.measure,
            "max_rel_err": self.max_rel_err if self.rel_err is not None else None,
            "entries": [dict(zip(keys, row)) for row in self.rows()],
        }


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _embed(real: np.ndarray) -> np.ndarray:
    out = np.zeros(real.shape + (4,))
    out[..., 0] = real
    return out


def expected_norm(measure: str, m: int, n: int) -> float | None:
    base = math.factorial(m) * math.factorial(n) * math.pi
    if measure == "slice":
        return base
    if measure == "polar":
        return base * SPHERE_AREA
    return None


def gram(measure: str, K: int, scheme: QuadratureScheme = DEFAULT_SCHEME, unit=(1.0, 0.0, 0.0)) -> GramReport:
    """Gram matrix of H_{m,n}, ``0 <= m, n <= K``, under ``measure`` in {slice, polar, lebesgue}."""
    indices = [(m, n) for m in range(K + 1) for n in range(K + 1)]
    if measure == "slice":
        pts, w = scheme.slice_grid(unit)
    elif measure == "polar":
        pts, w = scheme.polar_grid
    elif measure == "lebesgue":
        pts, w = scheme.lebesgue_grid
    else:
        raise ValueError(f"unknown measure {measure!r}")
    table = _eval_table(indices, pts)
    conj = {k: qconj(v) for k, v in table.items()}
    L = len(indices)
    values = np.zeros((L, L, 4))
    for a, ia in enumerate(indices):
        wa = w[:, None] * table[ia]
        for b, ib in enumerate(indices):
            values[a, b] = np.sum(qmul(wa, conj[ib]), axis=0)
    if measure == "lebesgue":
        expected = None
    else:
        expected = np.diag([expected_norm(measure, m, n) for m, n in indices])
    return GramReport(measure, indices, values, expected)


# -- expansion inner product ---------------------------------------------------

def expansion_inner_product(a: dict, b: dict) -> np.ndarray:
    """``pi sum m! n! int_S a_{mn} conj(b_{mn}) dsigma`` for slice-independent coefficients."""
    total = np.zeros(4)
    for key, av in a.items():
        if key in b:
            m, n = key
            total = total + math.factorial(m) * math.factorial(n) * qmul(as_array(av), qconj(as_array(b[key])))
    return math.pi * SPHERE_AREA * total


def expansion_function(coeffs: dict) -> Callable[[np.ndarray], np.ndarray]:
    """``q -> sum a_{mn} H_{m,n}(q)`` with the constant quaternion coefficient on the left."""

    def f(pts):
        out = np.zeros_like(pts)
        for (m, n), a in coeffs.items():
            out = out + qmul(as_array(a), hermite_explicit(m, n).eval_many(pts))
        return out

    return f


def expansion_check(a: dict, b: dict, scheme: QuadratureScheme = DEFAULT_SCHEME) -> float:
    num = full_inner_polar(expansion_function(a), expansion_function(b), scheme)
    return rel_err(num, expansion_inner_product(a, b))


# -- integral representation and Gaussian integrals ----------------------------

def integral_representation(m: int, n: int, q, sign: int = 1, nodes: int = 48) -> Quaternion:
    """``((-sign) I)^(m+n)/pi e^{|q|^2} int_{L_I} xi^m xibar^n e^{-|xi|^2 + sign I (xi qbar + xibar q)}``.

    Computed on the slice of ``q`` (with ``I`` represented by the complex unit).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x, y, unit = to_slice(q)
    z = complex(x, y)
    t, w = np.polynomial.hermite.hermgauss(nodes)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    W = np.outer(w, w)
    xi = T1 + 1j * T2
    integrand = xi**m * np.conj(xi) ** n * np.exp(sign * 1j * (xi * np.conj(z) + np.conj(xi) * z))
    val = (-sign * 1j) ** (m + n) / math.pi * math.exp(abs(z) ** 2) * np.sum(W * integrand)
    return Quaternion(float(val.real), *(float(c) for c in val.imag * unit))


def summand_scale(p: BiPolynomial, q) -> float:
    """``sum |c| |q|^(a+b)`` over the terms of ``p``: the size of the summands before cancellation."""
    r = float(np.linalg.norm(as_array(q)))
    return float(sum(abs(float(c)) * r ** (a + b) for (a, b), c in p))


def integral_representation_check(
    m: int, n: int, q, sign: int = 1, nodes: int = 48, normalize: str = "value"
) -> float:
    """Relative error of the quadrature against the explicit polynomial.

    ``normalize="value"`` divides by ``|H_{m,n}(q)|``. That is meaningless on the
    zero set of ``H_{m,n}`` (for instance ``|q|^2 = m`` when ``n = 1``), so
    ``normalize="summands"`` divides by the larger of ``|H_{m,n}(q)|`` and the
    summand scale instead.
    """
    p = hermite_explicit(m, n)
    exact = p.eval(q).components
    err = float(np.linalg.norm(integral_representation(m, n, q, sign, nodes).components - exact))
    if normalize == "value":
        scale = float(np.linalg.norm(exact))
    elif normalize == "summands":
        scale = max(float(np.linalg.norm(exact)), summand_scale(p, q))
    else:
        raise ValueError("normalize must be 'value' or 'summands'")
    return err / scale if scale > 0 else err


def gaussian_integral_1d(nu: float, b: complex) -> complex:
    """``int_R e^{-nu x^2 + b x} dx = sqrt(pi/nu) e^{b^2/(4 nu)}``."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    return math.sqrt(math.pi / nu) * np.exp(b * b / (4 * nu))


def gaussian_integral_closed(nu: float, alpha: complex, beta: complex) -> complex:
    """``int_{L_I} e^{-nu|xi|^2 + alpha xi + beta xibar} = (pi/nu) e^{alpha beta/nu}``."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    return math.pi / nu * np.exp(alpha * beta / nu)


def gaussian_integral_quadrature(nu: float, alpha: complex, beta: complex, nodes: int = 48) -> complex:
    if nu <= 0:
        raise ValueError("nu must be positive")
    t, w = np.polynomial.hermite.hermgauss(nodes)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    xi = (T1 + 1j * T2) / math.sqrt(nu)
    return np.sum(np.outer(w, w) * np.exp(alpha * xi + beta * np.conj(xi))) / nu


def gaussian_integral_fubini(nu: float, alpha: complex, beta: complex) -> complex:
    """Closed form assembled from two 1-D Gaussian integrals (x and y parts)."""
    # alpha xi + beta xibar = (alpha + beta) x + i (alpha - beta) y
    return gaussian_integral_1d(nu, alpha + beta) * gaussian_integral_1d(nu, 1j * (alpha - beta))


def gaussian_integral_check(nu: float, alpha: complex, beta: complex, nodes: int = 48) -> float:
    if nu <= 0:
        raise ValueError("nu must be positive")
    a = complex(gaussian_integral_quadrature(nu, alpha, beta, nodes))
    b = complex(gaussian_integral_closed(nu, alpha, beta))
    return abs(a - b) / abs(b)


# -- adjoint --------------------------------------------------------------------

def adjoint_sides(f: BiPolynomial, g: BiPolynomial, scheme: QuadratureScheme = DEFAULT_SCHEME):
    """``<dbar_s^R f, g>`` and ``<f, (-d_s^R + M^R_qbar) g>`` under the polar measure.

    Right multiplication by ``qbar`` is applied pointwise to the values of ``g``.
    """
    dg = g.d_s()

    def rhs_fn(pts):
        return -dg.eval_many(pts) + qmul(g.eval_many(pts), qconj(pts))

    return full_inner_polar(f.d_sbar(), g, scheme), full_inner_polar(f, rhs_fn, scheme)


def adjoint_check(f: BiPolynomial, g: BiPolynomial, scheme: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Discrepancy of the two sides relative to ``||dbar_s f|| ||g||``.

    The Cauchy-Schwarz bound is the natural scale: both sides may vanish exactly
    (for instance when f and g live in different ``m - n`` sectors).
    """
    lhs, rhs = adjoint_sides(f, g, scheme)
    df = f.d_sbar()
    scale = math.sqrt(full_inner_polar(df, df, scheme)[0] * full_inner_polar(g, g, scheme)[0])
    d = float(np.linalg.norm(lhs - rhs))
    return d / scale if scale > 0 else d


# -- finite differences -----------------------------------------------------------

def slice_derivative_fd(p: BiPolynomial, q, h: float = 1e-4, conjugate: bool = False) -> np.ndarray:
    """Central-difference ``(1/2)(d/dx -+ I d/dy)`` of ``p`` restricted to the slice of ``q``.

    At a real point any slice through it may be used (the default unit is).  Only
    for functions that are slice regular does this reduce to the plain ``d/dx``
    there; for a general element of Q[q, qbar] the ``y`` difference still matters.
    """
    x, y, unit = to_slice(q)
    f = lambda a, b: p.eval_many(from_slice(a, b, unit))
    dx = (f(x + h, y) - f(x - h, y)) / (2 * h)
    dy = (f(x, y + h) - f(x, y - h)) / (2 * h)
    I = np.concatenate([[0.0], unit])
    Idy = qmul(I, dy)
    return 0.5 * (dx + Idy) if conjugate else 0.5 * (dx - Idy)


def slice_derivative_fd_check(p: BiPolynomial, q, h: float = 1e-4, conjugate: bool = False) -> float:
    if h <= 0:
        raise ValueError("h must be positive")
    exact = (p.d_sbar() if conjugate else p.d_s()).eval_many(as_array(q))
    return rel_err(slice_derivative_fd(p, q, h, conjugate), exact)
