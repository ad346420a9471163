"""Star exponentials, quaternion-coefficient formal series and numerical checks
of the generating functions of H_{m,n}.

Non-commutative products are always formed in the written left-to-right
order; nothing is reordered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from decimal import Decimal, localcontext
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .hermite import heat, hermite_real_coeffs, hermite_table, laguerre
from .polyring import BiPolynomial
from .quaternion import as_array, qabs, qconj, qexp, qmul, qpow, to_slice
from .reports import rel_err

TAIL_TARGET = 1e-14
DEFAULT_CAP = 64
# series whose terms decay only geometrically (diagonal, heat) need more room
GEOMETRIC_CAP = 400
TOL = 1e-8
TOL_REAL_HERMITE = 1e-7

ONE = np.array([1.0, 0.0, 0.0, 0.0])


class SliceError(ValueError):
    """Arguments required to share the slice of q do not."""


@dataclass(frozen=True)
class TruncationBudget:
    N: int
    tail_bound: float


# -- truncation ----------------------------------------------------------------

def exp_budget(x: float, target: float = TAIL_TARGET, cap: int = DEFAULT_CAP) -> TruncationBudget:
    """Smallest N with ``sum_{n>N} x^n/n! <= target`` (ratio-test bound), capped."""
    x = abs(x)
    term = 1.0  # x^n / n!
    for N in range(cap + 1):
        term *= x / (N + 1)  # now x^(N+1)/(N+1)!
        ratio = x / (N + 2)
        tail = term / (1 - ratio) if ratio < 1 else math.inf
        if tail <= target:
            return TruncationBudget(N, tail)
    return TruncationBudget(cap, tail)


def _log_hermite_bound(m, n, r: float):
    """log of ``max(m,n)!/|m-n|! r^|m-n| e^{r^2/2}``, the Laguerre-type bound on |H_{m,n}|.

    Vectorized over integer arrays ``m``, ``n``.
    """
    m, n = np.asarray(m), np.asarray(n)
    hi, p = np.maximum(m, n), np.abs(m - n)
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(p == 0, 0.0, p * (np.log(r) if r > 0 else -np.inf))
    return gammaln(hi + 1) - gammaln(p + 1) + power + r * r / 2


def _lw(a: float, k):
    """log(a^k / k!), vectorized over ``k``."""
    k = np.asarray(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(k == 0, 0.0, k * (np.log(a) if a > 0 else -np.inf))
    return power - gammaln(k + 1)


def _log_hermite_real_bound(n, x: float):
    # Cramer's inequality: |H_n(x)| <= 1.086435 e^{x^2/2} sqrt(2^n n!)
    n = np.asarray(n)
    return math.log(1.086435) + x * x / 2 + 0.5 * (n * math.log(2) + gammaln(n + 1))


def double_budget(log_weight: Callable, target: float = TAIL_TARGET, cap: int = DEFAULT_CAP, extra: int = 200) -> TruncationBudget:
    """Square truncation ``m, n <= N`` for a double series with term bounds ``exp(log_weight(m, n))``.

    ``log_weight`` is called once on integer index grids.  The tail outside the
    square is summed numerically up to ``cap + extra``; terms beyond that are
    negligible for the factorially damped series handled here.
    """
    L = cap + extra + 1
    M, N = np.indices((L, L))
    B = np.exp(np.minimum(log_weight(M, N), 700.0))
    # shell k holds the terms with max(m, n) == k; summing shells from the outside
    # in keeps small tails accurate even when the peak terms are huge
    shells = np.bincount(np.maximum(M, N).ravel(), weights=B.ravel(), minlength=L)
    tails = np.concatenate([np.cumsum(shells[::-1])[::-1][1:], [0.0]])[: cap + 1]
    ok = np.nonzero(tails <= target)[0]
    N = int(ok[0]) if len(ok) else cap
    return TruncationBudget(N, float(tails[N]))


def single_budget(log_weight: Callable, target: float = TAIL_TARGET, cap: int = DEFAULT_CAP, extra: int = 300) -> TruncationBudget:
    """Like :func:`double_budget` for a single series ``sum_k``."""
    k = np.arange(cap + extra + 1)
    B = np.exp(np.minimum(log_weight(k), 700.0))
    tails = np.concatenate([np.cumsum(B[::-1])[::-1][1:], [0.0]])[: cap + 1]
    ok = np.nonzero(tails <= target)[0]
    N = int(ok[0]) if len(ok) else cap
    return TruncationBudget(N, float(tails[N]))


def geometric_budget(ratio: float, prefactor: float, target: float = TAIL_TARGET, cap: int = GEOMETRIC_CAP) -> TruncationBudget:
    """Smallest N with ``prefactor * ratio^(N+1) / (1 - ratio) <= target``."""
    for N in range(cap + 1):
        tail = prefactor * ratio ** (N + 1) / (1 - ratio)
        if tail <= target:
            return TruncationBudget(N, tail)
    return TruncationBudget(cap, tail)


# -- star exponential -------------------------------------------------------------

def star_exp(p, q, N: int | None = None) -> np.ndarray:
    """``sum_{n<=N} p^n q^n / n!``."""
    p, q = as_array(p), as_array(q)
    if N is None:
        N = exp_budget(float(qabs(p) * qabs(q))).N
    pn = ONE.copy()
    qn = ONE.copy()
    total = ONE.copy()
    fac = 1.0
    for n in range(1, N + 1):
        pn = qmul(pn, p)
        qn = qmul(qn, q)
        fac *= n
        total = total + qmul(pn, qn) / fac
    return total


def expstar_factorization_check(lam: float, u, v, N: int | None = None) -> tuple[float, float]:
    """Relative errors of ``e_*^(u, lam+v) = e^(lam u) e_*^(u,v)`` and ``e_*^(lam+v, u) = e_*^(v,u) e^(lam u)``.

    In the second identity the powers of ``u`` sit to the right of those of ``v``,
    so the scalar exponential ``e^(lam u)`` has to stay on the right as well.
    """
    u, v = as_array(u), as_array(v)
    w = v + np.array([lam, 0, 0, 0])
    if N is None:
        N = exp_budget(float(qabs(u) * qabs(w))).N
    lam_u = qexp(lam * u)
    e1 = rel_err(star_exp(u, w, N), qmul(lam_u, star_exp(u, v, N)))
    e2 = rel_err(star_exp(w, u, N), qmul(star_exp(v, u, N), lam_u))
    return e1, e2


def expstar_left_factor_error(lam: float, u, v, N: int | None = None) -> float:
    """Relative error of the left-factor variant ``e_*^(lam+v, u) = e^(lam u) e_*^(v,u)``.

    This variant holds only when ``u`` and ``v`` commute; it is kept as a witness.
    """
    u, v = as_array(u), as_array(v)
    w = v + np.array([lam, 0, 0, 0])
    if N is None:
        N = exp_budget(float(qabs(u) * qabs(w))).N
    return rel_err(star_exp(w, u, N), qmul(qexp(lam * u), star_exp(v, u, N)))


# -- formal series ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FormalSeries:
    """Truncated power series with quaternion coefficients.

    ``side="left"`` means ``sum u^n a_n`` (variable on the left: left slice regular);
    ``side="right"`` means ``sum a_n v^n``.
    """

    coeffs: np.ndarray  # (order + 1, 4)
    side: str

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] != 4:
            raise ValueError("coefficients must have shape (order + 1, 4)")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, N: int) -> "FormalSeries":
        c = np.zeros((N + 1, 4))
        k = min(N, self.order) + 1
        c[:k] = self.coeffs[:k]
        return FormalSeries(c, self.side)

    def __call__(self, u) -> np.ndarray:
        u = as_array(u)
        total = np.zeros(4)
        un = ONE.copy()
        for a in self.coeffs:
            total = total + (qmul(un, a) if self.side == "left" else qmul(a, un))
            un = qmul(un, u)
        return total


def star_product(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    """Cauchy product ``c_n = sum_k a_k b_{n-k}`` (factor of ``a`` on the left).

    For both sides this is the regular product of the series: for left series
    ``(sum u^k a_k) * (sum u^j b_j) = sum u^n c_n`` and for right series
    ``(sum a_k v^k) * (sum b_j v^j) = sum c_n v^n``.
    """
    if a.side != b.side:
        raise ValueError(f"cannot multiply a {a.side} series by a {b.side} series")
    N = a.order + b.order
    c = np.zeros((N + 1, 4))
    for i, ai in enumerate(a.coeffs):
        for j, bj in enumerate(b.coeffs):
            c[i + j] += qmul(ai, bj)
    return FormalSeries(c, a.side)


def binomial_series(q, m: int, side: str) -> FormalSeries:
    """``(q - v)^m`` as a slice regular series in ``v``: coefficients ``C(m,k) (-1)^k q^(m-k)``."""
    q = as_array(q)
    c = np.array([math.comb(m, k) * (-1) ** k * qpow(q, m - k) for k in range(m + 1)])
    return FormalSeries(c, side)


def star_exp_series(q, N: int, side: str) -> FormalSeries:
    """``e_*^(q, v)`` in ``v`` (right side: coefficients ``q^n/n!``) or ``e_*^(u, q)`` in ``u`` (left)."""
    q = as_array(q)
    c = np.array([qpow(q, n) / math.factorial(n) for n in range(N + 1)])
    return FormalSeries(c, side)


# -- generating functions ----------------------------------------------------------

def _slice_of(q):
    x, y, unit = to_slice(q)
    return unit if y > 0 else None


def _require_same_slice(q, *args, tol: float = 1e-12) -> None:
    vecs = [as_array(a)[1:] for a in (q,) + args]
    nonzero = [v for v in vecs if np.linalg.norm(v) > tol]
    if not nonzero:
        return
    ref = nonzero[0] / np.linalg.norm(nonzero[0])
    for v in nonzero[1:]:
        if np.linalg.norm(np.cross(ref, v)) > tol * max(1.0, np.linalg.norm(v)):
            raise SliceError("arguments do not lie in the slice of q")


def _powers(u, N):
    u = as_array(u)
    out = [ONE.copy()]
    for _ in range(N):
        out.append(qmul(out[-1], u))
    return out


def gen_diagonal(lam: float, q, N: int | None = None) -> dict:
    """``sum (-1)^k lam^k/k! H_{k,k}(q) = (1-lam)^-1 exp(-lam|q|^2/(1-lam))`` and its sqrt(lam)-rescaled companion.

    Uses ``H_{k,k}(q) = (-1)^k k! L_k(|q|^2)``.  For the rescaled series two forms are
    reported: ``sum lam^k/k! H_{k,k}(sqrt(lam) q)`` without the sign and the signed
    ``sum (-lam)^k/k! H_{k,k}(sqrt(lam) q)``; only the latter equals
    ``e^{lam|q|^2}/(1-lam) exp(-lam|q|^2/(1-lam))`` (at q = 0 the unsigned one sums to 1/(1+lam)).
    """
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    x = float(np.dot(as_array(q), as_array(q)))
    if N is None:
        # |lam^k L_k(x)| <= lam^k e^{x/2}
        N = geometric_budget(lam, math.exp(x / 2)).N
    closed = math.exp(-lam * x / (1 - lam)) / (1 - lam)
    lhs = sum(lam**k * laguerre(k, 0, x) for k in range(N + 1))
    xs = lam * x
    # H_{k,k}(sqrt(lam) q) = (-1)^k k! L_k(lam |q|^2)
    scaled_unsigned = sum((-lam) ** k * laguerre(k, 0, xs) for k in range(N + 1))
    scaled_signed = sum(lam**k * laguerre(k, 0, xs) for k in range(N + 1))
    closed_scaled = math.exp(lam * x) * closed
    return {
        "N": N,
        "lhs": lhs,
        "rhs": closed,
        "rel_err": abs(lhs - closed) / closed,
        "scaled_lhs": scaled_signed,
        "scaled_rhs": closed_scaled,
        "scaled_rel_err": abs(scaled_signed - closed_scaled) / closed_scaled,
        "scaled_unsigned_lhs": scaled_unsigned,
        "scaled_unsigned_rel_err": abs(scaled_unsigned - closed_scaled) / closed_scaled,
    }


def _double_sum(left_w, right_w, T, N):
    """``sum_{m,n<=N} left_w[m] * T[m,n] * right_w[n]`` in that factor order."""
    total = np.zeros(4)
    for m in range(N + 1):
        for n in range(N + 1):
            total = total + qmul(qmul(left_w[m], T[m, n]), right_w[n])
    return total


def gen_exponential_slice(u, v, q, N: int | None = None) -> float:
    """``sum u^m v^n/(m!n!) H_{m,n}(q) = e^{uq - uv + v qbar}`` for ``u, v`` in the slice of ``q``."""
    _require_same_slice(q, u, v)
    u, v, q = as_array(u), as_array(v), as_array(q)
    r, a, b = float(qabs(q)), float(qabs(u)), float(qabs(v))
    if N is None:
        N = double_budget(lambda m, n: _lw(a, m) + _lw(b, n) + _log_hermite_bound(m, n, r)).N
    T = hermite_table(q, N, N)
    up = [p / math.factorial(k) for k, p in enumerate(_powers(u, N))]
    vp = [p / math.factorial(k) for k, p in enumerate(_powers(v, N))]
    lhs = np.zeros(4)
    for m in range(N + 1):
        for n in range(N + 1):
            lhs = lhs + qmul(qmul(up[m], vp[n]), T[m, n])
    rhs = qexp(qmul(u, q) - qmul(u, v) + qmul(v, qconj(q)))
    return rel_err(lhs, rhs)


def gen_x_u_sides(x: float, u, q, N: int | None = None):
    u, q = as_array(u), as_array(q)
    r, a = float(qabs(q)), float(qabs(u))
    if N is None:
        N = double_budget(lambda m, n: _lw(abs(x), m) + _lw(a, n) + _log_hermite_bound(m, n, r)).N
    T = hermite_table(q, N, N)
    xp = [np.array([x**k / math.factorial(k), 0, 0, 0]) for k in range(N + 1)]
    up = [p / math.factorial(k) for k, p in enumerate(_powers(u, N))]
    lhs = _double_sum(xp, up, T, N)
    M = max(N, exp_budget(r * a).N)
    rhs = qmul(qmul(qexp(x * q), star_exp(qconj(q), u, M)), qexp(-x * u))
    return lhs, rhs


def gen_x_u(x: float, u, q, N: int | None = None) -> float:
    """``sum x^m/m! H_{m,n}(q) u^n/n! = e^{xq} e_*^(qbar, u) e^{-xu}``."""
    return rel_err(*gen_x_u_sides(x, u, q, N))


def gen_ubar_u_sides(u, q, N: int | None = None):
    u, q = as_array(u), as_array(q)
    r, a = float(qabs(q)), float(qabs(u))
    if N is None:
        N = double_budget(lambda m, n: _lw(a, m) + _lw(a, n) + _log_hermite_bound(m, n, r)).N
    T = hermite_table(q, N, N)
    ubp = [p / math.factorial(k) for k, p in enumerate(_powers(qconj(u), N))]
    up = [p / math.factorial(k) for k, p in enumerate(_powers(u, N))]
    lhs = _double_sum(ubp, up, T, N)
    M = max(N, exp_budget(r * a).N)
    e = star_exp(qconj(q), u, M)
    rhs = math.exp(-a * a) * float(np.dot(e, e)) * ONE
    return lhs, rhs


def gen_ubar_u(u, q, N: int | None = None) -> tuple[float, float]:
    """``sum ubar^m/m! H_{m,n}(q) u^n/n! = e^{-|u|^2} |e_*^(qbar,u)|^2``.

    Returns the relative error and the size of the imaginary part of the left side
    (the right side is real by construction).
    """
    lhs, rhs = gen_ubar_u_sides(u, q, N)
    return rel_err(lhs, rhs), float(np.linalg.norm(lhs[1:]))


def closed_star_right(m: int, q, v, N: int) -> np.ndarray:
    """``(q - v)^m_{*R} *_R e_*^(qbar, v)`` evaluated at ``v`` (series truncated at order N)."""
    s = star_product(binomial_series(q, m, "right"), star_exp_series(qconj(q), N, "right"))
    return s.truncate(N)(v)


def closed_star_left(n: int, u, q, N: int) -> np.ndarray:
    """``e_*^(u, q) *_L (qbar - u)^n_{*L}`` evaluated at ``u``.

    The power is the fixed index ``n`` of ``sum_m u^m H_{m,n}/m!``, not the summed ``m``.
    """
    qb = as_array(qconj(q))
    # (qbar - u)^n as a left series in u: coefficients C(n,k) (-1)^k qbar^(n-k)
    c = np.array([math.comb(n, k) * (-1) ** k * qpow(qb, n - k) for k in range(n + 1)])
    s = star_product(star_exp_series(q, N, "left"), FormalSeries(c, "left"))
    return s.truncate(N)(u)


def hermite_series_right(m: int, q, v, N: int) -> np.ndarray:
    """``sum_{n<=N} H_{m,n}(q) v^n/n!``."""
    T = hermite_table(q, m, N)
    vp = _powers(v, N)
    return sum(qmul(T[m, n], vp[n]) / math.factorial(n) for n in range(N + 1))


def hermite_series_left(n: int, u, q, N: int) -> np.ndarray:
    """``sum_{m<=N} u^m H_{m,n}(q)/m!``."""
    T = hermite_table(q, N, n)
    up = _powers(u, N)
    return sum(qmul(up[m], T[m, n]) / math.factorial(m) for m in range(N + 1))


def _series_order(index: int, r: float, a: float, cap: int = DEFAULT_CAP) -> int:
    # the budget is absolute, so for tiny arguments it would drop the leading terms
    # (which sit at k <= index); keep a few past them regardless
    budget = single_budget(lambda k: _lw(a, k) + _log_hermite_bound(index, k, r), cap=cap).N
    return max(budget, index + 8)


def _closed_star_scale(which: str, index: int, q, w, N: int) -> float:
    """``sum_k |w|^k |H_{.,.}(q)| / k!``: how large the summed terms are before they cancel."""
    r = float(qabs(w))
    if which == "right":
        T = hermite_table(q, index, N)[index, :]
    else:
        T = hermite_table(q, N, index)[:, index]
    return float(sum(r**k * np.linalg.norm(T[k]) / math.factorial(k) for k in range(N + 1)))


def gen_closed_star(which: str, index: int, q, w, N: int | None = None, normalize: str = "value") -> float:
    """Check ``G^m(q|v)`` (``which="right"``, ``w = v``) or ``G^n(u|q)`` (``which="left"``, ``w = u``)
    against its star-product closed form at a generic quaternion argument.

    The closed forms vanish at points such as ``u = qbar`` (left, index >= 1), where an
    error relative to the value is pure rounding noise. ``normalize="summands"``
    divides by the larger of the value and the absolute term sum instead.
    """
    if which not in ("left", "right"):
        raise ValueError(f"which must be 'left' or 'right', got {which!r}")
    if normalize not in ("value", "summands"):
        raise ValueError("normalize must be 'value' or 'summands'")
    q, w = as_array(q), as_array(w)
    if N is None:
        N = _series_order(index, float(qabs(q)), float(qabs(w)))
    if which == "right":
        lhs, rhs = hermite_series_right(index, q, w, N), closed_star_right(index, q, w, N + index)
    else:
        lhs, rhs = hermite_series_left(index, w, q, N), closed_star_left(index, w, q, N + index)
    if normalize == "value":
        return rel_err(lhs, rhs)
    scale = max(float(np.linalg.norm(rhs)), _closed_star_scale(which, index, q, w, N))
    err = float(np.linalg.norm(lhs - rhs))
    return err / scale if scale > 0 else err


def closed_star_on_slice(m: int, q, v, N: int | None = None) -> float:
    """On the slice of q the right star product reduces to ``(q - v)^m e^{v qbar}``."""
    _require_same_slice(q, v)
    q, v = as_array(q), as_array(v)
    if N is None:
        N = exp_budget(float(qabs(q) * qabs(v))).N + m
    lhs = closed_star_right(m, q, v, N)
    return rel_err(lhs, qmul(qpow(q - v, m), qexp(qmul(v, qconj(q)))))


def closed_star_vs_xu(x: float, u, q, N: int | None = None) -> float:
    """``sum_m x^m/m! G^m(q|u)`` from the star closed forms equals ``e^{xq} e_*^(qbar,u) e^{-xu}``."""
    q, u = as_array(q), as_array(u)
    if N is None:
        N = double_budget(
            lambda m, n: _lw(abs(x), m) + _lw(float(qabs(u)), n) + _log_hermite_bound(m, n, float(qabs(q)))
        ).N
    total = np.zeros(4)
    for m in range(N + 1):
        total = total + x**m / math.factorial(m) * closed_star_right(m, q, u, N + m)
    M = max(N, exp_budget(float(qabs(q) * qabs(u))).N)
    rhs = qmul(qmul(qexp(x * q), star_exp(qconj(q), u, M)), qexp(-x * u))
    return rel_err(total, rhs)


# Both real-Hermite sums are evaluated in extended precision.  For |x|, |t|, |q|
# near 2 their terms reach 1e8 and more while the sum itself can be of order
# 1e-9, so double-precision accumulation cannot deliver the required digits.
EXTENDED_DIGITS = 60
REAL_HERMITE_CAP = 200


def _hermite_table_extended(q, M: int, N: int):
    """``H_{m,n}(q) = A[m][n] + B[m][n] v`` with ``v = Im q``, in Decimal arithmetic.

    Works in Q[v]/(v^2 + |v|^2): ``q = x + v`` and ``qbar = x - v``.
    """
    q = as_array(q)
    x = Decimal(float(q[0]))
    s = sum(Decimal(float(c)) ** 2 for c in q[1:])

    def times(a, b, c, d):
        return a * c - s * b * d, a * d + b * c

    zero, one = Decimal(0), Decimal(1)
    A = [[zero] * (N + 1) for _ in range(M + 1)]
    B = [[zero] * (N + 1) for _ in range(M + 1)]
    A[0][0] = one
    for m in range(1, M + 1):
        A[m][0], B[m][0] = times(A[m - 1][0], B[m - 1][0], x, one)
    for n in range(N):
        for m in range(M + 1):
            a, b = times(A[m][n], B[m][n], x, -one)
            if m:
                a -= m * A[m - 1][n]
                b -= m * B[m - 1][n]
            A[m][n + 1], B[m][n + 1] = a, b
    return A, B


def _hermite_real_extended(N: int, x: float) -> list:
    x = Decimal(float(x))
    out = [Decimal(1), 2 * x]
    for k in range(1, N):
        out.append(2 * x * out[k] - 2 * k * out[k - 1])
    return out[: N + 1]


def _to_quaternion(a, b, q) -> np.ndarray:
    q = as_array(q)
    return np.concatenate([[float(a)], float(b) * q[1:]])


def _hermite_real_at(m: int, q) -> np.ndarray:
    """Real-coefficient Hermite polynomial H_m evaluated at a quaternion."""
    pw = _powers(q, m)
    return sum(c * pw[k] for k, c in enumerate(hermite_real_coeffs(m)))


def _relative_target(rhs) -> float:
    return TAIL_TARGET * min(1.0, float(np.linalg.norm(rhs)))


def gen_real_hermite_sides(x: float, q, m: int, N: int | None = None):
    q = as_array(q)
    r = float(qabs(q))
    qb = qconj(q)
    arg = qb + 0.5 * q - np.array([x, 0, 0, 0])
    rhs = qmul(qexp(-qmul(qb, qb) + 2 * x * qb), _hermite_real_at(m, arg))
    if N is None:
        N = single_budget(
            lambda k: _log_hermite_real_bound(k, x) - gammaln(k + 1) + _log_hermite_bound(m, k, r),
            target=_relative_target(rhs),
            cap=REAL_HERMITE_CAP,
        ).N
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        A, B = _hermite_table_extended(q, m, N)
        hx = _hermite_real_extended(N, x)
        a = b = Decimal(0)
        fac = Decimal(1)
        for n in range(N + 1):
            if n:
                fac *= n
            a += hx[n] * A[m][n] / fac
            b += hx[n] * B[m][n] / fac
    return _to_quaternion(a, b, q), rhs


def gen_real_hermite(x: float, q, m: int, N: int | None = None) -> float:
    """``sum_n H_n(x) H_{m,n}(q)/n! = e^{-qbar^2 + 2x qbar} H_m(qbar + q/2 - x)``."""
    return rel_err(*gen_real_hermite_sides(x, q, m, N))


def gen_bilinear_sides(t: float, x: float, q, N: int | None = None):
    q = as_array(q)
    r = float(qabs(q))
    qb = qconj(q)
    expo = -t * t * ONE - qmul(qb, qb) + 2 * (x + t) * qb + t * q - 2 * t * x * ONE
    rhs = qexp(expo)
    if N is None:
        N = double_budget(
            lambda m, n: _lw(abs(t), m) + _log_hermite_real_bound(n, x) - gammaln(n + 1) + _log_hermite_bound(m, n, r),
            target=_relative_target(rhs),
            cap=REAL_HERMITE_CAP,
        ).N
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        A, B = _hermite_table_extended(q, N, N)
        hx = _hermite_real_extended(N, x)
        T = Decimal(float(t))
        wm, wn = [Decimal(1)], [Decimal(1)]
        for k in range(1, N + 1):
            wm.append(wm[-1] * T / k)
            wn.append(wn[-1] / k)
        wn = [w * h for w, h in zip(wn, hx)]
        a = b = Decimal(0)
        for m in range(N + 1):
            for n in range(N + 1):
                w = wm[m] * wn[n]
                a += w * A[m][n]
                b += w * B[m][n]
    return _to_quaternion(a, b, q), rhs


def gen_bilinear(t: float, x: float, q, N: int | None = None) -> float:
    """``sum_{m,n} t^m H_n(x) H_{m,n}(q)/(m! n!) = exp(-t^2 - qbar^2 + 2(x+t) qbar + t q - 2tx)``.

    The exponent is a polynomial in q and qbar alone, so its terms commute.
    """
    return rel_err(*gen_bilinear_sides(t, x, q, N))


def g_a_check(a: float, q, N: int | None = None) -> float:
    """``sum a^(m+n)/(m!n!) H_{m,n}(q) = e^{2a Re q - a^2}``."""
    q = as_array(q)
    r = float(qabs(q))
    if N is None:
        N = double_budget(lambda m, n: _lw(abs(a), m) + _lw(abs(a), n) + _log_hermite_bound(m, n, r)).N
    T = hermite_table(q, N, N)
    w = np.array([a**k / math.factorial(k) for k in range(N + 1)])
    lhs = np.einsum("m,n,mnc->c", w, w, T)
    return rel_err(lhs, math.exp(2 * a * q[0] - a * a) * ONE)


def heat_gaussian_check(lam: float, q, N: int | None = None) -> dict:
    """Apply ``exp(-d_s dbar_s)`` exactly to the truncated series of ``e^{-lam|q|^2}``
    and compare its (exact) value at ``q`` with ``(1-lam)^-1 exp(-lam|q|^2/(1-lam))``."""
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    q = as_array(q)
    x = float(np.dot(q, q))
    if N is None:
        N = geometric_budget(lam, math.exp(x / 2)).N
    L = Fraction(lam)
    series = BiPolynomial({(k, k): (-L) ** k / math.factorial(k) for k in range(N + 1)})
    value = heat(series).eval_exact(q)
    lhs = np.array([float(c) for c in value])
    rhs = math.exp(-lam * x / (1 - lam)) / (1 - lam) * ONE
    return {"N": N, "lhs": lhs, "rhs": rhs, "rel_err": rel_err(lhs, rhs)}
