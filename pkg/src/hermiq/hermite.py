"""The polynomials H_{m,n}(q, qbar): five exact constructions and closed-form evaluators.

``hermite_explicit`` is the canonical construction.  The operational, Rodrigues,
recurrence and heat-operator routes are independent derivations kept as oracles;
they must agree with it coefficient for coefficient.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .polyring import ONE, BiPolynomial, gaussian, mono
from .quaternion import Quaternion, as_array, qabs, qconj, qmul, qpow, to_slice


class HermiteIndex(NamedTuple):
    m: int
    n: int


def _check(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise ValueError(f"indices must be nonnegative, got ({m}, {n})")


# -- exact constructions ----------------------------------------------------

@lru_cache(maxsize=None)
def hermite_explicit(m: int, n: int) -> BiPolynomial:
    """``sum_k (-1)^k k! C(m,k) C(n,k) q^(m-k) qbar^(n-k)``."""
    _check(m, n)
    return BiPolynomial(
        {(m - k, n - k): (-1) ** k * math.factorial(k) * math.comb(m, k) * math.comb(n, k) for k in range(min(m, n) + 1)}
    )


def raise_q(p: BiPolynomial) -> BiPolynomial:
    """The creation operator ``-dbar_s + q``."""
    return p.shift(1, 0) - p.d_sbar()


def raise_qbar(p: BiPolynomial) -> BiPolynomial:
    """The creation operator ``-d_s + qbar``."""
    return p.shift(0, 1) - p.d_s()


def hermite_operational(m: int, n: int, form: str = "q") -> BiPolynomial:
    """Iterate a creation operator on a pure power.

    ``form="q"`` computes ``(-dbar_s + q)^m (qbar^n)``; ``form="qbar"`` computes
    ``(-d_s + qbar)^n (q^m)``.
    """
    _check(m, n)
    if form == "q":
        p = mono(0, n)
        for _ in range(m):
            p = raise_q(p)
    elif form == "qbar":
        p = mono(m, 0)
        for _ in range(n):
            p = raise_qbar(p)
    else:
        raise ValueError(f"unknown form {form!r}")
    return p


def hermite_rodrigues(m: int, n: int) -> BiPolynomial:
    """``(-1)^(m+n) e^{|q|^2} dbar_s^m d_s^n e^{-|q|^2}`` in the Gaussian calculus."""
    _check(m, n)
    g = gaussian()
    for _ in range(n):
        g = g.d_s()
    for _ in range(m):
        g = g.d_sbar()
    return g.body.scale((-1) ** (m + n))


def hermite_recurrence(m: int, n: int) -> BiPolynomial:
    """Bootstrap from H_{0,0} = 1 with the three-term recurrences.

    Staircase: first H_{i,0} = q H_{i-1,0} for i <= m (the q-recurrence at n = 0),
    then for each j < n, H_{i,j+1} = -i H_{i-1,j} + qbar H_{i,j} for all i <= m.
    """
    _check(m, n)
    col = [ONE]
    for i in range(1, m + 1):
        col.append(col[-1].shift(1, 0))
    for _ in range(n):
        col = [col[i].shift(0, 1) - (col[i - 1].scale(i) if i else BiPolynomial()) for i in range(m + 1)]
    return col[m]


def laplacian(p: BiPolynomial) -> BiPolynomial:
    """``d_s dbar_s``."""
    return p.d_sbar().d_s()


def heat(p: BiPolynomial) -> BiPolynomial:
    """``exp(-d_s dbar_s) p``; the series stops because each term lowers both degrees."""
    out = BiPolynomial()
    term = p
    k = 0
    while term:
        out = out + term.scale(Fraction((-1) ** k, math.factorial(k)))
        term = laplacian(term)
        k += 1
    return out


def hermite_heat(m: int, n: int) -> BiPolynomial:
    _check(m, n)
    return heat(mono(m, n))


CONSTRUCTIONS = {
    "explicit": hermite_explicit,
    "operational": hermite_operational,
    "operational-qbar": lambda m, n: hermite_operational(m, n, form="qbar"),
    "rodrigues": hermite_rodrigues,
    "recurrence": hermite_recurrence,
    "heat": hermite_heat,
}


# -- classical special functions ------------------------------------------

def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre ``L_n^(alpha)(x)`` by the forward three-term recurrence."""
    x = np.asarray(x)
    prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return prev if prev.ndim else prev.item()
    cur = 1 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if np.ndim(cur) else cur.item()


def hyp1f1_terminating(n: int, b: int, x):
    """``1F1(-n; b; x)`` for a nonnegative integer ``n`` (a finite sum)."""
    total = 0.0
    term = 1.0
    for i in range(n + 1):
        total = total + term
        term = term * (-n + i) / ((b + i) * (i + 1)) * x
    return total


def hermite_real(n: int, x):
    """Physicists' Hermite polynomial via ``H_{k+1} = 2x H_k - 2k H_{k-1}``.

    Accepts real or complex scalars/arrays.
    """
    prev = np.ones_like(np.asarray(x), dtype=np.result_type(x, float))
    if n == 0:
        return prev if prev.ndim else prev.item()
    cur = 2 * np.asarray(x)
    for k in range(1, n):
        prev, cur = cur, 2 * np.asarray(x) * cur - 2 * k * prev
    return cur if np.ndim(cur) else cur.item()


@lru_cache(maxsize=None)
def hermite_real_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of ``H_n`` in increasing powers."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return (1,)
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return tuple(cur)


# -- numerical evaluation ---------------------------------------------------

def evaluate(m: int, n: int, q) -> Quaternion:
    return hermite_explicit(m, n).eval(q)


def eval_laguerre_form(m: int, n: int, q) -> Quaternion:
    """``(-1)^k k! |q|^{-2k} q^m qbar^n L_k^{(|m-n|)}(|q|^2)`` with ``k = min(m, n)``."""
    _check(m, n)
    q = as_array(q)
    k = min(m, n)
    r2 = float(np.dot(q, q))
    if k > 0 and r2 == 0.0:
        return hermite_explicit(m, n).eval(q)
    mono_val = qmul(qpow(q, m), qpow(qconj(q), n))
    c = (-1) ** k * math.factorial(k) * laguerre(k, abs(m - n), r2) / r2**k
    return Quaternion.from_array(c * mono_val)


def eval_real_hermite_form(m: int, n: int, q) -> Quaternion:
    """Real-Hermite double sum in slice coordinates ``q = x + yI``:

    ``2^-(m+n) sum_{j<=m} sum_{k<=n} (-1)^k C(m,j) C(n,k) H_{m+n-j-k}(x) H_{j+k}(y) I^(j+k)``.
    """
    _check(m, n)
    x, y, unit = to_slice(q)
    acc = 0j
    for j in range(m + 1):
        for k in range(n + 1):
            acc += (
                (-1) ** k
                * math.comb(m, j)
                * math.comb(n, k)
                * hermite_real(m + n - j - k, x)
                * hermite_real(j + k, y)
                * 1j ** (j + k)
            )
    acc /= 2 ** (m + n)
    return _lift(acc, unit)


def eval_real_hermite_form_swapped(m: int, n: int, q) -> Quaternion:
    """The alternative arrangement

    ``(I/2)^(m+n) m! n! sum_{k<=m} sum_{j<=n} (-1)^(m+j) I^(k+j) H_{k+j}(x) H_{m+n-k-j}(y) / (k! j! (m-k)! (n-j)!)``.

    It does not reproduce H_{m,n} off the real axis (it yields H_{m,n}(qbar, q));
    kept so the discrepancy stays testable.
    """
    _check(m, n)
    x, y, unit = to_slice(q)
    acc = 0j
    for k in range(m + 1):
        for j in range(n + 1):
            acc += (
                (-1) ** (m + j)
                * 1j ** (k + j)
                * hermite_real(k + j, x)
                * hermite_real(m + n - k - j, y)
                / (math.factorial(k) * math.factorial(j) * math.factorial(m - k) * math.factorial(n - j))
            )
    acc *= (0.5j) ** (m + n) * math.factorial(m) * math.factorial(n)
    return _lift(acc, unit)


def _lift(z: complex, unit) -> Quaternion:
    return Quaternion(float(z.real), *(float(c) for c in z.imag * np.asarray(unit)))


def bound_check(m: int, n: int, q, slack: float = 1e-12) -> bool:
    """``|H_{n+p,n}(q)| <= (n+p)!/p! |q|^p e^{|q|^2/2}``; the case m < n by conjugation."""
    _check(m, n)
    hi, lo = max(m, n), min(m, n)
    p = hi - lo
    r = float(qabs(as_array(q)))
    value = abs(hermite_explicit(m, n).eval(q))
    bound = math.factorial(hi) / math.factorial(p) * r**p * math.exp(r * r / 2)
    return value <= bound * (1 + slack) + slack


def hermite_table_complex(z: complex, M: int, N: int) -> np.ndarray:
    """``T[m, n] = H_{m,n}(z, zbar)`` for a complex ``z``, by the three-term recurrences.

    Real-coefficient polynomials restricted to a slice are ordinary complex
    polynomials, so this gives H_{m,n}(q) for ``q`` in the slice of ``z``.
    """
    T = np.zeros((M + 1, N + 1), dtype=complex)
    zb = np.conj(z)
    T[0, 0] = 1.0
    for m in range(1, M + 1):
        T[m, 0] = z * T[m - 1, 0]
    for n in range(N):
        T[0, n + 1] = zb * T[0, n]
        for m in range(1, M + 1):
            T[m, n + 1] = zb * T[m, n] - m * T[m - 1, n]
    return T


def hermite_table(q, M: int, N: int) -> np.ndarray:
    """Quaternion table of shape ``(M+1, N+1, 4)`` with ``H_{m,n}(q)``."""
    x, y, unit = to_slice(q)
    T = hermite_table_complex(complex(x, y), M, N)
    out = np.empty(T.shape + (4,))
    out[..., 0] = T.real
    out[..., 1:] = T.imag[..., None] * np.asarray(unit)
    return out
