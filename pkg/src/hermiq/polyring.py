"""Exact polynomials in the commuting symbols q and q-bar.

With real coefficients, q and its conjugate commute (both lie in the slice of
q), so ``Q[q, qbar]`` is an honest commutative ring and the slice derivatives
act on it by the power rule.  Everything here is exact: coefficients are
:class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

import numpy as np

from .quaternion import Quaternion, as_array, qconj, qmul

Exponent = tuple[int, int]
Rational = Union[int, Fraction]


def _clean(coeffs: Mapping[Exponent, Rational]) -> dict[Exponent, Fraction]:
    out = {}
    for (m, n), c in coeffs.items():
        if m < 0 or n < 0:
            raise ValueError(f"negative exponent {(m, n)}")
        c = Fraction(c)
        if c:
            out[(int(m), int(n))] = c
    return out


class BiPolynomial:
    """Element of ``Q[q, qbar]`` stored as ``{(m, n): coefficient}`` for ``q^m qbar^n``.

    Zero coefficients are never stored, so structural equality is ring equality.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Exponent, Rational] | None = None):
        self._c = _clean(coeffs or {})

    @classmethod
    def _raw(cls, coeffs: dict[Exponent, Fraction]) -> "BiPolynomial":
        p = cls.__new__(cls)
        p._c = coeffs
        return p

    @classmethod
    def const(cls, c: Rational) -> "BiPolynomial":
        return cls({(0, 0): c})

    # -- inspection --------------------------------------------------------
    @property
    def coeffs(self) -> dict[Exponent, Fraction]:
        return dict(self._c)

    def __getitem__(self, key: Exponent) -> Fraction:
        return self._c.get(key, Fraction(0))

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(sorted(self._c.items()))

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def degree(self) -> Exponent:
        """``(max q-exponent, max qbar-exponent)``; ``(-1, -1)`` for zero."""
        if not self._c:
            return (-1, -1)
        return max(m for m, _ in self._c), max(n for _, n in self._c)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other) -> "BiPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for k, c in other._c.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPolynomial":
        return BiPolynomial._raw({k: -c for k, c in self._c.items()})

    def __sub__(self, other) -> "BiPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "BiPolynomial":
        return (-self) + other

    def scale(self, c: Rational) -> "BiPolynomial":
        c = Fraction(c)
        if not c:
            return BiPolynomial()
        return BiPolynomial._raw({k: v * c for k, v in self._c.items()})

    def __mul__(self, other) -> "BiPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for (a, b), c in self._c.items():
            for (d, e), f in other._c.items():
                k = (a + d, b + e)
                out[k] = out.get(k, 0) + c * f
        return BiPolynomial._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPolynomial":
        result = BiPolynomial.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    # -- calculus ----------------------------------------------------------
    def d_s(self) -> "BiPolynomial":
        """Left slice derivative: ``q^m qbar^n -> m q^(m-1) qbar^n``."""
        return BiPolynomial._raw({(m - 1, n): m * c for (m, n), c in self._c.items() if m})

    def d_sbar(self) -> "BiPolynomial":
        """Conjugate slice derivative: ``q^m qbar^n -> n q^m qbar^(n-1)``."""
        return BiPolynomial._raw({(m, n - 1): n * c for (m, n), c in self._c.items() if n})

    def conj(self) -> "BiPolynomial":
        return BiPolynomial._raw({(n, m): c for (m, n), c in self._c.items()})

    def reflect(self) -> "BiPolynomial":
        """Substitute ``q -> -q`` (and ``qbar -> -qbar``)."""
        return BiPolynomial._raw({(m, n): c if (m + n) % 2 == 0 else -c for (m, n), c in self._c.items()})

    def shift(self, m: int, n: int) -> "BiPolynomial":
        """Multiply by the monomial ``q^m qbar^n``."""
        return BiPolynomial._raw({(a + m, b + n): c for (a, b), c in self._c.items()})

    # -- evaluation --------------------------------------------------------
    def eval(self, q) -> Quaternion:
        """Evaluate at a quaternion using quaternion powers of ``q`` and ``qbar``."""
        return Quaternion.from_array(self.eval_many(as_array(q)))

    def eval_many(self, q: np.ndarray) -> np.ndarray:
        """Evaluate at an array of quaternions of shape ``(..., 4)``."""
        q = as_array(q)
        if not self._c:
            return np.zeros_like(q)
        M, N = self.degree
        qp = [None] * (M + 1)
        cp = [None] * (N + 1)
        one = np.zeros_like(q)
        one[..., 0] = 1.0
        qp[0] = cp[0] = one
        qb = qconj(q)
        for k in range(1, M + 1):
            qp[k] = qmul(qp[k - 1], q)
        for k in range(1, N + 1):
            cp[k] = qmul(cp[k - 1], qb)
        out = np.zeros_like(q)
        for (m, n), c in self._c.items():
            out = out + float(c) * qmul(qp[m], cp[n])
        return out

    def eval_complex(self, z):
        """Evaluate with a complex number (or array) standing in for ``q``."""
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros_like(z)
        for (m, n), c in self._c.items():
            out = out + float(c) * z**m * zb**n
        return out

    def eval_exact(self, q) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Exact value at a point with rational (e.g. float) components.

        Writes ``q = x + v`` with ``v`` the imaginary part; since ``v^2 = -|v|^2``
        the value is ``A + B v`` with ``A, B`` rational, computed in ``Q[v]/(v^2 + s)``.
        """
        comps = [Fraction(c) for c in as_array(q).tolist()]
        x, s = comps[0], comps[1] ** 2 + comps[2] ** 2 + comps[3] ** 2

        def mul(a, b):
            return (a[0] * b[0] - s * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

        def power(base, k, cache):
            while len(cache) <= k:
                cache.append(mul(cache[-1], base))
            return cache[k]

        qcache = [(Fraction(1), Fraction(0))]
        ccache = [(Fraction(1), Fraction(0))]
        A = B = Fraction(0)
        for (m, n), c in self._c.items():
            t = mul(power((x, Fraction(1)), m, qcache), power((x, Fraction(-1)), n, ccache))
            A += c * t[0]
            B += c * t[1]
        return (A, B * comps[1], B * comps[2], B * comps[3])

    def scaled_sqrt2(self, extra: int = 0) -> "BiPolynomial":
        """Coefficients of ``sqrt(2)^extra * P(sqrt(2) q, sqrt(2) qbar)``.

        Each ``q^a qbar^b`` picks up ``sqrt(2)^(extra + a + b)``.  Raises
        :class:`ParityError` if any such power is odd, i.e. the result would not be
        rational.
        """
        out = {}
        for (a, b), c in self._c.items():
            e = extra + a + b
            if e % 2:
                raise ParityError(f"sqrt(2)^{e} on q^{a} qbar^{b} is irrational")
            out[(a, b)] = c * Fraction(2) ** (e // 2)
        return BiPolynomial._raw(out)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> list[dict]:
        return [
            {"m": m, "n": n, "numerator": c.numerator, "denominator": c.denominator}
            for (m, n), c in sorted(self._c.items())
        ]

    @classmethod
    def from_json(cls, data) -> "BiPolynomial":
        return cls({(r["m"], r["n"]): Fraction(r["numerator"], r["denominator"]) for r in data})

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (m, n), c in sorted(self._c.items(), key=lambda kv: (-kv[0][0] - kv[0][1], kv[0])):
            mono = "*".join(
                s for s in (_sym("q", m), _sym("qb", n)) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _sym(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _coerce(x):
    if isinstance(x, BiPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return BiPolynomial.const(x)
    return NotImplemented


class ParityError(ArithmeticError):
    """A sqrt(2) rescaling left an odd power of sqrt(2) behind."""


def mono(m: int, n: int, c: Rational = 1) -> BiPolynomial:
    """The monomial ``c q^m qbar^n``."""
    return BiPolynomial({(m, n): c})


Q = mono(1, 0)
QBAR = mono(0, 1)
ONE = mono(0, 0)


def d_s(p: BiPolynomial) -> BiPolynomial:
    return p.d_s()


def d_sbar(p: BiPolynomial) -> BiPolynomial:
    return p.d_sbar()


def conj_poly(p: BiPolynomial) -> BiPolynomial:
    return p.conj()


@dataclass(frozen=True)
class GaussianPolynomial:
    """``body(q, qbar) * exp(-rate |q|^2)`` with the exponential kept symbolic.

    Since ``d_s exp(-rate|q|^2) = -rate qbar exp(-rate|q|^2)`` and the body has real
    coefficients, the product rule gives ``body -> d_s(body) - rate*qbar*body``.
    """

    body: BiPolynomial
    rate: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "rate", Fraction(self.rate))

    def d_s(self) -> "GaussianPolynomial":
        return GaussianPolynomial(self.body.d_s() - self.body.shift(0, 1).scale(self.rate), self.rate)

    def d_sbar(self) -> "GaussianPolynomial":
        return GaussianPolynomial(self.body.d_sbar() - self.body.shift(1, 0).scale(self.rate), self.rate)

    def __add__(self, other: "GaussianPolynomial") -> "GaussianPolynomial":
        self._same(other)
        return GaussianPolynomial(self.body + other.body, self.rate)

    def __sub__(self, other: "GaussianPolynomial") -> "GaussianPolynomial":
        self._same(other)
        return GaussianPolynomial(self.body - other.body, self.rate)

    def times(self, p: BiPolynomial | Rational) -> "GaussianPolynomial":
        """Multiply by a polynomial (the Gaussian factor is untouched)."""
        return GaussianPolynomial(self.body * p, self.rate)

    def times_gaussian(self, other: "GaussianPolynomial") -> "GaussianPolynomial":
        return GaussianPolynomial(self.body * other.body, self.rate + other.rate)

    def times_exp(self, k: Rational) -> "GaussianPolynomial":
        """Multiply by ``exp(k |q|^2)``."""
        return GaussianPolynomial(self.body, self.rate - Fraction(k))

    def _same(self, other):
        if self.rate != other.rate:
            raise ValueError(f"Gaussian rates differ: {self.rate} vs {other.rate}")

    def __eq__(self, other):
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        # the zero function carries no meaningful rate
        if not self.body and not other.body:
            return True
        return self.rate == other.rate and self.body == other.body

    def __hash__(self):
        return hash((self.body, self.rate if self.body else None))


def gaussian(body: BiPolynomial | Rational = 1, rate: Rational = 1) -> GaussianPolynomial:
    if not isinstance(body, BiPolynomial):
        body = BiPolynomial.const(body)
    return GaussianPolynomial(body, Fraction(rate))


def d_s_gauss(g: GaussianPolynomial) -> GaussianPolynomial:
    return g.d_s()


def d_sbar_gauss(g: GaussianPolynomial) -> GaussianPolynomial:
    return g.d_sbar()


def eval_many(p: BiPolynomial, q: np.ndarray) -> np.ndarray:
    return p.eval_many(q)


def evaluate(p: BiPolynomial, q) -> Quaternion:
    return p.eval(q)
