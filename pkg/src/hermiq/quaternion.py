"""Quaternion arithmetic, slice coordinates and sphere sampling.

Quaternions are stored as float arrays whose last axis holds the components
``(x0, x1, x2, x3)``; the array functions broadcast, so the same code serves a
single point and a whole quadrature grid.  :class:`Quaternion` is a thin
immutable wrapper for scalar work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Quaternion",
    "SliceCoordinates",
    "qmul",
    "qconj",
    "qabs",
    "qpow",
    "qexp",
    "to_slice",
    "from_slice",
    "polar",
    "sphere_nodes",
    "DEFAULT_UNIT",
    "SPHERE_AREA",
]

SPHERE_AREA = 4.0 * math.pi
# imaginary unit used for real points, where the slice is not determined
DEFAULT_UNIT = np.array([1.0, 0.0, 0.0])


def as_array(q) -> np.ndarray:
    if isinstance(q, Quaternion):
        return q.components
    arr = np.asarray(q, dtype=float)
    if arr.ndim == 0:
        return np.array([float(arr), 0.0, 0.0, 0.0])
    if arr.shape[-1] != 4:
        raise ValueError(f"expected trailing axis of length 4, got shape {arr.shape}")
    return arr


def qmul(p, q) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    p = as_array(p)
    q = as_array(q)
    a0, a1, a2, a3 = np.moveaxis(p, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = as_array(q)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(q) -> np.ndarray:
    # hypot rescales internally, so tiny or huge components neither underflow nor overflow
    a = as_array(q)
    return np.hypot(np.hypot(a[..., 0], a[..., 1]), np.hypot(a[..., 2], a[..., 3]))


def qpow(q, n: int) -> np.ndarray:
    """``q**n`` for a nonnegative integer ``n`` by repeated squaring."""
    if n < 0:
        raise ValueError("negative powers are not supported")
    q = as_array(q)
    result = np.zeros_like(q)
    result[..., 0] = 1.0
    base = q
    while n:
        if n & 1:
            result = qmul(result, base)
        n >>= 1
        if n:
            base = qmul(base, base)
    return result


def qexp(q) -> np.ndarray:
    """Quaternion exponential ``e^x (cos y + I sin y)`` for ``q = x + yI``."""
    q = as_array(q)
    x = q[..., 0]
    v = q[..., 1:]
    y = np.linalg.norm(v, axis=-1)
    # sin(y)/y, continuous at y = 0
    sinc = np.sinc(y / math.pi)
    out = np.empty_like(q)
    ex = np.exp(x)
    out[..., 0] = ex * np.cos(y)
    out[..., 1:] = (ex * sinc)[..., None] * v
    return out


class SliceCoordinates(NamedTuple):
    x: float
    y: float
    unit: np.ndarray  # (u1, u2, u3)


def to_slice(q) -> SliceCoordinates:
    """Write ``q = x + yI`` with ``y >= 0`` and ``I`` a unit imaginary quaternion."""
    q = as_array(q)
    v = q[1:]
    y = float(np.linalg.norm(v))
    unit = v / y if y > 0 else DEFAULT_UNIT.copy()
    return SliceCoordinates(float(q[0]), y, unit)


def from_slice(x, y, unit) -> np.ndarray:
    """Reassemble ``x + yI``; broadcasts over arrays of ``x``, ``y`` and units."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    unit = np.asarray(unit, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape, unit.shape[:-1])
    out = np.empty(shape + (4,))
    out[..., 0] = x
    out[..., 1:] = y[..., None] * unit
    return out


def polar(q) -> tuple[float, float, np.ndarray]:
    """Return ``(r, phi, I)`` with ``q = r(cos phi + I sin phi)`` and ``phi`` in ``[0, pi]``."""
    s = to_slice(q)
    r = math.hypot(s.x, s.y)
    if r == 0.0:
        raise ValueError("polar form is undefined at q = 0")
    return r, math.atan2(s.y, s.x), s.unit


def _unit(v: Sequence[float]) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not math.isclose(n, 1.0, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError(f"not a unit vector: |u| = {n}")
    return v


@dataclass(frozen=True, eq=False)
class Quaternion:
    """An immutable quaternion ``x0 + x1 i1 + x2 i2 + x3 i3``."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a = as_array(arr)
        return cls(*(float(c) for c in a))

    @classmethod
    def from_slice(cls, x: float, y: float, unit: Iterable[float]) -> "Quaternion":
        return cls.from_array(from_slice(x, y, _unit(list(unit))))

    @property
    def components(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def __abs__(self) -> float:
        return math.hypot(self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other):
        return Quaternion.from_array(self.components + as_array(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Quaternion.from_array(self.components - as_array(other))

    def __rsub__(self, other):
        return Quaternion.from_array(as_array(other) - self.components)

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.components * other)
        return Quaternion.from_array(qmul(self.components, as_array(other)))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.components * other)
        return Quaternion.from_array(qmul(as_array(other), self.components))

    def __truediv__(self, other: float):
        return Quaternion.from_array(self.components / float(other))

    def __pow__(self, n: int):
        return Quaternion.from_array(qpow(self.components, n))

    def __eq__(self, other):
        try:
            return bool(np.array_equal(self.components, as_array(other)))
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.x0, self.x1, self.x2, self.x3))

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return float(qabs(self.components - as_array(other))) <= tol * max(1.0, abs(self))

    def to_json(self) -> list[float]:
        return [float(self.x0), float(self.x1), float(self.x2), float(self.x3)]

    @classmethod
    def from_json(cls, data: Sequence[float]) -> "Quaternion":
        return cls(*map(float, data))

    def __repr__(self):
        return f"Quaternion({self.x0!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"


ONE = Quaternion(1.0)
I1 = Quaternion(0.0, 1.0)
I2 = Quaternion(0.0, 0.0, 1.0)
I3 = Quaternion(0.0, 0.0, 0.0, 1.0)


# -- sphere sampling --------------------------------------------------------

def _octahedron():
    return np.vstack([np.eye(3), -np.eye(3)])


def _cube():
    pts = np.array([[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)], dtype=float)
    return pts / math.sqrt(3.0)


def _icosahedron():
    g = (1 + math.sqrt(5)) / 2
    pts = []
    for a in (1, -1):
        for b in (g, -g):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    pts = np.array(pts, dtype=float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _dodecahedron():
    g = (1 + math.sqrt(5)) / 2
    pts = [(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    for a in (1, -1):
        for b in (1, -1):
            pts += [(0, a / g, b * g), (a / g, b * g, 0), (b * g, 0, a / g)]
    pts = np.array(pts, dtype=float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# equal-weight designs: count -> (builder, polynomial degree integrated exactly)
_DESIGNS = {6: (_octahedron, 3), 8: (_cube, 3), 12: (_icosahedron, 5), 20: (_dodecahedron, 5)}
# Lebedev rules (unequal weights): point count -> degree
_LEBEDEV = {6: 3, 14: 5, 26: 7, 38: 9, 50: 11, 74: 13, 86: 15, 110: 17, 146: 19, 170: 21, 194: 23}


def design_degree(count: int) -> int:
    """Polynomial degree integrated exactly by ``sphere_nodes("design", count)``."""
    if count in _DESIGNS:
        return _DESIGNS[count][1]
    if count in _LEBEDEV:
        return _LEBEDEV[count]
    raise ValueError(f"no design with {count} points; available: {sorted(set(_DESIGNS) | set(_LEBEDEV))}")


def sphere_nodes(scheme: str, count: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on the unit sphere of imaginary quaternions and weights summing to 4*pi.

    ``design`` uses a platonic solid for 6, 8, 12 or 20 points and a Lebedev rule
    for the other supported counts (see :func:`design_degree`).  ``uniform-grid``
    is a Gauss-Legendre (in cos theta) by equispaced (in azimuth) product rule with
    roughly ``count`` points.  ``monte-carlo`` draws ``count`` uniform points.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if scheme == "design":
        design_degree(count)
        if count in _DESIGNS:
            pts = _DESIGNS[count][0]()
            return pts, np.full(len(pts), SPHERE_AREA / len(pts))
        from scipy.integrate import lebedev_rule

        pts, w = lebedev_rule(_LEBEDEV[count])
        return pts.T.copy(), w
    if scheme == "uniform-grid":
        n_theta = max(1, int(round(math.sqrt(count / 2))))
        n_phi = max(1, count // n_theta)
        t, wt = np.polynomial.legendre.leggauss(n_theta)
        phi = 2 * math.pi * np.arange(n_phi) / n_phi
        T, P = np.meshgrid(t, phi, indexing="ij")
        s = np.sqrt(1 - T**2)
        pts = np.stack([s * np.cos(P), s * np.sin(P), T], axis=-1).reshape(-1, 3)
        w = np.repeat(wt, n_phi) * (2 * math.pi / n_phi)
        return pts, w
    if scheme == "monte-carlo":
        rng = np.random.default_rng(seed)
        v = rng.standard_normal((count, 3))
        pts = v / np.linalg.norm(v, axis=1, keepdims=True)
        return pts, np.full(count, SPHERE_AREA / count)
    raise ValueError(f"unknown sphere scheme {scheme!r}")
