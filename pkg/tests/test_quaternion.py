import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hermiq.quaternion import (
    DEFAULT_UNIT,
    I1,
    I2,
    I3,
    ONE,
    SPHERE_AREA,
    Quaternion,
    design_degree,
    from_slice,
    polar,
    qabs,
    qconj,
    qexp,
    qmul,
    qpow,
    sphere_nodes,
    to_slice,
)

from conftest import complex_matrix, quaternions, units


def test_basis_products():
    assert I1 * I2 == I3
    assert I2 * I1 == -I3
    assert I2 * I3 == I1 and I3 * I1 == I2
    for u in (I1, I2, I3):
        assert u * u == -ONE


def test_product_by_hand():
    # (1 + i1)(1 + i2) = 1 + i2 + i1 + i1 i2
    assert (ONE + I1) * (ONE + I2) == Quaternion(1, 1, 1, 1)


def test_identity_element():
    q = Quaternion(0.3, -1.2, 2.0, 0.7)
    assert q * ONE == q and ONE * q == q


@given(quaternions, quaternions)
def test_product_matches_matrix_model(p, q):
    np.testing.assert_allclose(complex_matrix(qmul(p, q)), complex_matrix(p) @ complex_matrix(q), atol=1e-12)


@given(quaternions, quaternions)
def test_norm_is_multiplicative(p, q):
    lhs = float(qabs(qmul(p, q)))
    assert math.isclose(lhs, float(qabs(p) * qabs(q)), rel_tol=1e-12, abs_tol=1e-300)


@given(quaternions, quaternions)
def test_conj_reverses_products(p, q):
    np.testing.assert_allclose(qconj(qmul(p, q)), qmul(qconj(q), qconj(p)), rtol=0, atol=1e-12)
    np.testing.assert_array_equal(qconj(qconj(p)), p)


@given(quaternions)
def test_norm_square_is_real(q):
    for prod in (qmul(q, qconj(q)), qmul(qconj(q), q)):
        assert np.allclose(prod[1:], 0, atol=1e-12)
        assert math.isclose(prod[0], float(np.dot(q, q)), rel_tol=1e-12, abs_tol=1e-300)


@given(quaternions, quaternions, quaternions)
def test_associative(p, q, r):
    np.testing.assert_allclose(qmul(qmul(p, q), r), qmul(p, qmul(q, r)), atol=1e-10)


@given(units)
def test_unit_squares_to_minus_one(u):
    I = np.concatenate([[0.0], u])
    np.testing.assert_allclose(qmul(I, I), [-1, 0, 0, 0], atol=1e-12)


@given(quaternions, st.integers(0, 7))
def test_power_matches_matrix_power(q, n):
    np.testing.assert_allclose(
        complex_matrix(qpow(q, n)), np.linalg.matrix_power(complex_matrix(q), n), rtol=1e-10, atol=1e-9
    )


@given(quaternions)
def test_exp_matches_matrix_exponential(q):
    from scipy.linalg import expm

    np.testing.assert_allclose(complex_matrix(qexp(q)), expm(complex_matrix(q)), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize(
    "q, x, y, unit",
    [
        ((3, 0, 4, 0), 3, 4, (0, 1, 0)),
        ((5, 0, 0, 0), 5, 0, tuple(DEFAULT_UNIT)),
        ((1, 1, 1, 1), 1, math.sqrt(3), tuple(np.ones(3) / math.sqrt(3))),
    ],
)
def test_to_slice_examples(q, x, y, unit):
    sc = to_slice(q)
    assert math.isclose(sc.x, x) and math.isclose(sc.y, y)
    np.testing.assert_allclose(sc.unit, unit, atol=1e-15)


@given(quaternions)
def test_slice_roundtrip(q):
    sc = to_slice(q)
    assert sc.y >= 0
    np.testing.assert_allclose(from_slice(sc.x, sc.y, sc.unit), q, atol=1e-12)


@given(st.floats(-3, 3), st.floats(0.01, 3), units)
def test_reassembled_coordinates_roundtrip(x, y, u):
    sc = to_slice(from_slice(x, y, u))
    assert math.isclose(sc.x, x, abs_tol=1e-12) and math.isclose(sc.y, y, rel_tol=1e-12)
    np.testing.assert_allclose(sc.unit, u, atol=1e-12)


@pytest.mark.parametrize(
    "q, r, phi, unit",
    [
        ((0, 1, 0, 0), 1, math.pi / 2, (1, 0, 0)),
        ((-2, 0, 0, 0), 2, math.pi, tuple(DEFAULT_UNIT)),
        ((1, 0, 0, 1), math.sqrt(2), math.pi / 4, (0, 0, 1)),
    ],
)
def test_polar_examples(q, r, phi, unit):
    rr, pp, I = polar(q)
    assert math.isclose(rr, r) and math.isclose(pp, phi)
    np.testing.assert_allclose(I, unit, atol=1e-15)


def test_polar_rejects_zero():
    with pytest.raises(ValueError):
        polar((0, 0, 0, 0))


@given(quaternions.filter(lambda q: np.linalg.norm(q) > 1e-6))
def test_polar_reassembles(q):
    r, phi, I = polar(q)
    assert 0 <= phi <= math.pi
    np.testing.assert_allclose(from_slice(r * math.cos(phi), r * math.sin(phi), I), q, atol=1e-12)


def test_octahedron_design():
    pts, w = sphere_nodes("design", 6)
    assert sorted(map(tuple, np.abs(pts).round(12))) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1)] * 2)
    np.testing.assert_allclose(w, SPHERE_AREA / 6)


@pytest.mark.parametrize("scheme, count", [("design", 6), ("design", 12), ("design", 50), ("uniform-grid", 64), ("monte-carlo", 500)])
def test_sphere_weights_and_centroid(scheme, count):
    pts, w = sphere_nodes(scheme, count, seed=3)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1, atol=1e-13)
    assert math.isclose(w.sum(), SPHERE_AREA, rel_tol=1e-12)
    if scheme != "monte-carlo":
        np.testing.assert_allclose(w @ pts, 0, atol=1e-13)


def _monomial_integral(a, b, c):
    """Exact integral of x^a y^b z^c over the unit sphere."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    g = math.gamma
    return 2 * g((a + 1) / 2) * g((b + 1) / 2) * g((c + 1) / 2) / g((a + b + c + 3) / 2)


@pytest.mark.parametrize("count", [6, 8, 12, 20, 14, 26, 38, 50])
def test_design_exactness(count):
    pts, w = sphere_nodes("design", count)
    deg = design_degree(count)
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            for c in range(deg + 1 - a - b):
                val = w @ (pts[:, 0] ** a * pts[:, 1] ** b * pts[:, 2] ** c)
                assert math.isclose(val, _monomial_integral(a, b, c), abs_tol=1e-12), (a, b, c)


def test_unknown_scheme():
    with pytest.raises(ValueError):
        sphere_nodes("lattice", 10)


def test_json_roundtrip():
    q = Quaternion(0.1, -2.0, 3.5, 1e-17)
    assert Quaternion.from_json(q.to_json()) == q


def test_abs_survives_tiny_and_huge_components():
    tiny, huge = 8e-159, 1e200
    assert qabs(np.array([0.0, 0.0, 0.0, tiny])) == tiny
    assert abs(Quaternion(0.0, tiny, 0.0, 0.0)) == tiny
    assert qabs(np.array([huge, huge, 0.0, 0.0])) == pytest.approx(huge * math.sqrt(2))
