import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import hermite as npherm
from scipy import special

from hermiq.hermite import (
    CONSTRUCTIONS,
    bound_check,
    eval_laguerre_form,
    eval_real_hermite_form,
    eval_real_hermite_form_swapped,
    evaluate,
    hermite_explicit,
    hermite_heat,
    hermite_operational,
    hermite_real,
    hermite_real_coeffs,
    hermite_recurrence,
    hermite_rodrigues,
    hermite_table,
    hyp1f1_terminating,
    laguerre,
)
from hermiq.polyring import ONE, Q, QBAR, BiPolynomial, mono
from hermiq.quaternion import I1, Quaternion, from_slice, to_slice

from conftest import quaternions, small_quaternions

idx = st.integers(0, 8)


def complex_hermite_oracle(m, n, z):
    """Complex Hermite polynomial from scipy's generalized Laguerre polynomials."""
    k = min(m, n)
    zb = np.conj(z)
    pref = z ** (m - k) if m >= n else zb ** (n - k)
    return (-1) ** k * math.factorial(k) * pref * special.eval_genlaguerre(k, abs(m - n), abs(z) ** 2)


@pytest.mark.parametrize(
    "m, n, expected",
    [(0, 0, ONE), (1, 1, Q * QBAR - 1), (2, 1, Q**2 * QBAR - 2 * Q)],
)
def test_explicit_examples(m, n, expected):
    assert hermite_explicit(m, n) == expected


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        hermite_explicit(-1, 0)


def test_construction_examples():
    assert hermite_operational(1, 0) == Q
    assert hermite_operational(1, 1) == Q * QBAR - 1
    assert hermite_rodrigues(0, 1) == QBAR
    assert hermite_recurrence(0, 1) == QBAR
    assert hermite_recurrence(1, 1) == Q * QBAR - 1
    assert hermite_heat(3, 0) == Q**3
    assert hermite_heat(1, 1) == Q * QBAR - 1


@pytest.mark.parametrize("name", sorted(CONSTRUCTIONS))
def test_constructions_agree_exactly(name):
    build = CONSTRUCTIONS[name]
    for m in range(9):
        for n in range(9):
            assert build(m, n) == hermite_explicit(m, n), (name, m, n)


@given(idx, idx)
def test_structure(m, n):
    h = hermite_explicit(m, n)
    assert len(h) == min(m, n) + 1
    assert h.degree == (m, n)
    assert h[(m, n)] == 1


@given(idx, idx, small_quaternions)
def test_slice_values_match_complex_oracle(m, n, q):
    x, y, unit = to_slice(q)
    w = complex_hermite_oracle(m, n, complex(x, y))
    ref = from_slice(w.real, w.imag, unit)
    got = evaluate(m, n, q).components
    assert np.linalg.norm(got - ref) <= 1e-9 * max(1.0, np.linalg.norm(ref))


# -- exact algebraic properties ---------------------------------------------------

@given(idx, idx)
def test_conjugation_symmetry(m, n):
    assert hermite_explicit(m, n).conj() == hermite_explicit(n, m)


@given(idx, idx)
def test_parity(m, n):
    assert hermite_explicit(m, n).reflect() == hermite_explicit(m, n).scale((-1) ** (m + n))


@given(idx, idx)
def test_lowering(m, n):
    h = hermite_explicit(m, n)
    assert h.d_sbar() == (hermite_explicit(m, n - 1).scale(n) if n else BiPolynomial())
    assert h.d_s() == (hermite_explicit(m - 1, n).scale(m) if m else BiPolynomial())


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 7), st.integers(0, 7))
def test_mixed_lowering(m, n, j, k):
    p = hermite_explicit(m, n)
    for _ in range(k):
        p = p.d_sbar()
    for _ in range(j):
        p = p.d_s()
    if j > m or k > n:
        assert not p
    else:
        c = math.factorial(j) * math.factorial(k) * math.comb(m, j) * math.comb(n, k)
        assert p == hermite_explicit(m - j, n - k).scale(c)


@given(idx, idx)
def test_poly_regularity_order(m, n):
    p = hermite_explicit(m, n)
    # n conjugate derivatives leave n! q^m, so the next one annihilates it
    for _ in range(n):
        p = p.d_sbar()
    assert p == mono(m, 0).scale(math.factorial(n))
    assert not p.d_sbar()


@given(idx, idx)
def test_eigen_equations(m, n):
    h = hermite_explicit(m, n)
    lap = h.d_sbar().d_s()
    assert -lap + Q * h.d_s() == h.scale(m)
    assert -lap + QBAR * h.d_sbar() == h.scale(n)


@given(idx, idx)
def test_three_term_recurrences(m, n):
    h = hermite_explicit
    assert h(m, n + 1) == QBAR * h(m, n) - (h(m - 1, n).scale(m) if m else BiPolynomial())
    assert h(m + 1, n) == Q * h(m, n) - (h(m, n - 1).scale(n) if n else BiPolynomial())


# -- special functions against scipy ----------------------------------------------

def test_laguerre_examples():
    assert laguerre(0, 3, 1.7) == 1
    assert math.isclose(laguerre(1, 2, 0.5), 2 + 1 - 0.5)
    assert math.isclose(laguerre(2, 0, 2.0), -1.0)


@given(st.integers(0, 30), st.integers(0, 6), st.floats(0, 20))
def test_laguerre_matches_scipy(n, alpha, x):
    ref = special.eval_genlaguerre(n, alpha, x)
    assert math.isclose(laguerre(n, alpha, x), ref, rel_tol=1e-9, abs_tol=1e-9 * max(1, abs(ref)))


@given(st.integers(0, 15), st.integers(1, 8), st.floats(-5, 5))
def test_hyp1f1_matches_scipy(n, b, x):
    ref = special.hyp1f1(-n, b, x)
    assert math.isclose(hyp1f1_terminating(n, b, x), ref, rel_tol=1e-9, abs_tol=1e-9)


def test_hermite_real_examples():
    assert hermite_real(0, 0.3) == 1
    assert hermite_real(1, 0.3) == 0.6
    assert hermite_real(3, 1.0) == -4


@given(st.integers(0, 25), st.floats(-4, 4))
def test_hermite_real_matches_scipy(n, x):
    ref = special.eval_hermite(n, x)
    assert math.isclose(hermite_real(n, x), ref, rel_tol=1e-10, abs_tol=1e-10)


@pytest.mark.parametrize("n", range(12))
def test_hermite_coefficients_match_numpy(n):
    ref = npherm.herm2poly([0] * n + [1])
    np.testing.assert_array_equal(hermite_real_coeffs(n), ref)


# -- closed-form evaluators ---------------------------------------------------------

def test_laguerre_form_examples():
    assert eval_laguerre_form(1, 1, Quaternion(2)).isclose(Quaternion(3))
    assert eval_laguerre_form(2, 2, I1).isclose(Quaternion(-1))
    q = Quaternion(0.3, 1, -2, 0.5)
    assert eval_laguerre_form(4, 0, q).isclose(q**4)
    # removable singularity at the origin: H_{k,k}(0) = (-1)^k k!
    assert eval_laguerre_form(3, 3, Quaternion()).isclose(Quaternion(-6))
    assert eval_laguerre_form(3, 1, Quaternion()).isclose(Quaternion())


@given(idx, idx, small_quaternions.filter(lambda q: np.linalg.norm(q) > 1e-3))
def test_laguerre_form_matches_polynomial(m, n, q):
    ref = evaluate(m, n, q)
    got = eval_laguerre_form(m, n, q)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_real_hermite_form_examples():
    assert eval_real_hermite_form(0, 0, Quaternion(0.4, 1, 2, 3)).isclose(Quaternion(1))
    assert eval_real_hermite_form(1, 0, Quaternion(0.75)).isclose(Quaternion(0.75))
    q = Quaternion(1, 0, 0, 1)
    assert eval_real_hermite_form(2, 1, q).isclose((Q**2 * QBAR - 2 * Q).eval(q))


@given(st.integers(0, 6), st.integers(0, 6), small_quaternions)
def test_real_hermite_form_matches_polynomial(m, n, q):
    ref = evaluate(m, n, q)
    assert abs(eval_real_hermite_form(m, n, q) - ref) <= 1e-9 * max(1.0, abs(ref))


@given(st.integers(0, 5), st.integers(0, 5), small_quaternions)
def test_swapped_real_hermite_arrangement_gives_conjugate_index(m, n, q):
    # the alternative arrangement evaluates H_{n,m}, not H_{m,n}
    ref = evaluate(n, m, q)
    assert abs(eval_real_hermite_form_swapped(m, n, q) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_swapped_arrangement_differs_off_axis():
    q = Quaternion(0.5, 0.8, 0, 0)
    assert not eval_real_hermite_form_swapped(2, 0, q).isclose(evaluate(2, 0, q), 1e-6)


def test_bound_examples():
    assert bound_check(0, 0, Quaternion(1, 2, 0, 0))
    v = abs(evaluate(3, 1, Quaternion(2)))
    assert v <= 12 * math.e**2 and bound_check(3, 1, Quaternion(2))
    assert bound_check(5, 5, Quaternion(1, 1, 0, 0))


@given(st.integers(0, 10), st.integers(0, 10), quaternions)
def test_bound_holds(m, n, q):
    assert bound_check(m, n, q)


@given(st.integers(0, 10), st.integers(0, 10), quaternions)
def test_table_matches_polynomial(m, n, q):
    T = hermite_table(q, m, n)
    ref = evaluate(m, n, q).components
    assert np.linalg.norm(T[m, n] - ref) <= 1e-9 * max(1.0, np.linalg.norm(ref))
