import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hermiq.hermite import hermite_explicit as H
from hermiq.identities import (
    SUITES,
    burchnall_A,
    burchnall_A_defining,
    burchnall_B,
    burchnall_B_creation,
    burchnall_B_defining,
    burchnall_checks,
    burchnall_semigroup_check,
    linearize_check,
    linearize_monomial,
    nielsen_check,
    nielsen_expansion,
    opcor_burchnall_route,
    opcor_checks,
    random_bipolynomial,
    reconstruct_monomial,
    run_suite,
    runge_failure_witness,
    runge_sides,
    runge_slice_check,
)
from hermiq.polyring import ONE, Q, QBAR, gaussian, mono
from hermiq.quaternion import I1, I2, from_slice
from hermiq.reports import dumps

from conftest import bipolys, units

small = st.integers(0, 4)


def test_linearize_examples():
    assert linearize_monomial(1, 0) == [(0, 1)]
    assert linearize_monomial(1, 1) == [(0, 1), (1, 1)]
    assert reconstruct_monomial(2, 2) == mono(2, 2)


@given(st.integers(0, 8), st.integers(0, 8))
def test_linearize_inverts_expansion(m, n):
    assert linearize_check(m, n).ok


def test_burchnall_examples():
    f = Q * Q - 3 * QBAR
    for n in range(4):
        assert burchnall_A(0, n, f) == mono(0, n) * f
    assert burchnall_A_defining(1, 0, ONE) == Q
    for m in range(4):
        for n in range(4):
            assert burchnall_B(m, n, ONE) == H(m, n)
            assert burchnall_B_defining(m, n, ONE) == H(m, n)


def test_burchnall_b_on_q():
    # both sides computed independently and compared; no closed form assumed
    lhs = burchnall_B_defining(1, 1, Q)
    assert lhs == burchnall_B(1, 1, Q) == burchnall_B_creation(1, 1, Q)
    # by hand: e^{|q|^2} dbar d (q e^{-|q|^2}) = q^2 qbar - 2q
    assert lhs == Q**2 * QBAR - 2 * Q


@given(small, small, bipolys())
def test_burchnall_expansions(m, n, f):
    assert all(r.ok for r in burchnall_checks(m, n, f))


@given(small, small, bipolys(3, 3))
def test_burchnall_on_gaussian_operands(m, n, body):
    g = gaussian(body, rate=Fraction(1, 2))
    assert all(r.ok for r in burchnall_checks(m, n, g))


@given(small, small, small, small)
def test_burchnall_semigroup(m, n, mp, np_):
    assert burchnall_semigroup_check(m, n, mp, np_).ok


def test_nielsen_examples():
    for m in range(4):
        for n in range(4):
            assert nielsen_expansion(m, n, 0, 0) == H(m, n)
    assert nielsen_expansion(1, 0, 1, 0) == H(1, 0) * H(1, 0)
    assert nielsen_check(1, 1, 1, 1).ok


@given(small, small, small, small)
def test_nielsen(m, n, mp, np_):
    assert nielsen_check(m, n, mp, np_).ok


def test_nielsen_alternative_pairing_is_not_an_identity():
    rep = nielsen_check(1, 0, 1, 0, form="naive")
    assert rep.status == "fail" and rep.first_diff is not None


@given(small, small, small)
def test_opcor(m, n, np_):
    assert all(r.ok for r in opcor_checks(m, n, np_))


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_opcor_operator_route(m, n, np_):
    assert all(r.ok for r in opcor_burchnall_route(m, n, np_))


def test_opcor_examples():
    assert all(r.ok for r in opcor_checks(0, 0, 0))
    assert all(r.ok for r in opcor_checks(1, 0, 1))
    assert all(r.ok for r in opcor_checks(2, 1, 1))


def test_runge_witness_values():
    lhs, rhs = runge_sides(2, 0, I1, I2)
    np.testing.assert_allclose(lhs, [-2, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(rhs, [-2, 0, 0, 2], atol=1e-14)
    lhs, rhs = runge_sides(0, 0, I1, I2)
    np.testing.assert_allclose(lhs, rhs)


def test_runge_witness_is_stable():
    a, b = runge_failure_witness(seed=3), runge_failure_witness(seed=3)
    assert a["slice_ok"]
    assert a["witness"]["discrepancy_norm"] == pytest.approx(2.0)
    assert dumps(a) == dumps(b)
    assert a["witness"] == runge_failure_witness(seed=11)["witness"]


@given(st.integers(0, 4), st.integers(0, 4), units, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_runge_holds_on_common_slice(m, n, u, a, b, c, d):
    assume(m + n <= 4)
    assert runge_slice_check(m, n, from_slice(a, b, u), from_slice(c, d, u)).ok


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass(name):
    reports = run_suite(name, 3)
    assert reports and all(r.ok for r in reports), [r.to_json() for r in reports if not r.ok][:3]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope", 2)


def test_random_bipolynomial_degree():
    rng = random.Random(5)
    for _ in range(20):
        p = random_bipolynomial(rng, 4)
        assert p and max(p.degree) <= 4


def test_failing_report_serializes():
    rep = nielsen_check(1, 0, 1, 0, form="naive")
    text = dumps(rep)
    assert '"status": "fail"' in text and "first_diff" in text
