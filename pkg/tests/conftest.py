import os

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hermiq.polyring import BiPolynomial

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

component = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
quaternions = st.tuples(component, component, component, component).map(np.array)
small_quaternions = st.tuples(*[st.floats(-1.5, 1.5, allow_nan=False)] * 4).map(np.array)
units = (
    st.tuples(component, component, component)
    .filter(lambda v: np.linalg.norm(v) > 1e-3)
    .map(lambda v: np.array(v) / np.linalg.norm(v))
)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def bipolys(draw, max_deg: int = 4, max_terms: int = 5):
    keys = draw(
        st.lists(
            st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), max_size=max_terms, unique=True
        )
    )
    return BiPolynomial({k: draw(rationals) for k in keys})


def complex_matrix(q):
    """2x2 complex matrix image of a quaternion, an independent model of the algebra."""
    a, b, c, d = q
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
