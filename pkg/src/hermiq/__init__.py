"""Quaternionic slice poly-regular Hermite polynomials H_{m,n}(q, qbar).

Exact construction in Q[q, qbar], numerical evaluation anywhere on the
quaternions, and machine checks of their identities, orthogonality relations
and generating functions.
"""
import os as _os

_threads = _os.environ.get("HERMIQ_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    # numpy reads these once, at import time, to size its BLAS pools
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .hermite import CONSTRUCTIONS, evaluate, hermite_explicit, hermite_table  # noqa: E402
from .polyring import BiPolynomial, GaussianPolynomial  # noqa: E402
from .quaternion import Quaternion  # noqa: E402
from .reports import CheckReport  # noqa: E402

__all__ = [
    "BiPolynomial",
    "CONSTRUCTIONS",
    "CheckReport",
    "GaussianPolynomial",
    "Quaternion",
    "evaluate",
    "hermite_explicit",
    "hermite_table",
]
__version__ = "0.1.0"
