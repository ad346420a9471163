"""Burchnall operational formulas, Nielsen-type quadratic identities, monomial
linearization and the Runge addition formula, as exact (or, for Runge,
numerical) checks returning :class:`~hermiq.reports.CheckReport` objects.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .hermite import hermite_explicit as H
from .hermite import hermite_table
from .polyring import BiPolynomial, GaussianPolynomial, ParityError, gaussian, mono
from .quaternion import I1, I2, as_array, from_slice, qmul
from .reports import CheckReport, compare_polys, numeric_report

Operand = Union[BiPolynomial, GaussianPolynomial]
fact = math.factorial


# -- generic operator helpers (work on both operand types) ----------------

def _dbar(f: Operand, k: int = 1) -> Operand:
    for _ in range(k):
        f = f.d_sbar()
    return f


def _d(f: Operand, k: int = 1) -> Operand:
    for _ in range(k):
        f = f.d_s()
    return f


def _times(p: BiPolynomial, f: Operand) -> Operand:
    return f.times(p) if isinstance(f, GaussianPolynomial) else p * f


def _zero_like(f: Operand) -> Operand:
    return GaussianPolynomial(BiPolynomial(), f.rate) if isinstance(f, GaussianPolynomial) else BiPolynomial()


def _add(a: Operand, b: Operand) -> Operand:
    if isinstance(a, GaussianPolynomial) and not a.body:
        return b
    return a + b


def _to_gaussian(f: Operand) -> GaussianPolynomial:
    return f if isinstance(f, GaussianPolynomial) else gaussian(f, rate=0)


def _from_gaussian(g: GaussianPolynomial, like: Operand) -> Operand:
    if isinstance(like, GaussianPolynomial):
        return g
    if g.body and g.rate != 0:
        raise ValueError("expected a plain polynomial result")
    return g.body


# -- linearization ----------------------------------------------------------

def linearize_monomial(m: int, n: int) -> list[tuple[int, Fraction]]:
    """Coefficients ``c_k`` with ``q^m qbar^n = sum_k c_k H_{m-k,n-k}``."""
    return [
        (k, Fraction(fact(m) * fact(n), fact(k) * fact(m - k) * fact(n - k)))
        for k in range(min(m, n) + 1)
    ]


def reconstruct_monomial(m: int, n: int) -> BiPolynomial:
    out = BiPolynomial()
    for k, c in linearize_monomial(m, n):
        out = out + H(m - k, n - k).scale(c)
    return out


def linearize_check(m: int, n: int) -> CheckReport:
    return compare_polys("linearize", {"m": m, "n": n}, reconstruct_monomial(m, n), mono(m, n))


# -- Burchnall operators ---------------------------------------------------

def burchnall_A_defining(m: int, n: int, f: Operand) -> Operand:
    """``(-1)^m e^{|q|^2} dbar_s^m (qbar^n e^{-|q|^2} f)``."""
    g = _to_gaussian(f).times(mono(0, n)).times_gaussian(gaussian())
    g = _dbar(g, m).times_exp(1)
    g = GaussianPolynomial(g.body.scale((-1) ** m), g.rate)
    return _from_gaussian(g, f)


def burchnall_A(m: int, n: int, f: Operand) -> Operand:
    """Hermite expansion ``m! sum_j (-1)^j/(j!(m-j)!) H_{m-j,n} dbar_s^j f``."""
    out = _zero_like(f)
    for j in range(m + 1):
        c = Fraction((-1) ** j * fact(m), fact(j) * fact(m - j))
        out = _add(out, _times(H(m - j, n).scale(c), _dbar(f, j)))
    return out


def burchnall_B_defining(m: int, n: int, f: Operand) -> Operand:
    """``(-1)^(m+n) e^{|q|^2} dbar_s^m d_s^n (e^{-|q|^2} f)``."""
    g = _to_gaussian(f).times_gaussian(gaussian())
    g = _dbar(_d(g, n), m).times_exp(1)
    g = GaussianPolynomial(g.body.scale((-1) ** (m + n)), g.rate)
    return _from_gaussian(g, f)


def burchnall_B(m: int, n: int, f: Operand) -> Operand:
    """Hermite double expansion of B_{m,n} f."""
    out = _zero_like(f)
    for j in range(m + 1):
        for k in range(n + 1):
            c = Fraction((-1) ** (j + k) * fact(m) * fact(n), fact(j) * fact(k) * fact(m - j) * fact(n - k))
            out = _add(out, _times(H(m - j, n - k).scale(c), _dbar(_d(f, k), j)))
    return out


def burchnall_B_creation(m: int, n: int, f: Operand) -> Operand:
    """``(-dbar_s + q)^m (-d_s + qbar)^n f``."""
    for _ in range(n):
        f = _add(_times(mono(0, 1), f), _negate(_d(f)))
    for _ in range(m):
        f = _add(_times(mono(1, 0), f), _negate(_dbar(f)))
    return f


def _negate(f: Operand) -> Operand:
    if isinstance(f, GaussianPolynomial):
        return GaussianPolynomial(-f.body, f.rate)
    return -f


def _operand_diff(a: Operand, b: Operand):
    from .reports import poly_diff

    if isinstance(a, GaussianPolynomial) or isinstance(b, GaussianPolynomial):
        a, b = _to_gaussian(a), _to_gaussian(b)
        if a == b:
            return None
        if a.rate != b.rate and a.body and b.body:
            return {"rate": [str(a.rate), str(b.rate)]}
        return poly_diff(a.body, b.body)
    return poly_diff(a, b)


def _operand_report(identity: str, indices: dict, lhs: Operand, rhs: Operand) -> CheckReport:
    diff = _operand_diff(lhs, rhs)
    return CheckReport(identity, indices, "pass" if diff is None else "fail", diff)


def burchnall_checks(m: int, n: int, f: Operand, label: str = "f") -> list[CheckReport]:
    idx = {"m": m, "n": n, "f": label}
    reports = [
        _operand_report("burchnall_A", idx, burchnall_A_defining(m, n, f), burchnall_A(m, n, f)),
        _operand_report("burchnall_B", idx, burchnall_B_defining(m, n, f), burchnall_B(m, n, f)),
        _operand_report("burchnall_B_creation", idx, burchnall_B_defining(m, n, f), burchnall_B_creation(m, n, f)),
    ]
    return reports


def random_bipolynomial(rng: random.Random, max_degree: int = 4, terms: int = 4) -> BiPolynomial:
    """Small random element of Q[q, qbar] with each exponent at most ``max_degree``."""
    coeffs = {}
    for _ in range(terms):
        key = (rng.randint(0, max_degree), rng.randint(0, max_degree))
        coeffs[key] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    p = BiPolynomial(coeffs)
    return p if p else BiPolynomial.const(1)


# -- Nielsen-type identities -----------------------------------------------

def nielsen_expansion(m: int, n: int, mp: int, np_: int, form: str = "paired") -> BiPolynomial:
    """Quadratic expansion of H_{m+m', n+n'} in products of lower-index polynomials.

    ``form="paired"`` is the expansion obtained by applying the Burchnall operator
    B_{m',n'} to H_{m,n}:

        sum_{j<=min(m',n)} sum_{k<=min(n',m)} (-1)^(j+k) j! k! C(m',j) C(n,j) C(n',k) C(m,k)
            H_{m'-j, n'-k} H_{m-k, n-j}

    ``form="naive"`` is the variant pairing ``H_{m-j,n-k}`` with ``j <= min(m,m')``
    and ``k <= min(n,n')``; it is not an identity (fails already at (1,0,1,0)).
    """
    out = BiPolynomial()
    if form == "paired":
        for j in range(min(mp, n) + 1):
            for k in range(min(np_, m) + 1):
                c = (-1) ** (j + k) * fact(j) * fact(k) * math.comb(mp, j) * math.comb(n, j) * math.comb(np_, k) * math.comb(m, k)
                out = out + (H(mp - j, np_ - k) * H(m - k, n - j)).scale(c)
    elif form == "naive":
        pref = fact(m) * fact(n) * fact(mp) * fact(np_)
        for j in range(min(m, mp) + 1):
            for k in range(min(n, np_) + 1):
                c = Fraction(
                    (-1) ** (j + k) * pref,
                    fact(j) * fact(k) * fact(mp - j) * fact(np_ - k) * fact(m - j) * fact(n - k),
                )
                out = out + (H(mp - j, np_ - k) * H(m - j, n - k)).scale(c)
    else:
        raise ValueError(f"unknown form {form!r}")
    return out


def nielsen_check(m: int, n: int, mp: int, np_: int, form: str = "paired") -> CheckReport:
    idx = {"m": m, "n": n, "m'": mp, "n'": np_, "form": form}
    return compare_polys("nielsen", idx, H(m + mp, n + np_), nielsen_expansion(m, n, mp, np_, form))


def burchnall_semigroup_check(m: int, n: int, mp: int, np_: int) -> CheckReport:
    """B_{m,n}(B_{m',n'}(1)) = B_{m+m',n+n'}(1)."""
    one = BiPolynomial.const(1)
    lhs = burchnall_B_defining(m, n, burchnall_B_defining(mp, np_, one))
    return compare_polys("burchnall_semigroup", {"m": m, "n": n, "m'": mp, "n'": np_}, lhs, burchnall_B_defining(m + mp, n + np_, one))


def opcor_checks(m: int, n: int, nprime: int) -> list[CheckReport]:
    """The three consequences of the Burchnall formulas with f = qbar^{n'} (times a Gaussian).

    The sqrt(2)-rescaled left sides are formed exactly; a leftover odd power of
    sqrt(2) is reported as a failure of the identity.
    """
    idx = {"m": m, "n": n, "n'": nprime}
    target = H(m, n + nprime)
    reports = []

    rhs1 = BiPolynomial()
    for j in range(m + 1):
        rhs1 = rhs1 + (H(m - j, n) * H(j, nprime)).scale(math.comb(m, j))
    reports.append(_scaled_report("opcor1", idx, target, m - n - nprime, rhs1))

    rhs2 = BiPolynomial()
    for j in range(m + 1):
        for k in range(n + 1):
            rhs2 = rhs2 + (H(m - j, n - k) * H(j, k + nprime)).scale(math.comb(m, j) * math.comb(n, k))
    reports.append(_scaled_report("opcor2", idx, target, m + n - nprime, rhs2))

    rhs3 = BiPolynomial()
    for j in range(min(m, nprime) + 1):
        c = (-1) ** j * Fraction(fact(nprime), fact(nprime - j)) * math.comb(m, j)
        rhs3 = rhs3 + H(m - j, n).shift(0, nprime - j).scale(c)
    reports.append(compare_polys("opcor3", idx, target, rhs3))
    return reports


def _scaled_report(name, idx, target, extra, rhs) -> CheckReport:
    try:
        lhs = target.scaled_sqrt2(extra)
    except ParityError as exc:
        return CheckReport(name, idx, "fail", {"parity": str(exc)})
    return compare_polys(name, idx, lhs, rhs)


def opcor_burchnall_route(m: int, n: int, nprime: int) -> list[CheckReport]:
    """The Burchnall-operator images behind the three identities, computed in the
    Gaussian calculus and compared with their closed forms."""
    idx = {"m": m, "n": n, "n'": nprime}
    f = gaussian(mono(0, nprime))
    target = H(m, n + nprime)
    out = []
    a = burchnall_A_defining(m, n, f)
    try:
        out.append(_operand_report("opcor1_operator", idx, a, gaussian(target.scaled_sqrt2(m - n - nprime))))
    except ParityError as exc:
        out.append(CheckReport("opcor1_operator", idx, "fail", {"parity": str(exc)}))
    b = burchnall_B_defining(m, n, f)
    try:
        out.append(_operand_report("opcor2_operator", idx, b, gaussian(target.scaled_sqrt2(m + n - nprime))))
    except ParityError as exc:
        out.append(CheckReport("opcor2_operator", idx, "fail", {"parity": str(exc)}))
    out.append(compare_polys("opcor3_operator", idx, burchnall_B_defining(m, n, mono(0, nprime)), target))
    return out


# -- Runge addition formula ---------------------------------------------------

def runge_sides(m: int, n: int, p, q) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of ``2^((m+n)/2) H_{m,n}((p+q)/sqrt2) = m!n! sum H_{j,k}(p) H_{m-j,n-k}(q)/(j!k!(m-j)!(n-k)!)``.

    Products on the right are taken in the written order (p-factor on the left).
    """
    p, q = as_array(p), as_array(q)
    lhs = 2 ** ((m + n) / 2) * H(m, n).eval_many((p + q) / math.sqrt(2))
    Tp = hermite_table(p, m, n)
    Tq = hermite_table(q, m, n)
    rhs = np.zeros(4)
    for j in range(m + 1):
        for k in range(n + 1):
            c = fact(m) * fact(n) / (fact(j) * fact(k) * fact(m - j) * fact(n - k))
            rhs = rhs + c * qmul(Tp[j, k], Tq[m - j, n - k])
    return lhs, rhs


def runge_slice_check(m: int, n: int, p, q, tol: float = 1e-9) -> CheckReport:
    lhs, rhs = runge_sides(m, n, p, q)
    return numeric_report("runge_slice", {"m": m, "n": n}, lhs, rhs, tol, p=as_array(p), q=as_array(q))


def runge_failure_witness(seed: int = 0, max_total: int = 4, samples: int = 3) -> dict:
    """Runge formula on a common slice (should hold) and at p = i1, q = i2 (fails)."""
    rng = np.random.default_rng(seed)
    slice_reports = []
    for _ in range(samples):
        unit = rng.standard_normal(3)
        unit /= np.linalg.norm(unit)
        p = from_slice(*rng.uniform(-1.5, 1.5, 2), unit)
        q = from_slice(*rng.uniform(-1.5, 1.5, 2), unit)
        for m in range(max_total + 1):
            for n in range(max_total + 1 - m):
                slice_reports.append(runge_slice_check(m, n, p, q))
    lhs, rhs = runge_sides(2, 0, I1, I2)
    disc = rhs - lhs
    return {
        "slice_reports": slice_reports,
        "slice_ok": all(r.ok for r in slice_reports),
        "witness": {
            "m": 2,
            "n": 0,
            "p": I1.to_json(),
            "q": I2.to_json(),
            "lhs": lhs.tolist(),
            "rhs": rhs.tolist(),
            "discrepancy": disc.tolist(),
            "discrepancy_norm": float(np.linalg.norm(disc)),
        },
    }


# -- suites ---------------------------------------------------------------------

def _pairs(K: int):
    return [(m, n) for m in range(K + 1) for n in range(K + 1)]


def suite_lowering(K: int) -> list[CheckReport]:
    out = []
    for m, n in _pairs(K):
        idx = {"m": m, "n": n}
        h = H(m, n)
        out.append(compare_polys("lower_qbar", idx, h.d_sbar(), H(m, n - 1).scale(n) if n else BiPolynomial()))
        out.append(compare_polys("lower_q", idx, h.d_s(), H(m - 1, n).scale(m) if m else BiPolynomial()))
        # dbar_s lowers the qbar-degree, so order n + 1 annihilates (order m + 1 does not)
        out.append(compare_polys("poly_regular", idx, _dbar(h, n + 1), BiPolynomial()))
        out.append(compare_polys("poly_regular_q", idx, _d(h, m + 1), BiPolynomial()))
        out.append(compare_polys("conjugation", idx, h.conj(), H(n, m)))
        out.append(compare_polys("parity", idx, h.reflect(), h.scale((-1) ** (m + n))))
        for j in range(K + 2):
            for k in range(K + 2):
                lhs = _d(_dbar(h, k), j)
                if j <= m and k <= n:
                    rhs = H(m - j, n - k).scale(fact(j) * fact(k) * math.comb(m, j) * math.comb(n, k))
                else:
                    rhs = BiPolynomial()
                out.append(compare_polys("mixed_lowering", {"m": m, "n": n, "j": j, "k": k}, lhs, rhs))
    return out


def suite_recurrence(K: int) -> list[CheckReport]:
    out = []
    for m, n in _pairs(K):
        idx = {"m": m, "n": n}
        rhs1 = H(m, n).shift(0, 1) - (H(m - 1, n).scale(m) if m else BiPolynomial())
        out.append(compare_polys("recurrence_qbar", idx, H(m, n + 1), rhs1))
        rhs2 = H(m, n).shift(1, 0) - (H(m, n - 1).scale(n) if n else BiPolynomial())
        out.append(compare_polys("recurrence_q", idx, H(m + 1, n), rhs2))
    return out


def suite_eigen(K: int) -> list[CheckReport]:
    out = []
    for m, n in _pairs(K):
        idx = {"m": m, "n": n}
        h = H(m, n)
        lap = h.d_sbar().d_s()
        out.append(compare_polys("eigen_q", idx, -lap + h.d_s().shift(1, 0), h.scale(m)))
        out.append(compare_polys("eigen_qbar", idx, -lap + h.d_sbar().shift(0, 1), h.scale(n)))
    return out


def suite_linearize(K: int) -> list[CheckReport]:
    return [linearize_check(m, n) for m, n in _pairs(K)]


def suite_nielsen(K: int) -> list[CheckReport]:
    out = []
    for m in range(K + 1):
        for n in range(K + 1):
            for mp in range(K + 1):
                for np_ in range(K + 1):
                    out.append(nielsen_check(m, n, mp, np_))
    return out


def suite_burchnall(K: int, samples: int = 20, seed: int = 0) -> list[CheckReport]:
    rng = random.Random(seed)
    out = []
    for s in range(samples):
        f = random_bipolynomial(rng, max_degree=4)
        m, n = rng.randint(0, K), rng.randint(0, K)
        out += burchnall_checks(m, n, f, label=f"poly{s}")
        g = gaussian(f)
        out += burchnall_checks(m, n, g, label=f"gauss{s}")
    for m, n in _pairs(min(K, 3)):
        for mp, np_ in _pairs(min(K, 3)):
            out.append(burchnall_semigroup_check(m, n, mp, np_))
    return out


def suite_opcor(K: int) -> list[CheckReport]:
    out = []
    for m in range(K + 1):
        for n in range(K + 1):
            for nprime in range(K + 1):
                out += opcor_checks(m, n, nprime)
                out += opcor_burchnall_route(m, n, nprime)
    return out


def suite_runge(K: int, seed: int = 0) -> list[CheckReport]:
    w = runge_failure_witness(seed=seed, max_total=K)
    reports = list(w["slice_reports"])
    wit = w["witness"]
    status = "pass" if wit["discrepancy_norm"] > 0 else "fail"
    reports.append(CheckReport("runge_generic_counterexample", {"m": 2, "n": 0}, status, None, wit))
    return reports


SUITES: dict[str, Callable[..., list[CheckReport]]] = {
    "lowering": suite_lowering,
    "recurrence": suite_recurrence,
    "eigen": suite_eigen,
    "linearize": suite_linearize,
    "nielsen": suite_nielsen,
    "burchnall": suite_burchnall,
    "opcor": suite_opcor,
    "runge": suite_runge,
}


def run_suite(name: str, K: int, seed: int = 0) -> list[CheckReport]:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    if name in ("burchnall", "runge"):
        return fn(K, seed=seed)
    return fn(K)
