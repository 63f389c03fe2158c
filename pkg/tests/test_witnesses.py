import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from scipy.spatial import ConvexHull

from moebius.errors import InvalidArgumentError, RangeError
from moebius.operators import GridFunction
from moebius.witnesses import (
    asymptotic_ratio_check,
    positivity_identity_check,
    witness_g_quotient,
    witness_gr_quotient,
    witness_h_quotient,
    witness_points,
)

mp.mp.dps = 40


def gr_oracle(n, theta, r):
    """High-precision <g^(n), g> / ||g||^2 for g = x^n exp(r e^{i theta} x), integrated directly."""
    z = r * mp.expj(theta)

    def deriv(x):
        # n-th derivative by the Leibniz rule, written out independently
        return sum(
            mp.binomial(n, k) * mp.factorial(n) / mp.factorial(k) * x**k * z**k for k in range(n + 1)
        ) * mp.exp(z * x)

    g = lambda x: x**n * mp.exp(z * x)  # noqa: E731
    num = mp.quad(lambda x: deriv(x) * mp.conj(g(x)), [0, 0.5, 0.9, 1])
    den = mp.quad(lambda x: abs(g(x)) ** 2, [0, 0.5, 0.9, 1])
    return complex(num / den)


def test_positivity_identity_constant():
    lhs, rhs = positivity_identity_check(GridFunction(np.ones(4)))
    assert lhs == pytest.approx(0.5, abs=1e-15)
    assert rhs == pytest.approx(0.5, abs=1e-15)


def test_positivity_identity_mean_zero():
    f = GridFunction.sample(lambda x: np.exp(2j * np.pi * x), 512)
    lhs, rhs = positivity_identity_check(f)
    assert abs(lhs) < 1e-5 and abs(rhs) < 1e-5


def test_positivity_identity_random(rng):
    f = GridFunction(rng.standard_normal(256) + 1j * rng.standard_normal(256))
    lhs, rhs = positivity_identity_check(f)
    assert lhs == pytest.approx(rhs, abs=1e-12)


@pytest.mark.parametrize("n, sign, expected", [(1, 1, 1j * math.pi), (3, -1, -3j * math.pi)])
def test_g_closed_form(n, sign, expected):
    q = witness_g_quotient(n, sign)
    assert q.method == "ClosedForm"
    assert q.quotient == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("sign", [1, -1])
def test_g_quadrature(n, sign):
    q = witness_g_quotient(n, sign, method="quadrature")
    assert q.quadrature_n == 4096
    assert abs(q.quotient - witness_g_quotient(n, sign).quotient) < 1e-6


@pytest.mark.parametrize("n, expected", [(1, 1.5), (4, 4.5)])
def test_h_closed_form(n, expected):
    assert witness_h_quotient(n).quotient == expected


@pytest.mark.parametrize("n", [1, 2, 6])
def test_h_quadrature(n):
    q = witness_h_quotient(n, method="quadrature")
    assert abs(q.quotient - (n + 0.5)) < 1e-8


def test_bad_witness_arguments():
    with pytest.raises(InvalidArgumentError):
        witness_g_quotient(0)
    with pytest.raises(InvalidArgumentError):
        witness_g_quotient(1, sign=2)
    with pytest.raises(InvalidArgumentError):
        witness_h_quotient(1, method="simpson")
    with pytest.raises(InvalidArgumentError):
        witness_gr_quotient(1, 0.0, 10)
    with pytest.raises(InvalidArgumentError):
        witness_gr_quotient(2, math.pi / 2, 10)
    with pytest.raises(RangeError):
        witness_gr_quotient(2, 0.0, 301)
    with pytest.raises(InvalidArgumentError):
        asymptotic_ratio_check(1, math.pi, [1.0])


@pytest.mark.parametrize(
    "n, theta, r",
    [(2, 0.0, 40), (2, math.pi / 4, 40), (3, -math.pi / 3, 30), (2, 1.2, 5), (4, -0.3, 80)],
)
def test_gr_matches_mpmath(n, theta, r):
    q = witness_gr_quotient(n, theta, r).quotient
    ref = gr_oracle(n, theta, r)
    assert q == pytest.approx(ref, rel=1e-10)


def test_gr_examples():
    q = witness_gr_quotient(2, 0.0, 40).quotient
    assert abs(q / 1600 - 1) < 0.15
    q = witness_gr_quotient(2, math.pi / 4, 40).quotient
    assert abs(cmath.phase(q) - math.pi / 2) < 0.1


def test_gr_survives_large_r():
    q = witness_gr_quotient(2, 0.0, 300).quotient
    assert np.isfinite(q)
    assert abs(q / 300**2 - 1) < 0.02


def test_gr_modulus_grows_and_argument_settles():
    for n, theta in [(2, 0.7), (3, -0.5)]:
        qs = [witness_gr_quotient(n, theta, r).quotient for r in (10, 20, 40, 80, 160)]
        assert all(abs(b) > abs(a) for a, b in zip(qs, qs[1:]))
        errs = [abs(cmath.phase(q * cmath.exp(-1j * n * theta))) for q in qs]
        assert all(b < a for a, b in zip(errs, errs[1:]))


def test_gr_arguments_cover_more_than_half_turn():
    args = [n * th for n in (2,) for th in np.linspace(-1.4, 1.4, 8)]
    assert max(args) - min(args) > math.pi


def test_asymptotic_ratio_examples():
    assert asymptotic_ratio_check(0, 0.3, [1, 7, 50]) == [1.0, 1.0, 1.0]
    seq = asymptotic_ratio_check(2, 0.0, [5, 20, 80])
    assert seq[0] < seq[1] < seq[2] < 1

    def closed(c):
        # int x e^{cx} / int e^{cx} on [0, 1]
        return ((c - 1) * math.exp(c) + 1) / c**2 / ((math.exp(c) - 1) / c)

    assert seq[0] == pytest.approx(float(mp.quad(lambda x: x**2 * mp.exp(10 * x), [0, 1]) / mp.quad(lambda x: mp.exp(10 * x), [0, 1])), rel=1e-12)
    (one,) = asymptotic_ratio_check(1, 0.0, [100])
    assert one > 0.98
    assert one == pytest.approx(closed(200.0), rel=1e-12)


def test_witness_points_in_right_halfplane():
    pts = witness_points(10)
    assert len(pts) == 30
    assert np.all(pts.real >= -1e-9)


def test_witness_hull_covers_square():
    pts = witness_points(40)
    hull = ConvexHull(np.column_stack([pts.real, pts.imag]))
    corners = np.array([[0.1, -10], [0.1, 10], [10, -10], [10, 10]])
    # inside iff every facet inequality a.x + b <= 0 holds
    slack = hull.equations[:, :2] @ corners.T + hull.equations[:, 2:3]
    assert np.all(slack <= 0)
    small = witness_points(1)
    hull1 = ConvexHull(np.column_stack([small.real, small.imag]))
    slack1 = hull1.equations[:, :2] @ corners.T + hull1.equations[:, 2:3]
    assert np.any(slack1 > 0)


def test_gr_left_halfplane_example():
    # arg target is 3 * (-pi/3) = -pi; the measured finite-r offset is about 0.245 rad
    q = witness_gr_quotient(3, -math.pi / 3, 30).quotient
    assert q.real < 0
    assert abs(cmath.phase(-q)) < 0.15
