import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moebius.errors import InvalidArgumentError
from moebius.geometry import (
    face,
    halfplane_support,
    hull_contains,
    numerical_range_boundary,
    support_function,
)

NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)


def cgauss(r, *shape):
    return r.standard_normal(shape) + 1j * r.standard_normal(shape)


def sampled_range(a, count, r):
    """<Av, v> over ``count`` random unit vectors: a brute-force inner approximation of W(a)."""
    v = cgauss(r, count, a.shape[0])
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.einsum("ij,jk,ik->i", v.conj(), a, v)


def test_normal_matrix_gives_segment():
    bnd = numerical_range_boundary(np.diag([0.0, 1.0]), 256)
    assert bnd.check()
    assert np.abs(bnd.points.imag).max() < 1e-9
    assert bnd.points.real.min() == pytest.approx(0.0, abs=1e-9)
    assert bnd.points.real.max() == pytest.approx(1.0, abs=1e-9)


def test_nilpotent_gives_unit_disk(rng):
    bnd = numerical_range_boundary(NILPOTENT, 256)
    assert bnd.check()
    np.testing.assert_allclose(np.abs(bnd.points), 1.0, atol=1e-6)
    np.testing.assert_allclose(bnd.support, 1.0, atol=1e-6)
    # brute-force oracle: a million random unit vectors approach the disk from inside
    w = sampled_range(NILPOTENT, 1_000_000, rng)
    for k in range(0, 256, 4):
        th = bnd.thetas[k]
        reach = (w * np.exp(-1j * th)).real.max()
        assert reach <= bnd.support[k] + 1e-12
        assert reach > 0.99


def test_boundary_points_are_rayleigh_quotients(rng):
    a = cgauss(rng, 5, 5)
    bnd = numerical_range_boundary(a, 64)
    assert bnd.check()
    assert np.all(np.diff(bnd.thetas) > 0)
    np.testing.assert_allclose((bnd.points * np.exp(-1j * bnd.thetas)).real, bnd.support, atol=1e-9)
    w = sampled_range(a, 20_000, rng)
    proj = (w[None, :] * np.exp(-1j * bnd.thetas[:, None])).real.max(axis=1)
    assert np.all(proj <= bnd.support + 1e-10)


def test_refinement_adds_angles_at_corners():
    a = np.array([[1, 5], [0, 1j]], dtype=complex)
    plain = numerical_range_boundary(a, 16, refine=False)
    refined = numerical_range_boundary(a, 16, refine=True)
    assert len(plain) == 16
    assert len(refined) >= 16
    assert set(plain.thetas.tolist()) <= set(refined.thetas.tolist())
    assert refined.check()


def test_too_few_angles():
    with pytest.raises(InvalidArgumentError):
        numerical_range_boundary(np.eye(2), 4)


def test_volterra_extremes(v400):
    a = v400.matrix
    assert support_function(a, 1.0) == pytest.approx(0.5, abs=1e-12)
    # the upper arc peaks at t = pi: (t - sin t)/t^2 = 1/pi
    assert support_function(a, 1j) == pytest.approx(1 / math.pi, abs=1e-5)
    lo, hi = sorted(face(a, math.pi), key=lambda z: z.imag)
    assert abs(lo.real) < 1e-12 and abs(hi.real) < 1e-12
    assert hi.imag == pytest.approx(1 / (2 * math.pi), abs=1e-4)
    assert lo.imag == pytest.approx(-1 / (2 * math.pi), abs=1e-4)


def test_support_function_examples():
    assert support_function(np.eye(3), 1) == pytest.approx(1.0)
    assert support_function(np.eye(3), -0.2) == pytest.approx(-0.2)
    for phi in np.linspace(0, 2 * np.pi, 7):
        assert support_function(NILPOTENT, np.exp(1j * phi)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        support_function(np.eye(2), 0)


@pytest.mark.parametrize(
    "z, expected",
    [(-3, 0.0), (-1 + 0j, 0.0), (1e-9 - 3j, math.inf), (2.0, math.inf), (1j, math.inf), (-1 + 1e-14j, 0.0)],
)
def test_halfplane_support(z, expected):
    assert halfplane_support(z) == expected


def test_halfplane_support_rejects_zero():
    with pytest.raises(InvalidArgumentError):
        halfplane_support(0)


def test_hull_contains():
    seg = numerical_range_boundary(np.diag([0.0, 1.0]), 64)
    assert hull_contains(seg, 0.5)
    disk = numerical_range_boundary(NILPOTENT, 64)
    assert not hull_contains(disk, 2.0)
    assert hull_contains(disk, 0.5j)


@given(st.integers(0, 2**32 - 1))
def test_support_subadditive_and_homogeneous(seed):
    r = np.random.default_rng(seed)
    a = cgauss(r, 4, 4)
    z1, z2 = cgauss(r, 2)
    c = float(r.uniform(0.1, 10))
    h = lambda z: support_function(a, z)  # noqa: E731
    assert h(z1 + z2) <= h(z1) + h(z2) + 1e-9
    assert h(c * z1) == pytest.approx(c * h(z1), rel=1e-10, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * math.pi))
def test_rotation_consistency(seed, phi):
    a = cgauss(np.random.default_rng(seed), 4, 4)
    rot = np.exp(1j * phi) * a
    for th in np.linspace(0, 2 * math.pi, 9):
        assert support_function(rot, np.exp(1j * (th + phi))) == pytest.approx(
            support_function(a, np.exp(1j * th)), abs=1e-9
        )


def test_hermitian_matrix_has_real_segment(rng):
    b = cgauss(rng, 6, 6)
    h = (b + b.conj().T) / 2
    ev = np.linalg.eigvalsh(h)
    assert support_function(h, 1) == pytest.approx(ev[-1], abs=1e-8)
    assert -support_function(h, -1) == pytest.approx(ev[0], abs=1e-8)
    assert abs(support_function(h, 1j)) < 1e-8
    assert abs(support_function(h, -1j)) < 1e-8


def test_inverse_of_accretive_matrix_is_accretive(rng):
    for _ in range(10):
        a = cgauss(rng, 5, 5)
        # push W(a) into the open right half-plane
        a = a + (1 + support_function(a, -1)) * np.eye(5)
        assert support_function(a, -1) < 0
        assert support_function(np.linalg.inv(a), -1) <= 1e-9
