"""Numerical ranges, support functions and convex-region predicates.

The numerical range W(A) of a matrix is recovered by the rotation method:
for each direction theta the top eigenpair (value m, vector v) of the
Hermitian matrix H(theta) = (e^{-i theta} A + e^{i theta} A*) / 2 gives the
support value m and the boundary point <Av, v>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidArgumentError
from .operators import as_complex_matrix
from .spectral import DEFAULT_CONFIG, SpectralConfig, hermitian_max_eig, hermitian_part

DEFAULT_ANGLES = 256
REFINE_FACTOR = 10.0
REFINE_DEPTH = 4
HALFPLANE_TOL = 1e-12


@dataclass(frozen=True)
class NumericalRangeBoundary:
    thetas: np.ndarray
    support: np.ndarray
    points: np.ndarray
    source_dim: int

    def __len__(self):
        return self.thetas.size

    def samples(self):
        return list(zip(self.thetas.tolist(), self.support.tolist(), self.points.tolist()))

    def check(self, tol=1e-9) -> bool:
        """Sampled support data are self-consistent.

        Each point attains its own support value and lies in every sampled
        half-plane, which is what convexity of W(A) requires of the samples.
        """
        if np.any(np.diff(self.thetas) <= 0):
            return False
        scale = 1.0 + np.max(np.abs(self.points))
        proj = (self.points[None, :] * np.exp(-1j * self.thetas[:, None])).real
        own = np.abs(np.diag(proj) - self.support) <= tol * scale
        inside = proj <= self.support[:, None] + tol * scale
        return bool(np.all(own) and np.all(inside))


def _boundary_sample(a, theta, cfg):
    value, v = hermitian_max_eig(hermitian_part(a, theta), cfg)
    return value, complex(np.vdot(v, a @ v))


def numerical_range_boundary(
    a,
    num_angles: int = DEFAULT_ANGLES,
    cfg: SpectralConfig = DEFAULT_CONFIG,
    refine: bool = True,
) -> NumericalRangeBoundary:
    """Sample the boundary of W(a) at ``num_angles`` equally spaced directions.

    With ``refine``, extra directions are bisected in wherever adjacent
    boundary points are more than ten times the median spacing apart.
    Bisection is capped at a few levels since corners of W(a) (for instance
    eigenvalues of a normal matrix) never close such a gap.
    """
    a = as_complex_matrix(a)
    if num_angles < 8:
        raise InvalidArgumentError("num_angles must be at least 8")
    thetas = [2 * math.pi * k / num_angles for k in range(num_angles)]
    samples = {th: _boundary_sample(a, th, cfg) for th in thetas}

    if refine:
        for _ in range(REFINE_DEPTH):
            order = sorted(samples)
            pts = np.array([samples[th][1] for th in order])
            gaps = np.abs(np.roll(pts, -1) - pts)
            med = float(np.median(gaps))
            limit = REFINE_FACTOR * med
            if med <= 0 or not np.any(gaps > limit):
                break
            for i in np.flatnonzero(gaps > limit):
                lo = order[i]
                hi = order[(i + 1) % len(order)] + (2 * math.pi if i + 1 == len(order) else 0.0)
                mid = (0.5 * (lo + hi)) % (2 * math.pi)
                if mid not in samples:
                    samples[mid] = _boundary_sample(a, mid, cfg)

    order = sorted(samples)
    return NumericalRangeBoundary(
        thetas=np.array(order),
        support=np.array([samples[th][0] for th in order]),
        points=np.array([samples[th][1] for th in order], dtype=np.complex128),
        source_dim=a.shape[0],
    )


def support_function(a, z: complex, cfg: SpectralConfig = DEFAULT_CONFIG) -> float:
    """h_{W(a)}(z) = sup { Re(z conj(w)) : w in W(a) } = |z| lambda_max(H(arg z))."""
    z = complex(z)
    if z == 0:
        raise InvalidArgumentError("support function direction must be nonzero")
    a = as_complex_matrix(a)
    value, _ = hermitian_max_eig(hermitian_part(a, math.atan2(z.imag, z.real)), cfg)
    return abs(z) * value


def halfplane_support(z: complex) -> float:
    """Support function of the closed right half-plane {Re w >= 0}.

    It is 0 on the ray (-inf, 0] and +inf elsewhere; z counts as a negative
    real when |Im z| <= 1e-12 |z| and Re z < 0.
    """
    z = complex(z)
    if z == 0:
        raise InvalidArgumentError("support function direction must be nonzero")
    if z.real < 0 and abs(z.imag) <= HALFPLANE_TOL * abs(z):
        return 0.0
    return math.inf


def hull_contains(boundary: NumericalRangeBoundary, w: complex, slack: float = 0.0) -> bool:
    proj = (complex(w) * np.exp(-1j * boundary.thetas)).real
    return bool(np.all(proj <= boundary.support + slack))


def face(a, theta: float, cfg: SpectralConfig = DEFAULT_CONFIG, rel_tol: float = 1e-9):
    """End points of the face of W(a) exposed in direction ``theta``.

    The face is W of the compression of ``a`` to the top eigenspace of
    H(theta); it is a segment (possibly a single point) perpendicular to
    e^{i theta}. Returns the two end points ordered by the tangent
    coordinate.
    """
    a = as_complex_matrix(a)
    h = hermitian_part(a, theta)
    w, v = sla.eigh(h, check_finite=False)
    top = w[-1]
    q = v[:, w >= top - rel_tol * (1.0 + np.max(np.abs(w)))]
    comp = q.conj().T @ a @ q
    tangential = np.linalg.eigvalsh(hermitian_part(comp, theta + math.pi / 2))
    rot = np.exp(1j * theta)
    return rot * complex(top, tangential[0]), rot * complex(top, tangential[-1])
