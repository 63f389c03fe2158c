"""Reference boundary of the numerical range of the Volterra operator.

W(V) is the closed region bounded by the vertical segment
[-i/(2 pi), i/(2 pi)] and the arcs

    t -> (1 - cos t)/t^2  +/-  i (t - sin t)/t^2,    t in [0, 2 pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .geometry import numerical_range_boundary
from .operators import DiscretizedOperator
from .spectral import DEFAULT_CONFIG, SpectralConfig

SERIES_CUTOFF = 1e-3
REFERENCE_SAMPLES = 2048
TWO_PI = 2 * math.pi


def _real_part(t):
    if t < SERIES_CUTOFF:
        t2 = t * t
        # (1 - cos t)/t^2 = sum_k (-1)^k t^{2k} / (2k+2)!
        return 0.5 - t2 / 24 + t2**2 / 720 - t2**3 / 40320 + t2**4 / 3628800 - t2**5 / 479001600
    return (1 - math.cos(t)) / (t * t)


def _imag_part(t):
    if t < SERIES_CUTOFF:
        t2 = t * t
        # (t - sin t)/t^2 = sum_k (-1)^k t^{2k+1} / (2k+3)!
        return t * (1 / 6 - t2 / 120 + t2**2 / 5040 - t2**3 / 362880 + t2**4 / 39916800 - t2**5 / 6227020800)
    return (t - math.sin(t)) / (t * t)


def wv_boundary_point(t: float, branch: int = 1) -> complex:
    """Point of the upper (branch=+1) or lower (branch=-1) boundary arc of W(V)."""
    if branch not in (1, -1):
        raise InvalidArgumentError("branch must be +1 or -1")
    if not 0.0 <= t <= TWO_PI:
        raise InvalidArgumentError(f"t must lie in [0, 2 pi], got {t}")
    return complex(_real_part(t), branch * _imag_part(t))


@dataclass(frozen=True)
class ReferenceBoundary:
    """Closed polygon approximating the boundary of W(V).

    ``samples`` runs along the upper arc from 1/2 to i/(2 pi), down the
    vertical segment, and back along the lower arc.
    """

    samples: np.ndarray
    param_grid: np.ndarray

    def support(self, thetas) -> np.ndarray:
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        proj = (self.samples[None, :] * np.exp(-1j * thetas[:, None])).real
        return proj.max(axis=1)


def reference_boundary(num_samples: int = REFERENCE_SAMPLES, segment_samples: int = 64) -> ReferenceBoundary:
    # cosine clustering toward both ends of [0, 2 pi]
    s = np.linspace(0.0, 1.0, num_samples)
    ts = np.clip(math.pi * (1 - np.cos(math.pi * s)), 0.0, TWO_PI)
    upper = np.array([wv_boundary_point(t, 1) for t in ts])
    lower = upper.conj()[::-1]
    top = upper[-1].imag
    seg = 1j * np.linspace(top, -top, segment_samples + 2)[1:-1]
    return ReferenceBoundary(samples=np.concatenate([upper, seg, lower]), param_grid=ts)


@dataclass(frozen=True)
class WVComparison:
    max_deviation: float
    thetas: np.ndarray
    computed: np.ndarray
    reference: np.ndarray

    @property
    def per_angle(self):
        return list(zip(self.thetas.tolist(), self.computed.tolist(), self.reference.tolist()))


def compare_wv(
    op: DiscretizedOperator,
    num_angles: int = 128,
    cfg: SpectralConfig = DEFAULT_CONFIG,
    reference: ReferenceBoundary | None = None,
) -> WVComparison:
    """Compare support values of W(V_N) with those of the reference boundary."""
    if op.power != 1:
        raise InvalidArgumentError(f"compare_wv needs VolterraPower(1), got {op.kind}")
    reference = reference or reference_boundary()
    bnd = numerical_range_boundary(op.matrix, num_angles, cfg, refine=False)
    ref = reference.support(bnd.thetas)
    dev = np.abs(bnd.support - ref)
    return WVComparison(float(dev.max()), bnd.thetas, bnd.support, ref)
