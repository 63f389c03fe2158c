"""Contraction tests for Moebius functions (I + lam T)(I + mu T)^{-1}.

Three equivalent criteria are implemented for an injective T with I + mu T
invertible:

* direct: the spectral norm of the Moebius matrix is at most 1;
* quadratic form: ||(I + lam T)x||^2 <= ||(I + mu T)x||^2 for all x, i.e.
  the Hermitian gap (I+lam T)*(I+lam T) - (I+mu T)*(I+mu T) is negative
  semidefinite;
* support function: 2 h_{W(T^{-1})}(lam - mu) <= |mu|^2 - |lam|^2.

In finite dimension they agree exactly. For operators T with W(T^{-1}) the
closed right half-plane (the Volterra operator) the contraction set is the
half-open segment [-conj(mu), mu) with Re mu > 0, and when W(T^{-1}) is the
whole plane (powers V^n, n >= 2) there is no contraction with lam != mu.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateCaseError, InvalidArgumentError, SingularPencilError
from .geometry import support_function
from .operators import (
    DiscretizedOperator,
    MoebiusParams,
    _rcond,
    lu_factor,
    as_complex_matrix,
    build_volterra,
    moebius_transform,
)
from .spectral import DEFAULT_CONFIG, SpectralConfig, hermitian_max_eig, matrix_exponential, spectral_norm

DEFAULT_BAND = 1e-2
SUPPORT_SLACK = 1e-9
SEGMENT_TOL = 1e-12
LUMER_PHILLIPS_TOL = 1e-9


class Classification(enum.Enum):
    CONTRACTION = "Contraction"
    BOUNDARY = "Boundary"
    NON_CONTRACTION = "NonContraction"
    SINGULAR = "SingularPencil"


def classify(norm: float, band: float) -> Classification:
    if not math.isfinite(norm):
        return Classification.SINGULAR
    if norm > 1 + band:
        return Classification.NON_CONTRACTION
    if norm < 1 - band:
        return Classification.CONTRACTION
    return Classification.BOUNDARY


def _as_matrix(t):
    return np.asarray(t.matrix) if isinstance(t, DiscretizedOperator) else as_complex_matrix(t)


def direct_norm_test(t, p: MoebiusParams, cfg: SpectralConfig = DEFAULT_CONFIG, check: bool = True) -> float:
    """||(I + lam T)(I + mu T)^{-1}||; exactly 1.0 when lam == mu."""
    if not p.distinct:
        return 1.0
    return spectral_norm(moebius_transform(_as_matrix(t), p, check=check), cfg)


def quadratic_gap_test(t, p: MoebiusParams, cfg: SpectralConfig = DEFAULT_CONFIG) -> float:
    """Largest eigenvalue of (I+lam T)*(I+lam T) - (I+mu T)*(I+mu T).

    Expanded as d T + conj(d) T* + (|lam|^2 - |mu|^2) T*T with d = lam - mu,
    so lam == mu gives the zero matrix exactly. Needs no inverse.
    """
    a = _as_matrix(t)
    if not p.distinct:
        return 0.0
    x = (p.lam - p.mu) * a
    tt = a.conj().T @ a
    gap = (x + x.conj().T) + (abs(p.lam) ** 2 - abs(p.mu) ** 2) * (tt + tt.conj().T) / 2
    value, _ = hermitian_max_eig(gap, cfg)
    return value


@dataclass(frozen=True)
class SupportInequality:
    lhs: float
    rhs: float
    holds: bool


def support_inequality_test(t, p: MoebiusParams, cfg: SpectralConfig = DEFAULT_CONFIG) -> SupportInequality:
    """Evaluate 2 h_{W(T^{-1})}(lam - mu) <= |mu|^2 - |lam|^2 on a finite matrix."""
    a = _as_matrix(t)
    if not p.distinct:
        raise DegenerateCaseError("lambda == mu: the Moebius function is the identity")
    lu, piv = lu_factor(a)
    if _rcond(lu, a) < 1e-12:
        raise InvalidArgumentError("T is numerically singular; W(T^{-1}) is unavailable")
    t_inv = sla.lu_solve((lu, piv), np.eye(a.shape[0], dtype=np.complex128), check_finite=False)
    lhs = 2.0 * support_function(t_inv, p.lam - p.mu, cfg)
    rhs = abs(p.mu) ** 2 - abs(p.lam) ** 2
    return SupportInequality(lhs, rhs, lhs <= rhs + SUPPORT_SLACK)


@dataclass(frozen=True)
class ContractionReport:
    params: MoebiusParams
    direct_norm: float
    quad_gap: float
    support_lhs: float
    support_rhs: float
    classification: Classification
    tolerance_band: float
    agreement: dict = field(default_factory=dict)


def contraction_report(
    t,
    p: MoebiusParams,
    cfg: SpectralConfig = DEFAULT_CONFIG,
    band: float = DEFAULT_BAND,
) -> ContractionReport:
    """Run all three tests. Agreement flags compare each test's verdict with
    the direct norm; they are omitted when lam == mu."""
    a = _as_matrix(t)
    norm = direct_norm_test(a, p, cfg)
    gap = quadratic_gap_test(a, p, cfg)
    agreement = {}
    if p.distinct:
        sup = support_inequality_test(a, p, cfg)
        lhs, rhs = sup.lhs, sup.rhs
        agreement = {
            "direct_vs_gap": (norm <= 1.0) == (gap <= 0.0),
            "direct_vs_support": (norm <= 1.0) == (lhs <= rhs),
            "gap_vs_support": (gap <= 0.0) == (lhs <= rhs),
        }
    else:
        lhs, rhs = 0.0, 0.0
    return ContractionReport(p, norm, gap, lhs, rhs, classify(norm, band), band, agreement)


def _on_segment(lam: complex, mu: complex) -> bool:
    # lam = -(1-t) conj(mu) + t mu  <=>  t = (lam + conj(mu)) / (2 Re mu)
    t = (lam + mu.conjugate()) / (2 * mu.real)
    if abs(lam.imag - mu.imag) > SEGMENT_TOL * max(1.0, abs(mu)):
        return False
    return 0.0 <= t.real < 1.0


def _ray_form(lam: complex, mu: complex) -> bool:
    d = lam - mu
    if abs(lam.imag - mu.imag) > SEGMENT_TOL * max(1.0, abs(mu)):
        return False
    return d.real <= 0 and abs(lam) <= abs(mu)


def volterra_contraction_oracle(p: MoebiusParams) -> bool:
    """Closed-form answer for T = V: is ||(I + lam V)(I + mu V)^{-1}|| = 1?

    True iff Re mu > 0 and lam lies on the half-open segment [-conj(mu), mu).
    Evaluated both through the segment parametrization and through the
    equivalent (lam - mu <= 0 real, |lam| <= |mu|) form; the two must agree.
    """
    if not p.distinct:
        raise DegenerateCaseError("lambda == mu: the Moebius function is the identity")
    lam, mu = p.lam, p.mu
    if mu.real <= 0:
        return False
    seg = _on_segment(lam, mu)
    ray = _ray_form(lam, mu)
    assert seg == ray, f"segment and ray forms disagree at lam={lam}, mu={mu}"
    return seg


@dataclass(frozen=True)
class RegionScan:
    mu: complex
    window: tuple
    resolution: tuple
    lams: np.ndarray
    norms: np.ndarray
    classes: np.ndarray
    band: float

    @property
    def cell_count(self) -> int:
        return self.norms.size

    def count(self, cls: Classification) -> int:
        return int(np.sum(self.classes == cls))

    def off_diagonal(self) -> np.ndarray:
        """Mask of cells with lam != mu."""
        return self.lams != self.mu

    def cells(self):
        """Row-major iteration of (lam, norm, classification)."""
        for lam, norm, cls in zip(self.lams.ravel(), self.norms.ravel(), self.classes.ravel()):
            yield complex(lam), float(norm), cls


def lambda_grid(window, resolution) -> np.ndarray:
    x0, x1, y0, y1 = map(float, window)
    nx, ny = map(int, resolution)
    if nx < 2 or ny < 2:
        raise InvalidArgumentError("resolution must be at least 2 in each axis")
    if not (x1 > x0 and y1 > y0):
        raise InvalidArgumentError("window must satisfy x0 < x1 and y0 < y1")
    # x0 + (x1 - x0) k / (n - 1) hits round values such as mu exactly, which
    # lam == mu cell detection relies on
    xs = x0 + (x1 - x0) * np.arange(nx) / (nx - 1)
    ys = y0 + (y1 - y0) * np.arange(ny) / (ny - 1)
    return xs[None, :] + 1j * ys[:, None]


def region_scan(
    t,
    mu: complex,
    window=(-1.5, 1.5, -1.5, 1.5),
    resolution=(61, 61),
    cfg: SpectralConfig = DEFAULT_CONFIG,
    band: float = DEFAULT_BAND,
) -> RegionScan:
    """Direct norm and classification over a rectangular grid of lambdas.

    The resolvent R = (I + mu T)^{-1} is factored once; each cell uses
    (I + lam T) R = (lam/mu) I + (1 - lam/mu) R. The singularity guard is
    skipped when Re mu > 0 and W(T) lies in the closed right half-plane,
    where I + mu T is invertible automatically. A singular pencil marks every
    cell except lam == mu, which is always the identity.
    """
    a = _as_matrix(t)
    mu = complex(mu)
    lams = lambda_grid(window, resolution)
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    norms = np.full(lams.shape, np.nan)
    classes = np.empty(lams.shape, dtype=object)

    resolvent = None
    if mu != 0:
        automatic = mu.real > 0 and support_function(a, -1.0, cfg) <= 0.0
        try:
            resolvent = moebius_transform(a, MoebiusParams(0.0, mu), check=not automatic)
        except SingularPencilError:
            resolvent = None

    for idx in np.ndindex(lams.shape):
        lam = complex(lams[idx])
        if lam == mu:
            norms[idx] = 1.0
        elif mu == 0:
            norms[idx] = spectral_norm(eye + lam * a, cfg)
        elif resolvent is not None:
            r = lam / mu
            norms[idx] = spectral_norm(r * eye + (1 - r) * resolvent, cfg)
        classes[idx] = classify(norms[idx], band)
    return RegionScan(mu, tuple(window), tuple(resolution), lams, norms, classes, band)


def calibrate_band(n: int, cfg: SpectralConfig = DEFAULT_CONFIG, factor: float = 5.0) -> float:
    """Discretization band 5 |norm(N) - norm(2N)| at lam = 0, mu = 1 for V_N."""
    p = MoebiusParams(0.0, 1.0)
    a = direct_norm_test(build_volterra(n), p, cfg)
    b = direct_norm_test(build_volterra(2 * n), p, cfg)
    return factor * abs(a - b)


@dataclass(frozen=True)
class LumerPhillipsResult:
    semigroup_contractive: bool
    halfplane: bool
    max_semigroup_norm: float
    support_left: float

    @property
    def agree(self) -> bool:
        return self.semigroup_contractive == self.halfplane

    def __bool__(self):
        return self.agree


def lumer_phillips_check(t, t_samples: Sequence[float], cfg: SpectralConfig = DEFAULT_CONFIG) -> LumerPhillipsResult:
    """Compare max_t ||e^{-tT}|| <= 1 with W(T) lying in Re z >= 0.

    The half-plane side is h_{W(T)}(-1) = -min Re W(T) <= 0. Sampled times
    near zero matter: if W(T) crosses the imaginary axis by delta the
    semigroup norm grows like 1 + t delta for small t.
    """
    a = _as_matrix(t)
    ts = [float(s) for s in t_samples]
    if not ts or min(ts) <= 0:
        raise InvalidArgumentError("t_samples must be non-empty and positive")
    norms = [spectral_norm(matrix_exponential(a, -s), cfg) for s in ts]
    left = support_function(a, -1.0, cfg)
    return LumerPhillipsResult(
        semigroup_contractive=max(norms) <= 1 + LUMER_PHILLIPS_TOL,
        halfplane=left <= LUMER_PHILLIPS_TOL,
        max_semigroup_norm=max(norms),
        support_left=left,
    )


BORDER_SUPPORT = 1e-6
BORDER_NORM = 1e-8


@dataclass(frozen=True)
class AgreementTrial:
    trial: int
    dim: int
    lam: complex
    mu: complex
    direct_norm: float
    quad_gap: float
    support_lhs: float
    support_rhs: float
    status: str  # "agree", "disagree", "borderline" or "singular"


def sample_moebius_params(rng: np.random.Generator) -> MoebiusParams:
    """Random (lam, mu) mixing generic pairs with pairs near a contraction.

    Half the draws are independent complex Gaussians (almost never a
    contraction). The other half take |mu| log-uniform in [0.1, 30] and put
    lam a relative distance in [1e-3, 2] from mu, which produces both
    verdicts in comparable numbers.
    """
    if rng.random() < 0.5:
        z = rng.standard_normal(4)
        return MoebiusParams(complex(z[0], z[1]), complex(z[2], z[3]))
    rho = 10 ** rng.uniform(-1, math.log10(30))
    phi = rng.uniform(0, 2 * math.pi)
    mu = rho * complex(math.cos(phi), math.sin(phi))
    eps = rho * 10 ** rng.uniform(-3, math.log10(2))
    psi = rng.uniform(0, 2 * math.pi)
    return MoebiusParams(mu + eps * complex(math.cos(psi), math.sin(psi)), mu)


def three_way_trials(
    trials: int,
    dims=(2, 8),
    seed: int = 1,
    cfg: SpectralConfig = DEFAULT_CONFIG,
    condition_cap: float = 1e6,
) -> list:
    """Run the direct, quadratic-form and support tests on random finite matrices.

    Each trial draws a dimension in ``dims`` (inclusive), a well-conditioned
    random T and a parameter pair. Pairs within 1e-6 of equality in the
    support inequality, or with the norm within 1e-8 of 1, are marked
    borderline rather than judged.
    """
    from .operators import random_invertible_matrix

    if int(trials) != trials or trials < 1:
        raise InvalidArgumentError("trials must be a positive integer")
    lo, hi = map(int, dims)
    if lo < 1 or hi < lo:
        raise InvalidArgumentError(f"bad dimension range {dims!r}")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(int(trials)):
        dim = int(rng.integers(lo, hi + 1))
        t = random_invertible_matrix(dim, int(rng.integers(2**32)), condition_cap)
        p = sample_moebius_params(rng)
        try:
            norm = direct_norm_test(t, p, cfg)
        except SingularPencilError:
            out.append(AgreementTrial(k, dim, p.lam, p.mu, math.nan, math.nan, math.nan, math.nan, "singular"))
            continue
        gap = quadratic_gap_test(t, p, cfg)
        sup = support_inequality_test(t, p, cfg)
        if abs(sup.lhs - sup.rhs) <= BORDER_SUPPORT or abs(norm - 1) <= BORDER_NORM:
            status = "borderline"
        else:
            verdicts = {norm <= 1.0, gap <= 0.0, sup.holds}
            status = "agree" if len(verdicts) == 1 else "disagree"
        out.append(AgreementTrial(k, dim, p.lam, p.mu, norm, gap, sup.lhs, sup.rhs, status))
    return out
