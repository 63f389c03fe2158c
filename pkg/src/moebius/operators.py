"""Operator matrices: the discretized Volterra operator, its powers, Moebius
transforms and random well-conditioned test matrices.

Matrices are plain complex numpy arrays. Inner products are Euclidean; a
uniform quadrature weight h would cancel in every Rayleigh quotient and norm
ratio computed by this package, so it is left out. The one exception is
:func:`moebius.witnesses.positivity_identity_check`, which pairs grid
functions with the discrete L2 product h * sum(f * conj(g)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from .errors import GenerationError, InvalidArgumentError, SingularPencilError

RCOND_MIN = 1e-12
CONDITION_CAP = 1e6


def as_complex_matrix(a, name="matrix") -> np.ndarray:
    """Validate and return ``a`` as a square complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return m


@dataclass(frozen=True)
class DiscretizedOperator:
    """A matrix on an N-point midpoint grid of [0, 1].

    ``power`` is the Volterra power n for matrices built by
    :func:`build_volterra` / :func:`operator_power`, or ``None`` for custom
    operators.
    """

    matrix: np.ndarray
    grid_n: int
    power: Optional[int] = None

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape != (self.grid_n, self.grid_n):
            raise InvalidArgumentError("matrix dimension must equal grid_n")
        if m is self.matrix:
            m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def step(self) -> float:
        return 1.0 / self.grid_n

    @property
    def is_volterra(self) -> bool:
        return self.power is not None

    @property
    def kind(self) -> str:
        return f"VolterraPower({self.power})" if self.power is not None else "Custom"


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function at the midpoints x_j = (j - 1/2) h of [0, 1]."""

    values: np.ndarray
    grid_n: int = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).ravel()
        if v.size == 0:
            raise InvalidArgumentError("grid function needs at least one sample")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "grid_n", v.size)

    @property
    def step(self) -> float:
        return 1.0 / self.grid_n

    @staticmethod
    def midpoints(n: int) -> np.ndarray:
        return (np.arange(1, n + 1) - 0.5) / n

    @classmethod
    def sample(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "GridFunction":
        return cls(np.broadcast_to(func(cls.midpoints(n)), (n,)))


@dataclass(frozen=True)
class MoebiusParams:
    lam: complex
    mu: complex

    def __post_init__(self):
        lam, mu = complex(self.lam), complex(self.mu)
        if not (np.isfinite(lam) and np.isfinite(mu)):
            raise InvalidArgumentError("lambda and mu must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def distinct(self) -> bool:
        return self.lam != self.mu


def build_volterra(n: int) -> DiscretizedOperator:
    """Midpoint-collocation matrix of Vf(x) = int_0^x f(t) dt.

    Entries are h below the diagonal and h/2 on it, so V + V* = h * ones
    exactly and the Hermitian part is rank-one positive semidefinite.
    """
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"grid size must be a positive integer, got {n!r}")
    n = int(n)
    h = 1.0 / n
    m = np.tril(np.full((n, n), h, dtype=np.complex128), -1)
    m[np.diag_indices(n)] = h / 2
    return DiscretizedOperator(m, n, power=1)


def operator_power(op: DiscretizedOperator, n: int) -> DiscretizedOperator:
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"power must be a positive integer, got {n!r}")
    m = np.linalg.matrix_power(np.asarray(op.matrix), int(n))
    power = op.power * int(n) if op.power is not None else None
    return DiscretizedOperator(m, op.grid_n, power=power)


def _matrix_of(t) -> np.ndarray:
    if isinstance(t, DiscretizedOperator):
        return np.asarray(t.matrix)
    return as_complex_matrix(t)


def moebius_transform(t, p: MoebiusParams, check: bool = True, rcond_min: float = RCOND_MIN) -> np.ndarray:
    """Return (I + lam T)(I + mu T)^{-1}.

    Solves X (I + mu T) = (I + lam T) through an LU factorization rather than
    forming the inverse. With ``check`` set, a reciprocal 1-norm condition
    estimate below ``rcond_min`` raises :class:`SingularPencilError`.
    """
    a = _matrix_of(t)
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    denom = eye + p.mu * a
    numer = eye + p.lam * a
    if p.lam == p.mu:
        return eye
    # X D = N  <=>  D^T X^T = N^T
    lu, piv = lu_factor(denom.T)
    if check:
        rcond = _rcond(lu, denom.T)
        if not rcond >= rcond_min:
            raise SingularPencilError(
                f"I + mu*T is numerically singular (rcond ~ {rcond:.3e}) for mu={p.mu}", rcond=rcond
            )
    return sla.lu_solve((lu, piv), numer.T, check_finite=False).T


def lu_factor(a):
    """LU factorization; exact singularity is left to the rcond check."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        return sla.lu_factor(a, check_finite=False)


def _rcond(lu: np.ndarray, a: np.ndarray) -> float:
    if np.any(np.diag(lu) == 0):
        return 0.0
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    anorm = np.linalg.norm(a, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    return float(rcond) if info == 0 else 0.0


def random_invertible_matrix(
    dim: int,
    seed: int,
    condition_cap: float = CONDITION_CAP,
    max_tries: int = 100,
) -> np.ndarray:
    """Deterministic complex Gaussian matrix with condition number <= ``condition_cap``.

    Entries have variance 1/dim (real and imaginary parts each 1/(2 dim)), so
    the spectral norm stays O(1) across dimensions. Draws are rejected until
    the smallest singular value is at least 1e-8 / sqrt(dim) and the
    condition number is within the cap.
    """
    if int(dim) != dim or dim < 1:
        raise InvalidArgumentError(f"dim must be a positive integer, got {dim!r}")
    dim = int(dim)
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(2 * dim)
    floor = 1e-8 / np.sqrt(dim)
    for _ in range(max_tries):
        m = scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] >= floor and s[0] / s[-1] <= condition_cap:
            return m
    raise GenerationError(f"no matrix with condition <= {condition_cap:g} after {max_tries} draws")
