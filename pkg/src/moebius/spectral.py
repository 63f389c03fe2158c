"""Numerical kernels: spectral norm, extremal Hermitian eigenpairs, eigenvalues
and the matrix exponential."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, InvalidArgumentError, RangeError
from .operators import as_complex_matrix

HERMITIAN_TOL = 1e-12
EXPM_MAX_NORM = 50.0
# Above this dimension a dense SVD costs about as much as a few dozen power
# iterations, and Moebius matrices I + K have clustered top singular values.
POWER_DIM_LIMIT = 64
AUTO_POWER_BUDGET = 500
LANCZOS_DIM = 128


@dataclass(frozen=True)
class SpectralConfig:
    """Tolerances for the iterative kernels.

    ``norm_method`` selects the spectral-norm kernel: ``"power"`` (power
    iteration on A*A, raising :class:`ConvergenceError` when it stalls),
    ``"svd"`` (dense LAPACK singular values) or ``"auto"`` (power iteration
    on small matrices with a dense fallback, dense SVD otherwise).
    """

    power_iter_tol: float = 1e-12
    power_iter_max: int = 10_000
    eig_tol: float = 1e-11
    norm_method: str = "auto"

    def __post_init__(self):
        if not (self.power_iter_tol > 0 and self.eig_tol > 0):
            raise InvalidArgumentError("tolerances must be strictly positive")
        if self.power_iter_max < 1:
            raise InvalidArgumentError("power_iter_max must be >= 1")
        if self.norm_method not in ("auto", "power", "svd"):
            raise InvalidArgumentError(f"unknown norm_method {self.norm_method!r}")


DEFAULT_CONFIG = SpectralConfig()


def _start_vectors(n):
    v1 = np.ones(n, dtype=np.complex128)
    k = np.arange(n)
    # second start: quasi-random phases, generically not orthogonal to v1's complement
    v2 = np.exp(2j * np.pi * ((k * 0.6180339887498949) % 1.0)) * (1.0 + 0.5 * np.cos(k + 1.0))
    return v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)


def _power_sigma(a, v, tol, max_iter):
    ah = a.conj().T
    est = 0.0
    for _ in range(max_iter):
        w = a @ v
        new = float(np.vdot(w, w).real)
        if new == 0.0:
            return 0.0, v, True
        u = ah @ w
        v = u / np.linalg.norm(u)
        if abs(new - est) <= tol * new:
            return math.sqrt(new), v, True
        est = new
    return math.sqrt(est), v, False


def power_iteration_norm(a, cfg: SpectralConfig = DEFAULT_CONFIG, max_iter=None) -> float:
    """Largest singular value by power iteration on A*A.

    Runs from two fixed start vectors and returns the larger estimate, so a
    start vector orthogonal to the top singular vector cannot hide it.
    """
    a = as_complex_matrix(a)
    max_iter = cfg.power_iter_max if max_iter is None else max_iter
    best = 0.0
    for v0 in _start_vectors(a.shape[0]):
        sigma, v, ok = _power_sigma(a, v0, cfg.power_iter_tol, max_iter)
        if not ok:
            raise ConvergenceError(
                f"power iteration did not converge in {max_iter} iterations", last_iterate=v, last_value=sigma
            )
        best = max(best, sigma)
    return best


def spectral_norm(a, cfg: SpectralConfig = DEFAULT_CONFIG) -> float:
    """Operator 2-norm (largest singular value) of ``a``."""
    a = as_complex_matrix(a)
    method = cfg.norm_method
    if method == "svd" or (method == "auto" and a.shape[0] > POWER_DIM_LIMIT):
        return float(sla.svdvals(a, check_finite=False)[0])
    if method == "power":
        return power_iteration_norm(a, cfg)
    try:
        return power_iteration_norm(a, cfg, max_iter=min(cfg.power_iter_max, AUTO_POWER_BUDGET))
    except ConvergenceError:
        return float(sla.svdvals(a, check_finite=False)[0])


def check_hermitian(h, tol=HERMITIAN_TOL) -> np.ndarray:
    h = as_complex_matrix(h)
    if np.max(np.abs(h - h.conj().T)) > tol:
        raise InvalidArgumentError("matrix is not Hermitian")
    return h


def hermitian_part(a, theta: float = 0.0) -> np.ndarray:
    """(e^{-i theta} A + e^{i theta} A*) / 2, Hermitian to the last bit."""
    x = np.exp(-1j * theta) * np.asarray(a)
    return (x + x.conj().T) / 2


def hermitian_max_eig(h, cfg: SpectralConfig = DEFAULT_CONFIG):
    """Largest eigenvalue of a Hermitian matrix and a unit eigenvector.

    When the top eigenvalue is repeated, any unit vector of its eigenspace
    may be returned.
    """
    h = check_hermitian(h)
    n = h.shape[0]
    bound = cfg.eig_tol * (1.0 + np.linalg.norm(h, 1))
    if n > LANCZOS_DIM:
        # implicitly restarted Lanczos; the dense solver below is the fallback
        try:
            w, v = spla.eigsh(h, k=1, which="LA", v0=_start_vectors(n)[1], tol=1e-14)
            value, vec = float(w[0]), v[:, 0] / np.linalg.norm(v[:, 0])
            if np.linalg.norm(h @ vec - value * vec) <= bound:
                return value, vec
        except spla.ArpackError:
            pass
    try:
        w, v = sla.eigh(h, subset_by_index=[n - 1, n - 1], check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc
    value, vec = float(w[0]), v[:, 0]
    resid = np.linalg.norm(h @ vec - value * vec)
    if resid > bound:
        raise ConvergenceError(f"eigenpair residual {resid:.3e} too large", last_iterate=vec, last_value=value)
    return value, vec


def matrix_exponential(a, t: float = 1.0) -> np.ndarray:
    """exp(tA) by scaling and squaring with a Taylor kernel.

    tA is scaled by 2^-s until its 1-norm is at most 1/2, the series is
    summed until terms fall below double-precision roundoff, and the result
    is squared s times.
    """
    b = as_complex_matrix(a) * t
    nrm2 = np.linalg.norm(b, 2)
    if not nrm2 <= EXPM_MAX_NORM:
        raise RangeError(f"||tA|| = {nrm2:.3g} exceeds the supported range {EXPM_MAX_NORM}")
    n = b.shape[0]
    nrm1 = np.linalg.norm(b, 1)
    s = max(0, math.ceil(math.log2(nrm1 / 0.5))) if nrm1 > 0.5 else 0
    c = b / 2.0**s
    result = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, 40):
        term = term @ c / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(s):
        result = result @ result
    return result


def eigenvalues(a) -> np.ndarray:
    """All eigenvalues of ``a``.

    Triangular input has its diagonal returned directly: a general QR
    eigensolver scatters the eigenvalues of defective triangular matrices
    such as the discretized Volterra operator around the true value.
    """
    a = as_complex_matrix(a)
    if not np.any(np.triu(a, 1)) or not np.any(np.tril(a, -1)):
        return np.diag(a).copy()
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    resid = np.linalg.norm(a @ v - v * w, axis=0) / np.linalg.norm(v, axis=0)
    if np.any(resid > 1e-9 * max(np.linalg.norm(a, 2), np.finfo(float).tiny)):
        raise ConvergenceError("eigenvalue backward error above 1e-9 * ||A||")
    return w
