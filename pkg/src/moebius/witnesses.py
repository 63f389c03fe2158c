"""Explicit witness functions for the numerical ranges of V^{-1} and V^{-n}.

For g = V f the real part of <V^{-1} g, g> = <f, V f> equals |int f|^2 / 2,
so W(V^{-1}) sits in the closed right half-plane. The witnesses

    g_n(x) = exp(+-2 pi i n x) - 1      ->  quotient +-i pi n
    h_n(x) = x^n                        ->  quotient n + 1/2

push it out to the whole half-plane, and for n >= 2 the family
g_r(x) = x^n exp(r e^{i theta} x) has quotients r^n e^{i n theta}(1 + o(1))
as r -> infinity, which fills the plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError, RangeError
from .operators import GridFunction, build_volterra
from .quadrature import composite_nodes

R_MAX = 300.0
G_PANELS = 256


@dataclass(frozen=True)
class WitnessQuotient:
    """Rayleigh quotient <V^{-k} g, g> / ||g||^2 of one witness function."""

    description: str
    quotient: complex
    method: str
    quadrature_n: Optional[int] = None


def positivity_identity_check(f: GridFunction):
    """Return (Re <f, V_N f>, |h sum f|^2 / 2) in the discrete L2 product.

    With the half-weight diagonal, V_N + V_N* = h * ones, so both sides agree
    up to roundoff for every grid function.
    """
    h = f.step
    vf = build_volterra(f.grid_n).matrix @ f.values
    lhs = float((h * np.vdot(vf, f.values)).real)
    rhs = 0.5 * abs(h * f.values.sum()) ** 2
    return lhs, rhs


def _check_positive_int(n, least=1):
    if int(n) != n or n < least:
        raise InvalidArgumentError(f"n must be an integer >= {least}, got {n!r}")
    return int(n)


def witness_g_quotient(n: int, sign: int = 1, method: str = "closed_form", order: int = 16, panels: int = G_PANELS):
    n = _check_positive_int(n)
    if sign not in (1, -1):
        raise InvalidArgumentError("sign must be +1 or -1")
    desc = f"g_{n}{'+' if sign > 0 else '-'}"
    if method == "closed_form":
        return WitnessQuotient(desc, complex(0.0, sign * math.pi * n), "ClosedForm")
    if method != "quadrature":
        raise InvalidArgumentError(f"unknown method {method!r}")
    x, w = composite_nodes(0.0, 1.0, order, panels)
    k = 2j * math.pi * n * sign
    g = np.exp(k * x) - 1.0
    dg = k * np.exp(k * x)
    q = np.dot(w, dg * g.conj()) / np.dot(w, np.abs(g) ** 2)
    return WitnessQuotient(desc, complex(q), "Quadrature", order * panels)


def witness_h_quotient(n: int, method: str = "closed_form", order: int = 16, panels: int = 64):
    n = _check_positive_int(n)
    desc = f"h_{n}"
    if method == "closed_form":
        return WitnessQuotient(desc, complex(n + 0.5), "ClosedForm")
    if method != "quadrature":
        raise InvalidArgumentError(f"unknown method {method!r}")
    x, w = composite_nodes(0.0, 1.0, order, panels)
    q = np.dot(w, n * x ** (n - 1) * x**n) / np.dot(w, x ** (2 * n))
    return WitnessQuotient(desc, complex(q), "Quadrature", order * panels)


def _scaled_moments(c: float, powers, order: int, panels: int) -> np.ndarray:
    """int_0^1 x^m exp(c (x - 1)) dx for each m; the factor e^c is dropped."""
    x, w = composite_nodes(0.0, 1.0, order, panels)
    weight = w * np.exp(c * (x - 1.0))
    return np.array([np.dot(weight, x**m) for m in powers])


def witness_gr_quotient(n: int, theta: float, r: float, order: int = 16, panels: int = 64) -> WitnessQuotient:
    """<V^{-n} g_r, g_r> / ||g_r||^2 for g_r(x) = x^n exp(r e^{i theta} x).

    Uses the Leibniz expansion
        g_r^{(n)} = sum_k C(n,k) (n!/k!) (r e^{i theta})^k x^k exp(r e^{i theta} x)
    so the quotient is a combination of the moments
    int x^{n+k} exp(2 r cos(theta) x) dx, normalized by the k = n moment.
    The common factor exp(2 r cos theta) cancels and is never formed.
    """
    n = _check_positive_int(n, least=2)
    if not -math.pi / 2 < theta < math.pi / 2:
        raise InvalidArgumentError("theta must lie in (-pi/2, pi/2)")
    if not 0 < r <= R_MAX:
        raise RangeError(f"r must lie in (0, {R_MAX:g}] for the scaled quadrature, got {r}")
    c = 2.0 * r * math.cos(theta)
    moments = _scaled_moments(c, range(n, 2 * n + 1), order, panels)
    z = r * cmath.exp(1j * theta)
    total = sum(
        math.comb(n, k) * (math.factorial(n) / math.factorial(k)) * z**k * moments[k] for k in range(n + 1)
    )
    return WitnessQuotient(f"g_r(n={n}, theta={theta:.6g}, r={r:g})", complex(total / moments[n]), "Quadrature", order * panels)


def asymptotic_ratio_check(m: int, theta: float, r_list: Sequence[float], order: int = 16, panels: int = 64):
    """Ratios int x^m e^{cx} dx / int e^{cx} dx with c = 2 r cos(theta), one per r."""
    m = _check_positive_int(m, least=0)
    if math.cos(theta) <= 0:
        raise InvalidArgumentError("need cos(theta) > 0")
    out = []
    for r in r_list:
        if not 0 < r <= R_MAX:
            raise RangeError(f"r must lie in (0, {R_MAX:g}], got {r}")
        mom = _scaled_moments(2.0 * r * math.cos(theta), (0, m), order, panels)
        out.append(float(mom[1] / mom[0]))
    return out


def witness_points(n_max: int) -> np.ndarray:
    """All closed-form witness values +-i pi n and n + 1/2 for n <= n_max."""
    n_max = _check_positive_int(n_max)
    pts = []
    for n in range(1, n_max + 1):
        pts += [witness_g_quotient(n, 1).quotient, witness_g_quotient(n, -1).quotient, witness_h_quotient(n).quotient]
    return np.array(pts)
