"""Checks of the diamagnetic comparison between H_alpha and -Delta.

For phi(E) = (Lambda - E)_+^gamma the diagonal of phi(H_alpha) is

    phi(H_alpha)(x, x) = Lambda^(gamma+1) / (4 pi) * sigma_{alpha,gamma}(sqrt(Lambda) |x|),

while phi(-Delta)(x, x) = Lambda^(gamma+1) / (4 pi (gamma + 1)).  The
difference oscillates in |x|, so on suitable thin annuli its integral is
positive, and the local trace comparison fails there.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import as_flux
from .errors import DomainError, EmptyResult, UnsupportedError
from .moments import as_order, sigma_by_parts
from .sharpconst import r_constant
from .spectra import SpectrumTable, Square, riesz_sum
from .specfun import DEFAULT_POLICY, NumericPolicy, _as_output

# |gap - predicted_gap| <= C2 Lambda^((gamma-1)/2) / |x|^(3+gamma) once
# sqrt(Lambda) |x| >= C1; calibrated for 0 < alpha < 1, 0 <= gamma <= 2.
GAP_C1 = 5.0
GAP_C2 = 0.1

_GL_NODES = 24


@dataclass(frozen=True)
class PointwiseDensityGap:
    x_radius: float | np.ndarray
    Lambda: float
    gap: float | np.ndarray
    predicted_gap: float | np.ndarray


def density_gap(alpha, gamma, Lambda: float, x_radius, policy: NumericPolicy = DEFAULT_POLICY) -> PointwiseDensityGap:
    """phi(H_alpha)(x, x) - phi(-Delta)(x, x) for phi(E) = (Lambda - E)_+^gamma.

    ``predicted_gap`` is the leading oscillating term; it is nan at x = 0.
    """
    flux, order = as_flux(alpha), as_order(gamma)
    if not Lambda > 0:
        raise DomainError("Lambda must be positive")
    x = np.asarray(x_radius, dtype=float)
    if np.any(x < 0):
        raise DomainError("x_radius must be >= 0")
    g = order.gamma
    root = math.sqrt(Lambda)
    scale = Lambda ** (g + 1.0) / (4.0 * math.pi)
    gap = scale * (np.asarray(sigma_by_parts(flux, order, root * x, policy)) - order.limit)
    amp = Lambda ** (g / 2.0) * math.gamma(g + 1.0) * flux.sin_pi_alpha / (2.0 * math.pi) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        predicted = np.where(x > 0, -amp * np.sin(2.0 * root * x - 0.5 * g * math.pi) / x ** (2.0 + g), np.nan)
    return PointwiseDensityGap(_as_output(x), float(Lambda), _as_output(gap), _as_output(predicted))


def annulus_center(n: int, gamma) -> float:
    """r_n = pi (n + (gamma - 1)/4), where sin(2 r_n - gamma pi / 2) = -1."""
    return math.pi * (n + (as_order(gamma).gamma - 1.0) / 4.0)


def _annulus_nodes(centers: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    lo = np.maximum(centers - epsilon, 0.0)
    hi = centers + epsilon
    half = 0.5 * (hi - lo)
    s = (0.5 * (hi + lo))[:, None] + half[:, None] * x
    return s, half[:, None] * w


def annulus_trace_gaps(alpha, gamma, Lambda: float, epsilon: float, ns: Sequence[int],
                       policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Integral of the density gap over {x : |sqrt(Lambda)|x| - r_n| < epsilon} for each n.

    In s = sqrt(Lambda)|x| this is
    (Lambda^gamma / 2) int (sigma(s) - 1/(gamma+1)) s ds.
    """
    flux, order = as_flux(alpha), as_order(gamma)
    if not Lambda > 0:
        raise DomainError("Lambda must be positive")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    ns = np.asarray(ns, dtype=int)
    centers = np.array([annulus_center(int(n), order) for n in ns])
    if np.any(centers + epsilon <= 0):
        raise DomainError("annulus lies entirely at negative radius; increase n")
    s, w = _annulus_nodes(centers, epsilon)
    vals = np.asarray(sigma_by_parts(flux, order, s.ravel(), policy)).reshape(s.shape) - order.limit
    return 0.5 * Lambda ** order.gamma * np.sum(w * vals * s, axis=1)


def predicted_trace_gaps(alpha, gamma, Lambda: float, epsilon: float, ns: Sequence[int]) -> np.ndarray:
    """Same integrals with sigma replaced by its two-term large-s form."""
    flux, order = as_flux(alpha), as_order(gamma)
    g = order.gamma
    centers = np.array([annulus_center(int(n), order) for n in ns])
    s, w = _annulus_nodes(centers, epsilon)
    amp = math.gamma(g + 1.0) * flux.sin_pi_alpha / math.pi
    with np.errstate(divide="ignore"):
        osc = -amp * np.sin(2.0 * s - 0.5 * g * math.pi) / s ** (2.0 + g)
    return 0.5 * Lambda ** g * np.sum(w * osc * s, axis=1)


def find_violating_annulus(alpha, gamma, Lambda: float, epsilon: float = 0.3,
                           n_range: tuple[int, int] = (1, 40),
                           policy: NumericPolicy = DEFAULT_POLICY) -> list[tuple[int, float]]:
    """Annuli (n, trace_gap) in n_range (inclusive) on which the trace gap is positive."""
    order = as_order(gamma)
    if order.gamma < 1:
        warnings.warn("the violation is established for gamma >= 1; smaller gamma is exploratory",
                      stacklevel=2)
    lo, hi = n_range
    if lo > hi:
        raise DomainError("empty n_range")
    ns = list(range(lo, hi + 1))
    gaps = annulus_trace_gaps(alpha, order, Lambda, epsilon, ns, policy)
    hits = [(n, float(gv)) for n, gv in zip(ns, gaps) if gv > 0]
    if not hits:
        raise EmptyResult(f"no violating annulus for n in [{lo}, {hi}]")
    return hits


@dataclass(frozen=True)
class BlyCheck:
    Lambda: float
    lhs: float
    rhs: float
    satisfied: bool
    semiclassical: float = math.nan

    @property
    def unit_ratio(self) -> float:
        """lhs over the semiclassical term without the excess factor."""
        return self.lhs / self.semiclassical if self.semiclassical > 0 else 0.0


def check_bly_bound(spec: SpectrumTable, gamma, Lambdas, policy: NumericPolicy = DEFAULT_POLICY,
                    r_value: float | None = None) -> list[BlyCheck]:
    """Compare sum (Lambda - lambda_j)_+^gamma with R_gamma(alpha) |Omega| Lambda^(gamma+1) / (4 pi (gamma+1)).

    ``r_value`` overrides the computed R_gamma(alpha).
    """
    order = as_order(gamma)
    if order.gamma < 1:
        raise DomainError("the bound is stated for gamma >= 1")
    if isinstance(spec.domain, Square) and spec.alpha.alpha != 0:
        raise UnsupportedError("no square spectrum with flux")
    lam = np.atleast_1d(np.asarray(Lambdas, dtype=float))
    lhs = riesz_sum(spec, order, lam)
    if r_value is None:
        r_value = 1.0 if spec.alpha.alpha == 0 else r_constant(spec.alpha, order, policy).value
    g = order.gamma
    semi = spec.domain.area * lam ** (g + 1.0) / (4.0 * math.pi * (g + 1.0))
    rhs = r_value * semi
    return [BlyCheck(float(L), float(a), float(b), bool(a <= b * (1.0 + 1e-9)), float(c))
            for L, a, b, c in zip(lam, lhs, rhs, semi)]


def unit_constant_excess(checks: Sequence[BlyCheck]) -> float:
    """max lhs / semiclassical over the checks (the bound with constant 1 needs <= 1)."""
    return max((c.unit_ratio for c in checks), default=0.0)
