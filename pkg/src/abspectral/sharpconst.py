"""The sharp constant R_gamma(alpha) = (gamma + 1) sup_r sigma_{alpha,gamma}(r).

The supremum is searched on the by-parts form

    (gamma + 1) sigma(r) = r int_0^1 (1 - k^2)**(gamma + 1) rho_alpha'(k r) dk ,

first on a grid of step pi/8 (the oscillation has period pi in r), then by
golden-section refinement around the promising local maxima.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import as_flux
from .errors import DomainError, SearchError
from .moments import as_order, by_parts_integral
from .specfun import DEFAULT_POLICY, NumericPolicy, golden_section_max

CANONICAL_ALPHAS = (0.1, 0.2, 0.3, 0.4, 0.5)
CANONICAL_GAMMAS = (0.0, 0.5, 1.0, 1.5, 2.0)

GRID_STEP = math.pi / 8
_BLOCK = 100


@dataclass(frozen=True)
class SupremumResult:
    alpha: float
    gamma: float
    value: float
    argmax_r: float
    grid_resolution: float
    refined: bool
    window: float = math.nan
    tail_envelope: float = math.nan

    def __post_init__(self):
        if not self.value >= 1.0 - 1e-9:
            raise SearchError(f"supremum {self.value} is below the large-r limit 1")


def search_window(gamma) -> float:
    """Upper end R_max of the search grid."""
    g = as_order(gamma).gamma
    return max(40.0, ((g + 1.0) * math.gamma(g + 1.0) / (math.pi * 1e-6)) ** (1.0 / (2.0 + g)))


def tail_envelope(alpha, gamma, r: float) -> float:
    """Bound on |(gamma + 1) sigma - 1| from the leading oscillating term."""
    a, g = as_flux(alpha), as_order(gamma).gamma
    return (g + 1.0) * math.gamma(g + 1.0) * a.sin_pi_alpha / math.pi / r ** (2.0 + g)


def scaled_sigma(alpha, gamma, r, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """(gamma + 1) sigma_{alpha,gamma}(r) on a grid of radii, in blocks."""
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(rs)
    for i in range(0, rs.size, _BLOCK):
        out[i:i + _BLOCK] = by_parts_integral(alpha, gamma, rs[i:i + _BLOCK], policy)
    return out


def _peak_bound(y0: float, y1: float, y2: float) -> float:
    # Vertex of the parabola through three equally spaced samples, with the
    # excess over the middle sample doubled to cover the interpolation error.
    curv = y0 - 2.0 * y1 + y2
    if curv >= 0:
        return max(y0, y1, y2)
    peak = y1 - (y2 - y0) ** 2 / (8.0 * curv)
    return y1 + 2.0 * (peak - y1) + 1e-12


def r_constant(alpha, gamma, policy: NumericPolicy = DEFAULT_POLICY) -> SupremumResult:
    """R_gamma(alpha) by grid search and golden-section refinement."""
    flux, order = as_flux(alpha), as_order(gamma)
    if flux.alpha == 0:
        raise DomainError("r_constant requires 0 < alpha < 1")
    r_max = search_window(order)
    rs = GRID_STEP * np.arange(1, math.ceil(r_max / GRID_STEP) + 1)
    vals = scaled_sigma(flux, order, rs, policy)
    i_best = int(np.argmax(vals))
    best_r, best = float(rs[i_best]), float(vals[i_best])
    refined = False

    def objective(r):
        return float(by_parts_integral(flux, order, r, policy)[0])

    for i in range(1, rs.size - 1):
        if not (vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]):
            continue
        if _peak_bound(vals[i - 1], vals[i], vals[i + 1]) < best:
            continue
        x, fx = golden_section_max(objective, rs[i - 1], rs[i + 1], policy.root_tol)
        refined = True
        if fx > best or (fx == best and x < best_r):
            best_r, best = x, fx

    envelope = tail_envelope(flux, order, r_max)
    if not envelope < 0.5 * (best - 1.0):
        raise SearchError(f"tail envelope {envelope:.3e} at r = {r_max:.1f} does not clear "
                          f"half the excess {best - 1.0:.3e}")
    return SupremumResult(flux.alpha, order.gamma, best, best_r, GRID_STEP, refined, r_max, envelope)


def _cell(args):
    alpha, gamma, policy = args
    return r_constant(alpha, gamma, policy)


def r_constant_table(alphas: Sequence[float], gammas: Sequence[float],
                     policy: NumericPolicy = DEFAULT_POLICY, jobs: int = 1) -> list[list[SupremumResult]]:
    """Rows over gamma, columns over alpha."""
    if len(alphas) == 0 or len(gammas) == 0:
        raise DomainError("alphas and gammas must be non-empty")
    cells = [(as_flux(a), as_order(g), policy) for g in gammas for a in alphas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_cell, cells))
    else:
        flat = [_cell(c) for c in cells]
    n = len(alphas)
    return [flat[i:i + n] for i in range(0, len(flat), n)]
