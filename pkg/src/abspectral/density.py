"""Local spectral density of the Aharonov-Bohm operator in the plane.

The density is

    rho_alpha(t) = sum_{n in Z} J_{|n - alpha|}(t)**2 ,

so that rho_alpha(sqrt(lambda) |x|) / (4 pi) is the density of states at
energy lambda and radius |x|.  The orders |n - alpha| split into two
families, alpha + m and 1 - alpha + m (m = 0, 1, ...); near t = 0 the first
behaves like t**(2 alpha) and the second like t**(2 - 2 alpha), which is how
the moment integrals remove the endpoint singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError
from .specfun import DEFAULT_POLICY, NumericPolicy, bessel_j, bessel_j_signed, sine_integral


@dataclass(frozen=True)
class FluxParameter:
    """Flux alpha in [0, 1) with its cached sin(alpha pi)."""

    alpha: float
    sin_pi_alpha: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 <= alpha < 1.0):
            raise DomainError(f"flux must satisfy 0 <= alpha < 1 (reduce modulo 1 first), got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sin_pi_alpha", math.sin(math.pi * alpha))

    @property
    def mirror(self) -> "FluxParameter":
        """The flux 1 - alpha, which has the same density."""
        return self if self.alpha == 0 else FluxParameter(1.0 - self.alpha)


def as_flux(alpha) -> FluxParameter:
    return alpha if isinstance(alpha, FluxParameter) else FluxParameter(alpha)


def _orders_needed(x) -> np.ndarray:
    # Beyond |n - alpha| ~ x + 20 x^(1/3) the terms are far below double precision.
    return np.ceil(np.asarray(x) + 20.0 * np.cbrt(x) + 10.0).astype(np.int64)


def _miller_square_sum(first_order: float, xs: np.ndarray, top: int) -> np.ndarray:
    # Backward recurrence J_{nu-1} = (2 nu / x) J_nu - J_{nu+1} from order
    # first_order + top, normalized against J at the two lowest orders.
    j_prev = np.zeros_like(xs)
    j_cur = np.ones_like(xs)
    total = j_cur * j_cur
    for m in range(top, 0, -1):
        j_prev, j_cur = j_cur, (2.0 * (first_order + m) / xs) * j_cur - j_prev
        total += j_cur * j_cur
        big = np.abs(j_cur) > 1e100
        if big.any():
            j_prev[big] *= 1e-100
            j_cur[big] *= 1e-100
            total[big] *= 1e-200
    true0 = special.jv(first_order, xs)
    true1 = special.jv(first_order + 1.0, xs)
    scale = (true0 * j_cur + true1 * j_prev) / (j_cur * j_cur + j_prev * j_prev)
    return (scale * np.sqrt(total)) ** 2


def family_square_sum(first_order: float, x: np.ndarray, policy: NumericPolicy) -> np.ndarray:
    """sum_{m >= 0} J_{first_order + m}(x)**2."""
    flat = np.ravel(x).astype(float)
    out = np.zeros_like(flat)
    nu_next = np.empty_like(flat)
    # x < 1 is summed directly: the recurrence ratios 2 nu / x blow up there.
    small = flat < 1.0
    if small.any():
        top = int(_orders_needed(np.array(1.0)))
        xs = flat[small]
        out[small] = sum(special.jv(first_order + m, xs) ** 2 for m in range(top + 1))
        nu_next[small] = first_order + top + 1
    large = ~small
    if large.any():
        xs = flat[large]
        top = int(_orders_needed(xs.max()))
        if top > policy.max_series_terms:
            raise AccuracyError(f"density series needs {top} orders, more than max_series_terms")
        out[large] = _miller_square_sum(first_order, xs, top)
        nu_next[large] = first_order + top + 1
    # Tail past the last order: J_{nu+1}/J_nu <= x / (2(nu+1) - x) once nu > x.
    q = flat / (2.0 * (nu_next + 1.0) - flat)
    tail = special.jv(nu_next, flat) ** 2 / (1.0 - q * q)
    if np.any(tail > policy.abs_tol) or not np.all(np.isfinite(out)):
        raise AccuracyError("density series tail bound not met")
    return out.reshape(np.shape(x))


def rho_families(alpha, x, policy: NumericPolicy = DEFAULT_POLICY) -> tuple[np.ndarray, np.ndarray]:
    """The two partial sums over orders alpha + m and 1 - alpha + m.

    Their sum is rho_alpha(x).  Kept apart so that callers can divide out
    the x**(2 alpha) and x**(2 - 2 alpha) behavior at the origin.
    """
    flux = as_flux(alpha)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("rho requires t >= 0")
    return (family_square_sum(flux.alpha, x, policy),
            family_square_sum(1.0 - flux.alpha, x, policy))


def rho(alpha, t, policy: NumericPolicy = DEFAULT_POLICY):
    """Local spectral density rho_alpha(t); scalar or array ``t``."""
    flux = as_flux(alpha)
    t_a = np.asarray(t, dtype=float)
    if np.any(t_a < 0):
        raise DomainError("rho requires t >= 0")
    if flux.alpha == 0:
        out = np.ones_like(t_a)
    else:
        a, b = rho_families(flux, t_a, policy)
        out = a + b
    return float(out) if out.ndim == 0 else out


def rho_prime_terms(alpha, x, policy: NumericPolicy = DEFAULT_POLICY) -> tuple[np.ndarray, np.ndarray]:
    """J_a J_{a-1} and J_{1-a} J_{-a} at x > 0; these sum to rho_alpha'."""
    flux = as_flux(alpha)
    x = np.asarray(x, dtype=float)
    a = flux.alpha
    first = np.asarray(bessel_j(a, x, policy)) * np.asarray(bessel_j_signed(a - 1.0, x, policy))
    second = np.asarray(bessel_j(1.0 - a, x, policy)) * np.asarray(bessel_j_signed(-a, x, policy))
    return first, second


def lowered_product(nu: float, x) -> np.ndarray:
    """J_nu(x) J_{nu-1}(x) for x > 0 from positive orders only.

    J_{nu-1} = (2 nu / x) J_nu - J_{nu+1} stands in for the connection
    formula; roughly three times cheaper when nu - 1 is a negative fraction.
    """
    x = np.asarray(x, dtype=float)
    j = special.jv(nu, x)
    return j * (2.0 * nu / x * j - special.jv(nu + 1.0, x))


def rho_prime(alpha, t, policy: NumericPolicy = DEFAULT_POLICY):
    """Derivative rho_alpha'(t) = J_a J_{a-1} + J_{1-a} J_{-a} for 0 < alpha < 1.

    At t = 0 the value is the one-sided limit: 4/pi for alpha = 1/2 and
    +inf otherwise (rho_alpha(t) grows like t**min(2a, 2-2a)).
    """
    flux = as_flux(alpha)
    if flux.alpha == 0:
        raise DomainError("rho_prime is defined for 0 < alpha < 1 (rho_0 is constant)")
    t_a = np.asarray(t, dtype=float)
    if np.any(t_a < 0):
        raise DomainError("rho_prime requires t >= 0")
    positive = t_a > 0
    first, second = rho_prime_terms(flux, np.where(positive, t_a, 1.0), policy)
    at_zero = 4.0 / math.pi if flux.alpha == 0.5 else math.inf
    out = np.where(positive, first + second, at_zero)
    return float(out) if out.ndim == 0 else out


def rho_asymptotic(alpha, t):
    """Two-term large-t form 1 - (sin(alpha pi)/pi) cos(2t)/t."""
    flux = as_flux(alpha)
    t_a = np.asarray(t, dtype=float)
    if np.any(t_a <= 0):
        raise DomainError("rho_asymptotic requires t > 0")
    out = 1.0 - flux.sin_pi_alpha / math.pi * np.cos(2.0 * t_a) / t_a
    return float(out) if out.ndim == 0 else out


def rho_half(t, policy: NumericPolicy = DEFAULT_POLICY):
    """Closed form rho_{1/2}(t) = (2/pi) Si(2t)."""
    t_a = np.asarray(t, dtype=float)
    if np.any(t_a < 0):
        raise DomainError("rho_half requires t >= 0")
    out = 2.0 / math.pi * np.asarray(sine_integral(2.0 * t_a, policy))
    return float(out) if out.ndim == 0 else out
