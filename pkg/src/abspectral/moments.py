"""Riesz-type moments of the density and their large-r behavior.

    sigma_{alpha,gamma}(r) = int_0^1 (1 - lam)**gamma rho_alpha(sqrt(lam) r) dlam
                           = 2 int_0^1 k (1 - k^2)**gamma rho_alpha(k r) dk

tends to 1/(gamma + 1) as r -> oo, with an oscillating correction of size
r**-(2 + gamma).  All integrals are done in k with the panel rule from
:mod:`specfun`; the two density families are integrated separately so that
their k**(2 alpha) and k**(2 - 2 alpha) factors go into the Jacobi weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import FluxParameter, as_flux, family_square_sum, lowered_product
from .errors import DomainError
from .specfun import (DEFAULT_POLICY, NumericPolicy, _as_output, bessel_j, bessel_j_signed,
                      integrate, panel_integral)


@dataclass(frozen=True)
class MomentOrder:
    """Exponent gamma > -1 of the weight (1 - lam)**gamma."""

    gamma: float

    def __post_init__(self):
        gamma = float(self.gamma)
        if not (gamma > -1.0 and math.isfinite(gamma)):
            raise DomainError(f"moment order must be a finite number > -1, got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def limit(self) -> float:
        """Large-r limit 1/(gamma + 1) of sigma."""
        return 1.0 / (self.gamma + 1.0)

    @property
    def bly_valid(self) -> bool:
        # Sum-of-powers (Berezin-Li-Yau type) bounds are known to hold from gamma = 1 on.
        return self.gamma >= 1.0


def as_order(gamma) -> MomentOrder:
    return gamma if isinstance(gamma, MomentOrder) else MomentOrder(gamma)


def c_gamma(gamma) -> float:
    """Gamma(gamma + 1) / (sqrt(pi) Gamma(gamma + 3/2))."""
    g = as_order(gamma).gamma
    return math.exp(math.lgamma(g + 1.0) - math.lgamma(g + 1.5)) / math.sqrt(math.pi)


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Large-r form of int_0^1 J_nu(k r) k (1 - k^2)**(beta - 1) dk.

    The oscillating part is
    amplitude * r**-(beta + 1/2) * (cos(r - r0) + (d1 / r) sin(r - r0)).
    """

    beta: float
    nu: float
    r0: float = field(init=False)
    d1: float = field(init=False)
    amplitude: float = field(init=False)

    def __post_init__(self):
        if not self.beta > 0 or not -2.0 < self.nu < 2.0:
            raise DomainError("need beta > 0 and -2 < nu < 2")
        b, n = float(self.beta), float(self.nu)
        object.__setattr__(self, "r0", 0.5 * math.pi * (b + n + 0.5))
        object.__setattr__(self, "d1", 0.125 - 0.5 * (b * b + n * n))
        object.__setattr__(self, "amplitude",
                           math.gamma(b) / (2.0 * math.sqrt(math.pi)) * 2.0 ** (b + 0.5))

    @classmethod
    def for_moment(cls, alpha, gamma, sign: int = 1) -> "AsymptoticCoefficients":
        """Coefficients with beta = gamma + 3/2 and nu = sign * (2 alpha - 1)."""
        a, g = as_flux(alpha).alpha, as_order(gamma).gamma
        return cls(g + 1.5, math.copysign(1.0, sign) * (2.0 * a - 1.0))

    def oscillating(self, r):
        r = np.asarray(r, dtype=float)
        phase = r - self.r0
        out = self.amplitude * r ** -(self.beta + 0.5) * (np.cos(phase) + self.d1 / r * np.sin(phase))
        return _as_output(out)


def combined_d1(alpha, gamma) -> float:
    """d1 of the derivative expansion: (1 - 4((gamma + 3/2)^2 + (1 - 2 alpha)^2)) / 8."""
    a, g = as_flux(alpha).alpha, as_order(gamma).gamma
    return (1.0 - 4.0 * ((g + 1.5) ** 2 + (1.0 - 2.0 * a) ** 2)) / 8.0


def _radii(r, strict: bool, name: str) -> np.ndarray:
    r_a = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r_a)):
        raise DomainError(f"{name} requires finite r")
    if strict and np.any(r_a <= 0):
        raise DomainError(f"{name} requires r > 0")
    if np.any(r_a < 0):
        raise DomainError(f"{name} requires r >= 0")
    return r_a


def _family_moment(first_order: float, weight, left_extra: float, right: float,
                   rs: np.ndarray, length: float, policy: NumericPolicy) -> np.ndarray:
    # int_0^L k**(1 + 2 first_order) (L - k)**right * weight(k) * S(k r) / k**(2 first_order)
    p = 2.0 * first_order

    def g(k):
        x = np.multiply.outer(rs, k)
        return weight(k) * family_square_sum(first_order, x, policy) / k ** p

    value, _ = panel_integral(g, left_extra + p, right, length=length,
                              frequency=2.0 * float(rs.max()), policy=policy)
    return np.atleast_1d(value)


def sigma(alpha, gamma, r, policy: NumericPolicy = DEFAULT_POLICY):
    """sigma_{alpha,gamma}(r) for scalar or array r >= 0 (sum form)."""
    flux, order = as_flux(alpha), as_order(gamma)
    r_a = _radii(r, False, "sigma")
    if flux.alpha == 0:
        return _as_output(np.full(r_a.shape, order.limit))
    out = np.zeros(r_a.shape)
    pos = r_a > 0
    if pos.any():
        rs = r_a[pos]
        g = order.gamma

        def weight(k):
            return 2.0 * (1.0 + k) ** g

        out[pos] = (_family_moment(flux.alpha, weight, 1.0, g, rs, 1.0, policy)
                    + _family_moment(1.0 - flux.alpha, weight, 1.0, g, rs, 1.0, policy))
    return _as_output(out)


def by_parts_integral(alpha, gamma, r, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """r int_0^1 (1 - k^2)**(gamma + 1) rho_alpha'(k r) dk, which equals (gamma + 1) sigma.

    Vectorized over r > 0 with one panel count shared by the whole batch.
    """
    flux, order = as_flux(alpha), as_order(gamma)
    rs = np.atleast_1d(_radii(r, True, "by_parts_integral"))
    a, g1 = flux.alpha, order.gamma + 1.0
    first, second = _split_derivative_integrals(a, g1, 2 * a - 1, 1 - 2 * a, rs, policy)
    return rs * (first + second)


def _split_derivative_integrals(a: float, right: float, left1: float, left2: float,
                                rs: np.ndarray, policy: NumericPolicy):
    # int_0^1 k**extra (1 - k^2)**right * product(k r) dk for the two products,
    # with extra = left - (2a - 1) resp. left - (1 - 2a).  The products behave
    # like k**(2a - 1) and k**(1 - 2a) near k = 0; those powers are divided
    # out of g and the full k**left goes into the Jacobi weight.
    def g_first(k):
        return (1.0 + k) ** right * lowered_product(a, np.multiply.outer(rs, k)) / k ** (2 * a - 1)

    def g_second(k):
        return (1.0 + k) ** right * lowered_product(1.0 - a, np.multiply.outer(rs, k)) / k ** (1 - 2 * a)

    freq = 2.0 * float(rs.max())
    first, _ = panel_integral(g_first, left1, right, frequency=freq, policy=policy)
    second, _ = panel_integral(g_second, left2, right, frequency=freq, policy=policy)
    return np.atleast_1d(first), np.atleast_1d(second)


def sigma_by_parts(alpha, gamma, r, policy: NumericPolicy = DEFAULT_POLICY):
    """sigma through the derivative of the density (integration by parts in k)."""
    flux, order = as_flux(alpha), as_order(gamma)
    r_a = _radii(r, False, "sigma_by_parts")
    if flux.alpha == 0:
        return _as_output(np.full(r_a.shape, order.limit))
    out = np.zeros(r_a.shape)
    pos = r_a > 0
    if pos.any():
        out[pos] = by_parts_integral(flux, order, r_a[pos], policy) / (order.gamma + 1.0)
    return _as_output(out)


def sigma_prime(alpha, gamma, r, policy: NumericPolicy = DEFAULT_POLICY):
    """d sigma / dr = 2 int_0^1 k^2 (1 - k^2)**gamma rho_alpha'(k r) dk, r > 0."""
    flux, order = as_flux(alpha), as_order(gamma)
    r_a = _radii(r, True, "sigma_prime")
    if flux.alpha == 0:
        return _as_output(np.zeros(r_a.shape))
    rs = np.atleast_1d(r_a).ravel()
    a = flux.alpha
    first, second = _split_derivative_integrals(a, order.gamma, 1 + 2 * a, 3 - 2 * a, rs, policy)
    out = (2.0 * (first + second)).reshape(r_a.shape)
    return _as_output(out)


def sigma_asymptotic(alpha, gamma, r, terms: int = 2):
    """Large-r form of sigma with one or two terms."""
    flux, order = as_flux(alpha), as_order(gamma)
    if terms not in (1, 2):
        raise DomainError("terms must be 1 or 2")
    r_a = _radii(r, True, "sigma_asymptotic")
    g = order.gamma
    out = np.full(r_a.shape, order.limit)
    if terms == 2:
        out = out - (math.gamma(g + 1.0) * flux.sin_pi_alpha / math.pi
                     * np.sin(2.0 * r_a - 0.5 * g * math.pi) / r_a ** (2.0 + g))
    return _as_output(out)


def sigma_prime_asymptotic(alpha, gamma, r):
    """Two-term large-r form of sigma_prime."""
    flux, order = as_flux(alpha), as_order(gamma)
    r_a = _radii(r, True, "sigma_prime_asymptotic")
    g = order.gamma
    d1 = combined_d1(flux, order)
    phase = 2.0 * r_a - 0.5 * g * math.pi
    out = (math.gamma(g + 1.0) / r_a ** (g + 2.0) * flux.sin_pi_alpha / math.pi
           * (-2.0 * np.cos(phase) - d1 / r_a * np.sin(phase)))
    return _as_output(out)


def laplace_cutoff(policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """lam_max with e**-lam_max below abs_tol, with some margin."""
    return -math.log(policy.abs_tol) + 5.0


def sigma_laplace(alpha, r, policy: NumericPolicy = DEFAULT_POLICY):
    """int_0^oo exp(-lam) rho_alpha(sqrt(lam) r) dlam, truncated at laplace_cutoff."""
    flux = as_flux(alpha)
    r_a = _radii(r, False, "sigma_laplace")
    if flux.alpha == 0:
        return _as_output(np.ones(r_a.shape))
    out = np.zeros(r_a.shape)
    pos = r_a > 0
    if pos.any():
        rs = r_a[pos]
        length = math.sqrt(laplace_cutoff(policy))

        def weight(k):
            return 2.0 * np.exp(-k * k)

        out[pos] = (_family_moment(flux.alpha, weight, 1.0, 0.0, rs, length, policy)
                    + _family_moment(1.0 - flux.alpha, weight, 1.0, 0.0, rs, length, policy))
    return _as_output(out)


def laplace_complement(alpha, r, policy: NumericPolicy = DEFAULT_POLICY):
    """1 - sigma_laplace, computed without cancellation.

    Weber's integral turns each order into exp(-z) I_nu(z) with z = r^2/2,
    and Schlafli's integral for I_nu then sums over both families to

        (sin(pi alpha)/pi) exp(-r^2) int_0^oo exp(-r^2 sinh^2(t/2))
            (exp(-alpha t) + exp(-(1-alpha) t)) / (1 + exp(-t)) dt,

    which is positive and decreasing in r.  At alpha = 1/2 it is erfc(r).
    """
    flux = as_flux(alpha)
    r_a = _radii(r, False, "laplace_complement")
    if flux.alpha == 0:
        return _as_output(np.zeros(r_a.shape))
    a = flux.alpha
    slow = min(a, 1.0 - a)
    cut = laplace_cutoff(policy)
    scale = flux.sin_pi_alpha / math.pi
    out = np.empty(r_a.shape)
    for i, rv in enumerate(r_a.flat):
        r2 = float(rv) * float(rv)
        upper = cut / slow
        if r2 > 0:
            upper = min(upper, 2.0 * math.asinh(math.sqrt(cut / r2)))

        def f(t, r2=r2):
            return math.exp(-r2 * math.sinh(0.5 * t) ** 2 - a * t) * (
                1.0 + math.exp(-(1.0 - 2.0 * a) * t)) / (1.0 + math.exp(-t))

        out.flat[i] = scale * math.exp(-r2) * integrate(f, 0.0, upper, policy)
    return _as_output(out)


def inteq_sides(nu: float, gamma, r: float, policy: NumericPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Both sides of

        int_0^1 J_{nu+1/2}(kr) J_{nu-1/2}(kr) k^2 (1-k^2)**gamma dk
            = c_gamma int_0^1 J_{2 nu}(2kr) k (1-k^2)**(gamma+1/2) dk .
    """
    order = as_order(gamma)
    if not nu > -0.5:
        raise DomainError("need nu > -1/2")
    if not r > 0:
        raise DomainError("need r > 0")
    g = order.gamma
    p = 2.0 * nu
    freq = 2.0 * r

    def lhs_g(k):
        x = r * k
        return (1.0 + k) ** g * bessel_j(nu + 0.5, x, policy) * bessel_j_signed(nu - 0.5, x, policy) / k ** p

    def rhs_g(k):
        return (1.0 + k) ** (g + 0.5) * bessel_j(p, 2.0 * r * k, policy) / k ** p

    lhs, _ = panel_integral(lhs_g, 2.0 + p, g, frequency=freq, policy=policy)
    rhs, _ = panel_integral(rhs_g, 1.0 + p, g + 0.5, frequency=freq, policy=policy)
    return float(lhs), c_gamma(order) * float(rhs)


def cross_check_inteq(nu: float, gamma, r: float, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Residual |LHS - RHS| of the Bessel product identity in :func:`inteq_sides`."""
    lhs, rhs = inteq_sides(nu, gamma, r, policy)
    return abs(lhs - rhs)


__all__ = [
    "MomentOrder", "AsymptoticCoefficients", "FluxParameter", "as_order", "c_gamma", "combined_d1",
    "sigma", "sigma_by_parts", "by_parts_integral", "sigma_prime", "sigma_asymptotic",
    "sigma_prime_asymptotic", "sigma_laplace", "laplace_cutoff", "inteq_sides", "cross_check_inteq",
]
