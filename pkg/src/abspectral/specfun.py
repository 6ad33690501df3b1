"""Special functions, quadrature and scalar root finding.

Everything above this layer talks to Bessel functions, the sine integral and
the integrators only through the functions defined here.  Bessel functions of
real order are evaluated by :mod:`scipy.special` (AMOS / Cephes); the wrappers
add the domain checks and the failure semantics the rest of the package relies
on.

The workhorse for the moment integrals is :func:`panel_integral`, a composite
Gauss rule for integrands of the form ``k**left * (L - k)**right * g(k)`` with
smooth ``g``: Gauss-Jacobi panels absorb the algebraic endpoint factors and
Gauss-Legendre panels cover the interior.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special as _special

from .errors import AccuracyError, BracketError, DomainError

_EPS = np.finfo(float).eps
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and limits threaded through every computation.

    ``max_quad_depth`` bounds adaptive refinement: quadrature may bisect (or
    double its panel count) at most this many times.  ``max_series_terms``
    bounds the number of Bessel orders summed in a series.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_series_terms: int = 20000
    max_quad_depth: int = 10
    root_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "root_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if self.rel_tol < 10 * _EPS:
            raise DomainError(f"rel_tol must be at least 10 machine epsilons, got {self.rel_tol!r}")
        if self.max_series_terms < 1 or self.max_quad_depth < 1:
            raise DomainError("max_series_terms and max_quad_depth must be positive")

    def replace(self, **changes) -> "NumericPolicy":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object], base: "NumericPolicy | None" = None) -> "NumericPolicy":
        """Build a policy from string-or-number values keyed by field name."""
        base = base or cls()
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        changes = {}
        for key, raw in mapping.items():
            name = key.strip().replace("-", "_")
            if name not in types:
                raise DomainError(f"unknown policy key {key!r}")
            kind = int if types[name] in (int, "int") else float
            try:
                changes[name] = kind(raw)
            except (TypeError, ValueError) as exc:
                raise DomainError(f"bad value for policy key {key!r}: {raw!r}") from exc
        return dataclasses.replace(base, **changes)


DEFAULT_POLICY = NumericPolicy()


def _as_output(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


# ---------------------------------------------------------------- Bessel ---

def bessel_j(nu, t, policy: NumericPolicy = DEFAULT_POLICY):
    """Bessel function of the first kind J_nu(t) for nu >= 0, t >= 0.

    Scalars give a float, array-likes broadcast and give an ndarray.
    """
    nu_a = np.asarray(nu, dtype=float)
    t_a = np.asarray(t, dtype=float)
    if np.any(nu_a < 0):
        raise DomainError("bessel_j requires nu >= 0; use bessel_j_signed for negative orders")
    if np.any(t_a < 0):
        raise DomainError("bessel_j requires t >= 0")
    out = _special.jv(nu_a, t_a)
    if not np.all(np.isfinite(out)):
        raise AccuracyError("J_nu evaluation did not return a finite value")
    return _as_output(out)


def bessel_y(nu, t, policy: NumericPolicy = DEFAULT_POLICY):
    """Bessel function of the second kind Y_nu(t) for nu >= 0, t > 0.

    Overflow for very large orders at small arguments is reported as ``-inf``,
    which is the correct sign of the limit.
    """
    nu_a = np.asarray(nu, dtype=float)
    t_a = np.asarray(t, dtype=float)
    if np.any(nu_a < 0):
        raise DomainError("bessel_y requires nu >= 0")
    if np.any(t_a <= 0):
        raise DomainError("bessel_y is singular at t = 0 and undefined for t < 0")
    out = _special.yv(nu_a, t_a)
    if np.any(np.isnan(out)):
        raise AccuracyError("Y_nu evaluation returned NaN")
    return _as_output(out)


def bessel_j_signed(order: float, t, policy: NumericPolicy = DEFAULT_POLICY):
    """J of arbitrary real ``order`` at t >= 0.

    Negative integer orders use J_{-m} = (-1)^m J_m.  Negative fractional
    orders use J_{-nu} = J_nu cos(nu pi) - Y_nu sin(nu pi); at t = 0 they
    return the signed infinite limit.
    """
    order = float(order)
    if order >= 0:
        return bessel_j(order, t, policy)
    nu = -order
    if nu.is_integer():
        sign = -1.0 if int(nu) % 2 else 1.0
        return _as_output(sign * np.asarray(bessel_j(nu, t, policy)))
    t_a = np.asarray(t, dtype=float)
    if np.any(t_a < 0):
        raise DomainError("bessel_j_signed requires t >= 0")
    positive = t_a > 0
    safe_t = np.where(positive, t_a, 1.0)
    values = (math.cos(nu * math.pi) * _special.jv(nu, safe_t)
              - math.sin(nu * math.pi) * _special.yv(nu, safe_t))
    limit = math.copysign(math.inf, _special.rgamma(1.0 - nu))
    return _as_output(np.where(positive, values, limit))


def sine_integral(x, policy: NumericPolicy = DEFAULT_POLICY):
    """Si(x) = int_0^x sin(s)/s ds for x >= 0."""
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a < 0):
        raise DomainError("sine_integral requires x >= 0")
    return _as_output(_special.sici(x_a)[0])


# ------------------------------------------------------------ quadrature ---

def integrate(f: Callable[[float], float], a: float, b: float,
              policy: NumericPolicy = DEFAULT_POLICY, *,
              endpoint_powers: tuple[float, float] | None = None) -> float:
    """Adaptive integral of ``f`` over [a, b].

    With ``endpoint_powers=(p, q)`` the integrand is ``f(x) (x-a)**p (b-x)**q``
    and the algebraic factors are integrated exactly by QUADPACK's weighted
    rule; ``f`` must then be finite at both ends.  Without it, integrable
    endpoint singularities are handled by extrapolation.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if a > b:
        raise DomainError("integrate requires a <= b")
    if a == b:
        return 0.0
    kwargs = dict(epsabs=policy.abs_tol, epsrel=policy.rel_tol, limit=2 ** policy.max_quad_depth)
    if endpoint_powers is not None:
        p, q = endpoint_powers
        if p <= -1 or q <= -1:
            raise DomainError("endpoint powers must exceed -1")
        kwargs.update(weight="alg", wvar=(p, q))
    with warnings.catch_warnings():
        warnings.simplefilter("error", _integrate.IntegrationWarning)
        try:
            value, err = _integrate.quad(f, a, b, **kwargs)
        except _integrate.IntegrationWarning as exc:
            raise AccuracyError(f"quadrature did not converge: {exc}") from exc
    if not math.isfinite(value):
        raise AccuracyError("quadrature produced a non-finite value")
    return value


@lru_cache(maxsize=512)
def _panel_rule(panels: int, nodes: int, left: float, right: float) -> tuple[np.ndarray, np.ndarray]:
    # Rule on [0, 1] for u**left * (1-u)**right * g(u).
    h = 1.0 / panels
    x_leg, w_leg = _special.roots_legendre(nodes)
    x_l, w_l = _special.roots_jacobi(nodes, 0.0, left)
    x_r, w_r = _special.roots_jacobi(nodes, right, 0.0)
    ks, ws = [], []
    for i in range(panels):
        lo = i * h
        if i == 0:
            u = h * (1 + x_l) / 2
            w = w_l * (h / 2) ** (1 + left) * (1 - u) ** right
        elif i == panels - 1:
            u = lo + h * (1 + x_r) / 2
            w = w_r * (h / 2) ** (1 + right) * u ** left
        else:
            u = lo + h * (1 + x_leg) / 2
            w = w_leg * (h / 2) * u ** left * (1 - u) ** right
        ks.append(u)
        ws.append(w)
    k, w = np.concatenate(ks), np.concatenate(ws)
    k.flags.writeable = False
    w.flags.writeable = False
    return k, w


def panel_rule(panels: int, nodes: int, left: float, right: float,
               length: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^L k**left (L-k)**right g(k) dk.

    The first panel is a Gauss-Jacobi rule for the factor k**left, the last
    one for (L-k)**right, and interior panels are Gauss-Legendre.
    """
    if panels < 2 or nodes < 1:
        raise DomainError("panel_rule needs at least two panels and one node")
    if left <= -1 or right <= -1:
        raise DomainError("endpoint exponents must exceed -1")
    u, w = _panel_rule(int(panels), int(nodes), float(left), float(right))
    if length == 1.0:
        return u, w
    return u * length, w * length ** (1.0 + left + right)


def panel_integral(g: Callable[[np.ndarray], np.ndarray], left: float, right: float, *,
                   length: float = 1.0, frequency: float = 0.0, nodes: int = 16,
                   policy: NumericPolicy = DEFAULT_POLICY):
    """Integrate k**left (L-k)**right g(k) over [0, L] with error control.

    ``g`` maps a 1-D array of nodes to an array whose last axis runs over the
    nodes, so a batch of integrals (e.g. one per radius) is done in one call.
    ``frequency`` is the largest angular frequency of ``g`` in k and sets the
    initial panel width to about eight radians of phase.  Each level compares
    ``nodes`` and ``nodes + 8`` points per panel and doubles the panel count
    until every integral in the batch passes max(abs_tol, rel_tol |I|).

    Returns ``(value, error_estimate)``; scalars if ``g`` returns a vector.
    """
    panels = max(2, math.ceil(frequency * length / 8.0) + 1)
    for _ in range(policy.max_quad_depth + 1):
        k_lo, w_lo = panel_rule(panels, nodes, left, right, length)
        k_hi, w_hi = panel_rule(panels, nodes + 8, left, right, length)
        q_lo = np.sum(g(k_lo) * w_lo, axis=-1)
        q_hi = np.sum(g(k_hi) * w_hi, axis=-1)
        err = np.abs(q_hi - q_lo)
        if not np.all(np.isfinite(q_hi)):
            raise AccuracyError("non-finite integrand encountered in panel quadrature")
        if np.all(err <= np.maximum(policy.abs_tol, policy.rel_tol * np.abs(q_hi))):
            return _as_output(np.asarray(q_hi)), _as_output(np.asarray(err))
        panels *= 2
    raise AccuracyError(f"panel quadrature not converged after {policy.max_quad_depth} doublings "
                        f"(error {float(np.max(err)):.3e})")


# ---------------------------------------------------------- root finding ---

def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float,
                        policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Root of ``f`` in [lo, hi] by Brent's method (bisection-safeguarded
    secant / inverse quadratic interpolation)."""
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        raise AccuracyError("function is not finite at the bracket ends")
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(f"f({lo}) and f({hi}) have the same sign")
    try:
        return float(_optimize.brentq(f, lo, hi, xtol=policy.root_tol, rtol=4 * _EPS, maxiter=500))
    except RuntimeError as exc:
        raise AccuracyError(str(exc)) from exc


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on [lo, hi]; returns ``(x, f(x))``."""
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        if b - a <= 4 * _EPS * max(abs(a), abs(b)):
            break
    return (c, fc) if fc >= fd else (d, fd)
