"""Dirichlet spectra of the Aharonov-Bohm operator on discs, annuli and squares.

Separation of variables in polar coordinates turns the angular mode n into a
Bessel problem of order |n - alpha|:

* disc of radius R: lambda = (j_{nu,k} / R)**2 with j_{nu,k} the zeros of J_nu;
* annulus r1 < |x| < r2: lambda = (t / r1)**2 with t the zeros of the cross
  product J_nu(t) Y_nu(mu t) - J_nu(mu t) Y_nu(t), mu = r2 / r1.

The square is only supported without flux, where the spectrum is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import special

from .density import FluxParameter, as_flux
from .errors import DomainError, RangeError, UnsupportedError
from .moments import MomentOrder, as_order
from .specfun import DEFAULT_POLICY, NumericPolicy, find_root_bracketed


# ------------------------------------------------------------------ domains ---

@dataclass(frozen=True)
class Disc:
    radius: float = 1.0
    label: str | None = None

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("disc radius must be positive")

    kind = "disc"

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2

    @property
    def perimeter(self) -> float:
        return 2.0 * math.pi * self.radius

    def describe(self) -> str:
        return self.label or f"disc:{self.radius:g}"


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float
    label: str | None = None

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise DomainError("annulus needs 0 < inner < outer")

    kind = "annulus"

    @property
    def area(self) -> float:
        return math.pi * (self.outer ** 2 - self.inner ** 2)

    @property
    def perimeter(self) -> float:
        return 2.0 * math.pi * (self.inner + self.outer)

    @property
    def ratio(self) -> float:
        return self.outer / self.inner

    def describe(self) -> str:
        return self.label or f"annulus:{self.inner:g},{self.outer:g}"


@dataclass(frozen=True)
class Square:
    """The square [-h, h]^2."""

    halfside: float = 1.0
    label: str | None = None

    def __post_init__(self):
        if not self.halfside > 0:
            raise DomainError("square half-side must be positive")

    kind = "square"

    @property
    def area(self) -> float:
        return 4.0 * self.halfside ** 2

    @property
    def perimeter(self) -> float:
        return 8.0 * self.halfside

    def describe(self) -> str:
        return self.label or f"square:{self.halfside:g}"


DomainSpec = Union[Disc, Annulus, Square]

PRESETS: dict[str, DomainSpec] = {
    "A": Disc(1.0, "A"),
    "B": Square(1.0, "B"),
    "C": Annulus(1.0, 1.1, "C"),
    "D": Annulus(1.0, 2.0, "D"),
    "E": Annulus(1.0, 11.0, "E"),
}


def parse_domain(text: str) -> DomainSpec:
    """Preset letter A-E, or disc:R, annulus:r1,r2, square:h."""
    text = text.strip()
    if text.upper() in PRESETS:
        return PRESETS[text.upper()]
    kind, _, args = text.partition(":")
    try:
        values = [float(v) for v in args.split(",")] if args else []
    except ValueError:
        raise DomainError(f"cannot parse domain {text!r}") from None
    kind = kind.lower()
    if kind == "disc" and len(values) == 1:
        return Disc(values[0])
    if kind == "annulus" and len(values) == 2:
        return Annulus(values[0], values[1])
    if kind == "square" and len(values) == 1:
        return Square(values[0])
    raise DomainError(f"cannot parse domain {text!r}; use A-E, disc:R, annulus:r1,r2 or square:h")


# ------------------------------------------------------------- spectra ---

@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalues up to ``lambda_max`` in ascending order, with multiplicity.

    ``n`` and ``k`` label each eigenvalue: angular index and radial zero
    number for discs and annuli, the two mode numbers for the square.
    """

    lambdas: np.ndarray
    n: np.ndarray
    k: np.ndarray
    lambda_max: float
    alpha: FluxParameter
    domain: DomainSpec

    def __len__(self) -> int:
        return int(self.lambdas.size)

    @property
    def entries(self) -> list[tuple[float, int, int]]:
        return list(zip(self.lambdas.tolist(), self.n.tolist(), self.k.tolist()))

    def counting(self, Lambda) -> np.ndarray:
        """N(Lambda) = #{lambda_j < Lambda}."""
        return np.searchsorted(self.lambdas, np.asarray(Lambda, dtype=float), side="left")


def _sign_change_roots(f, grid: np.ndarray, values: np.ndarray, policy: NumericPolicy) -> list[float]:
    roots = []
    exact = np.flatnonzero(values == 0.0)
    roots.extend(grid[exact].tolist())
    flips = np.flatnonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))
    for i in flips:
        if values[i] == 0.0 or values[i + 1] == 0.0:
            continue
        roots.append(find_root_bracketed(f, grid[i], grid[i + 1], policy))
    return sorted(roots)


def bessel_zeros(nu: float, up_to: float, policy: NumericPolicy = DEFAULT_POLICY,
                 step: float = math.pi / 4) -> list[float]:
    """All zeros of J_nu in (0, up_to]."""
    if nu < 0:
        raise DomainError("bessel_zeros needs nu >= 0")
    if not up_to > 0:
        raise DomainError("bessel_zeros needs up_to > 0")
    # j_{nu,1} > nu, and J_nu > 0 on (0, max(nu, 1)].
    start = max(nu, 1.0)
    if start >= up_to:
        return []
    grid = np.append(np.arange(start, up_to, step), up_to)
    values = special.jv(nu, grid)

    def f(t):
        return float(special.jv(nu, t))

    return [t for t in _sign_change_roots(f, grid, values, policy) if t > start]


def _lower_bound_cross(nu: float, mu: float) -> float:
    # The radial problem on [1, mu] is -u'' + (nu^2 - 1/4) u / r^2 = t^2 u, so
    # t^2 exceeds pi^2 / (mu - 1)^2 plus the minimum of the potential.
    c = nu * nu - 0.25
    v_min = c / mu ** 2 if c >= 0 else c
    return math.sqrt(max(0.0, (math.pi / (mu - 1.0)) ** 2 + v_min))


def _unit_phasor(nu: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # (J, Y) / hypot(J, Y); where Y has overflowed the phasor is (0, -1).
    j, y = special.jv(nu, t), special.yv(nu, t)
    m = np.hypot(j, y)
    inf = np.isinf(y)
    with np.errstate(invalid="ignore"):
        c = np.where(inf, 0.0, j / m)
        s = np.where(inf, -1.0, y / m)
    return c, s


def cross_product(nu: float, mu: float, t) -> np.ndarray:
    """Envelope-normalized cross product sin(theta(mu t) - theta(t)).

    theta is the phase of J_nu + i Y_nu; the result has the sign and zeros
    of J_nu(t) Y_nu(mu t) - J_nu(mu t) Y_nu(t) and stays bounded by one.
    """
    t = np.asarray(t, dtype=float)
    c1, s1 = _unit_phasor(nu, t)
    c2, s2 = _unit_phasor(nu, mu * t)
    out = c1 * s2 - c2 * s1
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"cross product normalization failed for nu = {nu}")
    return out


def cross_product_zeros(nu: float, mu: float, up_to: float, policy: NumericPolicy = DEFAULT_POLICY,
                        refine: int = 4) -> list[float]:
    """All zeros t in (0, up_to] of J_nu(t) Y_nu(mu t) - J_nu(mu t) Y_nu(t).

    The scan step is pi / ((mu - 1) * refine), a fraction of the asymptotic
    spacing of the zeros.
    """
    if nu < 0:
        raise DomainError("cross_product_zeros needs nu >= 0")
    if not mu > 1:
        raise DomainError("cross_product_zeros needs mu > 1")
    if not up_to > 0:
        raise DomainError("cross_product_zeros needs up_to > 0")
    step = math.pi / (mu - 1.0) / refine
    start = _lower_bound_cross(nu, mu) - 0.5 * step
    start = max(start, 1e-3 * step)
    if start >= up_to:
        return []
    grid = np.append(np.arange(start, up_to, step), up_to)
    values = cross_product(nu, mu, grid)

    def f(t):
        return float(cross_product(nu, mu, t))

    return _sign_change_roots(f, grid, values, policy)


def _angular_orders(alpha: float, cutoff: float) -> range:
    # All integers n with |n - alpha| <= cutoff.
    return range(math.ceil(alpha - cutoff), math.floor(alpha + cutoff) + 1)


def spectrum(domain: DomainSpec, alpha, lambda_max: float,
             policy: NumericPolicy = DEFAULT_POLICY) -> SpectrumTable:
    """All Dirichlet eigenvalues <= lambda_max of H_alpha on ``domain``."""
    flux = as_flux(alpha)
    if not lambda_max > 0:
        raise DomainError("lambda_max must be positive")
    root = math.sqrt(lambda_max)
    lams: list[float] = []
    ns: list[int] = []
    ks: list[int] = []
    if isinstance(domain, Square):
        if flux.alpha != 0:
            raise UnsupportedError("square spectra are only available for alpha = 0")
        scale = math.pi ** 2 / (4.0 * domain.halfside ** 2)
        top = math.floor(math.sqrt(lambda_max / scale))
        for i in range(1, top + 1):
            for j in range(1, top + 1):
                lam = scale * (i * i + j * j)
                if lam <= lambda_max:
                    lams.append(lam)
                    ns.append(i)
                    ks.append(j)
    elif isinstance(domain, Disc):
        reach = root * domain.radius
        cache: dict[float, list[float]] = {}
        for n in _angular_orders(flux.alpha, reach):
            nu = abs(n - flux.alpha)
            if nu not in cache:
                cache[nu] = bessel_zeros(nu, reach, policy)
            for kk, z in enumerate(cache[nu], start=1):
                lam = (z / domain.radius) ** 2
                if lam <= lambda_max:
                    lams.append(lam)
                    ns.append(n)
                    ks.append(kk)
    elif isinstance(domain, Annulus):
        mu = domain.ratio
        cache = {}
        for n in _angular_orders(flux.alpha, root * domain.outer):
            nu = abs(n - flux.alpha)
            if nu not in cache:
                cache[nu] = cross_product_zeros(nu, mu, root * domain.inner, policy)
            for kk, z in enumerate(cache[nu], start=1):
                lam = (z / domain.inner) ** 2
                if lam <= lambda_max:
                    lams.append(lam)
                    ns.append(n)
                    ks.append(kk)
    else:
        raise DomainError(f"unknown domain {domain!r}")
    order = np.lexsort((np.array(ks), np.array(ns), np.array(lams)))
    return SpectrumTable(np.array(lams, dtype=float)[order], np.array(ns, dtype=int)[order],
                         np.array(ks, dtype=int)[order], float(lambda_max), flux, domain)


# ------------------------------------------------------- Weyl quotient ---

@dataclass(frozen=True)
class WeylQuotientCurve:
    Lambdas: np.ndarray
    values: np.ndarray
    gamma: MomentOrder
    domain: DomainSpec | None = field(default=None, compare=False)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.Lambdas.tolist(), self.values.tolist()))


def riesz_sum(spec: SpectrumTable, gamma, Lambdas) -> np.ndarray:
    """sum_{lambda_j < Lambda} (Lambda - lambda_j)**gamma for each Lambda."""
    g = as_order(gamma).gamma
    if g < 0:
        raise DomainError("Riesz means need gamma >= 0")
    lam = np.atleast_1d(np.asarray(Lambdas, dtype=float))
    if np.any(lam > spec.lambda_max):
        raise RangeError(f"Lambda up to {lam.max():g} exceeds the spectrum range {spec.lambda_max:g}")
    if g == 0:
        return spec.counting(lam).astype(float)
    ev = spec.lambdas
    out = np.empty_like(lam)
    counts = spec.counting(lam)
    if g == 1:
        csum = np.concatenate(([0.0], np.cumsum(ev)))
        return counts * lam - csum[counts]
    for i, (L, c) in enumerate(zip(lam, counts)):
        out[i] = np.sum((L - ev[:c]) ** g)
    return out


def weyl_quotient(spec: SpectrumTable, gamma, Lambdas) -> WeylQuotientCurve:
    """r_gamma(Lambda) = 4 pi (gamma + 1) / (|Omega| Lambda^(gamma+1)) * Riesz sum."""
    order = as_order(gamma)
    lam = np.atleast_1d(np.asarray(Lambdas, dtype=float))
    if np.any(lam <= 0):
        raise DomainError("Lambda must be positive")
    sums = riesz_sum(spec, order, lam)
    g = order.gamma
    values = 4.0 * math.pi * (g + 1.0) / (spec.domain.area * lam ** (g + 1.0)) * sums
    return WeylQuotientCurve(lam, values, order, spec.domain)


def lambda_grid(spec: SpectrumTable, lower: float | None = None, per_decade: int = 400,
                include_jumps: bool = True) -> np.ndarray:
    """Geometric Lambda grid up to lambda_max, plus every eigenvalue and the
    next float above it so both one-sided limits at a jump are sampled."""
    top = spec.lambda_max
    if lower is None:
        lower = 0.5 * spec.lambdas[0] if len(spec) else top / 10.0
    if not 0 < lower <= top:
        raise DomainError("need 0 < lower <= lambda_max")
    decades = math.log10(top / lower)
    base = np.geomspace(lower, top, max(2, math.ceil(decades * per_decade) + 1))
    parts = [base]
    if include_jumps and len(spec):
        parts += [spec.lambdas, np.nextafter(spec.lambdas, np.inf)]
    grid = np.unique(np.concatenate(parts))
    return grid[(grid >= lower) & (grid <= top)]


# ------------------------------------------------- eigenvalue branches ---

@dataclass(frozen=True)
class EigenvalueBranch:
    n: int
    k: int
    alphas: np.ndarray
    lambdas: np.ndarray  # nan where the branch is above lambda_max


def eigenvalue_branches(domain: Disc, alphas: Sequence[float], lambda_max: float,
                        policy: NumericPolicy = DEFAULT_POLICY) -> list[EigenvalueBranch]:
    """Low disc eigenvalues as functions of the flux, one curve per (n, k)."""
    if not isinstance(domain, Disc):
        raise UnsupportedError("eigenvalue branches are only computed for discs")
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size == 0:
        raise DomainError("need at least one alpha")
    table: dict[tuple[int, int], np.ndarray] = {}
    for i, a in enumerate(alphas):
        spec = spectrum(domain, a, lambda_max, policy)
        for lam, n, k in spec.entries:
            table.setdefault((n, k), np.full(alphas.size, np.nan))[i] = lam
    return [EigenvalueBranch(n, k, alphas, vals) for (n, k), vals in sorted(table.items())]
