"""Sobolev, Besov, Hoelder and Lebesgue norms on a periodic grid.

Fourier-side norms are normalized so that ``sobolev_norm(u, 0)`` is the sample
L2 norm ``sqrt(h * sum u^2)``.  Besov norms use the finite-difference
definitions with an explicit log-spaced alpha grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentMismatch, NonZeroMean, NuRange, SpecRange
from .finite_diff import shift_stack
from .spectral import MEAN_TOL, RealField, derivative

NODES_PER_DECADE = 64


def _power_spectrum(u: RealField) -> np.ndarray:
    # Parseval: h * sum |u|^2 = (h / N) * sum |u_hat|^2
    spec = u.spectrum
    return (u.grid.spacing / u.grid.N) * (spec.real ** 2 + spec.imag ** 2)


def lp_norm(u: RealField, p: float = 2) -> float:
    """Grid ``l^p`` norm with weight h (``p = inf`` gives the max norm)."""
    if np.isinf(p):
        return u.sup()
    return float((u.grid.spacing * np.sum(np.abs(u.samples) ** p)) ** (1.0 / p))


def sobolev_norm(u: RealField, sigma: float) -> float:
    """Homogeneous ``||Lambda^sigma u||_{L2}``; the zero mode is dropped unless sigma = 0."""
    if sigma < 0 and abs(u.mean()) > MEAN_TOL * max(u.l2(), 1e-300):
        raise NonZeroMean(f"negative-order norm needs a mean-zero field (mean = {u.mean():.3e})")
    power = _power_spectrum(u)
    k = np.abs(u.grid.k)
    if sigma == 0:
        return float(np.sqrt(np.sum(power)))
    nz = k != 0
    return float(np.sqrt(np.sum(k[nz] ** (2 * sigma) * power[nz])))


def inhomogeneous_norm(u: RealField, sigma: float) -> float:
    """Spectral norm with weight ``(1 + k^2)^(sigma/2)``; used for ``H^{-theta}``."""
    power = _power_spectrum(u)
    return float(np.sqrt(np.sum((1.0 + u.grid.k ** 2) ** sigma * power)))


def intersection_norm(u: RealField, *sigmas: float) -> float:
    """Norm of ``H-dot^{s1} cap H-dot^{s2} ...``, taken as the sum."""
    return float(sum(sobolev_norm(u, s) for s in sigmas))


def sobolev_with_l2(u: RealField, sigma: float) -> float:
    """``H^sigma = L2 cap H-dot^sigma`` with the sum norm."""
    return sobolev_norm(u, 0.0) + sobolev_norm(u, sigma)


def lipschitz_sup(u: RealField) -> float:
    return derivative(u).sup()


@dataclass(frozen=True)
class BesovSpec:
    s: float
    p: float = 2
    q: float = 2
    alpha_window: tuple[float, float] | None = None

    def __post_init__(self):
        if not 0 < self.s < 2:
            raise SpecRange(f"s must lie in (0, 2), got {self.s}")
        if self.p not in (2, np.inf):
            raise SpecRange(f"p must be 2 or inf, got {self.p}")
        if self.q not in (1, 2):
            raise SpecRange(f"q must be 1 or 2, got {self.q}")

    def window(self, grid) -> tuple[float, float]:
        if self.alpha_window is None:
            return grid.spacing, grid.L
        lo, hi = map(float, self.alpha_window)
        if lo < grid.spacing / 2 or hi > grid.L or not lo < hi:
            raise SpecRange(f"alpha window {self.alpha_window} outside [h/2, L]")
        return lo, hi


def log_alpha_grid(lo: float, hi: float, per_decade: int = NODES_PER_DECADE) -> np.ndarray:
    decades = math.log10(hi / lo)
    count = max(2, int(math.ceil(decades * per_decade)) + 1)
    return np.geomspace(lo, hi, count)


def besov_norm(u: RealField, spec: BesovSpec) -> float:
    """Finite-difference Besov semi-norm ``||u||_{B-dot^s_{p,q}}``.

    First differences ``u - u(. - alpha)`` for ``s < 1``, second differences
    ``2u - u(. - alpha) - u(. + alpha)`` for ``1 <= s < 2``.  The outer integral
    over ``alpha`` in ``L^q(d alpha / |alpha|)`` runs over both signs; the
    inner norms are even in alpha, hence the factor 2.
    """
    grid = u.grid
    lo, hi = spec.window(grid)
    alphas = log_alpha_grid(lo, hi)
    minus = shift_stack(u, alphas)
    if spec.s < 1:
        diff = u.samples[None, :] - minus
    else:
        plus = shift_stack(u, -alphas)
        diff = 2.0 * u.samples[None, :] - minus - plus
    if np.isinf(spec.p):
        inner = np.max(np.abs(diff), axis=1)
    else:
        inner = np.sqrt(grid.spacing * np.sum(diff * diff, axis=1))
    vals = (inner / alphas ** spec.s) ** spec.q
    integral = 2.0 * np.trapezoid(vals, np.log(alphas))
    return float(integral ** (1.0 / spec.q))


def besov_equivalence_constant(s: float) -> float:
    """``c(s) = int_R (1 - cos t) / |t|^(1+2s) dt = pi / (Gamma(1+2s) sin(pi s))``, 0 < s < 1."""
    if not 0 < s < 1:
        raise SpecRange(f"closed form needs 0 < s < 1, got {s}")
    return math.pi / (math.gamma(1.0 + 2.0 * s) * math.sin(math.pi * s))


def holder_norm(u: RealField, nu: float) -> float:
    """``sup|u| + max_{y in {h..L}} max_x |u(x+y) - u(x)| / y^nu`` over grid shifts."""
    if not 0 < nu < 1:
        raise NuRange(f"nu must lie in (0, 1), got {nu}")
    grid = u.grid
    m = np.arange(1, grid.N // 2 + 1)
    shifted = shift_stack(u, -m * grid.spacing)
    quotient = np.max(np.abs(shifted - u.samples[None, :]), axis=1) / (m * grid.spacing) ** nu
    return u.sup() + float(np.max(quotient))


def check_interpolation(u: RealField, s: float, eps: float) -> float:
    """Ratio ``||u||^2_{s+1/2-eps/2} / (||u||^{2 theta}_s ||u||^{2-2 theta}_{s+1/2})``.

    Matching exponents, ``s + 1/2 - eps/2 = theta s + (1 - theta)(s + 1/2)``
    gives ``theta = eps``.  Log-convexity makes the ratio at most 1; a zero
    field has ratio 0 by convention.
    """
    theta = eps
    if not 0 < theta < 1:
        raise ExponentMismatch(f"eps must lie in (0, 1) for an interpolation, got {eps}")
    mid = sobolev_norm(u, s + 0.5 - eps / 2)
    if mid == 0:
        return 0.0
    low = sobolev_norm(u, s)
    high = sobolev_norm(u, s + 0.5)
    return float(mid ** 2 / (low ** (2 * theta) * high ** (2 - 2 * theta)))
