"""Test profiles: compactly supported bumps, windowed linear slopes, localized fields.

A periodic window can only imitate whole-line data.  Two devices make that
imitation quantitative:

* data supported in ``|x| < L/2`` so that every nonlocal integral evaluated
  on ``|x| < L/2`` only sees the data once;
* vanishing low moments, which make the difference between the periodic
  operators and their whole-line counterparts (a smooth kernel acting on the
  data) vanish to high order.
"""

from __future__ import annotations

import numpy as np

from .errors import MuskatLabError
from .spectral import Grid, RealField, derivative


def smooth_bump(r) -> np.ndarray:
    """``exp(1 - 1/(1 - r^2))`` on ``|r| < 1``, zero outside; equals 1 at r = 0."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


def smooth_step(t) -> np.ndarray:
    """C-infinity transition from 1 (t <= 0) to 0 (t >= 1)."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)

    def psi(s):
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = np.exp(-1.0 / s[pos])
        return out

    a, b = psi(1.0 - t), psi(t)
    return a / (a + b)


def plateau(x, flat: float, edge: float) -> np.ndarray:
    """Smooth window: 1 on ``|x| <= flat``, 0 on ``|x| >= edge``."""
    if not 0 <= flat < edge:
        raise MuskatLabError("need 0 <= flat < edge")
    return smooth_step((np.abs(x) - flat) / (edge - flat))


def remove_moments(grid: Grid, values: np.ndarray, envelope: np.ndarray,
                   count: int, scale: float) -> np.ndarray:
    """Subtract ``envelope * poly`` so that moments ``0..count-1`` of ``values`` vanish."""
    if count <= 0:
        return np.asarray(values, dtype=float)
    y = grid.x / scale
    powers = np.array([y ** j for j in range(count)])
    basis = powers * envelope[None, :]
    coef = np.linalg.solve(powers @ basis.T, powers @ values)
    return values - coef @ basis


def mexican_hat(grid: Grid, width: float, center: float = 0.0) -> RealField:
    """``(1 - 2 y^2) exp(-y^2)``, ``y = (x - center)/width``; mean zero on the line."""
    y = (grid.x - center) / width
    return RealField(grid, (1.0 - 2.0 * y * y) * np.exp(-y * y))


def localized_bump_field(grid: Grid, radius: float | None = None,
                         moments: int = 5) -> RealField:
    """Smooth single-signed bump made moment-free; a convenient central test datum."""
    radius = grid.L / 2 if radius is None else radius
    env = smooth_bump(grid.x / radius)
    vals = remove_moments(grid, env * np.cos(3.0 * grid.x / radius), env, moments, radius)
    return RealField(grid, vals)


def windowed_linear(grid: Grid, slope: float) -> RealField:
    """Profile whose derivative is ``slope`` on ``|x| <= L/4`` and 0 for ``L/2 <= |x| <= 3L/4``.

    A periodic function must have mean-zero derivative, so the slope is
    compensated by a smooth bump centered at ``x = +-L``; on ``|x| <= L/4`` the
    profile is exactly ``slope * x``.
    """
    L = grid.L
    x = grid.x
    inner = plateau(x, L / 4, L / 2)
    # distance to the window edge, where the compensation lives
    outer = smooth_bump((L - np.abs(x)) / (L / 4))
    c = np.sum(inner) / np.sum(outer)
    fx = slope * (inner - c * outer)
    spec = np.fft.fft(fx)
    k = grid.k
    integ = np.zeros_like(spec)
    nz = k != 0
    integ[nz] = spec[nz] / (1j * k[nz])
    integ[grid.N // 2] = 0.0
    f = np.fft.ifft(integ).real
    # x = 0 is the sample N/2; pin f(0) = 0 so that f = slope * x on the plateau
    return RealField(grid, f - f[grid.N // 2])


def slope_window(grid: Grid, fraction: float = 1 / 8) -> np.ndarray:
    """Boolean mask ``|x| <= fraction * L`` for "on support" assertions."""
    return np.abs(grid.x) <= fraction * grid.L + 1e-12


def max_slope(f: RealField) -> float:
    return derivative(f).sup()


def random_localized_field(grid: Grid, key, beta: float, k_max: float,
                           amplitude: float, radius: float | None = None,
                           moments: int = 5) -> RealField:
    """Random-phase field ``sum_k k^-beta cos(k x + phi_k)``, localized and scaled.

    ``key`` seeds a counter-based stream (``numpy.random.default_rng(key)``);
    phase ``j`` is the ``j``-th draw, so the same key gives the same function on
    every grid.  With ``radius`` the field is multiplied by a smooth bump of
    that radius and its first ``moments`` moments are removed; ``radius=None``
    leaves a periodic band-limited field (mean zero).  The result is scaled
    so that ``max |f_x| = amplitude``.
    """
    rng = np.random.default_rng(key)
    modes = np.arange(1, int(np.floor(k_max * grid.L / np.pi)) + 1)
    k = modes * np.pi / grid.L
    phases = rng.uniform(0.0, 2.0 * np.pi, modes.size)
    psi = (k ** -beta) @ np.cos(np.outer(k, grid.x) + phases[:, None])
    if radius is not None:
        env = smooth_bump(grid.x / radius)
        psi = remove_moments(grid, env * psi, env, moments, radius)
    field = RealField(grid, psi)
    slope = derivative(field).sup()
    if amplitude == 0 or slope == 0:
        return RealField.zeros(grid)
    return field * (amplitude / slope)
