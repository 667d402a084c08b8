"""Finite differences, slopes and the symmetric alpha-quadrature.

Every nonlocal integral ``int ... d(alpha)`` in the package is realized as a
weighted sum over the nodes of an :class:`AlphaRule` plus a separate weight
for the (analytically supplied) ``alpha -> 0`` limit of the integrand.
Nodes are symmetric about 0, so contributions that are odd in alpha cancel
exactly; this is how principal values at infinity are taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import MissingNode, MuskatLabError, ZeroAlpha
from .spectral import Grid, RealField, translate

# Spectral translation of many nodes is done in blocks of this many rows.
_BLOCK = 256


@dataclass(frozen=True)
class AlphaRule:
    nodes: np.ndarray
    weights: np.ndarray
    zero_limit_weight: float

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise MuskatLabError("nodes and weights must be 1-d arrays of equal length")
        if np.any(nodes == 0):
            raise MuskatLabError("alpha = 0 belongs to the limit slot, not to the nodes")
        if np.any(np.diff(nodes) <= 0):
            raise MuskatLabError("nodes must be strictly increasing")
        if not (np.allclose(nodes, -nodes[::-1], rtol=0, atol=1e-12 * np.max(np.abs(nodes)))
                and np.array_equal(weights, weights[::-1])):
            raise MuskatLabError("nodes and weights must be symmetric under alpha -> -alpha")
        for arr in (nodes, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "zero_limit_weight", float(self.zero_limit_weight))

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def measure(self) -> float:
        return float(np.sum(self.weights) + self.zero_limit_weight)

    @property
    def reduction_order(self) -> np.ndarray:
        """Node indices by ascending |alpha|, negative node before positive."""
        return np.lexsort((self.nodes >= 0, np.abs(self.nodes)))

    def grid_shifts(self, grid: Grid):
        """Integer shifts ``alpha/h`` if every node is a grid multiple, else None."""
        m = self.nodes / grid.spacing
        mi = np.rint(m)
        if np.all(np.abs(m - mi) < 1e-9):
            return mi.astype(int)
        return None

    def perturbed(self, relative: float, seed: int = 0) -> "AlphaRule":
        """Copy with weights scaled by ``1 + relative * U(-1, 1)`` (symmetrically)."""
        rng = np.random.default_rng(seed)
        half = self.size // 2
        noise = rng.uniform(-1.0, 1.0, half)
        factor = np.concatenate([noise[::-1], noise]) if self.size % 2 == 0 else None
        if factor is None:
            raise MuskatLabError("rule has an odd number of nodes")
        return AlphaRule(self.nodes, self.weights * (1.0 + relative * factor),
                         self.zero_limit_weight)


def default_rule(grid: Grid) -> AlphaRule:
    """Composite trapezoid on the grid multiples ``m h``, ``0 < |m| <= N/2``."""
    half = grid.sample_count // 2
    m = np.arange(1, half + 1)
    pos = m * grid.spacing
    w = np.full(half, grid.spacing)
    w[-1] = 0.5 * grid.spacing
    return AlphaRule(np.concatenate([-pos[::-1], pos]),
                     np.concatenate([w[::-1], w]), grid.spacing)


def refined_rule(grid: Grid, factor: int = 4) -> AlphaRule:
    """Composite Simpson on ``[-L, L]`` with spacing ``h/factor``.

    Used only as an independent oracle; nodes are off the grid and are
    reached by spectral translation.
    """
    if factor % 2:
        raise MuskatLabError("refinement factor must be even for Simpson weights")
    count = factor * grid.sample_count // 2
    step = grid.half_length / count
    simpson = np.ones(count + 1)
    simpson[1:-1:2] = 4.0
    simpson[2:-1:2] = 2.0
    simpson *= step / 3.0
    pos = step * np.arange(1, count + 1)
    w = simpson[1:]
    return AlphaRule(np.concatenate([-pos[::-1], pos]),
                     np.concatenate([w[::-1], w]), 2.0 * simpson[0])


def shift_stack(u: RealField, alphas) -> np.ndarray:
    """Rows ``u(x - alpha_m)`` for each alpha; exact cyclic shifts on grid multiples."""
    grid = u.grid
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    m = alphas / grid.spacing
    mi = np.rint(m)
    n = grid.sample_count
    if np.all(np.abs(m - mi) < 1e-9):
        idx = (np.arange(n)[None, :] - mi.astype(int)[:, None]) % n
        return u.samples[idx]
    spec = u.spectrum
    k = grid.k
    ny = n // 2
    out = np.empty((alphas.size, n))
    for start in range(0, alphas.size, _BLOCK):
        a = alphas[start:start + _BLOCK]
        phase = np.exp(-1j * a[:, None] * k[None, :])
        phase[:, ny] = phase[:, ny].real
        out[start:start + _BLOCK] = np.fft.ifft(phase * spec[None, :], axis=1).real
    return out


def delta(u: RealField, alpha: float) -> RealField:
    """``u(x) - u(x - alpha)``."""
    return u - translate(u, alpha)


def delta_bar(u: RealField, alpha: float) -> RealField:
    """``u(x) - u(x + alpha)``."""
    return u - translate(u, -alpha)


def s_sym(u: RealField, alpha: float) -> RealField:
    """Second difference ``2u(x) - u(x - alpha) - u(x + alpha)``."""
    return delta(u, alpha) + delta_bar(u, alpha)


def _nonzero(alpha: float):
    if alpha == 0:
        raise ZeroAlpha("slopes are undefined at alpha = 0; use the limit slot")


def slope(u: RealField, alpha: float) -> RealField:
    _nonzero(alpha)
    return delta(u, alpha) / alpha


def slope_bar(u: RealField, alpha: float) -> RealField:
    _nonzero(alpha)
    return delta_bar(u, alpha) / alpha


def s_slope(u: RealField, alpha: float) -> RealField:
    """``S_alpha u = s_alpha u / alpha``; tends to 0 as alpha -> 0."""
    _nonzero(alpha)
    return s_sym(u, alpha) / alpha


def d_slope(u: RealField, alpha: float) -> RealField:
    """``D_alpha u = (u(x + alpha) - u(x - alpha)) / alpha``; tends to 2 u_x."""
    _nonzero(alpha)
    return (translate(u, -alpha) - translate(u, alpha)) / alpha


def alpha_integrate(values, limit_value, rule: AlphaRule):
    """Weighted alpha-sum ``sum_m w_m values(alpha_m) + w_0 * limit_value``.

    ``values`` is either a mapping ``alpha -> RealField`` covering every node
    of ``rule`` or an array of shape ``(rule.size, N)`` in node order.
    Returns a :class:`RealField` when ``limit_value`` is one, otherwise an
    array.
    """
    grid = limit_value.grid if isinstance(limit_value, RealField) else None
    lim = limit_value.samples if grid is not None else np.asarray(limit_value, dtype=float)
    if isinstance(values, Mapping):
        rows = []
        for a in rule.nodes:
            try:
                v = values[a]
            except KeyError:
                raise MissingNode(f"no value supplied for node alpha = {a!r}") from None
            rows.append(v.samples if isinstance(v, RealField) else np.asarray(v, dtype=float))
        stack = np.array(rows)
    else:
        stack = np.asarray(values, dtype=float)
        if stack.shape[0] != rule.size:
            raise MissingNode(f"expected {rule.size} node rows, got {stack.shape[0]}")
    order = rule.reduction_order
    total = rule.weights[order] @ stack[order] + rule.zero_limit_weight * lim
    return RealField(grid, total) if grid is not None else total
