"""Periodic grid, real fields and Fourier-multiplier operators.

Everything lives on the window [-L, L) sampled at N equispaced points.  The
Fourier side uses numpy's FFT ordering; wavenumbers are ``j * pi / L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import (
    EpsilonRange,
    GridMismatch,
    MuskatLabError,
    NegativeTime,
    NonFinite,
    NonZeroMean,
)

MEAN_TOL = 1e-10
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    half_length: float = np.pi
    sample_count: int = 1024

    def __post_init__(self):
        n = self.sample_count
        if int(n) != n or n < 8 or n % 2:
            raise MuskatLabError(f"sample_count must be an even integer >= 8, got {n}")
        if not self.half_length > 0:
            raise MuskatLabError(f"half_length must be positive, got {self.half_length}")
        object.__setattr__(self, "sample_count", int(n))
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def L(self) -> float:
        return self.half_length

    @property
    def N(self) -> int:
        return self.sample_count

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.sample_count

    h = spacing

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.half_length + self.spacing * np.arange(self.sample_count)
        x.setflags(write=False)
        return x

    @cached_property
    def k(self) -> np.ndarray:
        k = 2.0 * np.pi * np.fft.fftfreq(self.sample_count, d=self.spacing)
        k.setflags(write=False)
        return k

    @cached_property
    def k_deriv(self) -> np.ndarray:
        """Wavenumbers for odd-order derivatives (Nyquist mode zeroed)."""
        k = self.k.copy()
        k[self.sample_count // 2] = 0.0
        k.setflags(write=False)
        return k

    @property
    def nyquist(self) -> float:
        return np.pi / self.spacing

    def refine(self, factor: int = 2) -> "Grid":
        """Same window, ``factor`` times as many samples."""
        return Grid(self.half_length, self.sample_count * factor)


class RealField:
    """Real samples ``u(x_m)`` on a :class:`Grid`; immutable."""

    __slots__ = ("grid", "samples")

    def __init__(self, grid: Grid, samples):
        values = np.array(samples, dtype=float)
        if values.shape != (grid.sample_count,):
            raise GridMismatch(
                f"expected {grid.sample_count} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFinite("field contains NaN or Inf")
        values.setflags(write=False)
        self.grid = grid
        self.samples = values

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "RealField":
        return cls(grid, fn(grid.x))

    @classmethod
    def zeros(cls, grid: Grid) -> "RealField":
        return cls(grid, np.zeros(grid.sample_count))

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray) -> "RealField":
        return _synthesize(grid, 1.0, np.asarray(spectrum))

    @property
    def spectrum(self) -> np.ndarray:
        return np.fft.fft(self.samples)

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def l2(self) -> float:
        return float(np.sqrt(self.grid.spacing * np.dot(self.samples, self.samples)))

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def _coerce(self, other):
        if isinstance(other, RealField):
            check_same_grid(self, other)
            return other.samples
        return other

    def __add__(self, other):
        return RealField(self.grid, self.samples + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RealField(self.grid, self.samples - self._coerce(other))

    def __rsub__(self, other):
        return RealField(self.grid, self._coerce(other) - self.samples)

    def __mul__(self, other):
        return RealField(self.grid, self.samples * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return RealField(self.grid, self.samples / self._coerce(other))

    def __neg__(self):
        return RealField(self.grid, -self.samples)

    def __repr__(self):
        return f"RealField(L={self.grid.L:g}, N={self.grid.N}, l2={self.l2():.4g})"


def check_same_grid(*fields: RealField) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatch(f"fields live on different grids: {grid} vs {f.grid}")
    return grid


def _real_part(values: np.ndarray, scale: float | None = None) -> np.ndarray:
    # scale: magnitude of the data that produced ``values``; roundoff in the
    # imaginary part is judged against it, not against a possibly tiny output.
    if scale is None:
        scale = np.max(np.abs(values), initial=0.0)
    residue = np.max(np.abs(values.imag), initial=0.0)
    if residue > IMAG_TOL * scale and residue > 0:
        raise MuskatLabError(f"imaginary residue {residue:.3e} exceeds tolerance")
    return values.real.copy()


def _synthesize(grid: Grid, symbol: np.ndarray, spectrum: np.ndarray) -> RealField:
    # roundoff in the input spectrum, amplified by at most max|symbol|, sets
    # the scale against which the imaginary residue is judged
    scale = np.max(np.abs(symbol), initial=0.0) * np.max(np.abs(spectrum), initial=0.0)
    return RealField(grid, _real_part(np.fft.ifft(symbol * spectrum), scale))


@dataclass(frozen=True)
class Multiplier:
    """Diagonal Fourier operator ``u -> F^{-1}[symbol(k) u_hat(k)]``.

    ``symbol`` is evaluated on the nonzero wavenumbers only; the zero mode is
    scaled by ``zero_mode_value``.  Symbols that are conjugate-symmetric give
    real output; the Nyquist entry of an odd symbol is dropped so that this
    holds on even grids.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    zero_mode_value: complex = 0.0

    def values(self, grid: Grid) -> np.ndarray:
        k = grid.k
        out = np.empty(grid.sample_count, dtype=complex)
        nz = k != 0
        out[nz] = self.symbol(k[nz])
        out[~nz] = self.zero_mode_value
        ny = grid.sample_count // 2
        if abs(out[ny].imag) > 0:
            out[ny] = 0.0
        return out

    def __call__(self, u: RealField) -> RealField:
        return _synthesize(u.grid, self.values(u.grid), u.spectrum)


def _check_finite(u: RealField):
    # RealField rejects non-finite samples at construction; this guards
    # against callers mutating the array behind our back.
    if not np.all(np.isfinite(u.samples)):
        raise NonFinite("field contains NaN or Inf")


def derivative(u: RealField, order: int = 1) -> RealField:
    """Spectral derivative; the Nyquist mode is zeroed for odd orders."""
    _check_finite(u)
    k = u.grid.k_deriv if order % 2 else u.grid.k
    return _synthesize(u.grid, (1j * k) ** order, u.spectrum)


def apply_lambda(u: RealField, sigma: float) -> RealField:
    """Fractional power ``Lambda^sigma`` with symbol ``|k|^sigma``."""
    _check_finite(u)
    spec = u.spectrum
    grid = u.grid
    if sigma < 0:
        if abs(u.mean()) > MEAN_TOL * max(u.l2(), 1e-300) and abs(u.mean()) > 0:
            raise NonZeroMean(
                f"Lambda^{sigma} needs a mean-zero field (mean = {u.mean():.3e})")
    sym = np.zeros(grid.sample_count)
    nz = grid.k != 0
    sym[nz] = np.abs(grid.k[nz]) ** sigma
    if sigma == 0:
        sym[~nz] = 1.0
    return _synthesize(grid, sym, spec)


def hilbert(u: RealField) -> RealField:
    """Hilbert transform, symbol ``-i sign(k)``; zero and Nyquist modes map to 0."""
    _check_finite(u)
    grid = u.grid
    sym = -1j * np.sign(grid.k_deriv)
    return _synthesize(grid, sym, u.spectrum)


def project(u: RealField, n: float) -> RealField:
    """Sharp Fourier cutoff keeping ``|k| <= n``."""
    if not n > 0:
        raise MuskatLabError(f"cutoff must be positive, got {n}")
    _check_finite(u)
    if np.isinf(n):
        return u
    keep = np.abs(u.grid.k) <= n * (1 + 1e-12)
    return _synthesize(u.grid, keep.astype(float), u.spectrum)


def heat_semigroup(u: RealField, t: float) -> RealField:
    """Poisson semigroup ``exp(-t Lambda)``."""
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t}")
    _check_finite(u)
    return _synthesize(u.grid, np.exp(-t * np.abs(u.grid.k)), u.spectrum)


def translate(u: RealField, alpha: float) -> RealField:
    """``x -> u(x - alpha)``; a cyclic shift when alpha is a grid multiple."""
    grid = u.grid
    m = alpha / grid.spacing
    if abs(m - round(m)) < 1e-12:
        return RealField(grid, np.roll(u.samples, int(round(m))))
    phase = np.exp(-1j * grid.k * alpha)
    ny = grid.sample_count // 2
    phase[ny] = phase[ny].real
    return _synthesize(grid, phase, u.spectrum)


def dealias(u: RealField) -> RealField:
    """2/3-rule truncation: keep ``|j| <= N/3``."""
    grid = u.grid
    j = np.abs(np.fft.fftfreq(grid.sample_count) * grid.sample_count)
    return _synthesize(grid, (j <= grid.sample_count / 3).astype(float), u.spectrum)


def dealiased_product(a: RealField, b: RealField) -> RealField:
    """Pointwise product with both factors and the result 2/3-truncated."""
    check_same_grid(a, b)
    return dealias(dealias(a) * dealias(b))


def resolvent(u: RealField, epsilon: float) -> RealField:
    """``(I + Lambda^{1+epsilon})^{-1}``."""
    sym = 1.0 / (1.0 + np.abs(u.grid.k) ** (1.0 + epsilon))
    return _synthesize(u.grid, sym, u.spectrum)


def _check_epsilon(epsilon: float):
    if not 0 < epsilon < 0.5:
        raise EpsilonRange(f"epsilon must lie in (0, 1/2), got {epsilon}")


def paraproduct(a: RealField, g: RealField, epsilon: float) -> RealField:
    """``(I + Lambda^{1+eps})^{-1}(a * Lambda^{1+eps} g)`` with a dealiased product."""
    _check_epsilon(epsilon)
    check_same_grid(a, g)
    return resolvent(dealiased_product(a, apply_lambda(g, 1.0 + epsilon)), epsilon)


def hilbert_commutator(f: RealField, u: RealField) -> RealField:
    """``H(f u) - f H(u)`` with dealiased products."""
    check_same_grid(f, u)
    return hilbert(dealiased_product(f, u)) - dealiased_product(f, hilbert(u))
