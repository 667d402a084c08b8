"""Galerkin-truncated Muskat flow ``f_t + Lambda f = J_n(T(f)f)`` and its diagnostics.

The linear part is diagonal in Fourier space, so exponential time
differencing integrates it exactly; only ``N(f) = J_n T(f)f`` is treated
explicitly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import BlowupDetected, InsufficientSnapshots, MuskatLabError, NonFinite, ParamRange
from .finite_diff import default_rule
from .muskat_operator import t_operator
from .norms import lipschitz_sup, sobolev_norm
from .profiles import localized_bump_field, random_localized_field
from .spectral import Grid, RealField, apply_lambda, derivative, project

STEPPERS = ("ETD1", "ETDRK2")
PROFILES = ("bump", "sine", "random", "zero")
_SERIES_CUTOFF = 1e-4


def phi1(z):
    """``(e^z - 1)/z`` with a series branch near 0."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SERIES_CUTOFF
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z / 2 + z * z / 6, np.expm1(zs) / zs)


def phi2(z):
    """``(e^z - 1 - z)/z^2`` with a series branch near 0."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SERIES_CUTOFF
    zs = np.where(small, 1.0, z)
    return np.where(small, 0.5 + z / 6 + z * z / 24, (np.expm1(zs) - zs) / (zs * zs))


@dataclass(frozen=True)
class SimConfig:
    half_length: float = math.pi
    sample_count: int = 1024
    cutoff: float = math.inf
    s: float = 1.6
    dt: float | None = None
    t_end: float = 1.0
    stepper: str = "ETDRK2"
    profile: str = "bump"
    amplitude: float = 0.5
    mode: int = 1
    seed: int = 0
    beta: float = 2.0
    k_max: float = 16.0
    output_every: int = 1
    nonlinear: bool = True
    blowup_factor: float = 1e3

    def __post_init__(self):
        if not 1.5 < self.s < 2:
            raise ParamRange(f"s must lie in (3/2, 2), got {self.s}")
        if not self.cutoff > 0:
            raise ParamRange(f"cutoff must be positive, got {self.cutoff}")
        if self.dt is not None and not self.dt > 0:
            raise ParamRange(f"dt must be positive, got {self.dt}")
        if not self.t_end >= 0:
            raise ParamRange(f"t_end must be >= 0, got {self.t_end}")
        if self.stepper not in STEPPERS:
            raise ParamRange(f"stepper must be one of {STEPPERS}, got {self.stepper!r}")
        if self.profile not in PROFILES:
            raise ParamRange(f"profile must be one of {PROFILES}, got {self.profile!r}")
        if int(self.output_every) != self.output_every or self.output_every < 1:
            raise ParamRange("output_every must be a positive integer")
        if not self.blowup_factor > 1:
            raise ParamRange("blowup_factor must exceed 1")
        # validates L and N
        self.grid

    @property
    def epsilon(self) -> float:
        return self.s - 1.5

    @property
    def grid(self) -> Grid:
        return Grid(self.half_length, self.sample_count)

    @property
    def step_size(self) -> float:
        if self.dt is not None:
            return float(self.dt)
        n = min(self.cutoff, self.grid.nyquist)
        return 0.5 / n

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cutoff"] = "inf" if math.isinf(self.cutoff) else self.cutoff
        return d


@dataclass(frozen=True)
class SimState:
    t: float
    f: RealField
    diagnostics: dict = field(default_factory=dict)


def diagnostics(f: RealField, s: float) -> dict:
    fx = derivative(f).samples
    lam = apply_lambda(f, s + 0.5).samples
    K = float(np.max(np.abs(fx)))
    return {
        "h1": sobolev_norm(f, 1.0),
        "hs": sobolev_norm(f, s),
        "hs_half": sobolev_norm(f, s + 0.5),
        "lipschitz": K,
        "linf": f.sup(),
        "mean": f.mean(),
        "dissipation": float(f.grid.spacing * np.sum(lam * lam / (1.0 + fx * fx))),
    }


def initial_field(config: SimConfig) -> RealField:
    grid = config.grid
    if config.profile == "zero":
        return RealField.zeros(grid)
    if config.profile == "sine":
        k = config.mode * math.pi / grid.L
        return RealField(grid, config.amplitude * np.sin(k * grid.x))
    if config.profile == "bump":
        f = localized_bump_field(grid)
        return f * (config.amplitude / lipschitz_sup(f))
    return random_localized_field(grid, [config.seed, 0], beta=config.beta, k_max=config.k_max,
                                  amplitude=config.amplitude, radius=grid.L / 2)


class _Propagator:
    """Modewise ``exp(-dt|k|)``, ``dt*phi1`` and ``dt*phi2`` for one (grid, dt, cutoff)."""

    def __init__(self, config: SimConfig):
        grid = config.grid
        self.config = config
        self.grid = grid
        self.dt = config.step_size
        z = -self.dt * np.abs(grid.k)
        self.decay = np.exp(z)
        self.p1 = self.dt * phi1(z)
        self.p2 = self.dt * phi2(z)
        self.keep = (np.abs(grid.k) <= config.cutoff * (1 + 1e-12)).astype(float)
        self.rule = default_rule(grid)

    def nonlinear(self, spec: np.ndarray) -> np.ndarray:
        if not self.config.nonlinear:
            return np.zeros_like(spec)
        f = RealField(self.grid, np.fft.ifft(spec).real)
        return self.keep * np.fft.fft(t_operator(f, f, self.rule).samples)

    def advance(self, spec: np.ndarray) -> np.ndarray:
        n0 = self.nonlinear(spec)
        a = self.decay * spec + self.p1 * n0
        if self.config.stepper == "ETD1":
            return a
        return a + self.p2 * (self.nonlinear(a) - n0)


def _to_field(grid: Grid, spec: np.ndarray) -> RealField:
    return RealField(grid, np.fft.ifft(spec).real)


def step(state: SimState, config: SimConfig, _prop: _Propagator | None = None) -> SimState:
    """One exponential time-differencing step of size ``config.step_size``."""
    if state.f.grid != config.grid:
        raise MuskatLabError("state grid differs from config grid")
    prop = _prop or _Propagator(config)
    try:
        f = _to_field(config.grid, prop.advance(state.f.spectrum))
    except (NonFinite, FloatingPointError) as exc:
        raise BlowupDetected(f"non-finite values after t = {state.t:g}", time=state.t) from exc
    return SimState(state.t + prop.dt, f, diagnostics(f, config.s))


def evolve(config: SimConfig, f0: RealField | None = None) -> list[SimState]:
    """Integrate from ``J_n f0`` to ``t_end``; snapshots every ``output_every`` steps and at the end."""
    grid = config.grid
    f0 = initial_field(config) if f0 is None else f0
    if f0.grid != grid:
        raise MuskatLabError("initial field grid differs from config grid")
    f = project(f0, config.cutoff)
    state = SimState(0.0, f, diagnostics(f, config.s))
    states = [state]
    steps = int(math.ceil(config.t_end / config.step_size - 1e-9)) if config.t_end > 0 else 0
    # shrink the step slightly so the last snapshot lands on t_end
    prop = _Propagator(replace(config, dt=config.t_end / steps) if steps else config)
    ceiling = config.blowup_factor * max(state.diagnostics["hs"], 1e-300)
    with np.errstate(over="raise", invalid="raise"):
        for i in range(1, steps + 1):
            try:
                state = step(state, config, prop)
            except BlowupDetected as exc:
                raise BlowupDetected(str(exc), time=exc.time, states=states) from exc
            state = replace(state, t=config.t_end * i / steps)
            if state.diagnostics["hs"] > ceiling:
                raise BlowupDetected(
                    f"H^s norm {state.diagnostics['hs']:.3e} exceeded ceiling at t = {state.t:g}",
                    time=state.t, states=states)
            if i % config.output_every == 0 or i == steps:
                states.append(state)
    return states


@dataclass(frozen=True)
class EnergyReport:
    """Per-snapshot energy balance; ``columns`` maps name -> array."""

    columns: dict
    f_meas: float
    constant: float

    def rows(self) -> list[dict]:
        names = list(self.columns)
        return [{k: float(self.columns[k][i]) for k in names}
                for i in range(len(self.columns["t"]))]


def energy_report(states: list[SimState], s: float, constant: float = 1.0) -> EnergyReport:
    """Energy balance ``1/2 d/dt |f|_s^2 + C/(4(1+K^2)) |f|_{s+1/2}^2 <= F |f|_s^2``.

    ``F`` (``f_meas``) is the smallest constant that makes the residual
    nonpositive at every snapshot.
    """
    if len(states) < 3:
        raise InsufficientSnapshots(f"need at least 3 snapshots, got {len(states)}")
    t = np.array([st.t for st in states])
    hs2 = np.array([st.diagnostics["hs"] ** 2 for st in states])
    half2 = np.array([st.diagnostics["hs_half"] ** 2 for st in states])
    K = np.array([st.diagnostics["lipschitz"] for st in states])
    diss = np.array([st.diagnostics["dissipation"] for st in states])
    ddt = np.gradient(hs2, t)
    lhs = 0.5 * ddt + constant / (4.0 * (1.0 + K ** 2)) * half2
    pos = hs2 > 0
    f_meas = float(np.max(lhs[pos] / hs2[pos])) if np.any(pos) else 0.0
    residual = lhs - f_meas * hs2
    cols = {"t": t, "hs2": hs2, "d_hs2_dt": ddt, "hs_half2": half2, "lipschitz": K,
            "dissipation": diss, "dissipation_floor": half2 / (1.0 + K ** 2),
            "residual": residual}
    return EnergyReport(cols, f_meas, constant)


def _run_many(configs, f0s, threads: int | None):
    with ThreadPoolExecutor(max_workers=threads or 1) as pool:
        return list(pool.map(lambda cf: evolve(*cf), zip(configs, f0s)))


def cauchy_study(f0: RealField, cutoffs, s_prime: float, config: SimConfig,
                 threads: int | None = None) -> list[dict]:
    """Sup-in-time distance between consecutive Galerkin truncations.

    All runs share the step ``0.5 / max(cutoffs)`` (unless ``config.dt`` is set)
    so that differences reflect the truncation rather than the time step.
    """
    cutoffs = [float(n) for n in cutoffs]
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ParamRange("cutoffs must be increasing")
    if not s_prime < config.s:
        raise ParamRange("s_prime must be below s")
    dt = config.dt if config.dt is not None else 0.5 / max(cutoffs)
    configs = [replace(config, cutoff=n, dt=dt) for n in cutoffs]
    runs = _run_many(configs, [f0] * len(configs), threads)
    rows = []
    for (n, a), (m, b) in zip(zip(cutoffs, runs), zip(cutoffs[1:], runs[1:])):
        dist = 0.0
        for sa, sb in zip(a, b):
            d = sa.f - sb.f
            dist = max(dist, d.l2() + sobolev_norm(d, s_prime))
        rows.append({"n": n, "n_next": m, "s_prime": s_prime, "distance": dist})
    return rows


@dataclass(frozen=True)
class StabilityReport:
    t: np.ndarray
    distance: np.ndarray
    initial: float
    rate: float | None


def stability_study(f0: RealField, perturbation: RealField, eps_amp: float,
                    config: SimConfig, threads: int | None = None) -> StabilityReport:
    """Evolve ``f0`` and ``f0 + eps_amp * perturbation``; fit an exponential rate.

    ``rate`` is ``max_t log(d(t)/d(0)) / t`` for the H-dot^{1/2} distance ``d``;
    it is None when the perturbation vanishes.
    """
    if not eps_amp > 0:
        raise ParamRange("eps_amp must be positive")
    a, b = _run_many([config, config], [f0, f0 + eps_amp * perturbation], threads)
    t = np.array([st.t for st in a])
    dist = np.array([sobolev_norm(sb.f - sa.f, 0.5) for sa, sb in zip(a, b)])
    d0 = dist[0]
    if d0 == 0:
        return StabilityReport(t, dist, 0.0, None)
    later = t > 0
    rate = float(np.max(np.log(dist[later] / d0) / t[later])) if np.any(later) else 0.0
    return StabilityReport(t, dist, float(d0), rate)
