"""Randomized measurement of the nonlinear estimates.

Each check evaluates the left and right sides of one inequality on every
field of an ensemble and reports the ratios.  Constants are never asserted;
what matters is that ratios are finite and stable under grid refinement.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DegenerateRHS, ParamRange, SpecRange
from .finite_diff import default_rule
from .muskat_operator import (
    commutator_lambda,
    drift,
    kernel_fraction,
    paralinearized_rhs,
    remainder,
    t_operator,
)
from .norms import (
    BesovSpec,
    besov_norm,
    holder_norm,
    inhomogeneous_norm,
    intersection_norm,
    lp_norm,
    sobolev_norm,
    sobolev_with_l2,
)
from .profiles import random_localized_field
from .spectral import Grid, RealField, apply_lambda, dealiased_product, hilbert_commutator

DEGENERATE_RHS = 1e-14

CHECKS = ("LOW_FREQ", "LIPSCHITZ", "REMAINDER", "DRIFT_HOLDER", "COMMUTATOR",
          "PARA_REMAINDER", "KPV", "PRODUCT", "COMPOSITION", "HILBERT_COMM")

DEFAULT_PARAMS = {
    "epsilon": 0.1,
    "nu": 0.05,
    "delta": 0.0,
    "besov_s": 0.5,
    "sigma": 1.5,
    "theta": 0.25,
    "hilbert_nu": 0.5,
}


@dataclass(frozen=True)
class EnsembleSpec:
    seed: int = 0
    count: int = 20
    beta: float = 1.7
    k_max: float = 64
    amplitude: float = 0.5
    localization: str = "central"
    moments: int = 5

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise SpecRange(f"count must be a positive integer, got {self.count}")
        if not self.beta > 0.5:
            raise SpecRange(f"beta must exceed 1/2, got {self.beta}")
        if not self.k_max >= 1:
            raise SpecRange(f"k_max must be >= 1, got {self.k_max}")
        if self.localization not in ("central", "none"):
            raise SpecRange(f"localization must be 'central' or 'none', got {self.localization!r}")

    def radius(self, grid: Grid):
        return grid.L / 2 if self.localization == "central" else None


def random_field(spec: EnsembleSpec, index: int, grid: Grid | None = None,
                 stream: int = 0) -> RealField:
    """Field ``index`` of the ensemble; ``stream`` separates the f- and g-families."""
    grid = Grid() if grid is None else grid
    if not 0 <= index < spec.count:
        raise SpecRange(f"index {index} outside ensemble of size {spec.count}")
    if spec.k_max > grid.N / 3 * math.pi / grid.L:
        raise SpecRange(f"k_max = {spec.k_max} leaves no dealiasing headroom at N = {grid.N}")
    return random_localized_field(grid, [spec.seed, index, stream], spec.beta, spec.k_max,
                                  spec.amplitude, spec.radius(grid), spec.moments)


@dataclass
class EstimateReport:
    id: str
    params: dict
    grid: dict
    seed: int
    ratios: list
    degenerate_count: int
    ensemble: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    refinement_flag: bool = False

    @property
    def max(self) -> float:
        return float(np.max(self.ratios)) if self.ratios else math.nan

    @property
    def median(self) -> float:
        return float(np.median(self.ratios)) if self.ratios else math.nan

    @property
    def p90(self) -> float:
        return float(np.percentile(self.ratios, 90)) if self.ratios else math.nan

    @property
    def resolution(self) -> str:
        return f"N={self.grid['N']}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(max=self.max, median=self.median, p90=self.p90, resolution=self.resolution)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def validate_params(check_id: str, params: dict | None) -> dict:
    p = dict(DEFAULT_PARAMS)
    p.update(params or {})
    eps = p["epsilon"]
    if not 0 < eps < 0.5:
        raise ParamRange(f"epsilon must lie in (0, 1/2), got {eps}")
    if check_id == "DRIFT_HOLDER" and not 0 < p["nu"] < eps:
        raise ParamRange(f"need 0 < nu < epsilon, got nu = {p['nu']}")
    if check_id == "LIPSCHITZ" and not 0 <= p["delta"] < 0.5:
        raise ParamRange(f"delta must lie in [0, 1/2), got {p['delta']}")
    if check_id == "PRODUCT" and not 0 < p["besov_s"] < 1:
        raise ParamRange(f"besov_s must lie in (0, 1), got {p['besov_s']}")
    if check_id == "COMPOSITION" and not 1 < p["sigma"] < 2:
        raise ParamRange(f"sigma must lie in (1, 2), got {p['sigma']}")
    if check_id == "HILBERT_COMM" and not 0 < p["theta"] < p["hilbert_nu"] < 1:
        raise ParamRange("need 0 < theta < hilbert_nu < 1")
    return p


def _sides(check_id: str, f: RealField, g: RealField, p: dict) -> tuple[float, float, dict]:
    """(lhs, rhs, extras) for one sample; f and g are independent ensemble fields."""
    eps = p["epsilon"]
    rule = default_rule(f.grid)
    if check_id == "LOW_FREQ":
        return (t_operator(f, g, rule).l2(),
                sobolev_norm(f, 1.0) * sobolev_norm(g, 1.5), {})
    if check_id == "LIPSCHITZ":
        d = p["delta"]
        lhs = (t_operator(g, f, rule) - t_operator(f, f, rule)).l2()
        return lhs, sobolev_norm(g - f, 1.0 - d) * sobolev_norm(f, 1.5 + d), {}
    if check_id == "REMAINDER":
        lhs = remainder(f, g, rule, eps).l2()
        rhs = sobolev_norm(f, 1.5 + eps) * besov_norm(g, BesovSpec(1.0 - eps, 2, 1))
        alt = sobolev_norm(f, 1.5 + eps) * intersection_norm(g, 1.0 - eps - 0.2, 1.0 - eps + 0.2)
        return lhs, rhs, {"hsum_ratio": lhs / alt if alt > DEGENERATE_RHS else None}
    if check_id == "DRIFT_HOLDER":
        return (holder_norm(drift(f, rule), p["nu"]),
                intersection_norm(f, 1.0, 1.5 + eps) ** 2, {})
    if check_id == "COMMUTATOR":
        lhs = commutator_lambda(f, g, eps, rule).l2()
        return lhs, intersection_norm(f, 1.0, 1.5 + eps) * intersection_norm(g, 1.5 + eps, 2.0), {}
    if check_id == "PARA_REMAINDER":
        lhs = sobolev_with_l2(paralinearized_rhs(f, eps, rule).remainder, 1.0 + eps)
        return lhs, intersection_norm(f, 1.0, 1.5 + eps) * intersection_norm(f, 1.0, 2.0 + eps / 2), {}
    if check_id == "KPV":
        s, s1, s2 = 1.0 + eps, 1.5 * eps, 1.0 - eps / 2
        uv = dealiased_product(f, g)
        lhs = (apply_lambda(uv, s) - dealiased_product(f, apply_lambda(g, s))
               - dealiased_product(g, apply_lambda(f, s))).l2()
        rhs = lp_norm(apply_lambda(f, s1), 4) * lp_norm(apply_lambda(g, s2), 4)
        return lhs, rhs, {}
    if check_id == "PRODUCT":
        spec = BesovSpec(p["besov_s"], 2, 2)
        lhs = besov_norm(f * g, spec)
        rhs = 2 * f.sup() * besov_norm(g, spec) + 2 * g.sup() * besov_norm(f, spec)
        return lhs, rhs, {}
    if check_id == "COMPOSITION":
        sig = p["sigma"]
        lhs = sobolev_norm(RealField(f.grid, kernel_fraction(f.samples)), sig)
        return lhs, sobolev_norm(f, sig - 1.0) + sobolev_norm(f, sig), {}
    if check_id == "HILBERT_COMM":
        lhs = hilbert_commutator(f, g).l2()
        return lhs, holder_norm(f, p["hilbert_nu"]) * inhomogeneous_norm(g, -p["theta"]), {}
    raise ParamRange(f"unknown check {check_id!r}")


def ratio(check_id: str, f: RealField, g: RealField, params: dict | None = None) -> float:
    """Single-sample ratio; raises DegenerateRHS when the right side vanishes."""
    p = validate_params(check_id, params)
    lhs, rhs, _ = _sides(check_id, f, g, p)
    if rhs < DEGENERATE_RHS:
        raise DegenerateRHS(f"{check_id}: right-hand side {rhs:.3e} below threshold")
    return lhs / rhs


def check(check_id: str, spec: EnsembleSpec, grid: Grid | None = None,
          params: dict | None = None, threads: int | None = None) -> EstimateReport:
    grid = Grid() if grid is None else grid
    if check_id not in CHECKS:
        raise ParamRange(f"unknown check {check_id!r}; expected one of {CHECKS}")
    p = validate_params(check_id, params)

    def one(i):
        f = random_field(spec, i, grid, stream=0)
        g = random_field(spec, i, grid, stream=1)
        return _sides(check_id, f, g, p)

    with ThreadPoolExecutor(max_workers=threads or 1) as pool:
        results = list(pool.map(one, range(spec.count)))
    ratios, extras, degenerate = [], {}, 0
    for lhs, rhs, extra in results:
        if rhs < DEGENERATE_RHS:
            degenerate += 1
            continue
        ratios.append(float(lhs / rhs))
        for k, v in extra.items():
            extras.setdefault(k, []).append(v)
    return EstimateReport(check_id, p, {"L": grid.L, "N": grid.N}, spec.seed, ratios,
                          degenerate, ensemble=asdict(spec), extra=extras)


@dataclass(frozen=True)
class CampaignConfig:
    half_length: float = math.pi
    sample_count: int = 512
    checks: tuple = ("LOW_FREQ", "REMAINDER", "DRIFT_HOLDER", "COMMUTATOR", "PARA_REMAINDER",
                     "KPV", "PRODUCT", "COMPOSITION", "HILBERT_COMM")
    ensemble: EnsembleSpec = EnsembleSpec()
    params: dict = field(default_factory=dict)
    growth_limit: float = 2.0
    threads: int | None = None


def campaign(config: CampaignConfig, out_dir: str | os.PathLike | None = None) -> list[EstimateReport]:
    """Every enabled check at N and 2N; ``refinement_flag`` marks max-ratio growth > limit."""
    coarse = Grid(config.half_length, config.sample_count)
    fine = coarse.refine(2)
    reports = []
    for cid in config.checks:
        a = check(cid, config.ensemble, coarse, config.params, config.threads)
        b = check(cid, config.ensemble, fine, config.params, config.threads)
        flag = bool(a.ratios and b.ratios and b.max > config.growth_limit * a.max)
        a.refinement_flag = b.refinement_flag = flag
        reports += [a, b]
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for r in reports:
            with open(os.path.join(out_dir, f"{r.id}_N{r.grid['N']}.json"), "w") as fh:
                fh.write(r.to_json())
    return reports


def refinement_table(reports: list[EstimateReport]) -> list[dict]:
    """Pair coarse/fine reports by id; median change relative to the coarse median."""
    by_id = {}
    for r in reports:
        by_id.setdefault(r.id, []).append(r)
    rows = []
    for cid, (a, b) in ((k, sorted(v, key=lambda r: r.grid["N"])) for k, v in by_id.items()):
        rows.append({"id": cid, "median_coarse": a.median, "median_fine": b.median,
                     "median_change": abs(b.median - a.median) / a.median,
                     "max_coarse": a.max, "max_fine": b.max, "flag": a.refinement_flag})
    return rows


def with_count(config: CampaignConfig, count: int) -> CampaignConfig:
    return replace(config, ensemble=replace(config.ensemble, count=count))
