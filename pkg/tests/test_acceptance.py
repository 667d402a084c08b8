"""The twelve acceptance criteria at their stated tolerances.

Each test records one PASS/FAIL line; ``conftest.py`` prints them at the end
of the session.  Run ``python tests/test_acceptance.py`` to get the lines
without pytest.
"""

import math
import sys
import time
from dataclasses import replace
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from muskatlab import (
    EnsembleSpec,
    Grid,
    RealField,
    apply_lambda,
    cauchy_study,
    energy_report,
    evolve,
    heat_semigroup,
    hilbert,
    kernels,
    project,
    random_field,
    stability_study,
    t_even,
    t_odd,
    t_operator,
)
from muskatlab.config import load_config
from muskatlab.estimator import CampaignConfig, campaign, refinement_table
from muskatlab.evolution import SimConfig, initial_field
from muskatlab.finite_diff import default_rule
from muskatlab.profiles import localized_bump_field
from muskatlab.verify import (
    arctan_error,
    constant_slope_errors,
    ensemble_fields,
    masked_rel,
    quadrature_lambda,
    support_mask,
)

DEMO = Path(__file__).resolve().parents[1] / "demos" / "moderate_slope.cfg"
RESULTS: list[str] = []


def record(number: int, passed: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {detail}")
    assert passed, detail


def rel(a, b) -> float:
    return float(np.linalg.norm(a) / np.linalg.norm(b))


@lru_cache(maxsize=None)
def demo_config() -> SimConfig:
    return load_config(DEMO).sim


@lru_cache(maxsize=None)
def demo_run():
    return evolve(replace(demo_config(), output_every=1))


@lru_cache(maxsize=None)
def small_slope_run():
    cfg = SimConfig(sample_count=512, profile="bump", amplitude=0.1, t_end=1.0, output_every=1)
    return cfg, evolve(cfg)


@lru_cache(maxsize=None)
def linear_runs():
    runs = []
    for k in (1, 5, 25):
        cfg = SimConfig(profile="sine", mode=k, amplitude=1.0, nonlinear=False, t_end=1.0,
                        dt=1 / 64, output_every=1)
        runs.append((k, cfg, evolve(cfg)))
    return runs


def test_criterion_01_spectral_exactness():
    g = Grid()
    x, worst = g.x, 0.0
    for j in (1, 7, 100, 400):
        k = j * math.pi / g.L
        s, c = np.sin(k * x), np.cos(k * x)
        u = RealField(g, s)
        worst = max(worst,
                    rel(apply_lambda(u, 1.0).samples - k * s, k * s),
                    rel(hilbert(u).samples + c, c),
                    rel(heat_semigroup(u, 0.5 / k).samples - math.exp(-0.5) * s, math.exp(-0.5) * s),
                    rel(project(u, k).samples - s, s))
        assert project(u, 0.99 * k).sup() < 1e-12
    f = random_field(EnsembleSpec(count=1), 0, g)
    worst = max(worst, rel(hilbert(hilbert(f)).samples + f.samples, f.samples))
    record(1, worst < 1e-10, f"max relative error {worst:.2e} (tol 1e-10)")


def test_criterion_02_quadrature_consistency():
    errs = {}
    for L, N in ((math.pi, 1024), (2 * math.pi, 2048)):
        g = Grid(L, N)
        u = localized_bump_field(g, radius=math.pi / 2)
        lam = apply_lambda(u, 1.0)
        errs[N] = masked_rel(quadrature_lambda(u, default_rule(g)) - lam, lam,
                             np.abs(g.x) < math.pi / 2)
    g = Grid()
    ens = max(masked_rel(quadrature_lambda(u, default_rule(g)) - apply_lambda(u, 1.0),
                         apply_lambda(u, 1.0), support_mask(g)) for u in ensemble_fields(g))
    ok = max(errs[1024], ens) < 1e-3 and errs[2048] < errs[1024]
    record(2, ok, f"N=1024 bump {errs[1024]:.2e}, ensemble {ens:.2e} (tol 1e-3); "
                  f"N=2048 bump {errs[2048]:.2e}")


def test_criterion_03_decomposition_identity():
    g = Grid()
    rule = default_rule(g)
    fields = ensemble_fields(g)
    split = 0.0
    for f, h in zip(fields, fields[1:] + fields[:1]):
        t = t_operator(f, h, rule)
        split = max(split, rel((t_even(f, h, rule) + t_odd(f, h, rule) - t).samples, t.samples))
    arc = arctan_error(fields, rule)
    record(3, split < 1e-10 and arc < 1e-4,
           f"even+odd {split:.2e} (tol 1e-10), arctan form {arc:.2e} (tol 1e-4)")


def test_criterion_04_constant_slope():
    r, v = constant_slope_errors(Grid(), default_rule(Grid()))
    record(4, r < 1e-5 and v < 1e-5,
           f"|R|/|gamma Lambda g| {r:.2e}, |V|/|gamma Lambda g| {v:.2e} (tol 1e-5 each)")


def test_criterion_05_kernel_bound():
    g = Grid()
    violations = total = 0
    for f in ensemble_fields(g):
        k = kernels(f, default_rule(g))
        violations += int(np.sum(np.abs(k.odd) > np.abs(k.s_slope)))
        total += k.odd.size
    record(5, violations == 0, f"{violations} violations in {total} (node, sample) pairs")


def test_criterion_06_estimate_campaign():
    t0 = time.time()
    rows = refinement_table(campaign(CampaignConfig(threads=4)))
    finite = all(math.isfinite(r[c]) for r in rows for c in ("max_coarse", "max_fine"))
    worst = max(rows, key=lambda r: r["median_change"])
    record(6, finite and worst["median_change"] < 0.5,
           f"{len(rows)} checks finite={finite}, worst median change {worst['median_change']:.1%} "
           f"({worst['id']}, tol 50%), {time.time() - t0:.0f} s")


def _final(cfg, dt):
    return evolve(replace(cfg, dt=dt, output_every=10**6))[-1].f


def test_criterion_07_linear_evolution_and_order():
    worst = 0.0
    for k, cfg, states in linear_runs():
        # modewise: the coefficient of mode k, unaffected by roundoff parked in slower modes
        c0 = states[0].f.spectrum[k]
        for st in states:
            worst = max(worst, abs(st.f.spectrum[k] / c0 / math.exp(-k * st.t) - 1))
    cfg = replace(demo_config(), t_end=0.125)
    f1, f2, f3 = (_final(cfg, dt) for dt in (1 / 64, 1 / 128, 1 / 256))
    order = math.log2((f1 - f2).l2() / (f2 - f3).l2())
    record(7, worst < 1e-8 and order >= 1.9,
           f"linear modewise error {worst:.2e} (tol 1e-8), ETDRK2 order {order:.2f} (min 1.9)")


def test_criterion_08_conservation_and_monotonicity():
    states = demo_run()
    scale = states[0].f.l2()
    drift = max(abs(st.f.mean() - states[0].f.mean()) / scale / st.t for st in states[1:])
    _, small = small_slope_run()
    linf = np.array([st.diagnostics["linf"] for st in small])
    t = np.array([st.t for st in small])
    growth = float(np.max(np.diff(linf) / np.diff(t)))
    record(8, drift < 1e-9 and growth <= 1e-6,
           f"mean drift {drift:.2e}/unit time (tol 1e-9), max L-inf growth {growth:.2e} (tol 1e-6)")


def test_criterion_09_energy_inequality():
    runs = [(demo_config().s, demo_run()), (1.6, small_slope_run()[1])]
    runs += [(cfg.s, states) for _, cfg, states in linear_runs()]
    violations = snaps = 0
    for s, states in runs:
        c = energy_report(states, s).columns
        violations += int(np.sum(c["dissipation"] < c["dissipation_floor"] * (1 - 1e-12)))
        snaps += len(states)
    record(9, violations == 0, f"{violations} violations over {snaps} snapshots of {len(runs)} runs")


def test_criterion_10_galerkin_cauchy():
    rc = load_config(DEMO)
    rows = cauchy_study(initial_field(rc.sim), rc.cutoffs, rc.s_prime, rc.sim, threads=4)
    d = [r["distance"] for r in rows]
    ok = all(b <= 1.1 * a for a, b in zip(d, d[1:]))
    record(10, ok, "distances " + ", ".join(f"{v:.3e}" for v in d) + " (non-increasing, 10% slack)")


def test_criterion_11_stability():
    cfg = replace(demo_config(), t_end=0.125, output_every=1)
    f0 = initial_field(cfg)
    pert = random_field(EnsembleSpec(count=1), 0, cfg.grid, stream=1)
    rates = [stability_study(f0, pert, 1e-3, replace(cfg, dt=dt), threads=2).rate
             for dt in (cfg.step_size, cfg.step_size / 2)]
    change = abs(rates[1] - rates[0]) / abs(rates[0])
    zero = stability_study(f0, RealField.zeros(cfg.grid), 1e-3, cfg)
    ok = all(math.isfinite(r) for r in rates) and change < 0.2 and not np.any(zero.distance)
    record(11, ok, f"rate {rates[0]:.4f} -> {rates[1]:.4f} under dt halving ({change:.1e}, tol 20%), "
                   f"zero-perturbation max distance {np.max(zero.distance):.1e}")


def test_criterion_12_determinism(tmp_path):
    from muskatlab.cli import main

    cfg = tmp_path / "det.cfg"
    cfg.write_text("[grid]\nN = 256\n[sim]\nprofile = random\nk_max = 40\nt_end = 0.1\n"
                   "[ensemble]\ncount = 4\nk_max = 32\n[check]\nids = LOW_FREQ, KPV, REMAINDER\n")
    trees = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        for cmd in ("simulate", "campaign"):
            assert main([cmd, "--config", str(cfg), "--out", str(out), "--threads", str(1 + 2 * i)]) == 0
        trees.append({p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
    same = trees[0] == trees[1]
    record(12, same, f"{len(trees[0])} files byte-identical across runs: {same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
