import math
from dataclasses import replace

import numpy as np
import pytest

from muskatlab import evolution
from muskatlab.errors import BlowupDetected, InsufficientSnapshots, ParamRange
from muskatlab.evolution import (
    SimConfig,
    cauchy_study,
    energy_report,
    evolve,
    initial_field,
    phi1,
    phi2,
    stability_study,
)
from muskatlab.norms import sobolev_norm
from muskatlab.spectral import RealField, project

SMALL = dict(sample_count=256, t_end=0.25)


def test_phi_functions_continuous():
    z = np.array([-2e-4, -1.0001e-4, -0.9999e-4, -1e-9, 0.0, 1e-9, 0.9999e-4, 1.0001e-4])
    direct1 = np.where(z != 0, np.expm1(z) / np.where(z == 0, 1, z), 1.0)
    assert np.allclose(phi1(z), direct1, rtol=1e-12, atol=0)
    assert phi2(0.0) == 0.5
    zz = np.array([-1e-4 * (1 + 1e-6), -1e-4 * (1 - 1e-6)])
    assert abs(phi2(zz)[0] - phi2(zz)[1]) < 1e-9


def test_config_validation():
    for bad in [dict(s=1.5), dict(s=2.0), dict(dt=0.0), dict(t_end=-1), dict(cutoff=0),
                dict(stepper="RK4"), dict(profile="x"), dict(output_every=0)]:
        with pytest.raises(ParamRange):
            SimConfig(**bad)
    assert SimConfig().epsilon == pytest.approx(0.1)
    assert SimConfig(cutoff=64).step_size == pytest.approx(0.5 / 64)


@pytest.mark.parametrize("k", [1, 4, 20])
def test_linear_regime_exact(k):
    cfg = SimConfig(sample_count=256, profile="sine", mode=k, amplitude=1e-3,
                    nonlinear=False, t_end=1.0, dt=0.05)
    states = evolve(cfg)
    x = cfg.grid.x
    for st in states:
        exact = 1e-3 * np.exp(-k * st.t) * np.sin(k * x)
        assert np.max(np.abs(st.f.samples - exact)) <= 1e-8 * 1e-3 * np.exp(-k * st.t) + 1e-18


def test_zero_data_stays_zero():
    states = evolve(SimConfig(profile="zero", **SMALL))
    assert all(st.f.sup() == 0 for st in states)


def test_cutoff_annihilates_high_data():
    cfg = SimConfig(profile="sine", mode=40, cutoff=20, **SMALL)
    states = evolve(cfg)
    assert all(st.f.sup() < 1e-13 * cfg.amplitude for st in states)


def test_t_end_zero_single_snapshot():
    assert len(evolve(SimConfig(t_end=0.0, sample_count=256))) == 1


@pytest.fixture(scope="module")
def moderate_run():
    cfg = SimConfig(sample_count=256, profile="random", amplitude=0.5, k_max=40,
                    cutoff=64, t_end=0.5, output_every=4)
    return cfg, evolve(cfg)


def test_galerkin_invariance(moderate_run):
    cfg, states = moderate_run
    for st in states:
        p = project(st.f, cfg.cutoff)
        assert (st.f - p).l2() <= 1e-10 * st.f.l2()


def test_mean_conserved(moderate_run):
    _, states = moderate_run
    scale = states[0].f.l2()
    m0 = states[0].f.mean()
    for st in states[1:]:
        assert abs(st.f.mean() - m0) / scale < 1e-9 * max(st.t, 1)


def test_hs_decreases_on_moderate_data(moderate_run):
    _, states = moderate_run
    assert states[-1].diagnostics["hs"] < states[0].diagnostics["hs"]


def test_dissipation_floor(moderate_run):
    cfg, states = moderate_run
    rep = energy_report(states, cfg.s)
    c = rep.columns
    assert np.all(c["dissipation"] >= c["dissipation_floor"] * (1 - 1e-12))
    assert np.all(rep.columns["residual"] <= 1e-12 * np.max(np.abs(c["hs2"])))
    assert math.isfinite(rep.f_meas)


def test_energy_report_needs_three_snapshots(moderate_run):
    _, states = moderate_run
    with pytest.raises(InsufficientSnapshots):
        energy_report(states[:2], 1.6)


def test_energy_identity_linear_regime():
    cfg = SimConfig(sample_count=256, profile="sine", mode=1, amplitude=1e-3,
                    nonlinear=False, t_end=0.1, dt=2e-4)
    rep = energy_report(evolve(cfg), cfg.s)
    c = rep.columns
    inner = slice(1, -1)  # centered differences
    target = -2 * c["hs_half2"][inner]
    assert np.max(np.abs(c["d_hs2_dt"][inner] - target) / np.abs(target)) < 1e-6


def test_energy_report_zero_field():
    rep = energy_report(evolve(SimConfig(profile="zero", sample_count=64, t_end=0.5, dt=0.1)), 1.6)
    for v in rep.columns.values():
        if v is not rep.columns["t"]:
            assert np.all(v == 0)
    assert rep.f_meas == 0


def _final(cfg, dt):
    return evolve(replace(cfg, dt=dt, output_every=10**6))[-1].f


@pytest.mark.parametrize("stepper,order", [("ETD1", 0.9), ("ETDRK2", 1.9)])
def test_self_convergence(stepper, order):
    cfg = SimConfig(sample_count=256, profile="bump", amplitude=0.5, t_end=0.5,
                    cutoff=64, stepper=stepper)
    f1, f2, f3 = (_final(cfg, dt) for dt in (0.02, 0.01, 0.005))
    measured = math.log2((f1 - f2).l2() / (f2 - f3).l2())
    assert measured >= order


def test_linf_non_increasing_small_data():
    cfg = SimConfig(sample_count=256, profile="bump", amplitude=0.1, t_end=0.5)
    states = evolve(cfg)
    linf = np.array([st.diagnostics["linf"] for st in states])
    t = np.array([st.t for st in states])
    growth = np.diff(linf) / np.diff(t)
    assert np.all(growth <= 1e-6)


def test_blowup_on_non_finite(monkeypatch):
    cfg = SimConfig(sample_count=64, profile="bump", t_end=0.1, dt=0.01)

    def bad(self, spec):
        return np.full_like(spec, np.inf)

    monkeypatch.setattr(evolution._Propagator, "nonlinear", bad)
    with pytest.raises(BlowupDetected) as info:
        evolve(cfg)
    assert info.value.time == 0.0 and len(info.value.states) == 1


def test_blowup_on_ceiling(monkeypatch):
    cfg = SimConfig(sample_count=64, profile="bump", t_end=0.1, dt=0.01, blowup_factor=2)

    def grow(self, spec):
        return 1e3 * spec

    monkeypatch.setattr(evolution._Propagator, "nonlinear", grow)
    with pytest.raises(BlowupDetected) as info:
        evolve(cfg)
    assert info.value.time > 0


def test_cauchy_trivial_for_band_limited_linear_flow():
    # the nonlinear term feeds every mode, so only the linear flow is cutoff-independent
    cfg = SimConfig(sample_count=256, profile="sine", mode=3, amplitude=1e-4, t_end=0.1,
                    nonlinear=False)
    rows = cauchy_study(initial_field(cfg), [8, 16, 32], 0.5, cfg)
    assert all(r["distance"] < 1e-13 * 1e-4 for r in rows)


def test_cauchy_validation():
    cfg = SimConfig(sample_count=64)
    f0 = initial_field(cfg)
    with pytest.raises(ParamRange):
        cauchy_study(f0, [16, 8], 0.5, cfg)
    with pytest.raises(ParamRange):
        cauchy_study(f0, [8, 16], 1.7, cfg)


def test_stability_zero_perturbation():
    cfg = SimConfig(sample_count=128, profile="bump", t_end=0.2)
    f0 = initial_field(cfg)
    rep = stability_study(f0, RealField.zeros(cfg.grid), 1e-3, cfg)
    assert np.all(rep.distance == 0) and rep.rate is None


def test_stability_linear_regime_contracts():
    cfg = SimConfig(sample_count=128, profile="bump", amplitude=1e-4, t_end=0.3, nonlinear=False)
    f0 = initial_field(cfg)
    pert = RealField(cfg.grid, np.sin(3 * cfg.grid.x))
    rep = stability_study(f0, pert, 1e-3, cfg)
    assert rep.rate <= 0
    assert rep.initial == pytest.approx(1e-3 * sobolev_norm(pert, 0.5), rel=1e-12)
