import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from muskatlab import Grid, RealField
from muskatlab.errors import DegenerateRHS, ParamRange, SpecRange
from muskatlab.estimator import (
    CHECKS,
    CampaignConfig,
    EnsembleSpec,
    campaign,
    check,
    random_field,
    ratio,
    refinement_table,
    validate_params,
    with_count,
)
from muskatlab.norms import sobolev_norm

SMALL = Grid(np.pi, 256)


def test_random_field_deterministic_and_grid_independent():
    spec = EnsembleSpec(seed=3, count=4, k_max=20, localization="none")
    a = random_field(spec, 2, SMALL)
    b = random_field(spec, 2, SMALL)
    assert np.array_equal(a.samples, b.samples)
    fine = random_field(spec, 2, SMALL.refine(2))
    # same function on every grid, up to the sampled max-slope normalization
    c = (fine.samples[::2] @ a.samples) / (a.samples @ a.samples)
    assert np.max(np.abs(fine.samples[::2] - c * a.samples)) < 1e-12
    assert abs(c - 1) < 1e-2
    assert not np.allclose(random_field(spec, 2, SMALL, stream=1).samples, a.samples)


def test_random_field_amplitude():
    spec = EnsembleSpec(count=2, k_max=20, amplitude=0.3)
    f = random_field(spec, 0, SMALL)
    from muskatlab.norms import lipschitz_sup
    assert lipschitz_sup(f) == pytest.approx(0.3, rel=1e-12)
    z = random_field(EnsembleSpec(count=1, k_max=20, amplitude=0.0), 0, SMALL)
    assert z.sup() == 0


@pytest.mark.parametrize("a,b", [(1.0, 1.5), (0.5, 2.0)])
def test_spectral_sum_oracle(a, b):
    beta, kmax = 1.7, 20
    f = random_field(EnsembleSpec(count=1, beta=beta, k_max=kmax, localization="none"), 0, SMALL)
    k = np.arange(1, kmax + 1, dtype=float)
    exact = math.sqrt(np.sum(k ** (2 * a - 2 * beta)) / np.sum(k ** (2 * b - 2 * beta)))
    assert sobolev_norm(f, a) / sobolev_norm(f, b) == pytest.approx(exact, rel=1e-12)


def test_ensemble_validation():
    for bad in [dict(count=0), dict(beta=0.5), dict(k_max=0.5), dict(localization="left")]:
        with pytest.raises(SpecRange):
            EnsembleSpec(**bad)
    with pytest.raises(SpecRange):
        random_field(EnsembleSpec(count=2), 2, SMALL)
    with pytest.raises(SpecRange):
        random_field(EnsembleSpec(count=1, k_max=100), 0, SMALL)


@pytest.mark.parametrize("cid,params", [
    ("DRIFT_HOLDER", {"nu": 0.2}),
    ("LOW_FREQ", {"epsilon": 0.5}),
    ("LIPSCHITZ", {"delta": 0.5}),
    ("PRODUCT", {"besov_s": 1.0}),
    ("COMPOSITION", {"sigma": 2.0}),
    ("HILBERT_COMM", {"theta": 0.6}),
])
def test_param_range(cid, params):
    with pytest.raises(ParamRange):
        validate_params(cid, params)


def test_unknown_check():
    with pytest.raises(ParamRange):
        check("NOPE", EnsembleSpec(count=1), SMALL)


@given(st.floats(0.01, 100.0))
def test_low_freq_ratio_invariant_under_scaling_g(lam):
    spec = EnsembleSpec(count=1, k_max=20)
    f, g = random_field(spec, 0, SMALL, 0), random_field(spec, 0, SMALL, 1)
    assert ratio("LOW_FREQ", f, g * lam) == pytest.approx(ratio("LOW_FREQ", f, g), rel=1e-10)


def test_product_with_constant_factor():
    spec = EnsembleSpec(count=1, k_max=20)
    f = random_field(spec, 0, SMALL)
    one = RealField(SMALL, np.ones(SMALL.N))
    assert ratio("PRODUCT", f, one) == pytest.approx(0.5, rel=1e-12)


def test_degenerate_rhs():
    z = RealField.zeros(SMALL)
    with pytest.raises(DegenerateRHS):
        ratio("LOW_FREQ", z, z)
    rep = check("COMMUTATOR", EnsembleSpec(count=3, k_max=20, amplitude=0.0), SMALL)
    assert rep.degenerate_count == 3 and rep.ratios == []
    assert math.isnan(rep.max)


@pytest.mark.parametrize("cid", CHECKS)
def test_every_check_finite(cid):
    rep = check(cid, EnsembleSpec(count=2, k_max=20), SMALL)
    assert len(rep.ratios) == 2 and all(math.isfinite(r) and r > 0 for r in rep.ratios)


def test_report_json_deterministic():
    spec = EnsembleSpec(count=3, k_max=20)
    a = check("KPV", spec, SMALL, threads=1).to_json()
    b = check("KPV", spec, SMALL, threads=3).to_json()
    assert a == b
    d = json.loads(a)
    for key in ("id", "params", "grid", "seed", "ratios", "max", "median", "p90",
                "resolution", "degenerate_count", "refinement_flag"):
        assert key in d


def test_campaign_writes_reports(tmp_path):
    cfg = CampaignConfig(sample_count=128, checks=("LOW_FREQ", "PRODUCT"),
                         ensemble=EnsembleSpec(count=3, k_max=16))
    reports = campaign(cfg, tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "LOW_FREQ_N128.json", "LOW_FREQ_N256.json", "PRODUCT_N128.json", "PRODUCT_N256.json"]
    rows = refinement_table(reports)
    assert [r["id"] for r in rows] == ["LOW_FREQ", "PRODUCT"]
    assert all(r["median_change"] < 0.2 and not r["flag"] for r in rows)


def test_empty_campaign_rejected():
    with pytest.raises(SpecRange):
        with_count(CampaignConfig(), 0)
