"""
Galerkin truncations converge
=============================

Runs with growing Fourier cutoffs are compared in a weaker norm; the
distances between consecutive truncations shrink.  A second experiment
tracks how a small perturbation evolves.
"""

import os
from dataclasses import replace

from muskatlab import RealField, cauchy_study, stability_study
from muskatlab.config import load_config
from muskatlab.estimator import EnsembleSpec, random_field
from muskatlab.evolution import initial_field

here = os.path.dirname(os.path.abspath(__file__))
run = load_config(os.path.join(here, "moderate_slope.cfg"))
cfg = replace(run.sim, t_end=0.1)
f0 = initial_field(cfg)

for row in cauchy_study(f0, run.cutoffs, run.s_prime, cfg, threads=4):
    print(f"n = {row['n']:5.0f} -> {row['n_next']:5.0f}: {row['distance']:.4e}")

pert = random_field(EnsembleSpec(count=1), 0, cfg.grid, stream=1)
rep = stability_study(f0, pert, 1e-3, cfg, threads=2)
print("fitted rate:", rep.rate)
print("zero perturbation:", stability_study(f0, RealField.zeros(cfg.grid), 1e-3, cfg).rate)
