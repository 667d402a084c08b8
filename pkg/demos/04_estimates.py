"""
Measuring the nonlinear estimates
=================================

Each check evaluates both sides of an inequality on a random ensemble.
The ratios themselves carry no meaning; their stability under refinement
does.
"""

from muskatlab.estimator import CampaignConfig, EnsembleSpec, campaign, refinement_table

cfg = CampaignConfig(sample_count=256, ensemble=EnsembleSpec(count=8, k_max=32), threads=4)
for row in refinement_table(campaign(cfg)):
    print(f"{row['id']:15s} median {row['median_coarse']:.3g} -> {row['median_fine']:.3g}"
          f"  ({row['median_change']:.0%})")
