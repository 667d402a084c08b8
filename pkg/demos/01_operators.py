"""
Fourier multipliers and the alpha-quadrature
============================================

Lambda, the Hilbert transform and the heat semigroup act exactly on pure
modes.  The same Lambda can be written as an integral of slopes in alpha;
on data supported well inside the window the two agree closely.
"""

import numpy as np

from muskatlab import Grid, RealField, apply_lambda, heat_semigroup, hilbert
from muskatlab.finite_diff import default_rule
from muskatlab.profiles import localized_bump_field
from muskatlab.verify import masked_rel, quadrature_lambda, support_mask

grid = Grid(np.pi, 1024)
x = grid.x

# a pure mode: Lambda multiplies by k, H turns sin into -cos
u = RealField(grid, np.sin(5 * x))
print("Lambda sin(5x) / 5 - sin(5x):", np.max(np.abs(apply_lambda(u, 1.0).samples / 5 - u.samples)))
print("H sin(5x) + cos(5x):         ", np.max(np.abs(hilbert(u).samples + np.cos(5 * x))))
print("e^{-t Lambda} at t = 0.2:     ", np.max(np.abs(heat_semigroup(u, 0.2).samples
                                                      - np.exp(-1.0) * u.samples)))

# the same operator as an integral over alpha of difference quotients
bump = localized_bump_field(grid)
lam = apply_lambda(bump, 1.0)
quad = quadrature_lambda(bump, default_rule(grid))
print("quadrature vs spectral on |x| < L/2:", masked_rel(quad - lam, lam, support_mask(grid)))

# outside the support the periodic images start to matter
far = ~support_mask(grid)
print("same comparison outside the support:", masked_rel(quad - lam, lam, far))
