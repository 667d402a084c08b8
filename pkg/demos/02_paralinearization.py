"""
Splitting the nonlinearity
==========================

T(f)g splits into an elliptic part gamma(f) Lambda g, a transport part
V(f) g_x and a remainder.  For a constant slope the remainder vanishes and
the drift is what the periodic window leaves behind.
"""

import numpy as np

from muskatlab import Grid, apply_lambda, drift, gamma, remainder, t_even, t_odd, t_operator
from muskatlab.estimator import EnsembleSpec, random_field
from muskatlab.finite_diff import default_rule
from muskatlab.profiles import mexican_hat, slope_window, windowed_linear
from muskatlab.verify import masked_rel

grid = Grid(np.pi, 1024)
rule = default_rule(grid)

# even and odd kernels add up to the full operator
spec = EnsembleSpec(count=2)
f, g = random_field(spec, 0, grid), random_field(spec, 1, grid)
t = t_operator(f, g, rule)
print("even + odd - T:", masked_rel(t_even(f, g, rule) + t_odd(f, g, rule) - t, t))

# linear profiles: the remainder is tiny on the inner window, the drift is not
inner = slope_window(grid)
h = mexican_hat(grid, grid.L / 16)
for m in (0.2, 1.0, 3.0):
    f = windowed_linear(grid, m)
    ref = gamma(f) * apply_lambda(h, 1.0)
    r = masked_rel(remainder(f, h, rule), ref, inner)
    v = masked_rel(drift(f, rule), ref, inner)
    print(f"slope {m:3.1f}: |R|/|gamma Lambda g| = {r:.2e}   |V|/|gamma Lambda g| = {v:.2e}")
