# %% [markdown]
# # Pressure and affinity dimension
#
# Partition sums grow exponentially with word length. Their growth rate is
# the pressure; `a_n / n` overestimates it at every depth, so its running
# minimum is a certified upper bound.

# %%
import math

import numpy as np

from thermoform import GeneralisedPotential, ScalarWeights, affinity_dimension, catalog, pressure

# %%
# Counting words: every word has weight 1, so a_n = n log 2 and the bracket collapses.
est = pressure(ScalarWeights([1.0, 1.0]), 10)
est.upper, est.lower, est.point, math.log(2)

# %%
# A genuine matrix potential: the two-factor system with a period-2 obstruction.
nt = catalog.build("nottot").system
phi = GeneralisedPotential(nt)
for n in (4, 6, 8, 10):
    e = pressure(phi, n)
    print(f"n={n:2d}  lower={e.lower:.5f}  point={e.point:.5f}  upper={e.upper:.5f}")

# %%
# Per-depth table. The third column is a_n/n, the last the running minimum.
for row in est.records()[:4]:
    print(row)

# %% [markdown]
# ## Affinity dimension
#
# For contractions the singular value pressure P(phi^s) decreases in s and
# crosses zero exactly once. Three copies of Id/2 in the plane give
# log 3 / log 2.

# %%
res = affinity_dimension([0.5 * np.eye(2)] * 3, n_max=10, tol=1e-6)
res.point, math.log(3) / math.log(2), res.bracket

# %%
# Diagonal maps with distinct ratios: the pressure has a kink at s = 1, which is also the root.
res = affinity_dimension([np.diag([0.5, 1 / 3])] * 2, n_max=10, tol=1e-6)
res.point, res.upper_certified
