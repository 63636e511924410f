# %% [markdown]
# # Correlations and mixing
#
# Cylinder masses come from a finite-depth Gibbs table: mu([w]) is
# proportional to Phi(w). Correlation ratios compare the mass of "i, then a
# gap, then j" with the product of the two masses.

# %%
import numpy as np

from thermoform import GeneralisedPotential, RestrictedPotential, ScalarWeights, Subspace, SubspaceClass, catalog
from thermoform.gibbs import (
    DiagnosticConfig,
    correlation_ratio_scan,
    entropy_estimate,
    ergodic_average,
    gibbs_table,
    parity_profile,
    psi_mixing_precondition,
    total_ergodicity_diagnostic,
)

# %%
# Bernoulli weights: exactly independent, deviation at rounding level.
[r.deviation for r in correlation_ratio_scan(ScalarWeights([0.5, 0.5]), range(1, 7), 2)]

# %%
nt = catalog.build("nottot").system
phi = GeneralisedPotential(nt)
scan = correlation_ratio_scan(phi, range(1, 7), 2)
for r in scan:
    print(r.gap, round(r.deviation, 4), r.witness_i, r.witness_j)

# %%
# Odd gaps correlate more strongly than even ones.
parity_profile(scan)[2]

# %%
t = gibbs_table(phi, 10)
avg = ergodic_average(t, phi)
entropy_estimate(t), avg.value, avg.residual

# %%
# The whole check in one call: classes, their periods and the parity scan.
rep = total_ergodicity_diagnostic(nt)
rep.verdict

# %% [markdown]
# ## Connector constants
#
# With connectors of one fixed length m, the minimum over (i, j) of the best
# ratio Phi(ikj) / (Phi(i) Phi(j)) is positive on the primitive half of the
# recoded class. The ratio is not normalised by Phi(k), so it grows with m.

# %%
rec = catalog.build("nottot-recoded").system
e1, e2 = Subspace.axis(2, 1), Subspace.axis(2, 2)
w1 = RestrictedPotential(rec, SubspaceClass.from_members([(e1, e1), (e2, e2)], rec))
[psi_mixing_precondition(w1, m, 3).delta for m in (1, 2, 3)]

# %%
# Restricted to that half the diagnostic finds no obstruction.
total_ergodicity_diagnostic(rec, DiagnosticConfig(classes=(w1.subspace_class,), gaps=(1, 2, 3))).verdict
