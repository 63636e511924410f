# %% [markdown]
# # Finite orbits of subspaces
#
# Symbol 1 of the first factor is diag(2, 1) and symbol 2 swaps the axes; the
# second factor has the roles reversed. Pairs of coordinate axes are mapped to
# pairs of coordinate axes, so they form a finite equivariant class.

# %%
import numpy as np

from thermoform import Subspace, SubspaceClass, catalog, classify, decompose_equivariant, orbit_of
from thermoform.classes import find_finite_orbit_classes, find_simultaneous_proximal_word

nt = catalog.build("nottot").system
e1, e2 = Subspace.axis(2, 1), Subspace.axis(2, 2)

# %%
w0 = orbit_of((e1, e1), nt)
len(w0), w0.adjacency

# %%
# Every symbol swaps "same axis" pairs with "different axis" pairs: period 2.
classify(w0)

# %%
# The seeded search finds the same class and nothing else (it never claims completeness).
found = find_finite_orbit_classes(nt, (1, 1), cap=64)
len(found), found.seeds_tried, found.complete

# %% [markdown]
# ## Two-step recoding
#
# Grouping symbols in pairs gives four symbols. Each pair word has even
# length, so the parity flip disappears and the class splits in two.

# %%
rec = catalog.build("nottot-recoded").system
W0 = SubspaceClass.from_members([(a, b) for a in (e1, e2) for b in (e1, e2)], rec)
parts = decompose_equivariant(W0, rec)
[(len(p), classify(p).primitive, classify(p).exponent) for p in parts]

# %%
# A word whose products are proximal in both factors.
res = find_simultaneous_proximal_word(nt, max_len=4)
res.word, res.gap_ratios
