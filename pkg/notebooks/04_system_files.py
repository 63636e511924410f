# %% [markdown]
# # System description files
#
# Systems travel as small text files. Rationals are accepted and noted when
# they do not convert exactly.

# %%
from thermoform import catalog
from thermoform.cli import run
from thermoform.sysfile import export_system, parse_system

text = """\
alphabet 2
factors 1
factor 1 dim 2 beta 1
matrix 1 1
1/3 0
0 1/4
matrix 1 2
0 1/2
1/2 0
"""
f = parse_system(text, name="demo")
f.system.generators[0], f.notes

# %%
# Catalog entries export to the same format and round trip byte for byte.
out = export_system(catalog.build("nottot-recoded").system)
print(out[:120])
export_system(parse_system(out).system) == out

# %%
# Every command is also available programmatically.
rep = run("dimension", {"system": "similarity(N=3,r=1/2,d=2)", "tol": 1e-6})
print(rep.text())
