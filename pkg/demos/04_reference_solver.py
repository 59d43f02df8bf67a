# # The reference eigensolver
#
# Three-point finite differences on a uniform grid, bisection for the
# wanted level, Richardson extrapolation over three grids.

import numpy as np

from auxfield import QuantumState
from auxfield.oracle import RadialGrid, expectation, observed_order, radial_spectrum, solve_radial

# In[1]:

h = solve_radial(lambda r: -1.0 / r, 1.0, QuantumState())
print("hydrogen:", h.energy, " <r> =", expectation(h, lambda r: r), " error estimate", h.error_estimate)

# In[2]:

grid = RadialGrid(12.0, 500)
raw = [radial_spectrum(lambda r: 0.5 * r * r, 1.0, 0, grid.refined(k))[0][0] for k in (1, 2, 4)]
print("raw energies", raw, " observed order", observed_order(raw))

# In[3]:

for n in range(4):
    print(n, [round(solve_radial(lambda r: 0.5 * r * r, 1.0, QuantumState(n, l)).energy, 9)
              for l in range(4)])

# In[4]:

# Shift under V -> V + sigma r tracks <r>, not the contact point.
from auxfield.scenarios import perturbation_study

study = perturbation_study()
print("r0 =", study["r0"], " <r> =", study["exact_mean_r"])
for row in study["rows"]:
    print(row)
