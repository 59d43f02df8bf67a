# # The anharmonic oscillator, approximately and exactly
#
# The Hamiltonian p^2/4 + 3 r^2 + 8 sqrt(beta) r is replaced by a pure
# oscillator nu r^2 plus a constant; nu is then fixed by making the energy
# stationary.  Here we compare the result with a direct numerical solution.

import numpy as np

from auxfield import QuantumState, anharmonic, solve
from auxfield.scenarios import exact_solution

# In[1]:

target = anharmonic(1.0)
sol = solve(target)
print("E_afm =", sol.energy, " nu0 =", sol.nu0, " r0 =", sol.r0, " bound:", sol.bound.value)

# In[2]:

# The energy as a function of the auxiliary coupling has a single minimum.
from auxfield.afm import AfmProblem, afm_energy_at

problem = AfmProblem(target)
for nu in np.linspace(4.0, 30.0, 8):
    print(f"nu = {nu:6.2f}   E(nu) = {afm_energy_at(problem, nu):.6f}")

# In[3]:

# The exact eigenvalue sits below: concave g means an upper bound.
for n, l in [(0, 0), (1, 0), (0, 2), (3, 3)]:
    state = QuantumState(n, l)
    afm = solve(target, state)
    ex = exact_solution(target, state, afm.energy)
    print(f"n={n} l={l}  E_afm={afm.energy:.8f}  E_exact={ex.energy:.8f}  "
          f"gap={afm.energy - ex.energy:.2e}  (oracle err {ex.error_estimate:.1e})")

# In[4]:

# The optimal oscillator touches V at r0 and stays above it everywhere.
from auxfield.afm import tangent_potential

x = np.linspace(0.05, 2.0, 6)
print(np.c_[x, target.V(x), tangent_potential(sol, target, x)])

# In[5]:

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    x = np.linspace(0.0, 2.0, 400)
    plt.plot(x, target.V(x), label="V")
    plt.plot(x, tangent_potential(sol, target, x), "--", label="tangent oscillator")
    plt.axvline(sol.r0, color="grey", lw=0.5)
    plt.legend()
    plt.savefig("anharmonic.png", dpi=120)
    print("wrote anharmonic.png")
