# # Power laws: scaling and form invariance
#
# For V = a r^p the approximate energy obeys E(m, a) = (a^2/m^p)^(1/(p+2)) E(1, 1),
# and as a function of a continuous principal number N it comes out the
# same whichever solvable base is used.

from auxfield import coulomb, harmonic, power_law, solve
from auxfield.scenarios import scaling_factor

# In[1]:

p, N = 3.0, 2.5
ref = solve(power_law(1.0, p, harmonic(1.0)), N).energy
for m, a in [(2.0, 0.5), (0.7, 3.0)]:
    e = solve(power_law(a, p, harmonic(m)), N).energy
    print(f"m={m} a={a}: E={e:.12f}  scaled ref={scaling_factor(m, a, p) * ref:.12f}")

# In[2]:

for N in (1.0, 1.5, 2.5, 4.0):
    e_h = solve(power_law(1.0, 1.0, harmonic()), N).energy
    e_c = solve(power_law(1.0, 1.0, coulomb()), N).energy
    print(f"N={N}: harmonic base {e_h:.14f}   Coulomb base {e_c:.14f}")

# In[3]:

# Convex g (quartic on the oscillator base) flips the bound.
sol = solve(power_law(1.0, 4.0, harmonic()))
print(sol.bound.value, sol.energy)
