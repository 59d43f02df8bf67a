# # One energy, three routes
#
# The auxiliary-field energy, the envelope energy over the mean kinetic
# energy s, and the envelope energy over the coupling v all land on the same
# number.  The coupling form even agrees with the auxiliary-field energy at
# every coupling, not only at the optimum.

from auxfield import QuantumState, anharmonic, coulomb, harmonic, power_law
from auxfield.envelope import equivalence_report, pointwise_identity_gap

# In[1]:

for target in (anharmonic(0.1), power_law(1.0, 4.0, harmonic()), power_law(1.0, 1.0, coulomb())):
    rep = equivalence_report(target, QuantumState(1, 2))
    print(f"{target.name:<28} E_afm={rep['E_afm']:.12f}  E_et_s={rep['E_et_s']:.12f}  "
          f"E_et_v={rep['E_et_v']:.12f}  gap={rep['energy_gap']:.1e}")

# In[2]:

print("max pointwise gap:", pointwise_identity_gap(anharmonic(1.0)))

# In[3]:

# The kinetic potential is the Legendre partner of the base spectrum.
from auxfield.envelope import kinetic_potential, kinetic_sample

base = harmonic(1.0)
for v in (0.1, 1.0, 10.0):
    smp = kinetic_sample(base, 1.5, v)
    print(v, smp.s, smp.k, kinetic_potential(base, 1.5, smp.s, closed_form=False))
