"""Doppler limits from closed forms and from a stochastic-jump simulation.

A classical rotor in six-beam molasses is simulated event by event
(absorption kicks along the beams, isotropic emission recoil) and its
equilibrium temperature is compared against the closed-form limit.  The
same framework covers translation: swapping the degree of freedom leaves
the limit unchanged, which is the central point of the classical theory.
"""

import math

import matplotlib.pyplot as plt
import numpy as np

from rotcool import (CODATA, CwLaser, DegreeOfFreedom, cw_doppler_limit,
                     energy_damping_time, jump_monte_carlo)

gamma = 2 * math.pi * 20e6
laser = CwLaser(s0=0.01, delta=-gamma / 2)

# A rotor whose recoil frequency is 4e-4 gamma (sets the moment of
# inertia; the limit itself does not depend on it).
dof = DegreeOfFreedom.rotation(CODATA.hbar / (2 * 4e-4 * gamma))
tau_e = energy_damping_time(laser, dof, gamma)
print(f"energy damping time: {tau_e*1e3:.2f} ms")

result = jump_monte_carlo(dof, laser, n_particles=600, t_end=8 * tau_e,
                          seed=1, gamma=gamma)
t_d = cw_doppler_limit(laser, gamma)
print(f"Monte Carlo equilibrium: {result.temperature_K*1e6:.0f} uK")
print(f"closed-form limit:       {t_d*1e6:.0f} uK")
print(f"hbar*gamma/(2 k_B):      {CODATA.hbar*gamma/(2*CODATA.k_B)*1e6:.0f} uK")

fig, ax = plt.subplots(figsize=(5.5, 3.5))
ax.plot(result.times * 1e3, result.mean_kinetic_energy / CODATA.k_B * 1e6 / 1.5,
        label="ensemble 2<E>/3k_B")
ax.axhline(t_d * 1e6, color="C3", ls="--", label="closed form")
ax.set_xlabel("time (ms)")
ax.set_ylabel("temperature (uK)")
ax.legend()
fig.tight_layout()
fig.savefig("monte_carlo_cooling.png", dpi=150)
print("wrote monte_carlo_cooling.png")

# Detuning dependence of the limit, for two intensities.
detunings = np.linspace(-2.0, -0.2, 60)
fig2, ax2 = plt.subplots(figsize=(5.5, 3.5))
for s0 in (0.01, 0.5):
    temps = [cw_doppler_limit(CwLaser(s0=s0, delta=d * gamma), gamma) * 1e6
             for d in detunings]
    ax2.plot(detunings, temps, label=f"s0 = {s0}")
ax2.set_xlabel(r"$\delta/\gamma$")
ax2.set_ylabel("Doppler limit (uK)")
ax2.legend()
fig2.tight_layout()
fig2.savefig("doppler_limit_vs_detuning.png", dpi=150)
print("wrote doppler_limit_vs_detuning.png")
