"""Broadband rotational cooling with sech-pulse trains.

Two studies: (i) steady-state temperature vs pulse detuning for several
pulse durations, compared with the closed-form sech-pulse Doppler limit;
(ii) cooling a hot (300 K) distribution of a stiff-rotor molecular ion
(B ~ 8.7 GHz) to about 1 K in 20 ms, strongly enhancing the absolute
ground state.
"""

import math

import matplotlib.pyplot as plt
import numpy as np

from rotcool import (MoleculeSpec, SechPulseTrain, apply_pulses,
                     build_pulse_map, observables, pulse_map_steady_state,
                     sech_doppler_limit, thermal_distribution, thermal_j_max)

gamma = 2 * math.pi * 20e6

# (i) steady state vs detuning, B = 20 MHz, theta0 = pi/8.
b_rot = 20e6
spec = MoleculeSpec(b_rot, b_rot, 0, 0, gamma, j_max=thermal_j_max(b_rot, 10.0))
init = thermal_distribution(spec, 10.0)
fig, ax = plt.subplots(figsize=(5.8, 3.8))
detunings = np.linspace(-10, -1.5, 15)
for tau_ps, color in ((2, "C0"), (6, "C1"), (10, "C2")):
    tau_p = tau_ps * 1e-12
    sim, analytic = [], []
    for dtp in detunings:
        pulse = SechPulseTrain(tau_p=tau_p, rep_period=7 / gamma,
                               theta0=math.pi / 8, delta=dtp / tau_p)
        pmap = build_pulse_map(spec, pulse)
        ss = pulse_map_steady_state(pmap, init)
        sim.append(observables(ss, spec).t_eff_K)
        analytic.append(sech_doppler_limit(pulse))
    ax.plot(detunings, analytic, "-", color=color, lw=1)
    ax.plot(detunings, sim, "o", ms=4, color=color, label=f"{tau_ps} ps")
ax.set_xlabel(r"$\delta\,\tau_p$")
ax.set_ylabel("steady-state temperature (K)")
ax.legend(title="pulse duration")
fig.tight_layout()
fig.savefig("sech_steady_state.png", dpi=150)
print("wrote sech_steady_state.png")

# (ii) a YF+-like ion: strong Pi <- Sigma band, B = 8.7 GHz, from 300 K.
gamma_ion = 2 * math.pi * 37e6
b_ion = 8.7e9
tau_p = 6e-12
spec_ion = MoleculeSpec(b_ion, b_ion, 0, 1, gamma_ion,
                        j_max=thermal_j_max(b_ion, 300.0))
pulse = SechPulseTrain(tau_p=tau_p, rep_period=7 / gamma_ion,
                       theta0=math.pi / 8, delta=-10.0 / tau_p)
init_ion = thermal_distribution(spec_ion, 300.0)
pmap = build_pulse_map(spec_ion, pulse)
n_pulses = int(round(0.02 / pulse.rep_period))
final = apply_pulses(pmap, init_ion, n_pulses, rep_period=pulse.rep_period)
enh = final.populations / np.clip(init_ion.populations, 1e-300, None)
print(f"{n_pulses} pulses over 20 ms; classical limit "
      f"{sech_doppler_limit(pulse):.2f} K")
print(f"ground-state population: {init_ion.populations[0]:.2e} -> "
      f"{final.populations[0]:.2f} ({enh[0]:.0f}x)")

fig2, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.6))
ax1.semilogy(init_ion.basis.J, init_ion.populations, "k-", label="300 K")
ax1.semilogy(final.basis.J, final.populations, "C0-", label="after 20 ms")
ax1.set_xlim(0, 80)
ax1.set_ylim(1e-8, 1)
ax1.set_xlabel("J")
ax1.set_ylabel("population")
ax1.legend()
ax2.semilogy(final.basis.J[:40], enh[:40], "C0o", ms=4)
ax2.axhline(1.0, color="k", lw=0.8)
ax2.set_xlabel("J")
ax2.set_ylabel("enhancement over initial")
fig2.tight_layout()
fig2.savefig("broadband_ion_cooling.png", dpi=150)
print("wrote broadband_ion_cooling.png")
