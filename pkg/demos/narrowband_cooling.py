"""Narrowband rotational cooling on a Sigma-Sigma band, from 4 K.

Builds the rate generator over the (J, parity) ground basis, evolves a
4 K thermal distribution for 10 ms, and shows the cooled peak forming
near the equilibrium quantum number, together with the band's Fortrat
diagram that explains which branch the laser drives.
"""

import math

import matplotlib.pyplot as plt
import numpy as np

from rotcool import (Branch, MoleculeSpec, SaturationContext,
                     build_generator, capture_j, cold_peak_fit_window,
                     boltzmann_fit, line_list, observables, propagate,
                     thermal_distribution, thermal_j_max)

gamma = 2 * math.pi * 20e6
b_rot = 0.4e6
spec = MoleculeSpec(b_lower_hz=b_rot, b_upper_hz=b_rot, lambda_lower=0,
                    lambda_upper=0, gamma=gamma,
                    j_max=thermal_j_max(b_rot, 4.0))
print(f"basis up to J = {spec.j_max}; capture J = {capture_j(spec):.0f}")

ctx = SaturationContext(s0=0.1)
init = thermal_distribution(spec, 4.0)
gen = build_generator(spec, delta=-gamma / 2, ctx=ctx)
final = propagate(gen, init, [0.01])[0]

window = cold_peak_fit_window(final, j_cut=30)
t_fit = boltzmann_fit(final, b_rot, window)
obs = observables(final, spec, j_cut=30)
print(f"cooled fraction (J <= 30): {obs.cooled_fraction:.2f}")
print(f"cold-peak temperature:     {t_fit*1e6:.0f} uK (fit window J <= {window})")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.6))
ax1.semilogy(init.basis.J, init.populations, "k-", lw=1, label="initial (4 K)")
ax1.semilogy(final.basis.J, final.populations, "C0-", label="after 10 ms")
ax1.set_xlim(0, 120)
ax1.set_ylim(1e-7, 0.1)
ax1.set_xlabel("J")
ax1.set_ylabel("population")
ax1.legend()

# Fortrat diagram: line offsets vs lower-state J for each branch.
for branch, color in ((Branch.P, "C3"), (Branch.R, "C0")):
    pts = [(ln.J_lower, ln.offset_hz) for ln in line_list(spec)
           if ln.branch is branch and ln.J_lower <= 60]
    js, offs = zip(*pts)
    ax2.plot(np.array(offs) / 1e6, js, ".", ms=3, color=color,
             label=f"{branch.name} branch")
ax2.axvline(-0.5 * gamma / (2 * math.pi) / 1e6, color="k", ls="--",
            label="laser")
ax2.set_xlabel("offset from band origin (MHz)")
ax2.set_ylabel("J (lower)")
ax2.set_xlim(-60, 60)
ax2.legend()

fig.tight_layout()
fig.savefig("narrowband_cooling.png", dpi=150)
print("wrote narrowband_cooling.png")
