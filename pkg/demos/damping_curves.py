"""1D molasses damping curves for CW and sech-pulse light.

Reproduces the textbook optical-molasses force curve for a lifetime-
broadened absorber red-detuned by half a linewidth, and its broadband
analog for a train of hyperbolic-secant pulses at the rate-maximizing
detuning.  Both are emitted in the natural dimensionless units
(momentum in capture-momentum units, force in photon-recoil units).
"""

import math

import matplotlib.pyplot as plt
import numpy as np

from rotcool import cw_damping_curve, sech_damping_curve, sech_optimal_detuning

# CW case: two counter-propagating beams, s0 per beam, delta = -gamma/2.
x = np.linspace(-1.5, 1.5, 401)
net, plus, minus = cw_damping_curve(s0=0.01, delta_over_gamma=-0.5, x=x)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
ax1.plot(x, net / 0.01, "k-", label="net")
ax1.plot(x, plus / 0.01, "C0--", label="+k beam")
ax1.plot(x, minus / 0.01, "C3--", label="-k beam")
ax1.set_xlabel(r"$\kappa\pi/(\mu\gamma)$")
ax1.set_ylabel(r"$\dot{\pi}\,/\,(\hbar\kappa\gamma s_0)$")
ax1.set_title(r"CW, $\delta=-\gamma/2$")
ax1.legend()

# Sech-pulse case at delta = ln(2-sqrt(3))/tau_p, where the damping
# coefficient is largest.  The capture range is set by 1/tau_p instead
# of gamma.
tau_p = 1.0                         # everything scales with tau_p
delta_tau = sech_optimal_detuning(tau_p) * tau_p
xs = np.linspace(-10, 10, 401)
net_s, plus_s, minus_s = sech_damping_curve(math.pi / 8, delta_tau, xs)

ax2.plot(xs, net_s, "k-", label="net")
ax2.plot(xs, plus_s, "C0--", label="+k train")
ax2.plot(xs, minus_s, "C3--", label="-k train")
ax2.set_xlabel(r"$\kappa\pi\tau_p/\mu$")
ax2.set_ylabel(r"$\dot{\pi}\,/\,(\hbar\kappa/T_r)$")
ax2.set_title(rf"sech pulses, $\delta\tau_p={delta_tau:.2f}$")
ax2.legend()

fig.tight_layout()
fig.savefig("damping_curves.png", dpi=150)
print("wrote damping_curves.png")
print(f"max CW damping at x = {x[np.argmin(net)]:.2f}")
print(f"max sech damping at x = {xs[np.argmin(net_s)]:.2f}")
