"""Quantized-rotor scattering rates and analytic cooling predictions.

P/R branch rates for a 1-Sigma <-> 1-Sigma band in the unresolved-rotation
regime, saturation parameters (per polarization component and
polarization-averaged), cooling power, the equilibrium rotational quantum
number, and Doppler-limit temperatures for general singlet bands.

Convention: the power-broadening saturation s_B defaults to s0 (total
applied intensity over the two-level saturation intensity); polarization
switching multiplies every rate by 1/3 and replaces the polarization
projection factor by 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


from .angular import Branch, wigner3j
from .constants import CODATA

_HBAR = CODATA.hbar
_H = CODATA.h
_KB = CODATA.k_B
_C = CODATA.c
_EPS0 = CODATA.eps0


@dataclass(frozen=True)
class SaturationContext:
    """Intensity bookkeeping for the quantized rate model.

    ``s0`` is the total applied intensity over I_sat.  ``s_B`` is the
    effective power-broadening saturation entering every Lorentzian
    denominator; it defaults to s0.  With ``polarization_switching`` the
    light cycles through sigma-, pi, sigma+ faster than the scattering
    timescale: projection factors become 1 and all rates carry a global
    1/3.
    """

    s0: float
    s_B: float | None = None
    polarization_switching: bool = True

    def __post_init__(self) -> None:
        if self.s0 < 0:
            raise ValueError("s0 must be non-negative")
        if self.s_B is not None and self.s_B < 0:
            raise ValueError("s_B must be non-negative")

    @property
    def power_broadening(self) -> float:
        return self.s0 if self.s_B is None else self.s_B

    @property
    def switching_factor(self) -> float:
        return 1.0 / 3.0 if self.polarization_switching else 1.0


def saturation_intensity(omega: float, gamma: float) -> float:
    """Two-level rotationless saturation intensity (W/m^2):
    I_sat = hbar omega^3 gamma / (12 pi c^2)."""
    if omega <= 0 or gamma <= 0:
        raise ValueError("omega and gamma must be positive")
    return _HBAR * omega**3 * gamma / (12.0 * math.pi * _C**2)


def transition_dipole_sq(omega: float, gamma: float) -> float:
    """Squared body-frame transition dipole moment (C^2 m^2) implied by the
    linewidth: |mu_ev|^2 = 3 pi eps0 hbar c^3 gamma / omega^3."""
    return 3.0 * math.pi * _EPS0 * _HBAR * _C**3 * gamma / omega**3


def sat_component(branch: Branch, J: int, M: int, p: int, s0: float,
                  polarization_factor: float = 1.0) -> float:
    """Resonant saturation parameter of one (J, M) ground state driven by a
    single polarization component p in (-1, 0, +1).

    ``polarization_factor`` is (eps*.e_-p)^2; polarization switching sets
    it to 1.
    """
    if abs(M) > J:
        raise ValueError(f"|M|={abs(M)} exceeds J={J}")
    if p not in (-1, 0, 1):
        raise ValueError("p must be -1, 0 or +1")
    if branch is Branch.P:
        j_up = J - 1
        mult = J
    elif branch is Branch.R:
        j_up = J + 1
        mult = J + 1
    else:
        raise ValueError("component saturation is defined for P and R branches")
    if j_up < 0 or abs(M + p) > j_up:
        return 0.0
    w = wigner3j(j_up, 1, J, -M - p, p, M)
    return s0 * polarization_factor * mult * w * w


def sat_averaged(branch: Branch, J: int, s0: float) -> float:
    """Polarization-summed resonant saturation: s0 J/(2J+1) on P,
    s0 (J+1)/(2J+1) on R."""
    if J < 0:
        raise ValueError("J must be non-negative")
    if branch is Branch.P:
        return s0 * J / (2.0 * J + 1.0)
    if branch is Branch.R:
        return s0 * (J + 1.0) / (2.0 * J + 1.0)
    raise ValueError("averaged saturation is defined for P and R branches")


def branch_rate(branch: Branch, J: int, delta: float, b_hz: float,
                gamma: float, ctx: SaturationContext) -> float:
    """Steady-state scattering rate (1/s) on the P or R branch of a
    Sigma-Sigma band from ground state J, at laser detuning delta (rad/s)
    from the band origin."""
    if branch is Branch.P:
        line = delta + 4.0 * math.pi * b_hz * J
    elif branch is Branch.R:
        line = delta - 4.0 * math.pi * b_hz * (J + 1.0)
    else:
        raise ValueError("branch rates are defined for P and R")
    s = sat_averaged(branch, J, ctx.s0)
    lorentz = 1.0 + ctx.power_broadening + (2.0 * line / gamma) ** 2
    return ctx.switching_factor * 0.5 * gamma * s / lorentz


def cooling_power(J: int, delta: float, b_hz: float, gamma: float,
                  ctx: SaturationContext) -> float:
    """Net power (W) transferred to the rotor from the laser:
    2hB(J+2) Gamma_R - 2hB(J-1) Gamma_P.  Negative means cooling."""
    gr = branch_rate(Branch.R, J, delta, b_hz, gamma, ctx)
    gp = branch_rate(Branch.P, J, delta, b_hz, gamma, ctx)
    return 2.0 * _H * b_hz * ((J + 2.0) * gr - (J - 1.0) * gp)


def cooling_power_simplified(J: int, delta: float, b_hz: float, gamma: float,
                             ctx: SaturationContext) -> float:
    """Unresolved-rotation simplification of cooling_power, valid for
    4 pi B (J+1) << |delta|: a constant recoil-like heating term plus a
    damping term linear in J(J+1)."""
    s_b = ctx.power_broadening
    denom = gamma**2 * (1.0 + s_b) + 4.0 * delta**2
    front = (gamma**3 * ctx.s0 / 3.0) / denom
    jj = J * (J + 1.0)
    return front * (2.0 * _H * b_hz + _H * b_hz * (jj + 2.0)
                    * 32.0 * math.pi * delta * b_hz / denom)


def energy_damping_time(delta: float, b_hz: float, gamma: float,
                        ctx: SaturationContext) -> float:
    """Rotational-energy damping time constant tau_E (s); positive for red
    detuning."""
    s_b = ctx.power_broadening
    rate = -delta * (4.0 / 3.0) * _HBAR * gamma**3 * ctx.s0 / (
        gamma**2 * (1.0 + s_b) + 4.0 * delta**2) ** 2 * (8.0 * math.pi * b_hz / _HBAR)
    if rate <= 0:
        raise ValueError("energy damping requires red detuning (delta < 0)")
    return 1.0 / rate


def equilibrium_j0(delta: float, b_hz: float, gamma: float,
                   ctx: SaturationContext) -> float:
    """Equilibrium rotational quantum number J0, from
    hB J0(J0+1) = -(hbar gamma/4)((1+s_B) gamma/(2 delta) + 2 delta/gamma) - 2hB.

    Raises when the right-hand side is negative (no cooling fixed point).
    """
    s_b = ctx.power_broadening
    rhs = -(_HBAR * gamma / 4.0) * ((1.0 + s_b) * gamma / (2.0 * delta)
                                    + 2.0 * delta / gamma) - 2.0 * _H * b_hz
    if rhs < 0:
        raise ValueError("no cooling fixed point: right-hand side is negative")
    jj = rhs / (_H * b_hz)
    return 0.5 * (math.sqrt(1.0 + 4.0 * jj) - 1.0)


def doppler_limit_general(delta: float, b_hz: float, gamma: float,
                          ctx: SaturationContext,
                          lambda_lower: int = 0, lambda_upper: int = 0) -> float:
    """Doppler-limit temperature (K) for a general singlet band.

    In the unresolved-rotation regime the band-dependent offset term is
    negligible and is taken as zero, so the result is independent of
    (lambda_lower, lambda_upper).
    """
    if delta >= 0:
        raise ValueError("Doppler limit requires red detuning (delta < 0)")
    s_b = ctx.power_broadening
    return -(_HBAR * gamma / (4.0 * _KB)) * (
        (1.0 + s_b) * gamma / (2.0 * delta) + 2.0 * delta / gamma)
