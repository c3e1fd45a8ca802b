"""Classical Doppler cooling of a generic momentum-like degree of freedom.

The same closed-form machinery covers translation (momentum p, mass m,
photon momentum hbar*k) and rotation (angular momentum L, moment of
inertia I, photon spin hbar).  Includes the lifetime-broadened CW case,
the hyperbolic-secant pulse-train case, and a stochastic-jump Monte Carlo
that verifies the Doppler limits from first principles.

Internally the Monte Carlo works in dimensionless units (rates in gamma
or 1/T_r, momenta in units of the capture momentum scale); SI conversion
happens only at the interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import CODATA

_HBAR = CODATA.hbar
_KB = CODATA.k_B

# Six-beam molasses geometry: +-x, +-y, +-z.
_BEAM_DIRECTIONS = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
    dtype=float,
)


class Mode(Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation"


@dataclass(frozen=True)
class DegreeOfFreedom:
    """A cooled degree of freedom: inertia and photon momentum magnitude.

    For translation ``inertia`` is the mass in kg and ``kappa`` the optical
    wavenumber in 1/m; for rotation ``inertia`` is the moment of inertia in
    kg m^2 and ``kappa`` = 1 (one hbar of spin per photon).
    """

    mode: Mode
    inertia: float
    kappa: float

    def __post_init__(self) -> None:
        if self.inertia <= 0 or self.kappa <= 0:
            raise ValueError("inertia and kappa must be positive")

    @classmethod
    def translation(cls, mass_kg: float, wavelength_m: float) -> "DegreeOfFreedom":
        return cls(Mode.TRANSLATION, mass_kg, 2.0 * math.pi / wavelength_m)

    @classmethod
    def rotation(cls, inertia_kg_m2: float) -> "DegreeOfFreedom":
        return cls(Mode.ROTATION, inertia_kg_m2, 1.0)

    @property
    def recoil_frequency(self) -> float:
        """omega_r = hbar kappa^2 / (2 mu), rad/s."""
        return _HBAR * self.kappa**2 / (2.0 * self.inertia)

    def capture_momentum(self, gamma: float) -> float:
        """|pi_c| = mu gamma / kappa."""
        return self.inertia * gamma / self.kappa


@dataclass(frozen=True)
class CwLaser:
    """CW molasses light: per-beam saturation s0 and detuning delta (rad/s).

    ``delta`` is the recoil-absorbed detuning delta' - omega_r.  ``s_tot``
    is the summed resonant saturation of all applied components; if left
    None, each operation substitutes the total appropriate to its beam
    geometry (2 s0 for the two-beam 1D forms, 6 s0 for isotropic molasses).
    """

    s0: float
    delta: float
    s_tot: float | None = None

    def __post_init__(self) -> None:
        if self.s0 < 0:
            raise ValueError("s0 must be non-negative")
        if self.s_tot is not None and self.s_tot < self.s0:
            raise ValueError("s_tot cannot be smaller than the per-beam s0")

    def total_saturation(self, n_beams: int) -> float:
        return self.s_tot if self.s_tot is not None else n_beams * self.s0


@dataclass(frozen=True)
class SechPulseTrain:
    """Train of transform-limited sech pulses.

    ``tau_p`` pulse duration (s), ``rep_period`` T_r (s), ``theta0`` pulse
    area (rad), ``delta`` detuning of the pulse center frequency (rad/s).
    """

    tau_p: float
    rep_period: float
    theta0: float
    delta: float

    def __post_init__(self) -> None:
        if self.tau_p <= 0 or self.rep_period <= 0:
            raise ValueError("tau_p and rep_period must be positive")
        if self.theta0 < 0:
            raise ValueError("theta0 must be non-negative")
        if self.rep_period < self.tau_p:
            raise ValueError("rep_period shorter than the pulse itself")

    @property
    def peak_rabi(self) -> float:
        """Omega_0 = theta0 / tau_p, rad/s."""
        return self.theta0 / self.tau_p

    def comb_regime_ok(self, gamma: float, limit: float = 0.1) -> bool:
        """True when sech(gamma T_r / 2) is small enough that inter-pulse
        coherence (comb-tooth structure) can be ignored."""
        return 1.0 / math.cosh(gamma * self.rep_period / 2.0) < limit


# ---------------------------------------------------------------------------
# CW (lifetime-broadened) formulas


def kinetic_energy_change(dof: DegreeOfFreedom, pi0: float, theta: float) -> float:
    """Kinetic-energy change (J) upon absorbing one photon: recoil plus
    the Doppler-type projection term."""
    return _HBAR * dof.recoil_frequency + \
        _HBAR * dof.kappa * pi0 * math.cos(theta) / dof.inertia


def cw_scattering_rate(laser: CwLaser, dof: DegreeOfFreedom, pi, khat,
                       gamma: float):
    """Steady-state two-level scattering rate (1/s) of one beam component.

    ``pi`` is the momentum 3-vector (SI); ``khat`` the beam unit vector.
    Broadcasts over leading axes of ``pi``.
    """
    pi = np.asarray(pi, dtype=float)
    khat = np.asarray(khat, dtype=float)
    s_tot = laser.total_saturation(6)
    doppler = dof.kappa * (pi @ khat) / dof.inertia
    lorentz = 1.0 + s_tot + (4.0 / gamma**2) * (laser.delta - doppler) ** 2
    return 0.5 * gamma * laser.s0 / lorentz


def _cw_rate_1d(laser: CwLaser, dof: DegreeOfFreedom, pi_par, gamma: float,
                sign: int):
    s_tot = laser.total_saturation(2)
    doppler = sign * dof.kappa * np.asarray(pi_par, dtype=float) / dof.inertia
    return 0.5 * gamma * laser.s0 / (
        1.0 + s_tot + (4.0 / gamma**2) * (laser.delta - doppler) ** 2)


def damping_1d(laser: CwLaser, dof: DegreeOfFreedom, pi_par, gamma: float):
    """Exact net momentum rate d(pi)/dt from two counter-propagating beams,
    hbar kappa (Gamma(+k) - Gamma(-k))."""
    return _HBAR * dof.kappa * (_cw_rate_1d(laser, dof, pi_par, gamma, +1)
                                - _cw_rate_1d(laser, dof, pi_par, gamma, -1))


def damping_1d_linearized(laser: CwLaser, dof: DegreeOfFreedom, pi_par,
                          gamma: float):
    """Low-temperature linearization of damping_1d (valid for
    kappa*pi/mu << |delta|, gamma)."""
    s_tot = laser.total_saturation(2)
    coeff = 8.0 * gamma**3 * laser.delta * laser.s0 / (
        gamma**2 * (1.0 + s_tot) + 4.0 * laser.delta**2) ** 2
    return _HBAR * dof.kappa**2 * coeff * np.asarray(pi_par, dtype=float) / dof.inertia


def damping_coefficient(laser: CwLaser, dof: DegreeOfFreedom, gamma: float,
                        n_beams: int = 6) -> float:
    """Momentum damping coefficient alpha (positive for red detuning),
    d(pi)/dt = -alpha pi/mu."""
    if n_beams not in (2, 6):
        raise ValueError("n_beams must be 2 (1D) or 6 (isotropic)")
    s_tot = laser.total_saturation(n_beams)
    return -laser.delta * 8.0 * _HBAR * gamma**3 * laser.s0 * dof.kappa**2 / (
        gamma**2 * (1.0 + s_tot) + 4.0 * laser.delta**2) ** 2


def energy_damping_time(laser: CwLaser, dof: DegreeOfFreedom, gamma: float,
                        n_beams: int = 6) -> float:
    """tau_E = mu / (2 alpha): kinetic-energy relaxation time (s)."""
    return dof.inertia / (2.0 * damping_coefficient(laser, dof, gamma, n_beams))


def momentum_diffusion(laser: CwLaser, dof: DegreeOfFreedom, gamma: float) -> float:
    """Six-beam momentum diffusion constant D (SI momentum^2/s)."""
    s_tot = laser.total_saturation(6)
    return 3.0 * _HBAR**2 * gamma**3 * dof.kappa**2 * laser.s0 / (
        gamma**2 * (1.0 + s_tot) + 4.0 * laser.delta**2)


def cw_doppler_limit(laser: CwLaser, gamma: float) -> float:
    """Doppler-limit temperature (K) of six-beam molasses.

    T_D = -(hbar gamma / 4 k_B) ((1 + s_tot) gamma/(2 delta) + 2 delta/gamma)
    with s_tot = 6 s0 unless overridden.
    """
    if laser.delta >= 0:
        raise ValueError("Doppler limit requires red detuning (delta < 0)")
    s_tot = laser.total_saturation(6)
    return -(_HBAR * gamma / (4.0 * _KB)) * (
        (1.0 + s_tot) * gamma / (2.0 * laser.delta) + 2.0 * laser.delta / gamma)


# ---------------------------------------------------------------------------
# Sech-pulse (broadband) formulas


def rosen_zener_pex(pulse: SechPulseTrain, delta_eff) -> float:
    """Single-pulse excitation probability of a two-level absorber detuned
    by delta_eff (rad/s): sin^2(theta0/2) sech^2(delta_eff tau_p / 2)."""
    arg = np.asarray(delta_eff, dtype=float) * pulse.tau_p / 2.0
    return math.sin(pulse.theta0 / 2.0) ** 2 / np.cosh(arg) ** 2


def sech_scattering_rate(pulse: SechPulseTrain, dof: DegreeOfFreedom, pi, khat):
    """Per-beam scattering rate (1/s) of the pulse train on a moving
    absorber."""
    pi = np.asarray(pi, dtype=float)
    khat = np.asarray(khat, dtype=float)
    arg = pulse.delta * pulse.tau_p / 2.0 \
        - (pulse.tau_p / (2.0 * dof.inertia)) * dof.kappa * (pi @ khat)
    return math.sin(pulse.theta0 / 2.0) ** 2 / (pulse.rep_period * np.cosh(arg) ** 2)


def sech_damping_1d(pulse: SechPulseTrain, dof: DegreeOfFreedom, pi_par):
    """Net 1D momentum rate from counter-propagating pulse trains."""
    pi_par = np.asarray(pi_par, dtype=float)
    x = pulse.tau_p * dof.kappa * pi_par / (2.0 * dof.inertia)
    half_detuning = pulse.delta * pulse.tau_p / 2.0
    amp = math.sin(pulse.theta0 / 2.0) ** 2 / pulse.rep_period
    return _HBAR * dof.kappa * amp * (1.0 / np.cosh(half_detuning - x) ** 2
                                      - 1.0 / np.cosh(half_detuning + x) ** 2)


def sech_energy_damping_rate(pulse: SechPulseTrain, dof: DegreeOfFreedom) -> float:
    """Isotropic six-beam energy damping rate 1/tau_E (1/s); positive for
    red detuning."""
    half = pulse.delta * pulse.tau_p / 2.0
    return -(4.0 * _HBAR * dof.kappa**2 * pulse.tau_p / (dof.inertia * pulse.rep_period)) \
        * math.sin(pulse.theta0 / 2.0) ** 2 * math.tanh(half) / math.cosh(half) ** 2


def sech_heating_power(pulse: SechPulseTrain, dof: DegreeOfFreedom) -> float:
    """Six-beam stochastic heating power (W)."""
    half = pulse.delta * pulse.tau_p / 2.0
    return 6.0 * _HBAR**2 * dof.kappa**2 * math.sin(pulse.theta0 / 2.0) ** 2 / (
        dof.inertia * pulse.rep_period * math.cosh(half) ** 2)


def sech_doppler_limit(pulse: SechPulseTrain) -> float:
    """Doppler-limit temperature (K) for sech-pulse molasses:
    k_B T_D = -(hbar/tau_p) coth(delta tau_p / 2)."""
    if pulse.delta >= 0:
        raise ValueError("Doppler limit requires red detuning (delta < 0)")
    return -(_HBAR / (pulse.tau_p * _KB)) / math.tanh(pulse.delta * pulse.tau_p / 2.0)


def sech_optimal_detuning(pulse_duration: float) -> float:
    """Detuning that maximizes the sech damping coefficient:
    ln(2 - sqrt(3)) / tau_p (rad/s)."""
    return math.log(2.0 - math.sqrt(3.0)) / pulse_duration


# ---------------------------------------------------------------------------
# Dimensionless damping curves (Figs. 1-2 style data)


def cw_damping_curve(s0: float, delta_over_gamma: float, x, s_tot: float | None = None):
    """1D CW damping vs dimensionless momentum x = kappa pi / (mu gamma).

    Returns (net, plus, minus) in units of hbar kappa gamma: the net rate
    and the two single-beam contributions.
    """
    x = np.asarray(x, dtype=float)
    if s_tot is None:
        s_tot = 2.0 * s0

    def one_beam(sign):
        return 0.5 * s0 / (1.0 + s_tot + 4.0 * (delta_over_gamma - sign * x) ** 2)

    plus = one_beam(+1.0)
    minus = -one_beam(-1.0)
    return plus + minus, plus, minus


def sech_damping_curve(pulse_area: float, delta_tau_p: float, x):
    """1D sech damping vs x = kappa pi tau_p / mu, in units of hbar kappa/T_r."""
    x = np.asarray(x, dtype=float)
    amp = math.sin(pulse_area / 2.0) ** 2
    plus = amp / np.cosh(delta_tau_p / 2.0 - x / 2.0) ** 2
    minus = -amp / np.cosh(delta_tau_p / 2.0 + x / 2.0) ** 2
    return plus + minus, plus, minus


# ---------------------------------------------------------------------------
# Stochastic-jump Monte Carlo


@dataclass
class MonteCarloResult:
    """Ensemble statistics of a six-beam molasses simulation."""

    times: np.ndarray                 # s
    mean_kinetic_energy: np.ndarray   # J, <|pi|^2>/(2 mu)
    temperature_K: float              # fit over the equilibrated tail
    n_scatter_mean: float             # scattering events per particle
    seed: int


def jump_monte_carlo(dof: DegreeOfFreedom, light: CwLaser | SechPulseTrain,
                     n_particles: int, t_end: float, seed: int,
                     gamma: float | None = None, n_outputs: int = 400,
                     equilibration_fraction: float = 0.5) -> MonteCarloResult:
    """Discrete absorption/emission Monte Carlo in six-beam molasses.

    Absorption picks a beam with probability Gamma_i dt (guarded at
    total-rate * dt <= 0.1); each absorption kicks the momentum by
    hbar kappa along the beam and is followed by an isotropically
    distributed emission kick of the same magnitude.  Returns the kinetic
    energy time series and the temperature fitted over the final
    ``equilibration_fraction`` of the run.
    """
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    rng = np.random.default_rng(seed)

    cw = isinstance(light, CwLaser)
    if cw:
        if gamma is None:
            raise ValueError("gamma is required for CW molasses")
        s_tot = light.total_saturation(6)
        # Dimensionless momentum: kappa pi / (mu gamma).
        kick = _HBAR * dof.kappa**2 / (dof.inertia * gamma)
        energy_scale = _HBAR * gamma**2 / (4.0 * dof.recoil_frequency)
        d = light.delta / gamma
        rate_peak = 0.5 * light.s0 / (1.0 + s_tot)       # per beam, units gamma
        time_scale = gamma                               # steps counted in 1/gamma

        def beam_rates(proj):  # proj: (n, 6) dimensionless Doppler shifts
            return 0.5 * light.s0 / (1.0 + s_tot + 4.0 * (d - proj) ** 2)
    else:
        # Dimensionless momentum: kappa pi tau_p / mu.
        kick = _HBAR * dof.kappa**2 * light.tau_p / dof.inertia
        energy_scale = _HBAR / (4.0 * dof.recoil_frequency * light.tau_p**2)
        half = light.delta * light.tau_p / 2.0
        amp = math.sin(light.theta0 / 2.0) ** 2
        rate_peak = amp                                   # per beam, units 1/T_r
        time_scale = 1.0 / light.rep_period

        def beam_rates(proj):
            return amp / np.cosh(half - proj / 2.0) ** 2

    total_steps_time = t_end * time_scale
    dt = 0.1 / (6.0 * rate_peak)                          # event-rate * dt <= 0.1
    n_steps = int(math.ceil(total_steps_time / dt))
    if n_steps < 10:
        raise ValueError("t_end too short for a meaningful run")
    dt = total_steps_time / n_steps

    pi = np.zeros((n_particles, 3))
    out_every = max(1, n_steps // n_outputs)
    times, energies = [], []
    n_events = 0

    for step in range(n_steps):
        proj = pi @ _BEAM_DIRECTIONS.T                   # (n, 6)
        rates = beam_rates(proj)
        probs = rates * dt
        u = rng.random(n_particles)
        cum = np.cumsum(probs, axis=1)
        scatter = u < cum[:, -1]
        if scatter.any():
            beam_idx = (u[scatter, None] < cum[scatter]).argmax(axis=1)
            n_events += scatter.sum()
            pi[scatter] += kick * _BEAM_DIRECTIONS[beam_idx]
            # Isotropic emission recoil of the same magnitude.
            n_s = int(scatter.sum())
            cos_t = rng.uniform(-1.0, 1.0, n_s)
            phi = rng.uniform(0.0, 2.0 * math.pi, n_s)
            sin_t = np.sqrt(1.0 - cos_t**2)
            emis = np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t],
                            axis=1)
            pi[scatter] += kick * emis
        if step % out_every == 0 or step == n_steps - 1:
            times.append((step + 1) * dt / time_scale)
            energies.append(energy_scale * np.mean(np.sum(pi**2, axis=1)))

    times = np.array(times)
    energies = np.array(energies)
    tail = times >= (1.0 - equilibration_fraction) * times[-1]
    temperature = float(2.0 * energies[tail].mean() / (3.0 * _KB))
    return MonteCarloResult(times=times, mean_kinetic_energy=energies,
                            temperature_K=temperature,
                            n_scatter_mean=float(n_events) / n_particles,
                            seed=seed)
