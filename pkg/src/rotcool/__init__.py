"""rotcool: Doppler-type laser cooling of molecular rotation.

Closed-form classical cooling theory (CW and hyperbolic-secant pulse
trains), exact angular-momentum algebra for singlet linear molecules,
quantized-rotor scattering-rate models, and time-domain evolution of
rotational populations.
"""

__version__ = "0.1.0"

from .angular import (Branch, Parity, StateLabel, ThreeJArgs,
                      emission_branching, honl_london, wigner3j)
from .classical import (CwLaser, DegreeOfFreedom, Mode, MonteCarloResult,
                        SechPulseTrain, cw_damping_curve, cw_doppler_limit,
                        cw_scattering_rate, damping_1d, damping_1d_linearized,
                        damping_coefficient, energy_damping_time,
                        jump_monte_carlo, kinetic_energy_change,
                        momentum_diffusion, rosen_zener_pex,
                        sech_damping_1d, sech_damping_curve,
                        sech_doppler_limit, sech_energy_damping_rate,
                        sech_heating_power, sech_optimal_detuning,
                        sech_scattering_rate)
from .constants import CODATA, PhysicalConstants
from .engine import (Observables, PulseMap, RateGenerator, apply_pulses,
                     boltzmann_fit, build_generator, build_pulse_map,
                     cold_peak_fit_window, observables, peak_psd, propagate,
                     pulse_map_steady_state, steady_state)
from .exceptions import ConfigError, NumericalError, RegimeError
from .rates import (SaturationContext, branch_rate, cooling_power,
                    cooling_power_simplified, doppler_limit_general,
                    equilibrium_j0, sat_averaged, sat_component,
                    saturation_intensity, transition_dipole_sq)
from .rates import energy_damping_time as rotor_energy_damping_time
from .structure import (LineEntry, Manifold, MoleculeSpec, PopulationState,
                        RotationalBasis, capture_j, level_energy, line_list,
                        parity_labels, thermal_distribution, thermal_j_max,
                        write_fortrat_csv)
