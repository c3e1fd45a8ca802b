"""Time-domain evolution of rotational populations.

Narrowband cooling is generated by a rate matrix over the ground
(J, parity) basis (excited manifold adiabatically eliminated); broadband
cooling by a column-stochastic per-pulse map (Rosen-Zener excitation
followed by complete spontaneous decay).  Propagation is by matrix
exponential (sparse action or dense scaling-and-squaring) or adaptive
explicit stepping; pulse maps are applied by binary exponentiation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.csgraph
import scipy.sparse.linalg

from .angular import Parity, StateLabel, emission_branching
from .classical import SechPulseTrain
from .constants import CODATA
from .exceptions import NumericalError, RegimeError
from .rates import SaturationContext
from .structure import (MoleculeSpec, PopulationState, RotationalBasis,
                        line_list, parity_labels)

_H = CODATA.h
_KB = CODATA.k_B

BOUNDARY_FLUX_TOL = 1e-6


@dataclass
class RateGenerator:
    """Rate matrix G[g', g] (1/s) over the ground (J, parity) basis.

    Off-diagonal entries are non-negative scattering rates g -> g';
    columns sum to zero.  ``absorption_rate`` is the total photon
    scattering rate out of each ground state; ``dropped_rate`` the rate of
    absorption channels omitted because their excited state would decay
    past the basis truncation.
    """

    basis: RotationalBasis
    matrix: sp.csc_array
    absorption_rate: np.ndarray
    dropped_rate: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class PulseMap:
    """Column-stochastic map M[g', g]: one pulse plus full decay."""

    basis: RotationalBasis
    matrix: np.ndarray
    excitation_probability: np.ndarray   # summed P_ex per ground state
    dropped_probability: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class Observables:
    """Derived quantities of one population snapshot."""

    mean_j: float
    t_eff_K: float
    t_fit_K: float | None
    peak_psd: float
    cooled_fraction: float
    j_cut: int | None
    t_eff_cold_K: float | None = None


def _decay_channels(spec: MoleculeSpec, upper: StateLabel) -> list[tuple[int, int, float]]:
    """Existing lower-state decay channels (J, eps, branching) of one upper
    level; branching renormalized to machine precision."""
    channels = []
    for dj in (-1, 0, 1):
        j_low = upper.J + dj
        if j_low < spec.lambda_lower:
            continue
        for eps in parity_labels(spec.lambda_lower):
            lower = StateLabel(j_low, spec.lambda_lower, eps)
            b = emission_branching(upper, lower)
            if b > 0.0:
                channels.append((j_low, int(eps), b))
    total = sum(b for _, _, b in channels)
    return [(j, e, b / total) for j, e, b in channels]


def build_generator(spec: MoleculeSpec, delta: float,
                    ctx: SaturationContext) -> RateGenerator:
    """Narrowband rate generator at laser detuning ``delta`` (rad/s) from
    the band origin.

    Each allowed line absorbs at the polarization-switched steady-state
    rate with the line's own detuning in the Lorentzian; decay is
    distributed over all allowed lower states.  Absorption into excited
    states whose decay would leave the truncated basis is dropped and
    accounted in ``dropped_rate``.
    """
    if spec.j_max is None:
        raise ValueError("spec.j_max must be set to build a generator")
    basis = RotationalBasis.build(spec.lambda_lower, spec.j_max)
    n = len(basis)
    gamma = spec.gamma
    s_b = ctx.power_broadening

    rows, cols, vals = [], [], []
    absorption = np.zeros(n)
    dropped = np.zeros(n)
    decay_cache: dict[tuple[int, int], list[tuple[int, int, float]]] = {}

    for ln in line_list(spec):
        g = basis.index(ln.J_lower, int(ln.eps_lower))
        j_up = ln.J_lower + ln.branch.delta_j
        detuning = delta - 2.0 * math.pi * ln.offset_hz
        s_line = ctx.s0 * ln.strength / (2.0 * ln.J_lower + 1.0)
        rate = ctx.switching_factor * 0.5 * gamma * s_line / (
            1.0 + s_b + (2.0 * detuning / gamma) ** 2)
        if rate == 0.0:
            continue
        if j_up > spec.j_max - 1:
            dropped[g] += rate
            continue
        absorption[g] += rate
        key = (j_up, int(ln.eps_upper))
        if key not in decay_cache:
            decay_cache[key] = _decay_channels(
                spec, StateLabel(j_up, spec.lambda_upper, Parity(int(ln.eps_upper))))
        for j_low, eps, b in decay_cache[key]:
            rows.append(basis.index(j_low, eps))
            cols.append(g)
            vals.append(rate * b)
        rows.append(g)
        cols.append(g)
        vals.append(-rate)

    matrix = sp.csc_array(
        sp.coo_array((vals, (rows, cols)), shape=(n, n)))
    return RateGenerator(basis=basis, matrix=matrix,
                         absorption_rate=absorption, dropped_rate=dropped)


def build_pulse_map(spec: MoleculeSpec, pulse: SechPulseTrain) -> PulseMap:
    """Column-stochastic per-pulse map for sech-pulse excitation.

    Each allowed line is excited with the Rosen-Zener probability at its
    own effective detuning, scaled by the polarization-averaged relative
    line strength S/(2J+1) (1 for an isolated rotationless line), then
    decays completely through the emission branching ratios.  With this
    weighting the map's drift fixed point reproduces the closed-form
    sech-pulse Doppler limit in the unresolved-rotation regime.

    Raises RegimeError when the pulse train violates the no-comb
    condition, when the weak-pulse multi-level condition N*theta0 < pi
    fails, or when summed excitation probability exceeds 1.
    """
    if spec.j_max is None:
        raise ValueError("spec.j_max must be set to build a pulse map")
    if not pulse.comb_regime_ok(spec.gamma):
        raise RegimeError(
            "comb regime flag: sech(gamma T_r/2) is not small; increase the "
            "repetition period (typical choice T_r = 7/gamma)")

    basis = RotationalBasis.build(spec.lambda_lower, spec.j_max)
    n = len(basis)
    amp = math.sin(pulse.theta0 / 2.0) ** 2

    matrix = np.zeros((n, n))
    p_total = np.zeros(n)
    dropped = np.zeros(n)
    in_bandwidth = np.zeros(n, dtype=int)
    decay_cache: dict[tuple[int, int], list[tuple[int, int, float]]] = {}

    for ln in line_list(spec):
        g = basis.index(ln.J_lower, int(ln.eps_lower))
        j_up = ln.J_lower + ln.branch.delta_j
        delta_eff = pulse.delta - 2.0 * math.pi * ln.offset_hz
        half_arg = delta_eff * pulse.tau_p / 2.0
        weight = ln.strength / (2.0 * ln.J_lower + 1.0)
        p_ex = amp * weight / math.cosh(half_arg) ** 2 if abs(half_arg) < 350 else 0.0
        if p_ex == 0.0:
            continue
        if abs(half_arg) <= 2.0:
            in_bandwidth[g] += 1
        if j_up > spec.j_max - 1:
            dropped[g] += p_ex
            continue
        p_total[g] += p_ex
        key = (j_up, int(ln.eps_upper))
        if key not in decay_cache:
            decay_cache[key] = _decay_channels(
                spec, StateLabel(j_up, spec.lambda_upper, Parity(int(ln.eps_upper))))
        for j_low, eps, b in decay_cache[key]:
            matrix[basis.index(j_low, eps), g] += p_ex * b

    n_lines = int(in_bandwidth.max(initial=0))
    if n_lines * pulse.theta0 >= math.pi:
        raise RegimeError(
            f"weak-pulse flag: N*theta0 = {n_lines}*{pulse.theta0:.3f} >= pi; "
            "the independent two-level (Rosen-Zener) treatment breaks down")
    if p_total.max(initial=0.0) > 1.0:
        g_bad = int(p_total.argmax())
        raise RegimeError(
            f"summed excitation probability {p_total[g_bad]:.3f} > 1 from "
            f"ground state J={basis.J[g_bad]}; weak-pulse model violated")

    matrix[np.arange(n), np.arange(n)] += 1.0 - p_total
    return PulseMap(basis=basis, matrix=matrix,
                    excitation_probability=p_total, dropped_probability=dropped)


# ---------------------------------------------------------------------------
# Propagation


def _check_boundary_flux(gen: RateGenerator, p: np.ndarray) -> None:
    total = float(gen.absorption_rate @ p)
    lost = float(gen.dropped_rate @ p)
    if total > 0 and lost > BOUNDARY_FLUX_TOL * total:
        warnings.warn(
            f"basis truncation absorbs {lost/total:.2e} of the scattering "
            f"flux at the J_max boundary (> {BOUNDARY_FLUX_TOL:g}); "
            "results near the boundary are unreliable", stacklevel=3)


def _propagate_expm_action(matrix: sp.csc_array, p: np.ndarray,
                           dt: float) -> np.ndarray:
    return scipy.sparse.linalg.expm_multiply(matrix * dt, p)


def _propagate_dense_expm(matrix: sp.csc_array, p: np.ndarray, dt: float,
                          cache: dict) -> np.ndarray:
    if dt not in cache:
        cache[dt] = scipy.linalg.expm(matrix.toarray() * dt)
    return cache[dt] @ p


def _rk4(matrix, p: np.ndarray, dt: float, n_steps: int) -> np.ndarray:
    for _ in range(n_steps):
        k1 = matrix @ p
        k2 = matrix @ (p + 0.5 * dt * k1)
        k3 = matrix @ (p + 0.5 * dt * k2)
        k4 = matrix @ (p + dt * k3)
        p = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return p


def _propagate_explicit(matrix: sp.csc_array, p: np.ndarray, interval: float,
                        tol: float = 1e-10, max_halvings: int = 20) -> np.ndarray:
    """Adaptive explicit RK4: start at dt <= 0.1/max|G_ii| and halve the
    step until two refinements agree."""
    max_diag = float(np.abs(matrix.diagonal()).max()) if matrix.shape[0] else 0.0
    dt0 = interval if max_diag == 0 else min(interval, 0.1 / max_diag)
    n_steps = max(1, int(math.ceil(interval / dt0)))
    prev = _rk4(matrix, p, interval / n_steps, n_steps)
    for _ in range(max_halvings):
        n_steps *= 2
        cur = _rk4(matrix, p, interval / n_steps, n_steps)
        if np.linalg.norm(cur - prev, 1) <= tol:
            return cur
        prev = cur
    raise NumericalError(
        f"explicit propagation did not converge to {tol:g} over dt halvings")


def propagate(gen: RateGenerator, p0: PopulationState, output_times,
              method: str = "auto") -> list[PopulationState]:
    """Evolve P(t) = exp(G t) P0, returning one state per output time.

    Methods: "auto" (sparse matrix-exponential action), "expm" (dense
    scaling-and-squaring per unique interval), "explicit" (adaptive RK4
    with dt <= 0.1/max|G_ii|).  All agree to <= 1e-8 on well-conditioned
    problems.
    """
    times = np.atleast_1d(np.asarray(output_times, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("output times must be non-negative and ascending")
    if len(p0.populations) != gen.dimension:
        raise ValueError("population vector does not match generator basis")
    _check_boundary_flux(gen, p0.populations)

    # The sparse exponential action costs O(|G|_1 dt); the dense
    # scaling-and-squaring exponential costs O(n^3 log(|G|_1 dt)) and wins
    # for very long intervals.
    norm1 = float(abs(gen.matrix).sum(axis=0).max()) if gen.matrix.nnz else 0.0

    p = p0.populations.copy()
    t_now = p0.time
    out: list[PopulationState] = []
    dense_cache: dict = {}
    for t in times:
        dt = float(t - t_now)
        if dt < 0:
            raise ValueError("output times must not precede the initial time")
        if dt > 0:
            chosen = method
            if method == "auto":
                chosen = "expm" if norm1 * dt > 5e4 else "krylov"
            if chosen in ("auto", "krylov"):
                p = _propagate_expm_action(gen.matrix, p, dt)
            elif chosen == "expm":
                p = _propagate_dense_expm(gen.matrix, p, dt, dense_cache)
            elif chosen == "explicit":
                p = _propagate_explicit(gen.matrix, p, dt)
            else:
                raise ValueError(f"unknown propagation method {method!r}")
            total = p.sum()
            if abs(total - 1.0) > 1e-8:
                raise NumericalError(
                    f"propagation lost probability: sum(P) = {total!r}")
            p = np.clip(p, 0.0, None)
            p /= p.sum()
        t_now = t
        out.append(PopulationState(basis=gen.basis, populations=p.copy(), time=t))
    _check_boundary_flux(gen, p)
    return out


def apply_pulses(pmap: PulseMap, p0: PopulationState, n_pulses: int,
                 rep_period: float | None = None) -> PopulationState:
    """P = M^n P0 by binary exponentiation (O(log n) matrix products)."""
    if n_pulses < 0:
        raise ValueError("n_pulses must be non-negative")
    if len(p0.populations) != pmap.dimension:
        raise ValueError("population vector does not match map basis")
    p = p0.populations.copy()
    if n_pulses > 0:
        power = pmap.matrix
        n = n_pulses
        while n > 0:
            if n & 1:
                p = power @ p
            n >>= 1
            if n:
                power = power @ power
        p = np.clip(p, 0.0, None)
        p /= p.sum()
    t = p0.time + (n_pulses * rep_period if rep_period else 0.0)
    return PopulationState(basis=pmap.basis, populations=p, time=t)


# ---------------------------------------------------------------------------
# Steady states


def _null_vector(a: np.ndarray) -> np.ndarray:
    """Normalized null vector of a column-sum-zero rate matrix (dense)."""
    n = a.shape[0]
    if n == 1:
        return np.array([1.0])
    aa = a.copy()
    aa[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        x = scipy.linalg.solve(aa, b)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"steady-state solve failed: {exc}") from exc
    x = np.clip(x, 0.0, None)
    total = x.sum()
    if total <= 0:
        raise NumericalError("steady-state solve produced a zero vector")
    return x / total


def _component_steady_state(matrix_dense: np.ndarray, p0: np.ndarray) -> np.ndarray:
    """Weight the null vector of each connected component by its initial mass."""
    n = matrix_dense.shape[0]
    pattern = sp.csr_array((np.abs(matrix_dense) > 0).astype(np.int8))
    pattern.setdiag(0)
    pattern.eliminate_zeros()
    n_comp, labels = scipy.sparse.csgraph.connected_components(
        pattern, directed=False)
    p_ss = np.zeros(n)
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        mass = float(p0[idx].sum())
        if mass <= 0:
            continue
        p_ss[idx] = mass * _null_vector(matrix_dense[np.ix_(idx, idx)])
    return p_ss


def steady_state(gen: RateGenerator, p0: PopulationState) -> PopulationState:
    """Long-time limit of propagate: per-connected-component null vectors
    of G, weighted by the initial mass in each component (scattering
    preserves the even/odd parity classes of a Sigma-Sigma band)."""
    p = _component_steady_state(gen.matrix.toarray(), p0.populations)
    return PopulationState(basis=gen.basis, populations=p, time=math.inf)


def pulse_map_steady_state(pmap: PulseMap, p0: PopulationState) -> PopulationState:
    """Stationary distribution of the pulse map, component by component
    (M - I is a column-sum-zero rate-like matrix)."""
    a = pmap.matrix - np.eye(pmap.dimension)
    p = _component_steady_state(a, p0.populations)
    return PopulationState(basis=pmap.basis, populations=p, time=math.inf)


# ---------------------------------------------------------------------------
# Observables


def peak_psd(state: PopulationState) -> float:
    """Largest single-quantum-state occupation, P(J, eps)/(2J+1)."""
    return float((state.populations / (2.0 * state.basis.J + 1.0)).max())


def cold_peak_fit_window(state: PopulationState,
                         j_cut: int | None = None) -> int | None:
    """Data-driven Boltzmann-fit window for a bimodal distribution.

    Returns the J of the first local minimum of the per-J phase-space
    density after its global peak (the gap between the cooled peak and the
    uncooled background), bounded by j_cut.  Returns j_cut when the
    distribution is single-peaked (e.g. a fully thermal steady state).
    """
    j_vals = np.arange(int(state.basis.J.max()) + 1)
    pj = np.bincount(state.basis.J, weights=state.populations,
                     minlength=len(j_vals))
    psd = pj / (2.0 * j_vals + 1.0)
    top = int(psd.argmax())
    limit = len(psd) - 1 if j_cut is None else min(j_cut, len(psd) - 1)
    for j in range(top + 1, limit):
        if psd[j] < psd[j - 1] and psd[j] <= psd[j + 1]:
            return j
    return j_cut


def boltzmann_fit(state: PopulationState, b_hz: float,
                  j_max_fit: int | None = None) -> float:
    """Population-weighted least-squares Boltzmann fit.

    Fits log(P/(2J+1)) against J(J+1) with weights P over states with
    J <= j_max_fit, returning the temperature (K).  Raises ValueError when
    fewer than 3 states in the window carry population.
    """
    p = state.populations
    jj = state.basis.J * (state.basis.J + 1.0)
    mask = p > 1e-300
    if j_max_fit is not None:
        mask &= state.basis.J <= j_max_fit
    if int(mask.sum()) < 3:
        raise ValueError("Boltzmann fit needs at least 3 populated states in window")
    x = jj[mask]
    y = np.log(p[mask] / (2.0 * state.basis.J[mask] + 1.0))
    w = p[mask]
    # Weighted linear fit y = a + slope * x.
    wx = (w * x).sum() / w.sum()
    wy = (w * y).sum() / w.sum()
    var = (w * (x - wx) ** 2).sum()
    if var <= 0:
        raise ValueError("degenerate fit window")
    slope = (w * (x - wx) * (y - wy)).sum() / var
    if slope >= 0:
        raise ValueError("non-thermal (non-decreasing) distribution in fit window")
    return float(-_H * b_hz / (_KB * slope))


def observables(state: PopulationState, spec: MoleculeSpec,
                j_cut: int | None = None,
                j_max_fit: int | None = None) -> Observables:
    """Snapshot observables: mean J, effective and fitted temperatures,
    peak phase-space density, cooled fraction below j_cut."""
    p = state.populations
    j = state.basis.J
    jj = j * (j + 1.0)
    mean_j = float(p @ j)
    t_eff = float(_H * spec.b_lower_hz * (p @ jj) / _KB)

    cooled = 1.0
    t_eff_cold = None
    if j_cut is not None:
        sel = j <= j_cut
        cooled = float(p[sel].sum())
        if cooled > 0:
            t_eff_cold = float(_H * spec.b_lower_hz
                               * (p[sel] @ jj[sel]) / (cooled * _KB))
    try:
        t_fit = boltzmann_fit(state, spec.b_lower_hz,
                              j_max_fit if j_max_fit is not None else j_cut)
    except ValueError:
        t_fit = None
    return Observables(mean_j=mean_j, t_eff_K=t_eff, t_fit_K=t_fit,
                       peak_psd=peak_psd(state), cooled_fraction=cooled,
                       j_cut=j_cut, t_eff_cold_K=t_eff_cold)
