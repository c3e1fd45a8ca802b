"""Molecular level scheme and line positions for singlet linear molecules.

Rotational energies with optional parity (Lambda) doubling in the lower
state, electric-dipole line lists relative to the band origin, thermal
initial distributions over the (J, parity) basis, and Fortrat-diagram
export.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .angular import Branch, Parity, StateLabel, honl_london, parity_allowed
from .constants import CODATA

TRUNCATION_TOL = 1e-6   # max thermal weight allowed outside the basis
J_MAX_CAP = 2000


class Manifold(Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class MoleculeSpec:
    """Rotational structure of one electronic band.

    All rotational constants are cyclic frequencies in Hz; ``gamma`` is the
    full spontaneous width of the excited state in rad/s.  ``q_doubling_hz``
    applies to the lower manifold only (excited-state doubling is taken as
    zero).  ``j_max`` truncates the ground rotational basis.
    """

    b_lower_hz: float
    b_upper_hz: float
    lambda_lower: int
    lambda_upper: int
    gamma: float
    q_doubling_hz: float = 0.0
    j_max: int | None = None

    def __post_init__(self) -> None:
        if self.b_lower_hz <= 0 or self.b_upper_hz <= 0:
            raise ValueError("rotational constants must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if abs(self.lambda_upper - self.lambda_lower) > 1:
            raise ValueError("|Lambda' - Lambda| > 1 is not an electric-dipole band")
        if self.j_max is not None and self.j_max < max(self.lambda_lower,
                                                       self.lambda_upper) + 2:
            raise ValueError("j_max must be at least Lambda + 2")

    def with_j_max(self, j_max: int) -> "MoleculeSpec":
        return replace(self, j_max=j_max)


def parity_labels(lam: int) -> tuple[Parity, ...]:
    """Physically existing parity labels: only e for a Sigma+ state, both
    e and f when Lambda >= 1."""
    return (Parity.E,) if lam == 0 else (Parity.E, Parity.F)


def thermal_j_max(b_hz: float, T0: float, tail: float = TRUNCATION_TOL,
                  cap: int = J_MAX_CAP) -> int:
    """Smallest J with Boltzmann weight above J below ``tail``, capped."""
    if T0 <= 0:
        raise ValueError("T0 must be positive")
    x = CODATA.h * b_hz / (CODATA.k_B * T0)
    # Tail fraction beyond J is ~ exp(-x J(J+1)); invert for J.
    jj = -math.log(tail) / x
    j = int(0.5 * (math.sqrt(1.0 + 4.0 * jj) - 1.0)) + 1
    return min(max(j, 4), cap)


@dataclass(frozen=True)
class RotationalBasis:
    """Ordered list of existing (J, parity) levels in one manifold."""

    J: np.ndarray          # int array
    eps: np.ndarray        # +1 (e) / -1 (f)
    lam: int

    @classmethod
    def build(cls, lam: int, j_max: int) -> "RotationalBasis":
        js, eps = [], []
        for j in range(lam, j_max + 1):
            for p in parity_labels(lam):
                js.append(j)
                eps.append(int(p))
        return cls(J=np.array(js, dtype=int), eps=np.array(eps, dtype=int), lam=lam)

    def __len__(self) -> int:
        return len(self.J)

    def index(self, j: int, eps: int) -> int:
        if self.lam == 0:
            if eps != 1:
                raise KeyError(f"(J={j}, f) does not exist in a Sigma+ manifold")
            return j - self.lam
        return 2 * (j - self.lam) + (0 if eps == 1 else 1)

    def states(self) -> list[StateLabel]:
        return [StateLabel(int(j), self.lam, Parity(int(e)))
                for j, e in zip(self.J, self.eps)]


@dataclass
class PopulationState:
    """Normalized occupation of the ground (J, parity) basis at time t."""

    basis: RotationalBasis
    populations: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        p = np.asarray(self.populations, dtype=float)
        if p.shape != (len(self.basis),):
            raise ValueError("population vector does not match basis size")
        if p.min() < -1e-14:
            raise ValueError(f"negative population {p.min():.3e}")
        self.populations = np.clip(p, 0.0, None)
        total = self.populations.sum()
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"populations sum to {total!r}, not 1")


@dataclass(frozen=True)
class LineEntry:
    """One allowed rotational line of the band, relative to the band origin."""

    branch: Branch
    J_lower: int
    eps_lower: Parity
    eps_upper: Parity
    offset_hz: float
    strength: float


def level_energy(spec: MoleculeSpec, manifold: Manifold, state: StateLabel) -> float:
    """Level energy E/h in Hz: B J(J+1), plus eps*(q/2) J(J+1) doubling for
    a Lambda >= 1 lower state (e above f for q > 0)."""
    lam = spec.lambda_lower if manifold is Manifold.LOWER else spec.lambda_upper
    if state.Lambda != lam:
        raise ValueError(f"state has Lambda={state.Lambda}, manifold has {lam}")
    if state.J < lam:
        raise ValueError(f"J={state.J} < Lambda={lam}")
    b = spec.b_lower_hz if manifold is Manifold.LOWER else spec.b_upper_hz
    jj = state.J * (state.J + 1)
    e = b * jj
    if manifold is Manifold.LOWER and lam >= 1:
        e += int(state.eps) * 0.5 * spec.q_doubling_hz * jj
    return e


def line_list(spec: MoleculeSpec) -> list[LineEntry]:
    """All electric-dipole-allowed absorption lines up to spec.j_max.

    Offsets are upper minus lower level energy (band origin subtracted);
    strengths are Hönl-London factors.
    """
    if spec.j_max is None:
        raise ValueError("spec.j_max must be set to enumerate lines")
    lines: list[LineEntry] = []
    upper_parities = parity_labels(spec.lambda_upper)
    for j in range(spec.lambda_lower, spec.j_max + 1):
        for eps_low in parity_labels(spec.lambda_lower):
            lower = StateLabel(j, spec.lambda_lower, eps_low)
            for branch in (Branch.P, Branch.Q, Branch.R):
                j_up = j + branch.delta_j
                if j_up < spec.lambda_upper:
                    continue
                for eps_up in upper_parities:
                    if not parity_allowed(branch.delta_j, eps_up, eps_low):
                        continue
                    upper = StateLabel(j_up, spec.lambda_upper, eps_up)
                    strength = honl_london(upper, lower)
                    if strength <= 0.0:
                        continue
                    offset = (level_energy(spec, Manifold.UPPER, upper)
                              - level_energy(spec, Manifold.LOWER, lower))
                    lines.append(LineEntry(branch, j, eps_low, eps_up,
                                           offset, strength))
    return lines


def thermal_distribution(spec: MoleculeSpec, T0: float) -> PopulationState:
    """Boltzmann distribution over the truncated (J, parity) basis.

    Weights are (2J+1) exp(-h B J(J+1) / kT0) per level; the tiny parity
    doubling is ignored, so both parity components are equally populated
    where both exist.  Raises if the truncated basis misses more than
    TRUNCATION_TOL of the untruncated norm.
    """
    if T0 <= 0:
        raise ValueError("T0 must be positive")
    j_max = spec.j_max if spec.j_max is not None else thermal_j_max(spec.b_lower_hz, T0)
    basis = RotationalBasis.build(spec.lambda_lower, j_max)
    x = CODATA.h * spec.b_lower_hz / (CODATA.k_B * T0)
    lam = spec.lambda_lower
    jj0 = lam * (lam + 1)  # reference so T0 -> 0 underflows gracefully

    w = (2.0 * basis.J + 1.0) * np.exp(-x * (basis.J * (basis.J + 1.0) - jj0))
    total = w.sum()

    # Untruncated tail, summed until terms are negligible.
    n_par = len(parity_labels(lam))
    tail = 0.0
    j = j_max + 1
    while True:
        term = n_par * (2.0 * j + 1.0) * math.exp(-x * (j * (j + 1.0) - jj0))
        tail += term
        if term < 1e-18 * (total + tail) or j > 100 * j_max + 1000:
            break
        j += 1
    if tail > TRUNCATION_TOL * (total + tail):
        raise ValueError(
            f"basis truncation at j_max={j_max} discards {tail/(total+tail):.2e} "
            f"of the thermal norm (> {TRUNCATION_TOL:g}); raise j_max or lower T0")

    return PopulationState(basis=basis, populations=w / total, time=0.0)


def capture_j(spec: MoleculeSpec) -> float:
    """Highest J whose P/R lines sit within about one linewidth of the laser:
    gamma / (4 pi B)."""
    return spec.gamma / (4.0 * math.pi * spec.b_lower_hz)


def write_fortrat_csv(lines: list[LineEntry], path: str | Path) -> Path:
    """Fortrat-diagram data: one row per allowed line."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["branch", "J_lower", "eps_lower", "offset_hz", "strength"])
        for ln in lines:
            writer.writerow([ln.branch.name, ln.J_lower,
                             "e" if ln.eps_lower is Parity.E else "f",
                             f"{ln.offset_hz:.12g}", f"{ln.strength:.12g}"])
    return path
