"""Physical constants (SI, CODATA 2018 via scipy)."""

from dataclasses import dataclass

import scipy.constants as const


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used throughout the library.

    Values are the CODATA set shipped with scipy.constants; frozen here so
    every module agrees on the same numbers.
    """

    hbar: float = const.hbar          # J s
    h: float = const.h                # J s
    k_B: float = const.k              # J/K
    c: float = const.c                # m/s
    eps0: float = const.epsilon_0     # F/m


CODATA = PhysicalConstants()
