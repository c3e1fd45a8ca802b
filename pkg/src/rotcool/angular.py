"""Exact angular-momentum algebra for singlet linear molecules.

Wigner 3j symbols (Racah single-sum formula over exact integers),
Hönl-London rotational line strengths, and spontaneous-emission branching
ratios.  Everything here is purely algebraic: which (J, parity) levels
physically exist in a given electronic state is decided by the structure
module, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import lru_cache


class Parity(IntEnum):
    """Rotational parity label: e = +1, f = -1."""

    E = 1
    F = -1


class Branch(Enum):
    """Rotational branch, named by dJ = J_upper - J_lower."""

    P = -1
    Q = 0
    R = 1

    @property
    def delta_j(self) -> int:
        return self.value


@dataclass(frozen=True)
class ThreeJArgs:
    """Validated argument set for a Wigner 3j symbol.

    j's must be non-negative integers or half-integers, m's half-integers
    with |m_i| <= j_i and j_i - m_i integral.  Selection-rule violations
    (triangle rule, m1+m2+m3 != 0) are legal input and evaluate to zero.
    """

    j1: float
    j2: float
    j3: float
    m1: float
    m2: float
    m3: float

    def __post_init__(self) -> None:
        for name in ("j1", "j2", "j3", "m1", "m2", "m3"):
            v = getattr(self, name)
            if 2 * v != int(2 * v):
                raise ValueError(f"{name}={v} is not integer or half-integer")
        for jn, mn in (("j1", "m1"), ("j2", "m2"), ("j3", "m3")):
            j, m = getattr(self, jn), getattr(self, mn)
            if j < 0:
                raise ValueError(f"{jn}={j} must be non-negative")
            if abs(m) > j:
                raise ValueError(f"|{mn}|={abs(m)} exceeds {jn}={j}")
            if (j - m) != int(j - m):
                raise ValueError(f"{jn}-{mn} must be integral")


@dataclass(frozen=True)
class StateLabel:
    """Rotational level of a singlet linear molecule: J, Lambda, e/f parity."""

    J: int
    Lambda: int
    eps: Parity = Parity.E

    def __post_init__(self) -> None:
        if self.Lambda < 0:
            raise ValueError(f"Lambda={self.Lambda} must be non-negative")
        if self.J < self.Lambda:
            raise ValueError(f"J={self.J} < Lambda={self.Lambda}")


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    # Exact integer factorials, memoized; keeps the Racah sum free of
    # floating-point cancellation up to J of a few thousand.
    return math.factorial(n)


@lru_cache(maxsize=1 << 20)
def _wigner3j_doubled(tj1: int, tj2: int, tj3: int,
                      tm1: int, tm2: int, tm3: int) -> float:
    """3j symbol with all six arguments doubled (so half-integers are ints)."""
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    # Triangle rule.
    if tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2:
        return 0.0
    if (tj1 + tj2 + tj3) % 2 != 0:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm3) > tj3:
        return 0.0
    if (tj1 - tm1) % 2 or (tj2 - tm2) % 2 or (tj3 - tm3) % 2:
        return 0.0

    def h(x: int) -> int:
        # The selection rules above guarantee x is even here.
        return x // 2

    a1 = h(tj1 + tj2 - tj3)
    a2 = h(tj1 - tj2 + tj3)
    a3 = h(-tj1 + tj2 + tj3)
    # Racah sum index range.
    t_min = max(0, h(tj2 - tj3 - tm1), h(tj1 - tj3 + tm2))
    t_max = min(a1, h(tj1 - tm1), h(tj2 + tm2))
    if t_max < t_min:
        return 0.0

    # Per-term denominators of the alternating series, as exact integers.
    term_dens = [
        _fact(t)
        * _fact(a1 - t)
        * _fact(h(tj1 - tm1) - t)
        * _fact(h(tj2 + tm2) - t)
        * _fact(h(tj3 - tj2 + tm1) + t)
        * _fact(h(tj3 - tj1 - tm2) + t)
        for t in range(t_min, t_max + 1)
    ]
    # series = s_num / s_den over the common (unreduced) denominator;
    # plain integer pairs avoid the gcd cost of Fraction at large J.
    s_den = math.prod(term_dens)
    s_num = 0
    for i, d in enumerate(term_dens):
        contrib = s_den // d
        s_num += -contrib if (t_min + i) % 2 else contrib
    if s_num == 0:
        return 0.0

    # Square-root argument: product of nine factorials over (j1+j2+j3+1)!.
    # Cancel the largest numerator factorial against the denominator so the
    # remaining integers stay as small as possible.
    num_args = sorted(
        (a1, a2, a3,
         h(tj1 - tm1), h(tj1 + tm1),
         h(tj2 - tm2), h(tj2 + tm2),
         h(tj3 - tm3), h(tj3 + tm3)),
        reverse=True,
    )
    big = h(tj1 + tj2 + tj3) + 1
    sq_num = math.prod(_fact(n) for n in num_args[1:])
    sq_den = math.prod(range(num_args[0] + 1, big + 1))

    # |value|^2 = (sq_num/sq_den) * (s_num/s_den)^2 exactly; big-int true
    # division is correctly rounded, so precision is lost only in the final
    # sqrt.
    magnitude = math.sqrt((sq_num * s_num * s_num) / (sq_den * s_den * s_den))
    sign = 1 if s_num > 0 else -1
    if h(tj1 - tj2 - tm3) % 2:
        sign = -sign
    return sign * magnitude


def wigner3j(*args) -> float:
    """Wigner 3j symbol, exact to double precision at any J.

    Accepts either a single ThreeJArgs or six numbers
    (j1, j2, j3, m1, m2, m3).  Selection-rule violations return 0.
    """
    if len(args) == 1 and isinstance(args[0], ThreeJArgs):
        a = args[0]
        args = (a.j1, a.j2, a.j3, a.m1, a.m2, a.m3)
    elif len(args) != 6:
        raise TypeError("wigner3j takes a ThreeJArgs or six numbers")
    doubled = []
    for v in args:
        tv = 2 * v
        if tv != int(tv):
            raise ValueError(f"argument {v} is not integer or half-integer")
        doubled.append(int(tv))
    return _wigner3j_doubled(*doubled)


def parity_allowed(delta_j: int, eps_upper: Parity, eps_lower: Parity) -> bool:
    """Electric-dipole e/f selection rule: e<->e, f<->f for dJ = +-1;
    e<->f for dJ = 0."""
    if delta_j == 0:
        return eps_upper != eps_lower
    return eps_upper == eps_lower


def honl_london(upper: StateLabel, lower: StateLabel) -> float:
    """Hönl-London line strength between parity eigenstates.

    Returns zero for any forbidden combination (|dJ| > 1, parity rule,
    J'=J=0, vanishing 3j).  Raises for |dLambda| > 1, which is not an
    electric-dipole band at all.
    """
    d_lambda = upper.Lambda - lower.Lambda
    if abs(d_lambda) > 1:
        raise ValueError(f"|Lambda'-Lambda|={abs(d_lambda)} > 1 is not dipole-allowed")
    dj = upper.J - lower.J
    if abs(dj) > 1:
        return 0.0
    if not parity_allowed(dj, upper.eps, lower.eps):
        return 0.0
    prefactor = (1 + (upper.Lambda == 0) + (lower.Lambda == 0)
                 - 2 * (upper.Lambda == 0) * (lower.Lambda == 0))
    w = wigner3j(upper.J, 1, lower.J, -upper.Lambda, d_lambda, lower.Lambda)
    return prefactor * (2 * upper.J + 1) * (2 * lower.J + 1) * w * w


def emission_branching(upper: StateLabel, lower: StateLabel) -> float:
    """Spontaneous-emission branching ratio from (J', Lambda', eps').

    Normalized so that the sum over all physically existing lower levels
    is 1 (for Lambda = 0 lower states only the e levels exist, as in a
    1-Sigma+ state).
    """
    norm = (1 + (upper.Lambda == 0) * (lower.Lambda == 1)) * (2 * upper.J + 1)
    return honl_london(upper, lower) / norm
