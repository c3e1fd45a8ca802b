"""Exact angular algebra: 3j symbols, Hönl-London factors, branching."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotcool.angular import (Branch, Parity, StateLabel, ThreeJArgs,
                             emission_branching, honl_london, parity_allowed,
                             wigner3j)

E, F = Parity.E, Parity.F


class TestWigner3j:
    def test_frozen_oracle_values(self):
        # Frozen from the exact rational oracle (sympy.physics.wigner):
        # wigner_3j(1,1,0,0,0,0) = -sqrt(3)/3, etc.
        assert wigner3j(1, 1, 0, 0, 0, 0) == pytest.approx(-1.0 / math.sqrt(3.0),
                                                           abs=1e-15)
        assert wigner3j(1, 1, 1, 0, 0, 0) == 0.0
        assert wigner3j(2, 1, 1, 1, 0, -1) == pytest.approx(-math.sqrt(10) / 10,
                                                            abs=1e-15)
        assert wigner3j(1, 1, 0, -1, 1, 0) ** 2 == pytest.approx(1.0 / 3.0,
                                                                 abs=1e-15)
        # Large-J values stay exact (no cancellation blowup).
        assert wigner3j(200, 1, 201, 0, 0, 0) == pytest.approx(
            -0.03526738990979728, abs=1e-16)
        assert wigner3j(500, 1, 500, -3, 1, 2) == pytest.approx(
            0.022349240153004737, abs=1e-16)

    def test_selection_rules_return_zero(self):
        assert wigner3j(1, 1, 3, 0, 0, 0) == 0.0          # triangle
        assert wigner3j(1, 1, 1, 1, 0, 0) == 0.0          # m sum
        assert wigner3j(5, 1, 5, 0, 0, 0) == 0.0          # odd J sum, all m=0

    def test_threej_args_validation(self):
        args = ThreeJArgs(1, 1, 0, 0, 0, 0)
        assert wigner3j(args) == pytest.approx(-1.0 / math.sqrt(3.0))
        with pytest.raises(ValueError):
            ThreeJArgs(1.2, 1, 0, 0, 0, 0)
        with pytest.raises(ValueError):
            ThreeJArgs(1, 1, 0, 2, -2, 0)
        with pytest.raises(ValueError):
            ThreeJArgs(1.5, 1, 0.5, 1.0, 0, -1.0)  # j - m not integral
        with pytest.raises(ValueError):
            wigner3j(1, 1, 0, 0.3, -0.3, 0)

    def test_half_integer_support(self):
        # Frozen oracle value: wigner_3j(3/2,1/2,1; 1/2,-1/2,0) = -sqrt(6)/6.
        assert wigner3j(1.5, 0.5, 1, 0.5, -0.5, 0) == pytest.approx(
            -math.sqrt(6) / 6, abs=1e-15)

    def test_column_permutation_symmetry_random(self):
        # Even permutations invariant; odd pick up (-1)^(j1+j2+j3).
        rng = random.Random(20240817)
        checked = 0
        while checked < 100:
            j1 = rng.randint(0, 40)
            j2 = rng.randint(0, 3)
            j3 = rng.randint(abs(j1 - j2), j1 + j2)
            m1 = rng.randint(-j1, j1)
            m2 = rng.randint(-j2, j2)
            m3 = -m1 - m2
            if abs(m3) > j3:
                continue
            base = wigner3j(j1, j2, j3, m1, m2, m3)
            sign = (-1) ** (j1 + j2 + j3)
            even = wigner3j(j3, j1, j2, m3, m1, m2)
            odd = wigner3j(j2, j1, j3, m2, m1, m3)
            flip = wigner3j(j1, j2, j3, -m1, -m2, -m3)
            assert even == pytest.approx(base, abs=1e-14)
            assert odd == pytest.approx(sign * base, abs=1e-14)
            assert flip == pytest.approx(sign * base, abs=1e-14)
            checked += 1

    @given(j1=st.integers(0, 30), j2=st.integers(0, 2),
           m1=st.integers(-30, 30), m2=st.integers(-2, 2))
    @settings(max_examples=200, deadline=None)
    def test_orthogonality_sum_over_j3(self, j1, j2, m1, m2):
        # sum_j3 (2 j3 + 1) 3j(j1,j2,j3; m1,m2,-(m1+m2))^2 = 1 when the
        # m's are in range.
        if abs(m1) > j1 or abs(m2) > j2:
            return
        m3 = -(m1 + m2)
        total = sum((2 * j3 + 1) * wigner3j(j1, j2, j3, m1, m2, m3) ** 2
                    for j3 in range(abs(j1 - j2), j1 + j2 + 1))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_projection_orthogonality_for_saturation(self):
        # sum_p J * 3j(J-1,1,J; -M-p, p, M)^2 = J/(2J+1), independent of M.
        for j in range(1, 51):
            for m in range(-(j - 1), j):
                total = sum(j * wigner3j(j - 1, 1, j, -m - p, p, m) ** 2
                            for p in (-1, 0, 1))
                assert total == pytest.approx(j / (2.0 * j + 1.0), abs=1e-12)


class TestAgainstSympyOracle:
    def test_random_sweep(self):
        sympy = pytest.importorskip("sympy")
        from sympy import N as sym_N
        from sympy.physics.wigner import wigner_3j as sym_3j

        rng = random.Random(7)
        for _ in range(100):
            j1 = rng.randint(0, 25)
            j2 = rng.randint(0, 3)
            j3 = rng.randint(max(0, j1 - j2), j1 + j2)
            m1 = rng.randint(-j1, j1)
            m2 = rng.randint(-j2, j2)
            m3 = -m1 - m2
            if abs(m3) > j3:
                m3 = rng.randint(-j3, j3)
            ref = float(sym_N(sym_3j(j1, j2, j3, m1, m2, m3), 25))
            assert wigner3j(j1, j2, j3, m1, m2, m3) == pytest.approx(
                ref, abs=5e-16)


class TestHonlLondon:
    def test_q_branch_forbidden_sigma_sigma(self):
        for j in range(1, 20):
            assert honl_london(StateLabel(j, 0, F), StateLabel(j, 0, E)) == 0.0

    def test_sigma_sigma_p_branch_frozen(self):
        # Frozen via the 3j oracle: prefactor * 23 * 25 * (12/575) = 12.
        assert honl_london(StateLabel(11, 0), StateLabel(12, 0)) == \
            pytest.approx(12.0, abs=1e-12)
        # P(J) strength equals J; R strength from J equals J + 1.
        for j in range(1, 30):
            assert honl_london(StateLabel(j - 1, 0), StateLabel(j, 0)) == \
                pytest.approx(j, abs=1e-11)
            assert honl_london(StateLabel(j + 1, 0), StateLabel(j, 0)) == \
                pytest.approx(j + 1, abs=1e-11)

    def test_sigma_from_pi_frozen_values(self):
        # Frozen oracle values for Sigma(J'=5) -> Pi decays: R(4)=4,
        # Q(5)=11, P(6)=7.
        up = StateLabel(5, 0, E)
        assert honl_london(up, StateLabel(4, 1, E)) == pytest.approx(4.0, abs=1e-12)
        assert honl_london(up, StateLabel(5, 1, F)) == pytest.approx(11.0, abs=1e-12)
        assert honl_london(up, StateLabel(6, 1, E)) == pytest.approx(7.0, abs=1e-12)

    def test_rejects_delta_lambda_two(self):
        with pytest.raises(ValueError):
            honl_london(StateLabel(2, 2), StateLabel(2, 0))

    def test_parity_rule(self):
        assert parity_allowed(1, E, E) and parity_allowed(-1, F, F)
        assert not parity_allowed(1, E, F)
        assert parity_allowed(0, E, F) and not parity_allowed(0, E, E)
        # Q line between same parities vanishes.
        assert honl_london(StateLabel(3, 0, E), StateLabel(3, 1, E)) == 0.0

    @pytest.mark.parametrize("lam_up,lam_low", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_sum_rule_over_existing_lower_states(self, lam_up, lam_low):
        # sum over existing (J'', eps'') of S = (1 + d_{L'0} d_{L1}) (2J'+1).
        lower_parities = (E,) if lam_low == 0 else (E, F)
        for eps_up in ((E,) if lam_up == 0 else (E, F)):
            for j_up in range(max(lam_up, 1), 51):
                total = 0.0
                for j_low in (j_up - 1, j_up, j_up + 1):
                    if j_low < lam_low:
                        continue
                    for eps_low in lower_parities:
                        total += honl_london(StateLabel(j_up, lam_up, eps_up),
                                             StateLabel(j_low, lam_low, eps_low))
                # Holds separately for each upper parity, even when only a
                # single decay channel exists (f-parity Pi -> Sigma+).
                expected = (1 + (lam_up == 0) * (lam_low == 1)) * (2 * j_up + 1)
                assert total == pytest.approx(expected, rel=1e-12)


class TestEmissionBranching:
    def test_sigma_sigma_factors(self):
        # (J'+1)/(2J'+1) up, J'/(2J'+1) down.
        assert emission_branching(StateLabel(1, 0), StateLabel(2, 0)) == \
            pytest.approx(2.0 / 3.0, abs=1e-13)
        assert emission_branching(StateLabel(1, 0), StateLabel(0, 0)) == \
            pytest.approx(1.0 / 3.0, abs=1e-13)
        assert emission_branching(StateLabel(0, 0), StateLabel(1, 0)) == \
            pytest.approx(1.0, abs=1e-13)

    @pytest.mark.parametrize("lam_up,lam_low", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_branching_sums_to_one(self, lam_up, lam_low):
        lower_parities = (E,) if lam_low == 0 else (E, F)
        for eps_up in ((E,) if lam_up == 0 else (E, F)):
            for j_up in range(max(lam_up, 1), 60):
                total = 0.0
                for j_low in (j_up - 1, j_up, j_up + 1):
                    if j_low < lam_low:
                        continue
                    for eps_low in lower_parities:
                        total += emission_branching(
                            StateLabel(j_up, lam_up, eps_up),
                            StateLabel(j_low, lam_low, eps_low))
                assert total == pytest.approx(1.0, abs=1e-12)


def test_branch_enum_delta_j():
    assert Branch.P.delta_j == -1
    assert Branch.Q.delta_j == 0
    assert Branch.R.delta_j == 1


def test_state_label_validation():
    with pytest.raises(ValueError):
        StateLabel(0, 1)
    with pytest.raises(ValueError):
        StateLabel(2, -1)
