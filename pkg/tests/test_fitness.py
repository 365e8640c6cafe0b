import math

import numpy as np
import pytest

from budgetbox.fitness import (
    CAPACITY_SENTINEL,
    DegenerateTaxWarning,
    FitnessSpec,
    TaxEvolutionPattern,
    evaluate,
    fitness_goals,
    fitness_tax,
    fitness_total,
    penalty,
)
from budgetbox.scaling import ConstraintSet, DimensionlessSolution


def make_spec(**kwargs) -> FitnessSpec:
    defaults = dict(
        target_investments=(1.0,) * 5,
        target_capacities=(1.0,) * 5,
        pattern=TaxEvolutionPattern.uniform(5),
    )
    defaults.update(kwargs)
    return FitnessSpec(**defaults)


class TestPattern:
    def test_must_sum_to_one(self):
        with pytest.raises(ValueError):
            TaxEvolutionPattern((0.5, 0.4))

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            TaxEvolutionPattern((1.5, -0.5))

    def test_normalized_helper(self):
        pattern = TaxEvolutionPattern.normalized([2.0, 1.0, 1.0])
        assert pattern.weights[0] == pytest.approx(0.5)
        assert sum(pattern.weights) == pytest.approx(1.0, abs=1e-15)


class TestFitnessTax:
    def test_proportional_scores_one(self):
        pattern = TaxEvolutionPattern((0.1, 0.2, 0.3, 0.4))
        taxes = 7.0 * np.array(pattern.weights)
        assert fitness_tax(taxes, pattern) == pytest.approx(1.0)

    def test_uniform_pattern_uniform_taxes(self):
        assert fitness_tax([1.0] * 5, TaxEvolutionPattern.uniform(5)) == pytest.approx(1.0)

    def test_hand_value(self):
        pattern = TaxEvolutionPattern((0.4, 0.15, 0.15, 0.15, 0.15))
        score = fitness_tax([1.0] * 5, pattern)
        # deviation sum is 0.4, decay 5: exp(-2)
        assert score == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_scale_invariance(self):
        pattern = TaxEvolutionPattern((0.3, 0.3, 0.4))
        taxes = np.array([2.0, 1.0, 4.0])
        assert fitness_tax(taxes, pattern) == fitness_tax(17.3 * taxes, pattern)

    def test_zero_sum_flagged(self):
        with pytest.warns(DegenerateTaxWarning):
            assert fitness_tax([0.0, 0.0], TaxEvolutionPattern.uniform(2)) == 0.0


class TestFitnessGoals:
    def test_targets_hit(self):
        spec = make_spec()
        f_i, f_c = fitness_goals([1.0] * 5, [1.0] * 5, spec)
        assert f_i == 1.0
        assert f_c == 1.0

    def test_single_deviation(self):
        spec = make_spec()
        inv = [1.0, 1.0, 1.2, 1.0, 1.0]
        f_i, _ = fitness_goals(inv, [1.0] * 5, spec)
        assert f_i == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_infinite_capacity_scores_zero(self):
        spec = make_spec()
        _, f_c = fitness_goals([1.0] * 5, [1.0, 1.0, math.inf, 1.0, 1.0], spec)
        assert f_c == 0.0


class TestFitnessTotal:
    def sol(self, inv, tax, caps):
        return DimensionlessSolution(
            np.asarray(inv, float), np.asarray(tax, float), np.asarray(caps, float)
        )

    def test_perfect_solution(self):
        spec = make_spec(pattern=TaxEvolutionPattern.uniform(5))
        sol = self.sol([1.0] * 5, [1.0] * 5, [1.0] * 5)
        assert fitness_total(sol, spec) == pytest.approx(1.0)

    def test_weight_projection(self):
        spec = make_spec(gamma_tax=1.0, gamma_investment=0.0, gamma_capacity=0.0)
        sol = self.sol([0.3] * 5, [1.0, 2.0, 3.0, 2.0, 1.0], [5.0] * 5)
        assert fitness_total(sol, spec) == pytest.approx(
            fitness_tax(sol.taxes, spec.pattern, spec.decay_tax)
        )

    def test_bounded_by_weight_sum(self, rng):
        spec = make_spec()
        bound = spec.gamma_tax + spec.gamma_investment + spec.gamma_capacity
        for _ in range(100):
            sol = self.sol(rng.uniform(0, 3, 5), rng.uniform(0, 3, 5), rng.uniform(-1, 3, 5))
            total = fitness_total(sol, spec)
            assert 0.0 <= total <= bound + 1e-12

    def test_weights_validated(self):
        with pytest.raises(ValueError):
            make_spec(gamma_tax=0.5, gamma_investment=0.5, gamma_capacity=0.5)


class TestPenalty:
    def cs(self):
        return ConstraintSet(c_max=1.5, rho_max=0.07, base_tax=1.0)

    def spec3(self):
        return make_spec(
            target_investments=(1.0,) * 3,
            target_capacities=(1.0,) * 3,
            pattern=TaxEvolutionPattern.uniform(3),
        )

    def sol(self, tax, caps):
        return DimensionlessSolution(np.zeros(len(tax)), np.asarray(tax, float), np.asarray(caps, float))

    def test_zero_on_feasible(self):
        spec = self.spec3()
        sol = self.sol([1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
        assert penalty(sol, self.cs(), spec) == 0.0

    def test_negative_and_monotone_in_slack(self):
        spec = self.spec3()
        small = self.sol([1.0, 1.0, 1.0], [1.6, 1.0, 1.0])
        large = self.sol([1.0, 1.0, 1.0], [2.5, 1.0, 1.0])
        p_small = penalty(small, self.cs(), spec)
        p_large = penalty(large, self.cs(), spec)
        assert p_small < 0.0
        assert p_large < p_small

    def test_bounded_by_weight(self):
        spec = self.spec3()
        sol = self.sol([50.0] * 3, [CAPACITY_SENTINEL] * 3)
        p = penalty(sol, self.cs(), spec)
        assert -spec.penalty_weight <= p < 0.0
        # saturated: a violated solution scores below any feasible one
        assert p == pytest.approx(-spec.penalty_weight)

    def test_infinite_capacity_handled(self):
        spec = self.spec3()
        sol = self.sol([1.0] * 3, [math.inf, 1.0, 1.0])
        p = penalty(sol, self.cs(), spec)
        assert math.isfinite(p)
        assert p < 0.0

    def test_penalized_below_unpenalized(self, rng):
        spec = self.spec3()
        cs = self.cs()
        for _ in range(50):
            sol = self.sol(rng.uniform(0, 3, 3), rng.uniform(-1, 4, 3))
            br = evaluate(sol, cs, spec)
            if not br.feasible:
                assert br.penalized < br.total
            else:
                assert br.penalized == br.total


def test_evaluate_matches_pieces(rng):
    spec = make_spec()  # five-year spec, five-year solution below
    cs = ConstraintSet(c_max=1.5, rho_max=0.07, base_tax=1.0)
    sol = DimensionlessSolution(
        rng.uniform(0, 2, 5), rng.uniform(0.1, 2, 5), rng.uniform(0, 2, 5)
    )
    br = evaluate(sol, cs, spec)
    assert br.total == pytest.approx(fitness_total(sol, spec), rel=1e-12)
    assert br.penalty == pytest.approx(penalty(sol, cs, spec), rel=1e-12)
    assert br.penalized == br.total + br.penalty
