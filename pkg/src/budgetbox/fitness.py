"""Composite fitness of a dimensionless budget, plus the constraint penalty.

Three sub-scores, each a decaying function of an absolute-deviation sum:
closeness of the tax profile to the desired tax evolution pattern, closeness
of investments to their targets, and closeness of capacities to theirs.  The
composite is their weighted sum; larger is better.  Constraints enter as a
saturating penalty subtracted from the composite, scaled to dominate the
fitness of any feasible candidate when violations are large.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .scaling import ConstraintSet, DimensionlessSolution, check_constraints

DEFAULT_DECAY_RATE = 5.0
DEFAULT_PENALTY_WEIGHT = 10.0

# Non-positive gross self-financing capacity yields an infinite capacity to be
# free of debt; it enters fitness and penalty arithmetic as this finite stand-in.
CAPACITY_SENTINEL = 1e9


class DegenerateTaxWarning(UserWarning):
    """Raised (as a warning) when a tax vector sums to zero or less, making
    the pattern comparison meaningless."""


@dataclass(frozen=True)
class TaxEvolutionPattern:
    """Non-negative weights, summing to one, saying when tax increases are
    politically acceptable."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(w < 0 for w in self.weights):
            raise ValueError("pattern weights must be non-negative")
        total = sum(self.weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"pattern weights must sum to 1, got {total}")

    @classmethod
    def uniform(cls, years: int) -> "TaxEvolutionPattern":
        return cls(tuple(1.0 / years for _ in range(years)))

    @classmethod
    def normalized(cls, raw) -> "TaxEvolutionPattern":
        raw = np.asarray(raw, float)
        if raw.min() < 0 or raw.sum() <= 0:
            raise ValueError("raw pattern must be non-negative with positive sum")
        w = raw / raw.sum()
        # Compensate float round-off so the sum-to-one invariant holds exactly.
        return cls(tuple(w / w.sum()))


@dataclass(frozen=True)
class FitnessSpec:
    """Targets, weights and shaping rates of the composite fitness."""

    target_investments: tuple[float, ...]
    target_capacities: tuple[float, ...]
    pattern: TaxEvolutionPattern
    gamma_tax: float = 1.0 / 3.0
    gamma_investment: float = 1.0 / 3.0
    gamma_capacity: float = 1.0 / 3.0
    decay_tax: float = DEFAULT_DECAY_RATE
    decay_investment: float = DEFAULT_DECAY_RATE
    decay_capacity: float = DEFAULT_DECAY_RATE
    penalty_weight: float = DEFAULT_PENALTY_WEIGHT
    penalty_rate: float = 1.0

    def __post_init__(self) -> None:
        weights = (self.gamma_tax, self.gamma_investment, self.gamma_capacity)
        if any(g < 0 for g in weights):
            raise ValueError("fitness weights must be non-negative")
        total = sum(weights)
        if not 0.9 <= total <= 1.1:
            raise ValueError(f"fitness weights must sum to roughly 1, got {total}")
        if self.penalty_weight < 1:
            raise ValueError("penalty_weight must be >= 1")


def _clamp_capacities(capacities) -> np.ndarray:
    c = np.asarray(capacities, float)
    return np.where(np.isfinite(c), np.minimum(c, CAPACITY_SENTINEL), CAPACITY_SENTINEL)


def fitness_tax(taxes, pattern: TaxEvolutionPattern, decay: float = DEFAULT_DECAY_RATE) -> float:
    """How well the (dimensionless) tax profile matches the pattern, in (0, 1];
    1 exactly when taxes are proportional to the pattern."""
    taxes = np.asarray(taxes, float)
    total = taxes.sum()
    if total <= 0:
        warnings.warn("tax levels sum to <= 0; pattern score is 0", DegenerateTaxWarning)
        return 0.0
    deviation = np.abs(taxes / total - np.asarray(pattern.weights)).sum()
    return float(math.exp(-decay * deviation))


def fitness_goals(investments, capacities, spec: FitnessSpec) -> tuple[float, float]:
    """Scores of the investment and capacity goals, each in (0, 1]."""
    inv_dev = np.abs(np.asarray(investments, float) - np.asarray(spec.target_investments)).sum()
    cap_dev = np.abs(_clamp_capacities(capacities) - np.asarray(spec.target_capacities)).sum()
    return (
        float(math.exp(-spec.decay_investment * inv_dev)),
        float(math.exp(-spec.decay_capacity * cap_dev)),
    )


def fitness_total(sol: DimensionlessSolution, spec: FitnessSpec) -> float:
    """The composite fitness; the larger, the better the solution."""
    f_t = fitness_tax(sol.taxes, spec.pattern, spec.decay_tax)
    f_i, f_c = fitness_goals(sol.investments, sol.capacities, spec)
    return spec.gamma_tax * f_t + spec.gamma_investment * f_i + spec.gamma_capacity * f_c


def penalty(sol: DimensionlessSolution, cs: ConstraintSet, spec: FitnessSpec) -> float:
    """Non-positive additive penalty: 0 exactly on the feasible set, saturating
    at -penalty_weight as the total constraint slack grows."""
    clamped = DimensionlessSolution(
        investments=sol.investments,
        taxes=sol.taxes,
        capacities=_clamp_capacities(sol.capacities),
    )
    slack = check_constraints(clamped, cs).total_slack
    if slack == 0.0:
        return 0.0
    return -spec.penalty_weight * (1.0 - math.exp(-spec.penalty_rate * slack))


@dataclass(frozen=True)
class FitnessBreakdown:
    """All the pieces of one evaluation, for reporting."""

    tax_score: float
    investment_score: float
    capacity_score: float
    total: float
    penalty: float
    feasible: bool

    @property
    def penalized(self) -> float:
        return self.total + self.penalty


def evaluate(sol: DimensionlessSolution, cs: ConstraintSet, spec: FitnessSpec) -> FitnessBreakdown:
    """Composite fitness, penalty and feasibility of one solution."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateTaxWarning)
        f_t = fitness_tax(sol.taxes, spec.pattern, spec.decay_tax)
    f_i, f_c = fitness_goals(sol.investments, sol.capacities, spec)
    total = spec.gamma_tax * f_t + spec.gamma_investment * f_i + spec.gamma_capacity * f_c
    report = check_constraints(
        DimensionlessSolution(sol.investments, sol.taxes, _clamp_capacities(sol.capacities)), cs
    )
    slack = report.total_slack
    pen = 0.0 if slack == 0.0 else -spec.penalty_weight * (1.0 - math.exp(-spec.penalty_rate * slack))
    return FitnessBreakdown(
        tax_score=f_t,
        investment_score=f_i,
        capacity_score=f_c,
        total=total,
        penalty=pen,
        feasible=report.feasible,
    )
