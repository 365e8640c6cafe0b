"""Dimensionless problem setting built from two anchor budgets.

The two anchor budgets (one hitting the investment goal, one hitting the
debt-capacity goal) define characteristic magnitudes for investment, tax and
capacity.  Dividing by them turns physical budgets into order-one
dimensionless points, on which the constraint set (non-negative capacities,
capacity ceiling, year-over-year tax caps) is expressed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budget import BudgetSolution, MultiYearScenario, simulate_multi_year

DEFAULT_TAX_GROWTH_CAP = 0.07


def as_point(investments, taxes) -> np.ndarray:
    """Concatenate per-year investments and taxes into one 2n point."""
    return np.concatenate([np.asarray(investments, float), np.asarray(taxes, float)])


def split_point(point) -> tuple[np.ndarray, np.ndarray]:
    point = np.asarray(point, float)
    n = point.size // 2
    return point[:n], point[n:]


@dataclass(frozen=True)
class AnchorPair:
    """The two expert-built budgets the search box will span.

    ``anchor_goal_i`` hits the targeted investment levels (its taxes were
    computed), ``anchor_goal_c`` hits the targeted capacities (its investments
    were computed).  Both carry the capacities their simulation produced.
    """

    goal_i_investments: tuple[float, ...]
    goal_i_taxes: tuple[float, ...]
    goal_c_investments: tuple[float, ...]
    goal_c_taxes: tuple[float, ...]
    goal_i_capacities: tuple[float, ...]
    goal_c_capacities: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.goal_i_investments)
        for name in (
            "goal_i_taxes",
            "goal_c_investments",
            "goal_c_taxes",
            "goal_i_capacities",
            "goal_c_capacities",
        ):
            if len(getattr(self, name)) != n:
                raise ValueError("anchor series must share one horizon")

    @property
    def years(self) -> int:
        return len(self.goal_i_investments)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """The two anchors as 2n-dimensional points."""
        return (
            as_point(self.goal_i_investments, self.goal_i_taxes),
            as_point(self.goal_c_investments, self.goal_c_taxes),
        )

    @classmethod
    def from_plans(
        cls,
        scenario: MultiYearScenario,
        goal_i_plan: tuple,
        goal_c_plan: tuple,
    ) -> "AnchorPair":
        """Simulate two (investments, taxes) plans and keep their capacities."""
        sol1 = simulate_multi_year(scenario, *goal_i_plan)
        sol2 = simulate_multi_year(scenario, *goal_c_plan)
        return cls(
            goal_i_investments=sol1.investments,
            goal_i_taxes=sol1.taxes,
            goal_c_investments=sol2.investments,
            goal_c_taxes=sol2.taxes,
            goal_i_capacities=sol1.capacities,
            goal_c_capacities=sol2.capacities,
        )


@dataclass(frozen=True)
class CharacteristicValues:
    """Characteristic investment, tax and capacity magnitudes (all > 0)."""

    i_char: float
    t_char: float
    c_char: float

    def __post_init__(self) -> None:
        for name in ("i_char", "t_char", "c_char"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and strictly positive, got {v}")


def characteristic_values(anchors: AnchorPair) -> CharacteristicValues:
    """Mean values reached by the two anchor budgets, per quantity."""
    two_n = 2 * anchors.years
    i_char = (sum(anchors.goal_i_investments) + sum(anchors.goal_c_investments)) / two_n
    t_char = (sum(anchors.goal_i_taxes) + sum(anchors.goal_c_taxes)) / two_n
    c_char = (sum(anchors.goal_i_capacities) + sum(anchors.goal_c_capacities)) / two_n
    return CharacteristicValues(i_char, t_char, c_char)


def to_dimensionless(investments, taxes, cv: CharacteristicValues) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.asarray(investments, float) / cv.i_char,
        np.asarray(taxes, float) / cv.t_char,
    )


def from_dimensionless(investments, taxes, cv: CharacteristicValues) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.asarray(investments, float) * cv.i_char,
        np.asarray(taxes, float) * cv.t_char,
    )


def capacities_to_dimensionless(capacities, cv: CharacteristicValues) -> np.ndarray:
    return np.asarray(capacities, float) / cv.c_char


@dataclass(frozen=True)
class DimensionlessSolution:
    """A simulated budget rescaled by the characteristic values."""

    investments: np.ndarray
    taxes: np.ndarray
    capacities: np.ndarray


def dimensionless_solution(sol: BudgetSolution, cv: CharacteristicValues) -> DimensionlessSolution:
    inv, tax = to_dimensionless(sol.investments, sol.taxes, cv)
    return DimensionlessSolution(inv, tax, capacities_to_dimensionless(sol.capacities, cv))


@dataclass(frozen=True)
class ConstraintSet:
    """Constraint parameters, in dimensionless terms.

    ``c_max`` caps every year's capacity to be free of debt.  The tax cap of
    year i is the previous year's tax grown by at most ``rho_max`` (floored at
    zero), the chain starting from ``base_tax``.
    """

    c_max: float
    rho_max: float = DEFAULT_TAX_GROWTH_CAP
    base_tax: float = 0.0

    def __post_init__(self) -> None:
        if not self.c_max > 0:
            raise ValueError("c_max must be strictly positive")
        if self.rho_max < 0:
            raise ValueError("rho_max must be non-negative")

    def tax_caps(self, taxes) -> np.ndarray:
        """Per-year tax ceilings given the candidate's own previous levels."""
        taxes = np.asarray(taxes, float)
        if math.isinf(self.rho_max):
            return np.full_like(taxes, math.inf)
        caps = np.empty_like(taxes)
        previous = self.base_tax
        for i, t in enumerate(taxes):
            caps[i] = max((1.0 + self.rho_max) * previous, 0.0)
            previous = t
        return caps

    @classmethod
    def prudential(
        cls,
        cv: CharacteristicValues,
        base_tax_physical: float,
        c_max_years: float = 15.0,
        rho_max: float = DEFAULT_TAX_GROWTH_CAP,
    ) -> "ConstraintSet":
        """The common rules: 15-year capacity ceiling, 7% yearly tax growth."""
        return cls(
            c_max=c_max_years / cv.c_char,
            rho_max=rho_max,
            base_tax=base_tax_physical / cv.t_char,
        )


@dataclass(frozen=True)
class ViolationReport:
    """Per-constraint slacks; all zero exactly on the feasible set."""

    capacity_negative: np.ndarray
    capacity_excess: np.ndarray
    tax_excess: np.ndarray

    @property
    def total_slack(self) -> float:
        return float(
            self.capacity_negative.sum() + self.capacity_excess.sum() + self.tax_excess.sum()
        )

    @property
    def feasible(self) -> bool:
        return self.total_slack == 0.0


def check_constraints(sol: DimensionlessSolution, cs: ConstraintSet) -> ViolationReport:
    """Slack of every constraint for a dimensionless solution."""
    c = np.asarray(sol.capacities, float)
    caps = cs.tax_caps(sol.taxes)
    return ViolationReport(
        capacity_negative=np.maximum(-c, 0.0),
        capacity_excess=np.maximum(c - cs.c_max, 0.0),
        tax_excess=np.maximum(np.asarray(sol.taxes, float) - caps, 0.0),
    )
