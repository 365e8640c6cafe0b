"""Wiring of the full budget search and the run-configuration format.

A run configuration (JSON document, version 1) names a scenario, the two
anchor plans, the fitness targets and weights, the constraint parameters and
the genetic knobs.  From it we build the dimensionless problem: characteristic
values from the anchors, the orthonormal frame and box spanning them, and the
penalized fitness the search maximizes.  Results resize back to physical
budgets, sorted best first.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import fitness as fit
from . import ga
from .budget import BudgetSolution, MultiYearScenario, scenario_from_dict, simulate_multi_year
from .frame import Frame, build_frame, clamp_to_box, p_values_to_r, r_values_to_p, sample_in_box
from .operational import (
    OperationalFitnessSpec,
    OperationalProblem,
    operational_problem,
)
from .scaling import (
    AnchorPair,
    CharacteristicValues,
    ConstraintSet,
    as_point,
    characteristic_values,
    dimensionless_solution,
    from_dimensionless,
    split_point,
    to_dimensionless,
)

RUN_CONFIG_VERSION = 1


@dataclass(frozen=True)
class StandardProblem:
    """Box search over dimensionless (investments, taxes) points."""

    scenario: MultiYearScenario
    cv: CharacteristicValues
    frame: Frame
    fitness_spec: fit.FitnessSpec
    constraints: ConstraintSet

    @property
    def dimension(self) -> int:
        return self.frame.dimension

    def sample_initial(self, rng: np.random.Generator) -> np.ndarray:
        return sample_in_box(self.dimension, rng)

    def clamp(self, values: np.ndarray) -> np.ndarray:
        return clamp_to_box(values)

    def physical_plan(self, p_values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        inv_dimless, tax_dimless = split_point(p_values_to_r(p_values, self.frame))
        return from_dimensionless(inv_dimless, tax_dimless, self.cv)

    def simulate(self, p_values: np.ndarray) -> BudgetSolution:
        investments, taxes = self.physical_plan(p_values)
        return simulate_multi_year(self.scenario, investments, taxes)

    def breakdown(self, p_values: np.ndarray) -> tuple[BudgetSolution, fit.FitnessBreakdown]:
        sol = self.simulate(p_values)
        dimless = dimensionless_solution(sol, self.cv)
        return sol, fit.evaluate(dimless, self.constraints, self.fitness_spec)

    def evaluate(self, p_values: np.ndarray) -> tuple[float, bool]:
        _, br = self.breakdown(p_values)
        return br.penalized, br.feasible

    def p_coding_of_plan(self, investments, taxes) -> np.ndarray:
        """Box coordinates of a physical plan (anchors land on the first axis)."""
        point = as_point(*to_dimensionless(investments, taxes, self.cv))
        return r_values_to_p(point, self.frame)


@dataclass(frozen=True)
class ResizedSolution:
    """One member of the final collection, back in physical units."""

    coding: np.ndarray
    score: float
    feasible: bool
    solution: BudgetSolution
    breakdown: fit.FitnessBreakdown

    def to_dict(self) -> dict:
        return {
            "score": float(self.score),
            "feasible": bool(self.feasible),
            "coding": [float(v) for v in self.coding],
            "investments": [float(v) for v in self.solution.investments],
            "taxes": [float(v) for v in self.solution.taxes],
            "capacities": [
                c if math.isfinite(c) else None for c in self.solution.capacities
            ],
            "breakdown": {
                "tax_score": self.breakdown.tax_score,
                "investment_score": self.breakdown.investment_score,
                "capacity_score": self.breakdown.capacity_score,
                "total": self.breakdown.total,
                "penalty": self.breakdown.penalty,
            },
        }


def resize_results(
    population: ga.Population, problem: StandardProblem
) -> list[ResizedSolution]:
    """Physical budgets of the final population, best score first."""
    order = np.argsort(-population.scores, kind="stable")
    out = []
    for index in order:
        p_values = population.members[index]
        sol, br = problem.breakdown(p_values)
        out.append(
            ResizedSolution(
                coding=p_values,
                score=float(population.scores[index]),
                feasible=bool(population.feasible[index]),
                solution=sol,
                breakdown=br,
            )
        )
    return out


def standard_problem(
    scenario: MultiYearScenario,
    anchors: AnchorPair,
    fitness_spec_physical: dict,
    constraints: dict,
) -> StandardProblem:
    """Build the dimensionless search problem from physical-unit inputs.

    ``fitness_spec_physical`` carries targets in currency/years; they are
    rescaled by the characteristic values computed from the anchors.
    """
    cv = characteristic_values(anchors)
    point_i, point_c = anchors.points()
    frame = build_frame(
        as_point(*to_dimensionless(*split_point(point_i), cv)),
        as_point(*to_dimensionless(*split_point(point_c), cv)),
    )

    pattern = fit.TaxEvolutionPattern.normalized(fitness_spec_physical["pattern"])
    target_inv, _ = to_dimensionless(
        fitness_spec_physical["target_investments"],
        np.zeros(scenario.years),
        cv,
    )
    target_cap = np.asarray(fitness_spec_physical["target_capacities"], float) / cv.c_char
    spec = fit.FitnessSpec(
        target_investments=tuple(target_inv),
        target_capacities=tuple(target_cap),
        pattern=pattern,
        gamma_tax=fitness_spec_physical.get("gamma_tax", 1.0 / 3.0),
        gamma_investment=fitness_spec_physical.get("gamma_investment", 1.0 / 3.0),
        gamma_capacity=fitness_spec_physical.get("gamma_capacity", 1.0 / 3.0),
        decay_tax=fitness_spec_physical.get("decay_tax", fit.DEFAULT_DECAY_RATE),
        decay_investment=fitness_spec_physical.get("decay_investment", fit.DEFAULT_DECAY_RATE),
        decay_capacity=fitness_spec_physical.get("decay_capacity", fit.DEFAULT_DECAY_RATE),
        penalty_weight=fitness_spec_physical.get("penalty_weight", fit.DEFAULT_PENALTY_WEIGHT),
        penalty_rate=fitness_spec_physical.get("penalty_rate", 1.0),
    )

    base_tax = constraints.get("base_tax", scenario.base_tax)
    if base_tax <= 0:
        raise ValueError("constraints need a positive base tax for the growth-cap chain")
    cs = ConstraintSet.prudential(
        cv,
        base_tax_physical=base_tax,
        c_max_years=constraints.get("c_max_years", 15.0),
        rho_max=constraints.get("rho_max", 0.07),
    )
    return StandardProblem(
        scenario=scenario, cv=cv, frame=frame, fitness_spec=spec, constraints=cs
    )


@dataclass(frozen=True)
class RunBundle:
    """Everything one run needs, plus the normalized config for the record."""

    mode: str
    scenario: MultiYearScenario
    problem: Union[StandardProblem, OperationalProblem]
    ga_config: ga.GaConfig
    config_echo: dict

    def frame_document(self) -> dict:
        """The search frame, serialized into run records for reproducibility."""
        frame = self.problem.frame
        return {
            "dimension": frame.dimension,
            "midpoint": [float(v) for v in frame.midpoint],
            "scale": float(frame.scale),
            "pivot_index": frame.pivot_index,
            "basis": [[float(v) for v in row] for row in frame.basis],
        }


def _ga_config(section: dict) -> ga.GaConfig:
    return ga.GaConfig(
        population_size=section.get("population_size", 50),
        generations=section.get("generations", 100),
        crossover_rate=section.get("crossover_rate", 0.75),
        mutation_rate=section.get("mutation_rate", 0.1),
        mutation_style=section.get("mutation_style", "rate"),
        elite_count=section.get("elite_count"),
        rng_seed=section.get("seed", 0),
        clamp_to_box=section.get("clamp_to_box", True),
        shuffle_after_selection=section.get("shuffle_after_selection", False),
    )


def load_run_config(
    data: dict,
    scenario_resolver: Optional[Callable[[str], MultiYearScenario]] = None,
) -> RunBundle:
    """Build a run bundle from its JSON document.

    ``scenario_resolver`` maps a ``scenario_id`` reference to a stored
    scenario; inline ``scenario`` documents need no resolver.
    """
    if data.get("version") != RUN_CONFIG_VERSION:
        raise ValueError(f"unsupported run config version {data.get('version')!r}")
    mode = data.get("mode", "standard")
    if mode not in ("standard", "operational"):
        raise ValueError(f"unknown run mode {mode!r}")

    if "scenario" in data:
        scenario = scenario_from_dict(data["scenario"])
    elif "scenario_id" in data:
        if scenario_resolver is None:
            raise ValueError("scenario_id references need a scenario resolver")
        scenario = scenario_resolver(data["scenario_id"])
    else:
        raise ValueError("run config must carry 'scenario' or 'scenario_id'")

    cfg = _ga_config(data.get("ga", {}))

    if mode == "operational":
        section = data.get("operational", {})
        ospec = OperationalFitnessSpec(
            cdd_worst=section.get("cdd_worst_years", 15.0),
            spare_optimum=section.get("spare_optimum", 0.05),
        )
        problem = operational_problem(
            scenario,
            v1=section.get("anchor_v1"),
            v2=section.get("anchor_v2"),
            spec=ospec,
            cdd_limit=section.get("cdd_limit_years", 15.0),
            penalty_weight=section.get("penalty_weight", 10.0),
        )
        if cfg.clamp_to_box and "clamp_to_box" not in data.get("ga", {}):
            # Gene chromosomes decode through a modulus; by default let them roam.
            cfg = ga.GaConfig(**{**cfg.__dict__, "clamp_to_box": False})
    else:
        anchors_cfg = data["anchors"]
        anchors = AnchorPair.from_plans(
            scenario,
            (
                anchors_cfg["goal_i"]["investments"],
                anchors_cfg["goal_i"]["taxes"],
            ),
            (
                anchors_cfg["goal_c"]["investments"],
                anchors_cfg["goal_c"]["taxes"],
            ),
        )
        problem = standard_problem(
            scenario,
            anchors,
            fitness_spec_physical=data["fitness"],
            constraints=data.get("constraints", {}),
        )

    return RunBundle(
        mode=mode,
        scenario=scenario,
        problem=problem,
        ga_config=cfg,
        config_echo=copy.deepcopy(data),
    )


def execute_run(
    bundle: RunBundle,
    progress: Optional[ga.ProgressSink] = None,
) -> tuple[ga.RunResult, list[dict]]:
    """Run the search and serialize the final collection, best first."""
    result = ga.run(bundle.problem, bundle.ga_config, progress)
    population = result.population
    order = np.argsort(-population.scores, kind="stable")
    entries: list[dict] = []
    if bundle.mode == "operational":
        problem = bundle.problem
        for rank, index in enumerate(order):
            entry = problem.result_entry(
                population.members[index],
                float(population.scores[index]),
                bool(population.feasible[index]),
            )
            entry["rank"] = rank
            entries.append(entry)
    else:
        for rank, resized in enumerate(resize_results(population, bundle.problem)):
            entry = resized.to_dict()
            entry["rank"] = rank
            entries.append(entry)
    return result, entries
