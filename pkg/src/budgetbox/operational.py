"""Realistic search setup: chromosomes mix project switches and tax rises.

A chromosome holds one gene per optional project followed by one gene per
year.  Project genes decode through a unit modulus (fractional part below one
half: inactive, above: active); tax genes decode through a 0.07 modulus into
a yearly tax increase between 0% and the 7% legal ceiling.  Priority-one
projects are always carried out and do not occupy a gene.

The grading of a decoded budget is a weighted mix of: how many optional
projects get built, how low the tax rises stay (overall and over the last two
years), how far the worst capacity to be free of debt stays from the 15-year
ceiling, how close the savings ratio sits to its 5% sweet spot, and how
steady the tax path is.

The two reference chromosomes (a liberal plan with every project built and
taxes pushed to the ceiling for three years, and a careful plan with only the
mandatory projects and mild rises) span the search box.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .budget import (
    BudgetSolution,
    MultiYearScenario,
    ProjectCatalog,
    investment_from_projects,
    scenario_from_dict,
    simulate_multi_year,
    tax_levels_from_rates,
)
from .frame import Frame, build_frame, clamp_to_box, p_values_to_r, r_values_to_p, sample_in_box

TAX_MODULUS = 0.07
PROJECT_MODULUS = 1.0
CDD_LIMIT_YEARS = 15.0


def anchor_vectors() -> tuple[np.ndarray, np.ndarray]:
    """The liberal and the careful reference chromosomes."""
    v1 = np.array([0.75, 0.75, 0.75, 0.75, 0.75, 0.07, 0.07, 0.07, 0.00, 0.00])
    v2 = np.array([0.25, 0.25, 0.25, 0.25, 0.25, 0.03, 0.02, 0.02, 0.00, 0.00])
    return v1, v2


def _mod(value: float, modulus: float) -> float:
    out = value % modulus
    # Float roundoff of the modulo of a tiny negative value can land exactly
    # on the modulus; keep the result inside [0, modulus).
    if out >= modulus:
        out = math.nextafter(modulus, 0.0)
    return out


def decode_operational(
    genes,
    project_count: int = 5,
    year_count: int = 5,
    anchor_boundary: bool = False,
) -> tuple[tuple[bool, ...], tuple[float, ...]]:
    """Decode a chromosome into optional-project switches and yearly tax
    increase fractions.

    ``anchor_boundary`` treats a tax gene sitting exactly on a positive
    multiple of the modulus as meaning the ceiling itself (the reference
    chromosomes use 0.07 to mean "raise at the maximum rate"), not zero.
    """
    genes = np.asarray(genes, float)
    if genes.size != project_count + year_count:
        raise ValueError(
            f"expected {project_count + year_count} genes, got {genes.size}"
        )
    flags = tuple(_mod(g, PROJECT_MODULUS) >= 0.5 for g in genes[:project_count])
    fractions = []
    for g in genes[project_count:]:
        frac = _mod(g, TAX_MODULUS)
        if anchor_boundary and frac == 0.0 and g > 0.0:
            frac = math.nextafter(TAX_MODULUS, 0.0)
        fractions.append(frac)
    return flags, tuple(fractions)


def expand_optional_flags(catalog: ProjectCatalog, flags) -> tuple[bool, ...]:
    """Activation vector over the whole catalog from optional-project flags."""
    flags = list(flags)
    optional = catalog.optional_projects()
    if len(flags) != len(optional):
        raise ValueError(
            f"got {len(flags)} flags for {len(optional)} optional projects"
        )
    it = iter(flags)
    return tuple(True if p.always_on else bool(next(it)) for p in catalog.projects)


def max_population_std(count: int, width: float) -> float:
    """Largest population standard deviation of `count` values confined to an
    interval of the given width (values split between the endpoints)."""
    k = count // 2
    return width * math.sqrt(k * (count - k)) / count


@dataclass(frozen=True)
class OperationalFitnessSpec:
    """Weights of the operational grading; they sum to one exactly."""

    weight_projects: float = 0.25
    weight_tax_avg: float = 0.10
    weight_tax_last_two: float = 0.05
    weight_cdd: float = 0.25
    weight_spare: float = 0.25
    weight_no_variation: float = 0.10
    cdd_worst: float = CDD_LIMIT_YEARS
    spare_optimum: float = 0.05
    tax_modulus: float = TAX_MODULUS

    def __post_init__(self) -> None:
        total = (
            self.weight_projects
            + self.weight_tax_avg
            + self.weight_tax_last_two
            + self.weight_cdd
            + self.weight_spare
            + self.weight_no_variation
        )
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total}")


def fitness_operational(
    flags,
    rates,
    sol: BudgetSolution,
    spec: OperationalFitnessSpec = OperationalFitnessSpec(),
) -> float:
    """Grade of a decoded and simulated budget, in [0, 1]."""
    rates = np.asarray(rates, float)
    m = spec.tax_modulus
    flags = [bool(f) for f in flags]
    projects_term = sum(flags) / len(flags)
    tax_avg_term = 1.0 - rates.mean() / m
    last_two_term = 1.0 - rates[-2:].mean() / m

    worst_cdd = max(sol.capacities)
    cdd_term = 1.0 - min(max(worst_cdd, 0.0), spec.cdd_worst) / spec.cdd_worst

    recipes = np.asarray(sol.operating_recipes(), float)
    if recipes.min() <= 0:
        spare_term = 0.0
    else:
        spare_ratio = float((np.asarray(sol.gross_sfc(), float) / recipes).mean())
        band = spec.spare_optimum
        spare_term = 1.0 - min(abs(spare_ratio - spec.spare_optimum), band) / band

    no_variation_term = 1.0 - float(np.std(rates)) / max_population_std(rates.size, m)

    return (
        spec.weight_projects * projects_term
        + spec.weight_tax_avg * tax_avg_term
        + spec.weight_tax_last_two * last_two_term
        + spec.weight_cdd * cdd_term
        + spec.weight_spare * spare_term
        + spec.weight_no_variation * no_variation_term
    )


def format_paper_style(flags, rates) -> str:
    """Human-readable decode: project switches then the tax path."""
    projects = ", ".join(
        f"Project {i + 1}: {'ON' if f else 'OFF'}" for i, f in enumerate(flags)
    )
    taxes = ", ".join(f"{100 * r:.2f}%" for r in rates)
    return f"{projects}\nTax evolution : {taxes}"


@dataclass(frozen=True)
class OperationalProblem:
    """Search bundle: scenario, gene-space frame and grading weights.

    Members of the genetic population are raw gene vectors (R coding); the
    box only shapes initialization, since the modulus decode is total.
    """

    scenario: MultiYearScenario
    frame: Frame
    spec: OperationalFitnessSpec = OperationalFitnessSpec()
    cdd_limit: float = CDD_LIMIT_YEARS
    penalty_weight: float = 10.0

    @property
    def dimension(self) -> int:
        return self.frame.dimension

    @property
    def project_gene_count(self) -> int:
        return len(self.scenario.projects.optional_projects())

    def sample_initial(self, rng: np.random.Generator) -> np.ndarray:
        return p_values_to_r(sample_in_box(self.dimension, rng), self.frame)

    def clamp(self, values: np.ndarray) -> np.ndarray:
        return p_values_to_r(clamp_to_box(r_values_to_p(values, self.frame)), self.frame)

    def decode(self, genes, anchor_boundary: bool = False):
        return decode_operational(
            genes,
            project_count=self.project_gene_count,
            year_count=self.scenario.years,
            anchor_boundary=anchor_boundary,
        )

    def plan(self, genes, anchor_boundary: bool = False) -> tuple[tuple, tuple]:
        """(investments, tax levels) implied by a chromosome."""
        flags, rates = self.decode(genes, anchor_boundary)
        active = expand_optional_flags(self.scenario.projects, flags)
        investments = investment_from_projects(self.scenario.projects, active)
        taxes = tax_levels_from_rates(self.scenario.base_tax, rates)
        return investments, taxes

    def simulate(self, genes, anchor_boundary: bool = False) -> BudgetSolution:
        return simulate_multi_year(self.scenario, *self.plan(genes, anchor_boundary))

    def score(self, genes, anchor_boundary: bool = False) -> float:
        """Raw grade of a chromosome, before any constraint penalty."""
        flags, rates = self.decode(genes, anchor_boundary)
        sol = self.simulate(genes, anchor_boundary)
        return fitness_operational(flags, rates, sol, self.spec)

    def evaluate(self, genes) -> tuple[float, bool]:
        flags, rates = self.decode(genes)
        sol = self.simulate(genes)
        raw = fitness_operational(flags, rates, sol, self.spec)
        caps = np.asarray(sol.capacities, float)
        finite = np.where(np.isfinite(caps), caps, 1e9)
        slack = float(np.maximum(finite - self.cdd_limit, 0.0).sum()) / self.cdd_limit
        feasible = bool(np.all(finite < self.cdd_limit))
        score = raw
        if slack > 0.0:
            score = raw - self.penalty_weight * (1.0 - math.exp(-slack))
        return score, feasible

    def result_entry(self, genes, score: float, feasible: bool) -> dict:
        flags, rates = self.decode(genes)
        sol = self.simulate(genes)
        return {
            "score": float(score),
            "feasible": bool(feasible),
            "genes": [float(g) for g in genes],
            "project_flags": [bool(f) for f in flags],
            "tax_rates": [float(r) for r in rates],
            "investments": [float(v) for v in sol.investments],
            "taxes": [float(t) for t in sol.taxes],
            "capacities": [c if math.isfinite(c) else None for c in sol.capacities],
        }


def operational_problem(
    scenario: MultiYearScenario,
    v1=None,
    v2=None,
    spec: OperationalFitnessSpec = OperationalFitnessSpec(),
    cdd_limit: float = CDD_LIMIT_YEARS,
    penalty_weight: float = 10.0,
) -> OperationalProblem:
    """Build the gene-space problem; anchors default to the reference pair."""
    if v1 is None or v2 is None:
        default_v1, default_v2 = anchor_vectors()
        v1 = default_v1 if v1 is None else np.asarray(v1, float)
        v2 = default_v2 if v2 is None else np.asarray(v2, float)
    if scenario.tax_mode != "rates":
        raise ValueError("operational runs need a scenario with tax_mode='rates'")
    expected = len(scenario.projects.optional_projects()) + scenario.years
    if len(v1) != expected or len(v2) != expected:
        raise ValueError(
            f"anchor chromosomes must have {expected} genes for this scenario"
        )
    frame = build_frame(np.asarray(v1, float), np.asarray(v2, float))
    return OperationalProblem(
        scenario=scenario,
        frame=frame,
        spec=spec,
        cdd_limit=cdd_limit,
        penalty_weight=penalty_weight,
    )


def bundled_demo_scenario() -> MultiYearScenario:
    """The synthetic five-year scenario shipped with the package."""
    text = resources.files("budgetbox.data").joinpath("demo_scenario.json").read_text()
    return scenario_from_dict(json.loads(text))
