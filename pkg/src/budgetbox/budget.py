"""Deterministic multi-year simulation of a local-community budget.

One simulated year works as follows: operating recipes (state allocations,
other recipes and taxes) pay for operating expenditures and debt interest,
leaving the gross self-financing capacity.  Debt capital due is repaid out of
it, leaving the net self-financing capacity, which together with subventions,
the reserve carried over and a new loan funds the year's investment.  Every
year balances by construction: the new loan tops up any shortfall, any surplus
goes to a non-negative reserve usable the following year.  Loans contracted
one year roll into the debt of the following years, which is what couples the
years of a multi-year budget.

The headline indicator is the capacity to be free of debt: remaining debt
capital divided by the gross self-financing capacity, in years.  The commonly
accepted prudential ceiling is 15 years.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, NamedTuple

PRUDENTIAL_CDD_YEARS = 15.0

SCENARIO_SCHEMA_VERSION = 1

_REL_TOL = 1e-9


def _check_nonneg(name: str, values: Iterable[float]) -> None:
    for v in values:
        if v < 0:
            raise ValueError(f"{name} must be non-negative, got {v}")


class LoanPayment(NamedTuple):
    """One scheduled debt payment, `year` counted from the year about to be
    simulated (0 = due in that year)."""

    year: int
    capital: float
    interest: float


@dataclass(frozen=True)
class DebtState:
    """Outstanding debt: remaining capital plus the payment schedule that
    repays it.

    Invariant: ``remaining_capital`` equals the sum of scheduled capital
    payments (within 1e-9 relative).
    """

    remaining_capital: float
    schedule: tuple[LoanPayment, ...] = ()

    def __post_init__(self) -> None:
        if self.remaining_capital < 0:
            raise ValueError("remaining_capital must be non-negative")
        total = 0.0
        for p in self.schedule:
            if p.capital < 0 or p.interest < 0 or p.year < 0:
                raise ValueError(f"invalid schedule entry {p}")
            total += p.capital
        scale = max(1.0, abs(total), abs(self.remaining_capital))
        if abs(total - self.remaining_capital) > _REL_TOL * scale:
            raise ValueError(
                f"remaining_capital {self.remaining_capital} != scheduled capital {total}"
            )

    @classmethod
    def zero(cls) -> "DebtState":
        return cls(0.0, ())

    @classmethod
    def from_schedule(cls, schedule: Iterable[LoanPayment]) -> "DebtState":
        sched = tuple(LoanPayment(*p) for p in schedule)
        return cls(sum(p.capital for p in sched), sched)

    def due_now(self) -> tuple[float, float]:
        """(capital, interest) falling due in the current year."""
        capital = sum(p.capital for p in self.schedule if p.year == 0)
        interest = sum(p.interest for p in self.schedule if p.year == 0)
        return capital, interest


def level_loan_schedule(amount: float, rate: float, maturity: int) -> tuple[LoanPayment, ...]:
    """Payment schedule of a new loan: equal capital tranches over `maturity`
    years, interest on the declining balance.  First payment falls one year
    after contraction (year index 0 of the next DebtState)."""
    if amount <= 0:
        return ()
    if maturity < 1:
        raise ValueError("maturity must be >= 1")
    tranche = amount / maturity
    out = []
    for j in range(maturity):
        balance = amount - j * tranche
        out.append(LoanPayment(j, tranche, rate * balance))
    return tuple(out)


class YearExogenous(NamedTuple):
    """Exogenous inputs of a single year."""

    state_allocations: float
    other_operating_recipes: float
    operating_expenditures: float
    subventions: float
    loan_interest_rate: float
    loan_maturity: int


@dataclass(frozen=True)
class ExogenousFinances:
    """The non-controllable inputs of the budget over the planning horizon."""

    state_allocations: tuple[float, ...]
    other_operating_recipes: tuple[float, ...]
    operating_expenditures: tuple[float, ...]
    subventions: tuple[float, ...]
    loan_interest_rate: float
    loan_maturity: int

    def __post_init__(self) -> None:
        n = len(self.state_allocations)
        if n < 1:
            raise ValueError("need at least one year")
        for name in ("other_operating_recipes", "operating_expenditures", "subventions"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must have length {n}")
        if not 0 <= self.loan_interest_rate < 1:
            raise ValueError("loan_interest_rate must lie in [0, 1)")
        if self.loan_maturity < 1:
            raise ValueError("loan_maturity must be >= 1")

    @property
    def years(self) -> int:
        return len(self.state_allocations)

    def year(self, i: int) -> YearExogenous:
        return YearExogenous(
            self.state_allocations[i],
            self.other_operating_recipes[i],
            self.operating_expenditures[i],
            self.subventions[i],
            self.loan_interest_rate,
            self.loan_maturity,
        )


@dataclass(frozen=True)
class Project:
    name: str
    cost_by_year: tuple[float, ...]
    priority: int
    always_on: bool = False

    def __post_init__(self) -> None:
        _check_nonneg(f"project {self.name!r} costs", self.cost_by_year)
        if not 1 <= self.priority <= 4:
            raise ValueError("priority must lie in 1..4")


@dataclass(frozen=True)
class ProjectCatalog:
    """The list of all projects the community would like to carry out."""

    projects: tuple[Project, ...]

    def __post_init__(self) -> None:
        if not self.projects:
            raise ValueError("catalog needs at least one project")
        n = len(self.projects[0].cost_by_year)
        for p in self.projects:
            if len(p.cost_by_year) != n:
                raise ValueError("all projects must cover the same years")

    @property
    def years(self) -> int:
        return len(self.projects[0].cost_by_year)

    def optional_projects(self) -> tuple[Project, ...]:
        return tuple(p for p in self.projects if not p.always_on)


def investment_from_projects(catalog: ProjectCatalog, active: Iterable[bool]) -> tuple[float, ...]:
    """Per-year investment implied by an activation vector over the whole
    catalog.  Projects flagged always_on are active regardless of the vector."""
    flags = list(active)
    if len(flags) != len(catalog.projects):
        raise ValueError(
            f"activation vector has length {len(flags)}, catalog has {len(catalog.projects)} projects"
        )
    totals = [0.0] * catalog.years
    for project, on in zip(catalog.projects, flags):
        if project.always_on or on:
            for i, cost in enumerate(project.cost_by_year):
                totals[i] += cost
    return tuple(totals)


def tax_levels_from_rates(base_tax: float, rates: Iterable[float]) -> tuple[float, ...]:
    """Absolute tax levels from per-year increase rates compounded on a base."""
    levels = []
    current = base_tax
    for r in rates:
        current = current * (1.0 + r)
        levels.append(current)
    return tuple(levels)


@dataclass(frozen=True)
class MultiYearScenario:
    """Everything exogenous that defines the budget system over n years."""

    exogenous: ExogenousFinances
    initial_debt: DebtState
    projects: ProjectCatalog
    tax_mode: str = "levels"
    base_tax: float = 0.0
    name: str = ""

    def __post_init__(self) -> None:
        if self.tax_mode not in ("levels", "rates"):
            raise ValueError("tax_mode must be 'levels' or 'rates'")
        if self.projects.years != self.exogenous.years:
            raise ValueError("project costs and exogenous series must cover the same years")
        if self.base_tax < 0:
            raise ValueError("base_tax must be non-negative")

    @property
    def years(self) -> int:
        return self.exogenous.years


@dataclass(frozen=True)
class YearLines:
    """The budget lines of one simulated year."""

    year: int
    tax: float
    investment: float
    operating_recipes: float
    operating_expenditures: float
    interest: float
    gross_sfc: float
    capital_repayment: float
    net_sfc: float
    subventions: float
    new_loan: float
    reserve_in: float
    reserve_out: float
    debt_start: float
    debt_end: float


@dataclass(frozen=True)
class BudgetSolution:
    """A fully simulated multi-year budget for given investment and tax levels.

    ``capacities[k]`` is the capacity to be free of debt at the end of year k:
    remaining capital over that year's gross self-financing capacity, +inf when
    the capacity is non-positive while debt remains.
    """

    investments: tuple[float, ...]
    taxes: tuple[float, ...]
    lines: tuple[YearLines, ...]
    capacities: tuple[float, ...]

    @property
    def years(self) -> int:
        return len(self.lines)

    def gross_sfc(self) -> tuple[float, ...]:
        return tuple(l.gross_sfc for l in self.lines)

    def operating_recipes(self) -> tuple[float, ...]:
        return tuple(l.operating_recipes for l in self.lines)

    def to_dict(self) -> dict:
        return {
            "investments": list(self.investments),
            "taxes": list(self.taxes),
            "capacities": [c if math.isfinite(c) else None for c in self.capacities],
            "lines": [
                {
                    "year": l.year,
                    "tax": l.tax,
                    "investment": l.investment,
                    "operating_recipes": l.operating_recipes,
                    "operating_expenditures": l.operating_expenditures,
                    "interest": l.interest,
                    "gross_sfc": l.gross_sfc,
                    "capital_repayment": l.capital_repayment,
                    "net_sfc": l.net_sfc,
                    "subventions": l.subventions,
                    "new_loan": l.new_loan,
                    "reserve_in": l.reserve_in,
                    "reserve_out": l.reserve_out,
                    "debt_start": l.debt_start,
                    "debt_end": l.debt_end,
                }
                for l in self.lines
            ],
        }


def capacity_to_be_free_of_debt(remaining_capital: float, gross_sfc: float) -> float:
    """Years needed to repay the remaining capital at constant gross
    self-financing capacity.  0 with no debt; +inf when the capacity is
    non-positive while debt remains."""
    if remaining_capital < 0:
        raise ValueError("remaining_capital must be non-negative")
    if remaining_capital == 0:
        return 0.0
    if gross_sfc <= 0:
        return math.inf
    return remaining_capital / gross_sfc


def simulate_year(
    debt: DebtState,
    tax_level: float,
    investment: float,
    exo: YearExogenous,
    reserve_in: float = 0.0,
    year_index: int = 0,
) -> tuple[YearLines, DebtState, float]:
    """Run the yearly budget system once.

    Returns the year's budget lines, the debt state carried into the next
    year (old schedule shifted by one year plus the new loan's level
    amortization) and the reserve carried out.  Negative gross self-financing
    capacity is a legal state; it simply drives the capacity to be free of
    debt to +inf downstream.
    """
    capital_due, interest_due = debt.due_now()
    recipes = exo.state_allocations + exo.other_operating_recipes + tax_level
    gross_sfc = recipes - exo.operating_expenditures - interest_due
    net_sfc = gross_sfc - capital_due
    new_loan = max(investment - net_sfc - exo.subventions - reserve_in, 0.0)
    reserve_out = max(net_sfc + exo.subventions + reserve_in - investment, 0.0)

    shifted = tuple(
        LoanPayment(p.year - 1, p.capital, p.interest) for p in debt.schedule if p.year >= 1
    )
    new_schedule = shifted + level_loan_schedule(
        new_loan, exo.loan_interest_rate, exo.loan_maturity
    )
    # float cancellation on a fully repaid debt can land a hair below zero
    next_remaining = max(debt.remaining_capital - capital_due + new_loan, 0.0)
    next_debt = DebtState(next_remaining, new_schedule)

    lines = YearLines(
        year=year_index,
        tax=tax_level,
        investment=investment,
        operating_recipes=recipes,
        operating_expenditures=exo.operating_expenditures,
        interest=interest_due,
        gross_sfc=gross_sfc,
        capital_repayment=capital_due,
        net_sfc=net_sfc,
        subventions=exo.subventions,
        new_loan=new_loan,
        reserve_in=reserve_in,
        reserve_out=reserve_out,
        debt_start=debt.remaining_capital,
        debt_end=next_debt.remaining_capital,
    )
    return lines, next_debt, reserve_out


def simulate_multi_year(
    scenario: MultiYearScenario,
    investments: Iterable[float],
    taxes: Iterable[float],
) -> BudgetSolution:
    """Chain the yearly system over the scenario horizon, threading debt and
    reserve from one year to the next."""
    inv = tuple(float(v) for v in investments)
    tax = tuple(float(v) for v in taxes)
    n = scenario.years
    if len(inv) != n or len(tax) != n:
        raise ValueError(
            f"expected {n} investment and tax levels, got {len(inv)} and {len(tax)}"
        )
    debt = scenario.initial_debt
    reserve = 0.0
    lines: list[YearLines] = []
    capacities: list[float] = []
    for i in range(n):
        year_lines, debt, reserve = simulate_year(
            debt, tax[i], inv[i], scenario.exogenous.year(i), reserve, year_index=i
        )
        lines.append(year_lines)
        capacities.append(capacity_to_be_free_of_debt(debt.remaining_capital, year_lines.gross_sfc))
    return BudgetSolution(inv, tax, tuple(lines), tuple(capacities))


# --- scenario (de)serialization, schema version 1 ---------------------------


def scenario_to_dict(scenario: MultiYearScenario) -> dict:
    exo = scenario.exogenous
    return {
        "version": SCENARIO_SCHEMA_VERSION,
        "name": scenario.name,
        "years": scenario.years,
        "tax_mode": scenario.tax_mode,
        "base_tax": scenario.base_tax,
        "exogenous": {
            "state_allocations": list(exo.state_allocations),
            "other_operating_recipes": list(exo.other_operating_recipes),
            "operating_expenditures": list(exo.operating_expenditures),
            "subventions": list(exo.subventions),
            "loan_interest_rate": exo.loan_interest_rate,
            "loan_maturity_years": exo.loan_maturity,
        },
        "debt": {
            "remaining_capital": scenario.initial_debt.remaining_capital,
            "annuity_schedule": [
                [p.year, p.capital, p.interest] for p in scenario.initial_debt.schedule
            ],
        },
        "projects": [
            {
                "name": p.name,
                "cost_by_year": list(p.cost_by_year),
                "priority": p.priority,
                "always_on": p.always_on,
            }
            for p in scenario.projects.projects
        ],
    }


def _scenario_schema() -> dict:
    text = resources.files("budgetbox.data").joinpath("scenario.schema.json").read_text()
    return json.loads(text)


def scenario_from_dict(data: dict, validate: bool = True) -> MultiYearScenario:
    """Build a scenario from its JSON document, validating against the
    versioned schema shipped with the package."""
    if validate:
        import jsonschema

        jsonschema.validate(data, _scenario_schema())
    if data["version"] != SCENARIO_SCHEMA_VERSION:
        raise ValueError(f"unsupported scenario schema version {data['version']}")
    exo_d = data["exogenous"]
    exo = ExogenousFinances(
        state_allocations=tuple(exo_d["state_allocations"]),
        other_operating_recipes=tuple(exo_d["other_operating_recipes"]),
        operating_expenditures=tuple(exo_d["operating_expenditures"]),
        subventions=tuple(exo_d["subventions"]),
        loan_interest_rate=exo_d["loan_interest_rate"],
        loan_maturity=exo_d["loan_maturity_years"],
    )
    debt_d = data["debt"]
    debt = DebtState(
        remaining_capital=debt_d["remaining_capital"],
        schedule=tuple(LoanPayment(int(y), c, i) for y, c, i in debt_d["annuity_schedule"]),
    )
    catalog = ProjectCatalog(
        tuple(
            Project(
                name=p["name"],
                cost_by_year=tuple(p["cost_by_year"]),
                priority=p["priority"],
                always_on=p.get("always_on", False),
            )
            for p in data["projects"]
        )
    )
    scenario = MultiYearScenario(
        exogenous=exo,
        initial_debt=debt,
        projects=catalog,
        tax_mode=data.get("tax_mode", "levels"),
        base_tax=data.get("base_tax", 0.0),
        name=data.get("name", ""),
    )
    if scenario.years != data["years"]:
        raise ValueError("declared years do not match the series length")
    return scenario


def load_scenario(path) -> MultiYearScenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))
