import hypothesis
import numpy as np
import pytest

from budgetbox.budget import (
    DebtState,
    ExogenousFinances,
    LoanPayment,
    MultiYearScenario,
    Project,
    ProjectCatalog,
)

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.load_profile("ci")


def random_scenario(rng: np.random.Generator, years: int | None = None) -> MultiYearScenario:
    """A random but structurally valid multi-year scenario."""
    n = int(years if years is not None else rng.integers(1, 7))
    exo = ExogenousFinances(
        state_allocations=tuple(rng.uniform(5.0, 50.0, n)),
        other_operating_recipes=tuple(rng.uniform(0.0, 10.0, n)),
        operating_expenditures=tuple(rng.uniform(5.0, 60.0, n)),
        subventions=tuple(rng.uniform(0.0, 5.0, n)),
        loan_interest_rate=float(rng.uniform(0.0, 0.1)),
        loan_maturity=int(rng.integers(1, 16)),
    )
    schedule = tuple(
        LoanPayment(int(rng.integers(0, 10)), float(rng.uniform(0.0, 5.0)), float(rng.uniform(0.0, 1.0)))
        for _ in range(int(rng.integers(0, 8)))
    )
    debt = DebtState.from_schedule(schedule)
    projects = tuple(
        Project(
            name=f"project-{k}",
            cost_by_year=tuple(rng.uniform(0.0, 5.0, n)),
            priority=int(rng.integers(1, 5)),
            always_on=bool(rng.uniform() < 0.3),
        )
        for k in range(int(rng.integers(1, 6)))
    )
    return MultiYearScenario(
        exogenous=exo,
        initial_debt=debt,
        projects=ProjectCatalog(projects),
        tax_mode="levels",
        base_tax=float(rng.uniform(1.0, 20.0)),
    )


def random_plan(rng: np.random.Generator, years: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.uniform(0.0, 15.0, years), rng.uniform(0.0, 30.0, years)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240814)
