"""Alternative multi-year budget seeking.

Simulate local-community budgets over several years, and search the box
spanning two expert anchor budgets with a genetic-like algorithm to produce a
population of near-optimal alternatives for decision-makers to choose from.
"""

from .budget import (
    BudgetSolution,
    DebtState,
    ExogenousFinances,
    LoanPayment,
    MultiYearScenario,
    Project,
    ProjectCatalog,
    capacity_to_be_free_of_debt,
    investment_from_projects,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
    simulate_multi_year,
    simulate_year,
    tax_levels_from_rates,
)
from .fitness import FitnessSpec, TaxEvolutionPattern, fitness_tax, fitness_total, penalty
from .frame import Coding, Frame, build_frame, in_box, p_to_r, r_to_p
from .ga import GaConfig, Population, RunResult
from .pipeline import RunBundle, execute_run, load_run_config, standard_problem
from .scaling import (
    AnchorPair,
    CharacteristicValues,
    ConstraintSet,
    characteristic_values,
    check_constraints,
    from_dimensionless,
    to_dimensionless,
)

__version__ = "0.1.0"
