"""One-dimensional verification problems for the box-constrained search.

Two closed-form fitness curves on the real line: one with a single maximum at
x = 0.5, one whose maximum is a flat plateau over [0.48, 0.52] at value 0.91.
The curves' two humps peak at x = 0.45 and x = 0.55; those points play the
roles of the two anchor budgets, so the search interval is [0.4, 0.6].  The
plateau curve is the interesting one: a healthy run must spread its final
population across the plateau instead of collapsing onto one point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ga
from .frame import Frame, build_frame, clamp_to_box

PLATEAU_INTERVAL = (0.48, 0.52)
PLATEAU_VALUE = 0.91
ANCHOR_LOW = 0.45
ANCHOR_HIGH = 0.55


def fitness_single_max(x: float) -> float:
    """Sum of two clipped downward parabolas peaking at 0.45 and 0.55; one
    global maximum F(0.5) = 0.925."""
    h1 = 0.5 * max(1.0 - 30.0 * (x - 0.45) ** 2, 0.0)
    h2 = 0.5 * max(1.0 - 30.0 * (x - 0.55) ** 2, 0.0)
    return h1 + h2


def fitness_plateau(x: float) -> float:
    """Sum of two clipped piecewise-linear humps whose slopes cancel over
    [0.48, 0.52], leaving a flat maximum at 0.91."""
    f1 = 1.0 - 10.0 * abs(x - 0.45)
    f2 = 1.0 - 10.0 * abs(x - 0.55)
    g1 = min(1.0 - 10.0 * (x - 0.48), 1.0)
    g2 = min(1.0 - 10.0 * (0.52 - x), 1.0)
    l1 = 0.7 * max(0.5 * f1 + 0.5 * g1, 0.0)
    l2 = 0.7 * max(0.5 * f2 + 0.5 * g2, 0.0)
    return l1 + l2


@dataclass(frozen=True)
class Curve1D:
    """A total closed-form fitness on the real line plus its two anchors."""

    name: str
    fn: Callable[[float], float]
    anchor_low: float = ANCHOR_LOW
    anchor_high: float = ANCHOR_HIGH


CURVES = {
    "single": Curve1D("single", fitness_single_max),
    "plateau": Curve1D("plateau", fitness_plateau),
}


@dataclass(frozen=True)
class OneDProblem:
    """The 1-D search: the frame degenerates to the interval
    [midpoint - separation, midpoint + separation]."""

    curve: Curve1D
    frame: Frame

    @property
    def dimension(self) -> int:
        return 1

    def to_x(self, p_values: np.ndarray) -> float:
        return float(self.frame.midpoint[0] + self.frame.scale * p_values[0])

    def sample_initial(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, size=1)

    def clamp(self, values: np.ndarray) -> np.ndarray:
        return clamp_to_box(values)

    def evaluate(self, values: np.ndarray) -> tuple[float, bool]:
        return self.curve.fn(self.to_x(values)), True


def one_d_problem(curve: Curve1D) -> OneDProblem:
    frame = build_frame(np.array([curve.anchor_low]), np.array([curve.anchor_high]))
    return OneDProblem(curve, frame)


def default_1d_config(
    seed: int = 0, generations: int = 500, population: int = 35
) -> ga.GaConfig:
    """The reference setup: 35 points, 500 generations, stray mutants allowed
    (no box clamping; the curves are total)."""
    return ga.GaConfig(
        population_size=population,
        generations=generations,
        crossover_rate=0.75,
        mutation_rate=0.1,
        rng_seed=seed,
        clamp_to_box=False,
    )


@dataclass(frozen=True)
class Report1D:
    """Final population as (x, F) rows, plus the run trace."""

    curve_name: str
    rows: tuple[tuple[float, float], ...]
    result: ga.RunResult = field(repr=False)

    def text_table(self, per_row: int = 7) -> str:
        lines = []
        for start in range(0, len(self.rows), per_row):
            chunk = self.rows[start : start + per_row]
            lines.append("x  " + "  ".join(f"{x:6.3f}" for x, _ in chunk))
            lines.append("F  " + "  ".join(f"{f:6.3f}" for _, f in chunk))
        return "\n".join(lines)

    def csv_rows(self) -> str:
        out = ["x,F"]
        out.extend(f"{x:.6f},{f:.6f}" for x, f in self.rows)
        return "\n".join(out) + "\n"


def run_1d(
    curve: Curve1D,
    cfg: ga.GaConfig,
    progress: ga.ProgressSink | None = None,
) -> Report1D:
    """Run the search on a 1-D curve and report the final collection."""
    problem = one_d_problem(curve)
    result = ga.run(problem, cfg, progress)
    rows = tuple(
        (problem.to_x(member), float(score))
        for member, score in zip(result.population.members, result.population.scores)
    )
    return Report1D(curve_name=curve.name, rows=rows, result=result)
