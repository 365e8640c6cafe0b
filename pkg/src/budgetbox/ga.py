"""Genetic-like search producing a population of near-optimal codings.

The engine is generic over a problem object exposing:

    dimension        -> int
    sample_initial(rng) -> 1-D array, a random coding satisfying the box
    evaluate(values) -> (penalized fitness, feasible flag)
    clamp(values)    -> coding projected back into the box

Members are real-valued codings.  Each generation randomly pairs the parents,
applies single-point crossover at the crossover rate (uncrossed or unpaired
parents copy through), mutates offspring by adding a uniform [-1, 1] shift to
one random component, evaluates the offspring, and selects the next
generation from the 2N pool by deterministic elitism plus fitness-roulette.
Everything is driven by one seeded generator, so a run is reproducible from
its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Sequence

import numpy as np

ROULETTE_EPSILON = 1e-9


class BoxProblem(Protocol):
    dimension: int

    def sample_initial(self, rng: np.random.Generator) -> np.ndarray: ...

    def evaluate(self, values: np.ndarray) -> tuple[float, bool]: ...

    def clamp(self, values: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class GaConfig:
    """Knobs of the genetic loop.  Defaults follow the parameter study:
    crossover 0.75, mutation rate 0.1, population 50, elites/roulette split
    half and half, no post-selection shuffle."""

    population_size: int = 50
    generations: int = 100
    crossover_rate: float = 0.75
    mutation_rate: float = 0.1
    mutation_style: str = "rate"  # "rate" | "count" (0..N/50 mutants per generation)
    elite_count: Optional[int] = None  # None -> half the population
    rng_seed: int = 0
    clamp_to_box: bool = True
    shuffle_after_selection: bool = False
    init_rejection_factor: int = 10_000

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        for name in ("crossover_rate", "mutation_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.mutation_style not in ("rate", "count"):
            raise ValueError("mutation_style must be 'rate' or 'count'")
        if self.elite_count is not None and not 0 <= self.elite_count <= self.population_size:
            raise ValueError("elite_count must lie in [0, population_size]")

    @property
    def elites(self) -> int:
        if self.elite_count is None:
            return self.population_size // 2
        return self.elite_count


@dataclass(frozen=True)
class Population:
    """One generation: member codings with their penalized scores."""

    members: np.ndarray  # (N, d)
    scores: np.ndarray  # (N,)
    feasible: np.ndarray  # (N,) bool
    generation: int

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def best_index(self) -> int:
        return int(np.argmax(self.scores))

    @property
    def best_score(self) -> float:
        return float(self.scores.max())


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best: float
    mean: float
    feasible_count: int


@dataclass(frozen=True)
class RunResult:
    population: Population
    trace: tuple[GenerationStats, ...]
    cancelled: bool = False


class InfeasibleInitError(RuntimeError):
    """Random initialization could not collect enough feasible members."""

    def __init__(self, accepted: int, wanted: int, draws: int):
        self.accepted = accepted
        self.wanted = wanted
        self.draws = draws
        ratio = accepted / draws if draws else 0.0
        super().__init__(
            f"initialization rejected too often: {accepted}/{wanted} feasible members "
            f"after {draws} draws (observed feasibility ratio {ratio:.2e})"
        )


# A progress sink receives the stats of each completed generation; returning
# a truthy value requests cancellation.
ProgressSink = Callable[[GenerationStats], object]


def init_population(problem: BoxProblem, cfg: GaConfig, rng: np.random.Generator) -> Population:
    """Rejection-sample uniform box codings until N feasible members exist."""
    wanted = cfg.population_size
    budget = cfg.init_rejection_factor * wanted
    members: list[np.ndarray] = []
    scores: list[float] = []
    draws = 0
    while len(members) < wanted:
        if draws >= budget:
            raise InfeasibleInitError(len(members), wanted, draws)
        values = problem.sample_initial(rng)
        draws += 1
        score, ok = problem.evaluate(values)
        if ok:
            members.append(np.asarray(values, float))
            scores.append(score)
    return Population(
        members=np.array(members),
        scores=np.array(scores),
        feasible=np.ones(wanted, dtype=bool),
        generation=0,
    )


def crossover(
    parent_a: np.ndarray, parent_b: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Single-point crossover: a cut position is drawn uniformly over the
    components and the children swap everything from the cut onward."""
    if parent_a.shape != parent_b.shape:
        raise ValueError("parents must share one dimension")
    d = parent_a.size
    cut = int(rng.integers(0, d))  # the swapped tail starts here
    child_1 = np.concatenate([parent_a[:cut], parent_b[cut:]])
    child_2 = np.concatenate([parent_b[:cut], parent_a[cut:]])
    return child_1, child_2


def point_mutation(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Add a uniform [-1, 1] shift to one uniformly chosen component."""
    out = values.copy()
    index = int(rng.integers(0, out.size))
    out[index] += rng.uniform(-1.0, 1.0)
    return out


def mutate(values: np.ndarray, rng: np.random.Generator, cfg: GaConfig) -> np.ndarray:
    """Rate-style mutation of one child: with probability mutation_rate the
    child receives one point mutation, otherwise it passes unchanged."""
    if rng.uniform() < cfg.mutation_rate:
        return point_mutation(values, rng)
    return values.copy()


def select(scores: np.ndarray, cfg: GaConfig, rng: np.random.Generator) -> np.ndarray:
    """Indices of the next generation among the pooled candidates.

    The best `elites` candidates are kept deterministically (ties resolved
    toward the lower index); the rest are drawn without replacement with
    probability proportional to the score above the pool minimum.
    """
    scores = np.asarray(scores, float)
    n_out = cfg.population_size
    order = np.argsort(-scores, kind="stable")
    n_elite = min(cfg.elites, n_out)
    chosen = list(order[:n_elite])
    remaining = order[n_elite:]
    n_roulette = n_out - n_elite
    if n_roulette > 0:
        weights = np.maximum(scores[remaining] - scores.min() + ROULETTE_EPSILON, ROULETTE_EPSILON)
        picked = rng.choice(remaining.size, size=n_roulette, replace=False, p=weights / weights.sum())
        chosen.extend(remaining[picked])
    return np.array(chosen, dtype=int)


def _make_offspring(
    parents: np.ndarray, cfg: GaConfig, rng: np.random.Generator
) -> list[np.ndarray]:
    n = parents.shape[0]
    pairing = rng.permutation(n)
    offspring: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    for k in range(0, n - 1, 2):
        i, j = pairing[k], pairing[k + 1]
        if rng.uniform() < cfg.crossover_rate:
            child_1, child_2 = crossover(parents[i], parents[j], rng)
        else:
            child_1, child_2 = parents[i].copy(), parents[j].copy()
        offspring[k], offspring[k + 1] = child_1, child_2
    if n % 2 == 1:
        offspring[n - 1] = parents[pairing[n - 1]].copy()
    return offspring


def _mutate_offspring(
    offspring: list[np.ndarray], cfg: GaConfig, rng: np.random.Generator
) -> list[np.ndarray]:
    if cfg.mutation_style == "rate":
        return [mutate(child, rng, cfg) for child in offspring]
    # Count style: a small number of children, between 0 and N/50, each
    # receive exactly one point mutation.
    high = max(len(offspring) // 50, 0)
    count = int(rng.integers(0, high + 1))
    out = [child.copy() for child in offspring]
    if count > 0:
        picked = rng.choice(len(out), size=count, replace=False)
        for index in picked:
            out[index] = point_mutation(out[index], rng)
    return out


def run(
    problem: BoxProblem,
    cfg: GaConfig,
    progress: Optional[ProgressSink] = None,
) -> RunResult:
    """Full genetic loop, reproducible from cfg.rng_seed."""
    rng = np.random.default_rng(cfg.rng_seed)
    population = init_population(problem, cfg, rng)
    trace: list[GenerationStats] = []

    def record(pop: Population) -> bool:
        stats = GenerationStats(
            generation=pop.generation,
            best=pop.best_score,
            mean=float(pop.scores.mean()),
            feasible_count=int(pop.feasible.sum()),
        )
        trace.append(stats)
        if progress is not None:
            return bool(progress(stats))
        return False

    cancelled = record(population)
    generation = 0
    while not cancelled and generation < cfg.generations:
        generation += 1
        offspring = _make_offspring(population.members, cfg, rng)
        offspring = _mutate_offspring(offspring, cfg, rng)
        if cfg.clamp_to_box:
            offspring = [problem.clamp(child) for child in offspring]
        child_scores = np.empty(len(offspring))
        child_feasible = np.empty(len(offspring), dtype=bool)
        for k, child in enumerate(offspring):
            child_scores[k], child_feasible[k] = problem.evaluate(child)

        pool_members = np.vstack([population.members, np.array(offspring)])
        pool_scores = np.concatenate([population.scores, child_scores])
        pool_feasible = np.concatenate([population.feasible, child_feasible])

        selected = select(pool_scores, cfg, rng)
        if cfg.shuffle_after_selection:
            rng.shuffle(selected)
        population = Population(
            members=pool_members[selected],
            scores=pool_scores[selected],
            feasible=pool_feasible[selected],
            generation=generation,
        )
        cancelled = record(population)

    return RunResult(population=population, trace=tuple(trace), cancelled=bool(cancelled))
