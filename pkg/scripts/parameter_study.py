#!/usr/bin/env python3
"""Knob sweep on the bundled realistic scenario.

Varies one genetic parameter at a time around the defaults (crossover 0.75,
mutation 0.1, population 50, elites half the population) and prints the best
grade reached after a fixed number of generations, averaged over seeds.
Useful to sanity-check that the defaults sit on a flat optimum before trusting
them on a new scenario.
"""

import argparse

import numpy as np

from budgetbox import ga
from budgetbox.operational import bundled_demo_scenario, operational_problem


def best_after(problem, seeds, **overrides) -> float:
    scores = []
    for seed in seeds:
        cfg = ga.GaConfig(
            population_size=overrides.get("population_size", 50),
            generations=overrides.get("generations", 60),
            crossover_rate=overrides.get("crossover_rate", 0.75),
            mutation_rate=overrides.get("mutation_rate", 0.1),
            elite_count=overrides.get("elite_count"),
            rng_seed=seed,
            clamp_to_box=False,
        )
        scores.append(ga.run(problem, cfg).population.best_score)
    return float(np.mean(scores))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--generations", type=int, default=60)
    args = parser.parse_args()
    seeds = range(args.seeds)
    problem = operational_problem(bundled_demo_scenario())

    print("crossover rate sweep")
    for rate in (0.25, 0.5, 0.75, 0.9):
        score = best_after(problem, seeds, crossover_rate=rate, generations=args.generations)
        print(f"  crossover {rate:.2f}: mean best {score:.4f}")

    print("mutation rate sweep")
    for rate in (0.02, 0.05, 0.1, 0.3):
        score = best_after(problem, seeds, mutation_rate=rate, generations=args.generations)
        print(f"  mutation {rate:.2f}: mean best {score:.4f}")

    print("population size sweep")
    for size in (20, 50, 100):
        score = best_after(problem, seeds, population_size=size, generations=args.generations)
        print(f"  population {size}: mean best {score:.4f}")

    print("elite share sweep (population 50)")
    for elites in (5, 15, 25, 40):
        score = best_after(problem, seeds, elite_count=elites, generations=args.generations)
        print(f"  elites {elites}: mean best {score:.4f}")


if __name__ == "__main__":
    main()
