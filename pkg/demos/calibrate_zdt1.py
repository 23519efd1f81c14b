"""Pilot run that fixed the convergence thresholds used by the acceptance suite.

Runs each preset on ZDT1 (30 variables, 100 individuals, 100 generations)
for five seeds, next to a pure random search with the same number of
evaluations, and prints hypervolume and additive epsilon against a dense
sampling of the true front.
"""

import time

import numpy as np

from emoframe import ArchiveSpec, ArchiveUpdater, MaxGenerations, Unbounded, ZDT, build_preset, run
from emoframe.indicators import epsilon_indicator, hypervolume
from emoframe.problems import zdt1_front

REF = (11.0, 11.0)
SEEDS = (1, 2, 3, 4, 5)


def random_search(problem, evaluations, seed):
    rng = np.random.default_rng(seed)
    F = np.array([problem.evaluate(problem.random_genotype(rng)) for _ in range(evaluations)])
    return F


def main():
    problem = ZDT(1, 30)
    truth = zdt1_front(1000)
    print("algo   seed  seconds  evals  archive  hypervolume  eps+")
    for seed in SEEDS:
        F = random_search(problem, 10_000, seed)
        print(f"random {seed:4d}  {'':7s}  10000  {'':7s}  {float(hypervolume(F, REF)):11.4f}"
              f"  {epsilon_indicator(F, truth):.4f}")
    for name in ("nsga2", "spea2", "ibea"):
        for seed in SEEDS:
            hook = ArchiveUpdater(ArchiveSpec(Unbounded()))
            config = build_preset(name, problem, 100, MaxGenerations(100), seed=seed, hooks=(hook,))
            t0 = time.perf_counter()
            result = run(config)
            front = result.archives["external"].objectives()
            print(f"{name:6s} {seed:4d}  {time.perf_counter() - t0:7.1f}  {result.evaluations:5d}  "
                  f"{len(front):7d}  {float(hypervolume(front, REF)):11.4f}  {epsilon_indicator(front, truth):.4f}")


if __name__ == "__main__":
    main()
