"""Bi-objective 0/1 knapsack with three presets.

Both objectives are maximized.  Infeasible selections are repaired before
evaluation by dropping the items with the worst profit-to-weight ratio.
The presets are compared pairwise with the coverage-style contribution
indicator and the additive epsilon indicator.
"""

import itertools

from emoframe import Knapsack, MaxGenerations, build_preset, contribution, epsilon_indicator, run
from emoframe.problems import random_knapsack_instance

problem = Knapsack(random_knapsack_instance(100, seed=4))
fronts = {}
for name in ("nsga2", "spea2", "ibea"):
    result = run(build_preset(name, problem, 80, MaxGenerations(150), seed=2))
    fronts[name] = result.front
    best = result.front.max(axis=0)
    print(f"{name:6s} {len(result.front):3d} points, best profits {best[0]:.0f} / {best[1]:.0f}")

print()
for a, b in itertools.permutations(fronts, 2):
    # the space is passed so maximization is respected
    share = contribution(fronts[a], fronts[b], problem.space)
    eps = epsilon_indicator(fronts[a], fronts[b], space=problem.space)
    print(f"{a:6s} vs {b:6s}: contribution {share:.2f}, eps+ {eps:8.2f}")
