"""Changing one component of an algorithm.

An algorithm here is a record of independent parts.  Swapping crowding
for fitness sharing turns NSGA-II into an NSGA-style method; swapping the
Pareto relation for epsilon dominance coarsens the ranking.  Everything
else stays as it was, so any difference in the outcome is due to that one
part.
"""

import dataclasses

from emoframe import (DominanceDepth, Epsilon, MaxGenerations, Sharing, ZDT, build_preset, epsilon_indicator,
                      hypervolume, run)
from emoframe.problems import zdt1_front

problem = ZDT(1, 30)
base = build_preset("nsga2", problem, 60, MaxGenerations(60), seed=3)

variants = {
    "nsga2 (crowding)": base,
    "sharing, sigma=0.1": dataclasses.replace(base, diversity=Sharing(0.1)),
    "epsilon-dominance 0.05": dataclasses.replace(base, fitness=DominanceDepth(Epsilon(0.05))),
}

truth = zdt1_front(1000)
for label, config in variants.items():
    changed = [f.name for f in dataclasses.fields(config) if getattr(config, f.name) != getattr(base, f.name)]
    result = run(config)
    print(f"{label:24s} changed={changed or '-'}  front={len(result.front):3d}  "
          f"hv={float(hypervolume(result.front, (11, 11))):.3f}  eps+={epsilon_indicator(result.front, truth):.4f}")
