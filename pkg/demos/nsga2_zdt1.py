"""NSGA-II on ZDT1, start to finish.

Builds the preset, attaches an unbounded archive and a hypervolume trace,
runs 100 generations and reports how close the final front is to the true
one.  Takes a few seconds.
"""

from emoframe import (ArchiveSpec, ArchiveUpdater, IndicatorProgress, MaxGenerations, Unbounded, ZDT, build_preset,
                      epsilon_indicator, hypervolume, run)
from emoframe.problems import zdt1_front

REF = (11.0, 11.0)

problem = ZDT(1, 30)

# Hooks run after every generation.  The archive collects every
# nondominated point ever seen; the progress hook reads from it.
archive = ArchiveUpdater(ArchiveSpec(Unbounded()))
progress = IndicatorProgress("hypervolume", ref=REF, source="external")

config = build_preset("nsga2", problem, population_size=100, budget=MaxGenerations(100), seed=1,
                      hooks=(archive, progress))
print("fitness:    ", config.fitness)
print("diversity:  ", config.diversity)
print("selection:  ", config.selection)
print("replacement:", config.replacement)

result = run(config)
front = result.archives["external"].objectives()
print(f"\n{result.generations} generations, {result.evaluations} evaluations, {len(front)} archived points")

# The hypervolume trace never decreases when it reads an unbounded archive.
trace = result.series["hypervolume"]
for gen in (0, 10, 25, 50, 100):
    print(f"  generation {gen:3d}: hypervolume {trace[gen]:.4f}")

truth = zdt1_front(1000)
print(f"\nfinal hypervolume {float(hypervolume(front, REF)):.4f} (true front: {float(hypervolume(truth, REF)):.4f})")
print(f"additive epsilon to the true front: {epsilon_indicator(front, truth):.4f}")
