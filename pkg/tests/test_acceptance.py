"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict that the terminal summary prints
under "acceptance criteria" (see ``conftest.py``).
"""

import dataclasses
import itertools
import math
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_RESULTS, make_pop
from oracles import iterative_survivors, peel_fronts

from emoframe import cli
from emoframe.archive import Archive, ArchiveSpec, FixedSize, Unbounded
from emoframe.config import ExperimentConfig
from emoframe.diversity import AUTO, Crowding, DummyDiversity, NearestNeighbor, Sharing
from emoframe.dominance import Epsilon, ObjectiveSpace, Outcome, Pareto, Sense, Strict, Weak, relation_compare
from emoframe.engine import ArchiveUpdater, EngineState, MaxGenerations, _Scorer, run
from emoframe.fitness import AdditiveEpsilon, DominanceDepth, IndicatorBased, Spea2, assign_dominance_depth
from emoframe.indicators import (binary_hypervolume, contribution, epsilon_indicator, hypervolume,
                                 monte_carlo_hypervolume)
from emoframe.presets import build_preset
from emoframe.problems import ZDT, zdt1_front
from emoframe.selection import (DeterministicTournament, ElitistSelection, Generational, IterativeElitist,
                                replace)

# Threshold on the additive epsilon of the final NSGA-II front against the
# true ZDT1 front.  Pilot (demos/calibrate_zdt1.py, seeds 1-5) observed
# 0.016-0.024; the bound leaves roughly a factor of two of headroom.
EPS_THRESHOLD = 0.05
ZDT_REF = (11.0, 11.0)
SEEDS = (1, 2, 3, 4, 5)


@pytest.fixture
def criterion(request):
    """Record the verdict of the calling test under its criterion number."""
    number = request.node.get_closest_marker("criterion").args[0]
    detail = {"text": ""}
    yield detail
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    ACCEPTANCE_RESULTS[number] = (not failed, detail["text"])


def random_space(rng, m):
    return ObjectiveSpace(tuple(rng.choice([Sense.MINIMIZE, Sense.MAXIMIZE]) for _ in range(m)))


def brute_nondominated_set(F_min):
    """Distinct rows of ``F_min`` not dominated by any other row (broadcast check)."""
    U = np.unique(F_min, axis=0)
    keep = []
    for p in U:
        dominated = np.any(np.all(U <= p, axis=1) & np.any(U < p, axis=1))
        if not dominated:
            keep.append(tuple(p))
    return set(keep)


@pytest.mark.criterion(1)
def test_criterion_01_depth_matches_peeling(criterion):
    rng = np.random.default_rng(101)
    elapsed = 0.0
    mismatches = 0
    for trial in range(100):
        n = int(rng.integers(10, 201))
        m = int(rng.integers(2, 5))
        space = random_space(rng, m)
        F = rng.integers(0, 8, size=(n, m)).astype(float) if trial % 3 == 0 else rng.random((n, m))
        pop = make_pop(F)
        t0 = time.perf_counter()
        _, fronts = assign_dominance_depth(pop, space)
        elapsed += time.perf_counter() - t0
        if [sorted(f) for f in fronts] != peel_fronts([tuple(r) for r in F], space):
            mismatches += 1
    criterion["text"] = f"100 populations, {mismatches} mismatches, sorting took {elapsed:.2f} s"
    assert mismatches == 0
    assert elapsed < 10.0


@pytest.mark.criterion(2)
def test_criterion_02_relation_algebra(criterion):
    rng = np.random.default_rng(202)
    relations = (Pareto(), Weak(), Strict(), Epsilon(0.5))
    violations = []
    for trial in range(10_000):
        m = int(rng.integers(2, 5))
        space = random_space(rng, m)
        a, b, c = (tuple(float(x) for x in rng.integers(0, 4, m)) for _ in range(3))
        rel = relations[trial % len(relations)]
        if relation_compare(a, b, space, rel) is not relation_compare(b, a, space, rel).flipped():
            violations.append(("antisymmetry", a, b, rel))
        if relation_compare(a, a, space, Pareto()) is not Outcome.EQUIVALENT:
            violations.append(("irreflexivity", a))
        ab = relation_compare(a, b, space, Pareto())
        if ab is Outcome.DOMINATES and relation_compare(b, c, space, Pareto()) is Outcome.DOMINATES:
            if relation_compare(a, c, space, Pareto()) is not Outcome.DOMINATES:
                violations.append(("transitivity", a, b, c))
        if relation_compare(a, b, space, Strict()) is Outcome.DOMINATES and ab is not Outcome.DOMINATES:
            violations.append(("strict=>pareto", a, b))
        if ab is Outcome.DOMINATES and relation_compare(a, b, space, Weak()) is not Outcome.DOMINATES:
            violations.append(("pareto=>weak", a, b))
        k = int(rng.integers(m))
        senses = list(space.senses)
        senses[k] = Sense.MAXIMIZE if senses[k] is Sense.MINIMIZE else Sense.MINIMIZE
        flipped = ObjectiveSpace(tuple(senses))
        a2 = tuple(-x if i == k else x for i, x in enumerate(a))
        b2 = tuple(-x if i == k else x for i, x in enumerate(b))
        if relation_compare(a, b, space, rel) is not relation_compare(a2, b2, flipped, rel):
            violations.append(("sense flip", a, b, rel))
    criterion["text"] = f"10000 random triples, {len(violations)} violations"
    assert violations == []


@pytest.mark.criterion(3)
def test_criterion_03_unbounded_archive(criterion):
    rng = np.random.default_rng(303)
    space = ObjectiveSpace.minimize(2)
    violations = 0
    for stream in range(50):
        if stream % 2:
            F = rng.integers(0, 60, size=(1000, 2)).astype(float)
        else:
            # points near a front, so the archive grows large
            x = rng.random(1000)
            F = np.column_stack([x, 1 - np.sqrt(x)]) + rng.random((1000, 2)) * 0.3
        ref = F.max(axis=0) + 1
        archive = Archive(space)
        last = 0.0
        for row in F:
            archive.update(make_pop([row]))
            hv = float(hypervolume(archive.objectives(), ref))
            if hv < last:
                violations += 1
            last = hv
        got = {tuple(r) for r in archive.objectives()}
        if len(got) != len(archive) or got != brute_nondominated_set(F):
            violations += 1
        shuffled = Archive(space)
        shuffled.update(make_pop(F[rng.permutation(len(F))]))
        if {tuple(r) for r in shuffled.objectives()} != got:
            violations += 1
    criterion["text"] = f"50 streams of 1000 points, {violations} violations"
    assert violations == 0


@pytest.mark.criterion(4)
def test_criterion_04_hypervolume_cross_validation(criterion):
    exact = [float(hypervolume([(1, 1)], (2, 2))),
             float(hypervolume([(0.5, 1.5), (1.5, 0.5)], (2, 2))),
             float(hypervolume([(0.5, 0.5)], (2, 2)))]
    assert exact == [1.0, 1.25, 2.25]
    rng = np.random.default_rng(404)
    samples = 100_000
    worst = 0.0
    for trial in range(20):
        x = np.sort(rng.random(int(rng.integers(1, 30))))
        F = np.column_stack([x, 1 - x ** rng.uniform(0.3, 3)]) + rng.random((len(x), 2)) * 0.1
        ref = np.array([1.5, 1.5])
        value = float(hypervolume(F, ref))
        estimate = monte_carlo_hypervolume(F, ref, samples=samples, seed=trial)
        box = float(np.prod(ref - F.min(axis=0)))
        p = value / box
        sigma = box * math.sqrt(p * (1 - p) / samples)
        z = abs(float(estimate) - value) / sigma if sigma > 0 else 0.0
        worst = max(worst, z)
    criterion["text"] = f"hand cases {exact}; Monte Carlo worst deviation {worst:.2f} sigma on 20 fronts"
    assert worst <= 3.0


@pytest.mark.criterion(5)
def test_criterion_05_indicator_identities(criterion):
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(50):
        A = rng.uniform(0.1, 1.0, size=(int(rng.integers(1, 20)), 2))
        B = rng.uniform(0.1, 1.0, size=(int(rng.integers(1, 20)), 2))
        assert epsilon_indicator(A, A) == 0.0
        assert epsilon_indicator(A, A, "multiplicative") == 1.0
        assert binary_hypervolume(A, A, (2, 2)) == 0.0
        total = contribution(A, B) + contribution(B, A)
        worst = max(worst, abs(total - 1.0))
    criterion["text"] = f"50 front pairs, worst contribution-sum error {worst:.1e}"
    assert worst <= 1e-12


def _fields(cfg):
    return {f.name: getattr(cfg, f.name) for f in dataclasses.fields(cfg)}


@pytest.mark.criterion(6)
def test_criterion_06_preset_rows(criterion):
    problem, budget = ZDT(1), MaxGenerations(100)
    rows = {
        "nsga2": (DominanceDepth(Pareto()), Crowding(), DeterministicTournament(2), IterativeElitist(), None),
        "spea2": (Spea2(Pareto()), NearestNeighbor(AUTO),
                  ElitistSelection(1.0, DeterministicTournament(2), DeterministicTournament(2)),
                  Generational(), ArchiveSpec(FixedSize(100), Pareto())),
        "ibea": (IndicatorBased(AdditiveEpsilon(), 0.05), DummyDiversity(), DeterministicTournament(2),
                 IterativeElitist(), None),
    }
    for name, row in rows.items():
        cfg = build_preset(name, problem, 100, budget)
        assert (cfg.fitness, cfg.diversity, cfg.selection, cfg.replacement, cfg.archive) == row, name
    base = build_preset("nsga2", problem, 100, budget)
    swaps = {"diversity": dataclasses.replace(base, diversity=Sharing(0.1)),
             "fitness": dataclasses.replace(base, fitness=DominanceDepth(Epsilon(0.01)))}
    for field, variant in swaps.items():
        changed = [k for k, v in _fields(variant).items() if _fields(base)[k] != v]
        assert changed == [field]
    criterion["text"] = "3 preset rows match; sharing and epsilon swaps each change one field"


@pytest.mark.criterion(7)
def test_criterion_07_iterative_replacement_oracle(criterion):
    rng = np.random.default_rng(707)
    space = ObjectiveSpace.minimize(2)
    nsga2 = build_preset("nsga2", ZDT(1, 5), 8, MaxGenerations(1))
    checked = 0
    for trial in range(200):
        size = int(rng.integers(2, 9))
        if trial % 2:
            pts = [tuple(p) for p in rng.integers(0, 4, size=(size, 2)).astype(float)]
        else:
            pts = [tuple(p) for p in rng.random((size, 2)).round(2)]
        for n in range(1, size + 1):
            expected = iterative_survivors(pts, space, n)

            def plain_refit(members):
                fronts = DominanceDepth().assign(members, space)
                Crowding().assign(members, space, fronts)

            pop = make_pop(pts)
            out = replace(pop[: size // 2], pop[size // 2:], IterativeElitist(), n, refit=plain_refit)
            assert [pop.index(p) for p in out] == expected, (pts, n)
            pop = make_pop(pts)
            scorer = _Scorer(nsga2, EngineState(space=space, population=[], rng=np.random.default_rng(0)))
            out = replace(pop[: size // 2], pop[size // 2:], IterativeElitist(), n, refit=scorer)
            assert [pop.index(p) for p in out] == expected, (pts, n)
            checked += 1
    criterion["text"] = f"200 random unions of <= 8 points, {checked} survivor sets match the oracle"


def random_search_front(problem, evaluations, seed):
    rng = np.random.default_rng(seed)
    return np.array([problem.evaluate(problem.random_genotype(rng)) for _ in range(evaluations)])


def final_front(name, seed):
    hook = ArchiveUpdater(ArchiveSpec(Unbounded()))
    config = build_preset(name, ZDT(1, 30), 100, MaxGenerations(100), seed=seed, hooks=(hook,))
    t0 = time.perf_counter()
    result = run(config)
    return result.archives["external"].objectives(), time.perf_counter() - t0


@pytest.mark.criterion(8)
def test_criterion_08_nsga2_converges_on_zdt1(criterion):
    truth = zdt1_front(1000)
    rows = []
    for seed in SEEDS:
        front, seconds = final_front("nsga2", seed)
        baseline = random_search_front(ZDT(1, 30), 10_000, seed)
        hv, hv_random = float(hypervolume(front, ZDT_REF)), float(hypervolume(baseline, ZDT_REF))
        eps = epsilon_indicator(front, truth)
        rows.append((seed, hv, hv_random, eps, seconds))
    criterion["text"] = "; ".join(f"seed {s}: HV {hv:.3f} > {hr:.3f}, eps+ {e:.4f}, {t:.1f} s"
                                  for s, hv, hr, e, t in rows)
    for seed, hv, hv_random, eps, seconds in rows:
        assert hv > hv_random, seed
        assert eps < EPS_THRESHOLD, seed
        assert seconds < 60, seed


class CountingProblem:
    """Delegates to a problem and counts evaluator invocations."""

    def __init__(self, inner, counter):
        self.inner = inner
        self.counter = counter

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def evaluate(self, genotype):
        self.counter[0] += 1
        return self.inner.evaluate(genotype)


@pytest.mark.criterion(9)
def test_criterion_09_reproducible_cli_runs(criterion, tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("algorithm = nsga2\nproblem = zdt1\nproblem.d = 30\npopulation_size = 40\n"
                   "max_generations = 25\nseed = 7\nexternal_archive = unbounded\n"
                   "progress.indicator = hypervolume\nprogress.ref = 11,11\n")
    counter = [0]
    original = ExperimentConfig.build_problem
    monkeypatch.setattr(ExperimentConfig, "build_problem",
                        lambda self: CountingProblem(original(self), counter))
    reported = []
    for out in ("a", "b"):
        counter[0] = 0
        assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / out)]) == 0
        line = capsys.readouterr().out.strip().splitlines()[-1]
        fields = dict(item.split("=", 1) for item in line.split())
        reported.append((int(fields["evaluations"]), counter[0]))
    same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
               for f in ("final.front", "progress.tsv"))
    criterion["text"] = f"outputs identical: {same}; (reported, counted) evaluations {reported}"
    assert same
    assert all(r == c for r, c in reported)
    # unchanged offspring keep their objectives, so at most one call per child
    assert 40 < reported[0][0] <= 40 + 25 * 40


@pytest.mark.criterion(10)
def test_criterion_10_spea2_and_ibea_converge(criterion):
    truth = zdt1_front(1000)
    bound = 2 * EPS_THRESHOLD
    rows = []
    for name, seed in itertools.product(("spea2", "ibea"), SEEDS):
        front, seconds = final_front(name, seed)
        rows.append((name, seed, epsilon_indicator(front, truth), seconds))
    worst = {name: max(e for n, _, e, _ in rows if n == name) for name in ("spea2", "ibea")}
    criterion["text"] = f"worst eps+ over 5 seeds: spea2 {worst['spea2']:.4f}, ibea {worst['ibea']:.4f} (bound {bound})"
    for name, seed, eps, _ in rows:
        assert eps <= bound, (name, seed)
