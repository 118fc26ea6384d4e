"""Simple GA factorizer over the shrunk interval [10**(D_j - 1), isqrt(M)]."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import ga_core
from .errors import IntervalTooSmall
from .ga_core import Chromosome, GaConfig
from .numtheory import FactorizationProblem


@dataclass(frozen=True)
class RunReport:
    M: int
    success: bool
    factor: int | None
    cofactor: int | None
    generations: int
    elapsed: float
    seed: int
    best_remainder: int | None = None
    form: tuple[int, int] | None = None

    def __post_init__(self):
        if self.success:
            if self.factor is None or self.cofactor is None:
                raise ValueError("successful run must carry both factors")
            if self.factor * self.cofactor != self.M:
                raise ValueError(f"{self.factor} x {self.cofactor} != {self.M}")
            if not 1 < self.factor <= self.cofactor < self.M:
                raise ValueError("factor pair out of order or trivial")


def success_report(M: int, j: int, generation: int, started: float, seed: int,
                   form: tuple[int, int] | None = None) -> RunReport:
    other = M // j
    factor, cofactor = min(j, other), max(j, other)
    return RunReport(M=M, success=True, factor=factor, cofactor=cofactor,
                     generations=generation, elapsed=time.perf_counter() - started,
                     seed=seed, best_remainder=0, form=form)


def seed_population(problem: FactorizationProblem, n: int,
                    rng: np.random.Generator) -> list[Chromosome]:
    width = ga_core.bit_width(problem.upper)
    return [Chromosome(int(v), width) for v in _seed_values(problem, n, rng)]


def _seed_values(problem: FactorizationProblem, n: int, rng: np.random.Generator) -> np.ndarray:
    lower, upper = problem.search_lower, problem.upper
    if upper - lower + 1 < n:
        raise IntervalTooSmall(
            f"interval [{lower}, {upper}] holds fewer than {n} candidates"
        )
    return ga_core.sample_unique(lower, upper, n, rng)


def run_simple_ga(problem: FactorizationProblem, cfg: GaConfig | None = None) -> RunReport:
    """Evolve candidate factors until one divides M or the generation cap is hit.

    Only the initial population is forced to be duplicate-free. Each
    generation is fully replaced by its offspring.
    """
    cfg = cfg or GaConfig.simple_defaults()
    started = time.perf_counter()
    rng = ga_core.make_rng(cfg.seed)
    M, lower, upper = problem.M, problem.search_lower, problem.upper
    width = ga_core.bit_width(upper)

    pop = _seed_values(problem, cfg.population, rng)
    best = None
    for generation in range(cfg.max_generations + 1):
        scores = ga_core.remainders(M, pop)
        hits = np.flatnonzero(scores == 0)
        if hits.size:
            return success_report(M, int(pop[hits[0]]), generation, started, cfg.seed)
        low = int(scores.min())
        best = low if best is None else min(best, low)
        if generation == cfg.max_generations:
            break
        pop = ga_core.breed(pop, scores, cfg.population, width, lower, upper, cfg, rng)

    return RunReport(M=M, success=False, factor=None, cofactor=None,
                     generations=cfg.max_generations,
                     elapsed=time.perf_counter() - started, seed=cfg.seed,
                     best_remainder=best)
