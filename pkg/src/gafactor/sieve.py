"""Sieve Method: a GA over n where candidate factors take the form a*n +/- d.

Each generation is augmented with the opposite point of every candidate
about the n-interval, deduplicated, and scored by the better of the two
signs. A small outer GA picks (a, d) for numbers of 19 digits or more.
"""

from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass

import numpy as np

from . import ga_core
from .errors import EmptySieveSpace
from .ga_core import WORD, WORST_REMAINDER, Fitness, GaConfig
from .numtheory import FactorizationProblem, build_problem, gcd
from .simple_ga import RunReport, success_report

logger = logging.getLogger(__name__)

A_MIN, A_MAX = 6, 1000
D_VALUES = (1, 2)
DEFAULT_FORM = (6, 1)
TUNE_MIN_DIGITS = 19
TUNE_POPULATION = 25
TUNE_GENERATIONS = 3
TUNE_RUN = dict(population=3000, max_generations=200)


@dataclass(frozen=True)
class SieveForm:
    a: int
    d: int

    def __post_init__(self):
        if not A_MIN <= self.a <= A_MAX:
            raise ValueError(f"a must lie in [{A_MIN}, {A_MAX}], got {self.a}")
        if self.d not in D_VALUES:
            raise ValueError(f"d must be 1 or 2, got {self.d}")
        if gcd(self.a, self.d) != 1:
            raise ValueError(f"gcd({self.a}, {self.d}) != 1")

    def as_tuple(self) -> tuple[int, int]:
        return (self.a, self.d)


@dataclass(frozen=True)
class SieveSearchSpace:
    n_lower: int
    n_upper: int

    @property
    def size(self) -> int:
        return self.n_upper - self.n_lower + 1


def n_range(lower: int, upper: int, form: SieveForm) -> SieveSearchSpace:
    """Range of n whose candidates a*n +/- d can land in [lower, upper]."""
    a, d = form.a, form.d
    n_lower = max(-(-(lower - d) // a), 1)
    n_upper = (upper + d) // a
    if n_lower > n_upper:
        raise EmptySieveSpace(f"no n maps into [{lower}, {upper}] for form {a}n+/-{d}")
    return SieveSearchSpace(n_lower, n_upper)


def sieve_bounds(problem: FactorizationProblem, form: SieveForm) -> SieveSearchSpace:
    return n_range(problem.lower, problem.upper, form)


def candidate_set(lower: int, upper: int, form: SieveForm) -> set[int]:
    """Every a*n +/- d inside [lower, upper] reachable from the n-range."""
    space = n_range(lower, upper, form)
    out = set()
    for n in range(space.n_lower, space.n_upper + 1):
        for j in (form.a * n - form.d, form.a * n + form.d):
            if lower <= j <= upper:
                out.add(j)
    return out


def obl_complement(x: int, lower: int, upper: int) -> int:
    if not lower <= x <= upper:
        raise ValueError(f"{x} outside [{lower}, {upper}]")
    return upper + lower - x


def _signed_scores(problem: FactorizationProblem, form: SieveForm,
                   n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Best remainder over both signs, and the candidate j that achieved it.

    Candidates outside the factor interval score WORST_REMAINDER.
    """
    a, d = np.uint64(form.a), np.uint64(form.d)
    lo, hi = np.uint64(problem.search_lower), np.uint64(problem.upper)
    an = n * a
    best = np.full(n.size, WORST_REMAINDER, dtype=WORD)
    which = np.zeros(n.size, dtype=WORD)
    # Minus sign first so it wins ties.
    for j in (an - d, an + d):
        ok = (j >= lo) & (j <= hi) & (an >= d)
        r = np.full(n.size, WORST_REMAINDER, dtype=WORD)
        if ok.any():
            r[ok] = ga_core.remainders(problem.M, j[ok])
        better = r < best
        best[better] = r[better]
        which[better] = j[better]
    return best, which


def sieve_fitness(M: int, n: int, form: SieveForm,
                  problem: FactorizationProblem | None = None) -> tuple[Fitness, str]:
    """Fitness of n under the form, returned with the sign ('+' or '-') that produced it."""
    problem = problem or build_problem(M)
    scores, which = _signed_scores(problem, form, np.array([n], dtype=WORD))
    fit = ga_core.fitness_from_remainder(scores[0])
    sign = "+" if int(which[0]) == form.a * n + form.d else "-"
    return fit, sign


def run_sieve(problem: FactorizationProblem, form: SieveForm,
              cfg: GaConfig | None = None) -> RunReport:
    cfg = cfg or GaConfig.sieve_defaults()
    started = time.perf_counter()
    space = sieve_bounds(problem, form)
    rng = ga_core.make_rng(cfg.seed)
    lo, hi = space.n_lower, space.n_upper
    width = ga_core.bit_width(hi)
    population = min(cfg.population, space.size)
    mirror = np.uint64(lo + hi)

    pop = ga_core.sample_unique(lo, hi, population, rng)
    best = None
    for generation in range(cfg.max_generations + 1):
        # np.unique sorts, which also fixes a canonical order for selection.
        pool = np.unique(np.concatenate([pop, mirror - pop]))
        scores, js = _signed_scores(problem, form, pool)
        hits = np.flatnonzero(scores == 0)
        if hits.size:
            return success_report(problem.M, int(js[hits[0]]), generation, started,
                                  cfg.seed, form.as_tuple())
        low = int(scores.min())
        if low != WORST_REMAINDER:
            best = low if best is None else min(best, low)
        if generation == cfg.max_generations:
            break
        pop = ga_core.breed(pool, scores, population, width, lo, hi, cfg, rng)

    return RunReport(M=problem.M, success=False, factor=None, cofactor=None,
                     generations=cfg.max_generations,
                     elapsed=time.perf_counter() - started, seed=cfg.seed,
                     best_remainder=best, form=form.as_tuple())


# Hyperparameter search over (a, d).

_A_BITS = 10


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    text = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def _decode_form(word: int) -> tuple[int, int]:
    return A_MIN + (word >> 1), D_VALUES[word & 1]


def _encode_form(a: int, d: int) -> int:
    return ((a - A_MIN) << 1) | D_VALUES.index(d)


def _valid(word: int) -> bool:
    a, d = _decode_form(word)
    return a <= A_MAX and gcd(a, d) == 1


def _repair_forms(words: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    for i in range(words.size):
        while not _valid(int(words[i])):
            words[i] = rng.integers(0, 1 << (_A_BITS + 1))
    return words


def _form_rank(report: RunReport) -> tuple:
    # Lower is better: successes first (fewest generations), then smallest remainder.
    if report.success:
        return (0, report.generations, 0)
    rem = report.best_remainder if report.best_remainder is not None else int(WORST_REMAINDER)
    return (1, 0, rem)


def tune_sieve_form(M: int, seed: int) -> SieveForm:
    """Pick (a, d) with a 25-individual, 3-generation GA over short sieve runs.

    Numbers shorter than 19 digits get the classical 6n +/- 1 form.
    """
    problem = build_problem(M)
    if problem.digits < TUNE_MIN_DIGITS:
        return SieveForm(*DEFAULT_FORM)

    rng = ga_core.make_rng(seed)
    width = _A_BITS + 1
    cfg = GaConfig.sieve_defaults(population=TUNE_POPULATION, max_generations=TUNE_GENERATIONS)
    cache: dict[tuple[int, int], tuple] = {}

    def score(word: int) -> tuple:
        a, d = _decode_form(word)
        if (a, d) not in cache:
            form = SieveForm(a, d)
            run_cfg = GaConfig.sieve_defaults(seed=derive_seed(seed, M, a, d), **TUNE_RUN)
            try:
                report = run_sieve(problem, form, run_cfg)
                cache[(a, d)] = _form_rank(report)
            except EmptySieveSpace:
                cache[(a, d)] = (2, 0, 0)
            logger.debug("form %dn+/-%d -> %s", a, d, cache[(a, d)])
        return cache[(a, d)]

    pop = _repair_forms(ga_core.random_words(TUNE_POPULATION, width, rng), rng)
    best_word = None
    for generation in range(TUNE_GENERATIONS):
        ranks = [score(int(w)) for w in pop]
        for w, r in zip(pop, ranks):
            if best_word is None or r < score(best_word):
                best_word = int(w)
        if score(best_word)[0] == 0 and score(best_word)[1] == 0:
            break
        if generation == TUNE_GENERATIONS - 1:
            break
        order = {key: i for i, key in enumerate(sorted(set(ranks)))}
        keys = np.array([order[r] for r in ranks], dtype=np.int64)
        winners = pop[ga_core.tournament(keys, TUNE_POPULATION + 1, cfg.tournament_size, rng)]
        c1, c2 = ga_core.crossover(winners[0::2], winners[1::2], width, cfg.crossover_rate, rng)
        children = np.empty(2 * c1.size, dtype=WORD)
        children[0::2], children[1::2] = c1, c2
        children = ga_core.mutate_batch(children[:TUNE_POPULATION], width, cfg.mutation_rate, rng)
        pop = _repair_forms(children, rng)
    a, d = _decode_form(best_word)
    return SieveForm(a, d)
