"""Bit-string GA machinery shared by the Simple GA and the Sieve Method.

A population is a ``numpy.uint64`` array whose elements *are* the chromosomes:
bit ``i`` of the integer is locus ``i``. The batch operators below act on
whole populations at once; the single-chromosome functions wrap them so the
same code path is exercised either way.

Randomness always comes from a ``numpy.random.Generator`` backed by PCG64
(``numpy.random.default_rng(seed)``), one instance per run.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import WidthMismatch

WORD = np.uint64
WORST_REMAINDER = np.iinfo(np.uint64).max


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class GaConfig:
    population: int = 1500
    max_generations: int = 2000
    crossover_rate: float = 0.5
    mutation_rate: float = 1.0
    tournament_size: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if not 1 <= self.tournament_size <= self.population:
            raise ValueError("tournament_size must lie in [1, population]")
        if self.max_generations < 0:
            raise ValueError("max_generations must be nonnegative")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def simple_defaults(cls, **overrides) -> "GaConfig":
        return cls(**{"crossover_rate": 0.5, "mutation_rate": 1.0, **overrides})

    @classmethod
    def sieve_defaults(cls, **overrides) -> "GaConfig":
        return cls(**{"crossover_rate": 0.5, "mutation_rate": 0.95, **overrides})


@dataclass(frozen=True)
class Chromosome:
    bits: int
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= 64:
            raise ValueError(f"width must lie in [1, 64], got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"{self.bits} does not fit in {self.width} bits")

    @classmethod
    def encode(cls, value: int, width: int) -> "Chromosome":
        return cls(bits=value, width=width)

    def bitstring(self) -> str:
        return format(self.bits, f"0{self.width}b")


@functools.total_ordering
@dataclass(frozen=True)
class Fitness:
    """Exact form of the reciprocal-remainder fitness.

    An exact divisor (remainder 0) beats everything; otherwise a smaller
    remainder is fitter. ``remainder=None`` marks a candidate that was not
    scored at all (outside the interval) and loses to everything.
    """

    is_solution: bool
    remainder: int | None = field(default=None)

    @classmethod
    def worst(cls) -> "Fitness":
        return cls(False, None)

    def _key(self):
        if self.remainder is None:
            return (0, 0)
        return (1, -self.remainder)

    def __lt__(self, other: "Fitness") -> bool:
        return self._key() < other._key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fitness):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def value(self) -> float:
        """Reciprocal remainder as a float, with inf standing in for the divisor constant."""
        if self.remainder is None:
            return 0.0
        return float("inf") if self.is_solution else 1.0 / self.remainder


def fitness_of(M: int, candidate: int) -> Fitness:
    if candidate < 2:
        raise ValueError("candidate must be at least 2")
    r = M % candidate
    return Fitness(r == 0, r)


def fitness_from_remainder(r) -> Fitness:
    r = int(r)
    if r == WORST_REMAINDER:
        return Fitness.worst()
    return Fitness(r == 0, r)


def bit_width(upper: int) -> int:
    return max(1, int(upper).bit_length())


def remainders(M: int, candidates: np.ndarray) -> np.ndarray:
    """``M mod c`` for every candidate, as uint64. Candidates must be >= 1."""
    candidates = np.asarray(candidates, dtype=WORD)
    if candidates.size == 0:
        return candidates.copy()
    if M < 2**64:
        return np.uint64(M) % candidates
    # Horner over chunks of M so that r * 2**chunk stays inside 64 bits.
    top = int(candidates.max()).bit_length()
    chunk = 64 - top
    if chunk < 8:
        return np.array([M % int(c) for c in candidates], dtype=WORD)
    nchunks = -(-M.bit_length() // chunk)
    mask = (1 << chunk) - 1
    r = np.zeros_like(candidates)
    shift = np.uint64(chunk)
    for i in reversed(range(nchunks)):
        piece = np.uint64((M >> (i * chunk)) & mask)
        r = ((r << shift) + piece) % candidates
    return r


def repair(values: np.ndarray, lower: int, upper: int, rng: np.random.Generator) -> np.ndarray:
    """Resample every value outside [lower, upper] uniformly inside it (in place)."""
    out = (values < np.uint64(lower)) | (values > np.uint64(upper))
    count = int(np.count_nonzero(out))
    if count:
        values[out] = rng.integers(lower, upper, size=count, endpoint=True, dtype=WORD)
    return values


def tournament(scores: np.ndarray, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of ``n`` tournament winners; lower score wins, ties go to the first sampled."""
    picks = rng.integers(0, scores.size, size=(n, k))
    best = np.argmin(scores[picks], axis=1)
    return picks[np.arange(n), best]


def random_words(n: int, width: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, (1 << width) - 1, size=n, endpoint=True, dtype=WORD)


def crossover(a: np.ndarray, b: np.ndarray, width: int, rate: float,
              rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniform crossover of paired parents ``a[i]``, ``b[i]``."""
    if a.shape != b.shape:
        raise WidthMismatch("parent arrays differ in shape")
    cross = rng.random(a.size) < rate
    swap = random_words(a.size, width, rng)
    swap[~cross] = 0
    keep = ~swap
    return (a & keep) | (b & swap), (b & keep) | (a & swap)


def mutate_batch(values: np.ndarray, width: int, rate: float,
                 rng: np.random.Generator) -> np.ndarray:
    """Flip one uniformly chosen bit in each individual with probability ``rate``."""
    hit = rng.random(values.size) < rate
    locus = rng.integers(0, width, size=values.size).astype(WORD)
    flips = np.left_shift(np.uint64(1), locus)
    flips[~hit] = 0
    return values ^ flips


def breed(pool: np.ndarray, scores: np.ndarray, n: int, width: int, lower: int, upper: int,
          cfg: GaConfig, rng: np.random.Generator) -> np.ndarray:
    """Next generation of ``n`` chromosomes: select, cross, mutate, repair."""
    pairs = (n + 1) // 2
    winners = pool[tournament(scores, 2 * pairs, cfg.tournament_size, rng)]
    c1, c2 = crossover(winners[0::2], winners[1::2], width, cfg.crossover_rate, rng)
    children = np.empty(2 * pairs, dtype=WORD)
    children[0::2] = c1
    children[1::2] = c2
    children = mutate_batch(children[:n], width, cfg.mutation_rate, rng)
    return repair(children, lower, upper, rng)


def sample_unique(lower: int, upper: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` distinct integers drawn uniformly without replacement from [lower, upper]."""
    size = upper - lower + 1
    if n > size:
        raise ValueError(f"cannot draw {n} distinct values from {size}")
    if size <= 4 * n:
        offsets = rng.permutation(size)[:n].astype(WORD)
        return offsets + np.uint64(lower)
    chosen = np.empty(0, dtype=WORD)
    while chosen.size < n:
        draw = rng.integers(lower, upper, size=n - chosen.size, endpoint=True, dtype=WORD)
        merged = np.concatenate([chosen, draw])
        _, first = np.unique(merged, return_index=True)
        chosen = merged[np.sort(first)]
    return chosen


# Single-chromosome operators.

def decode_repair(c: Chromosome, lower: int, upper: int, rng: np.random.Generator) -> int:
    if lower >= upper:
        raise ValueError("empty interval")
    values = np.array([c.bits], dtype=WORD)
    return int(repair(values, lower, upper, rng)[0])


def tournament_select(pop: list[tuple[Chromosome, Fitness]], k: int,
                      rng: np.random.Generator) -> Chromosome:
    if not pop:
        raise ValueError("empty population")
    if k < 1:
        raise ValueError("tournament size must be positive")
    picks = rng.integers(0, len(pop), size=k)
    best = int(picks[0])
    for i in picks[1:]:
        if pop[int(i)][1] > pop[best][1]:
            best = int(i)
    return pop[best][0]


def uniform_crossover(a: Chromosome, b: Chromosome, rate: float,
                      rng: np.random.Generator) -> tuple[Chromosome, Chromosome]:
    if a.width != b.width:
        raise WidthMismatch(f"widths {a.width} and {b.width} differ")
    c1, c2 = crossover(np.array([a.bits], dtype=WORD), np.array([b.bits], dtype=WORD),
                       a.width, rate, rng)
    return Chromosome(int(c1[0]), a.width), Chromosome(int(c2[0]), a.width)


def mutate(c: Chromosome, rate: float, rng: np.random.Generator) -> Chromosome:
    out = mutate_batch(np.array([c.bits], dtype=WORD), c.width, rate, rng)
    return Chromosome(int(out[0]), c.width)
