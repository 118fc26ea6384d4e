"""Genetic-algorithm factorization of balanced semiprimes."""

from .errors import (
    CapacityExceeded,
    EmptySearchSpace,
    EmptySieveSpace,
    GaFactorError,
    IntervalTooSmall,
    ParseError,
    PrimeInput,
    VerificationError,
    WidthMismatch,
)
from .ga_core import Chromosome, Fitness, GaConfig, fitness_of
from .numtheory import (
    FactorizationProblem,
    SemiprimeRecord,
    build_problem,
    factor_digit_length,
    generate_semiprime,
    is_prime,
    isqrt,
    sss,
)
from .sieve import SieveForm, run_sieve, sieve_bounds, tune_sieve_form
from .simple_ga import RunReport, run_simple_ga

__version__ = "0.1.0"
