import csv
import math
from collections import Counter

import numpy as np
import pytest

from conftest import sieve_oracle, trial_division_is_prime
from gafactor.digits import (
    convergence_report,
    digit_table,
    digit_tables,
    prime_segments,
    primes_below,
    tally_digits,
    write_convergence_csv,
)


def prime_pi(n: int) -> int:
    """Prime counting by the Lucy_Hedgehog recursion, independent of any sieve."""
    r = math.isqrt(n)
    values = [n // i for i in range(1, r + 1)]
    values += list(range(values[-1] - 1, 0, -1))
    s = {v: v - 1 for v in values}
    for p in range(2, r + 1):
        if s[p] > s[p - 1]:
            sp, p2 = s[p - 1], p * p
            for v in values:
                if v < p2:
                    break
                s[v] -= s[v // p] - sp
    return s[n]


def naive_counts(n: int) -> Counter:
    counts = Counter()
    for p in range(2, 10**n):
        if trial_division_is_prime(p):
            counts.update(str(p))
    return counts


def test_primes_below_small():
    assert list(primes_below(10)) == [2, 3, 5, 7]
    assert len(list(primes_below(100))) == sum(trial_division_is_prime(n) for n in range(100))
    assert list(primes_below(3)) == [2]
    with pytest.raises(ValueError):
        list(primes_below(1))


@pytest.mark.parametrize("limit, segment", [(10**5, 1000), (10**5 + 3, 17), (1000, 7), (30, 1)])
def test_segmented_matches_oracle(limit, segment):
    got = np.concatenate(list(prime_segments(limit, segment=segment))).tolist()
    flags = sieve_oracle(limit)
    assert got == [n for n in range(limit) if flags[n]]


def test_stream_is_ascending_and_unique():
    got = np.concatenate(list(prime_segments(10**6, segment=4096)))
    assert np.all(np.diff(got) > 0)


def test_prime_count_below_1e8():
    total = sum(chunk.size for chunk in prime_segments(10**8))
    assert total == prime_pi(10**8) == 5_761_455


@pytest.mark.extended
def test_prime_count_below_1e9():
    total = sum(chunk.size for chunk in prime_segments(10**9))
    assert total == prime_pi(10**9) == 50_847_534


def test_tally_digits():
    assert tally_digits(np.array([101, 7, 10], dtype=np.int64)).tolist() == [2, 3, 0, 0, 0, 0, 0, 1, 0, 0]


def test_digit_table_one():
    t = digit_table(1)
    assert t.counts == (0, 0, 1, 1, 0, 1, 0, 1, 0, 0)
    assert t.probabilities == (0, 0, 0.25, 0.25, 0, 0.25, 0, 0.25, 0, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_digit_table_matches_string_count(n):
    expected = naive_counts(n)
    assert digit_table(n).counts == tuple(expected[str(d)] for d in range(10))


def test_probabilities_normalized():
    for t in digit_tables(6):
        assert abs(sum(t.probabilities) - 1) < 1e-12


def test_final_digits_of_primes_above_ten():
    finals = Counter()
    for chunk in prime_segments(10**6):
        finals.update((chunk[chunk > 10] % 10).tolist())
    assert set(finals) == {1, 3, 7, 9}


def test_digit_table_range():
    with pytest.raises(ValueError):
        digit_table(0)
    with pytest.raises(ValueError):
        digit_table(10)


def test_convergence_rows():
    rows = convergence_report(2)
    assert len(rows) == 20
    for n in (1, 2):
        assert abs(sum(p for m, _, p, _ in rows if m == n) - 1) < 1e-12
    assert all(dev == pytest.approx(abs(p - 0.1)) for _, _, p, dev in rows)


def test_deviation_shrinks_from_n4():
    rows = convergence_report(8)
    dev = {(n, d): v for n, d, _, v in rows}
    for d in range(10):
        series = [dev[(n, d)] for n in range(4, 9)]
        assert all(b <= a for a, b in zip(series, series[1:])), (d, series)


def test_convergence_csv(tmp_path):
    path = tmp_path / "digits.csv"
    write_convergence_csv(convergence_report(2), path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "n,digit,probability,deviation"
    assert len(lines) == 21
    assert lines[3] == "1,2,0.2500000000,0.1500000000"
    rows = list(csv.DictReader(lines))
    assert all(len(r["probability"].split(".")[1]) == 10 for r in rows)
