"""Shared fixtures and independent brute-force oracles.

The oracles below use plain Python loops, tuple-keyed dicts, and Fraction
arithmetic; they never touch the library's kernels or rank helpers beyond the
documented radix rule, so they are genuinely independent checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from influence_lab import TabulatedFunction
from influence_lab.corpus import dictator, majority3, parity, threshold_line


def all_points(arities):
    return itertools.product(*(range(r) for r in arities))


def radix_rank(point, arities):
    idx = 0
    for x, r in zip(point, arities):
        idx = idx * r + x
    return idx


def as_dict(f: TabulatedFunction) -> dict[tuple[int, ...], float]:
    arities = f.domain.arities
    return {p: float(f.values[radix_rank(p, arities)]) for p in all_points(arities)}


def oracle_expectation(f: TabulatedFunction) -> Fraction:
    """Uniform-measure mean by full enumeration (exact: floats embed in Q)."""
    table = as_dict(f)
    return sum(Fraction(v) for v in table.values()) / len(table)


def oracle_influence(f: TabulatedFunction, i: int) -> Fraction:
    """Fraction of coordinate-i fibers on which f takes more than one value."""
    arities = f.domain.arities
    table = as_dict(f)
    others = [r for j, r in enumerate(arities) if j != i]
    hits = 0
    total = 0
    for rest in all_points(others):
        fiber = []
        for a in range(arities[i]):
            p = list(rest)
            p.insert(i, a)
            fiber.append(table[tuple(p)])
        total += 1
        if len(set(fiber)) > 1:
            hits += 1
    return Fraction(hits, total)


def oracle_variational(f: TabulatedFunction, i: int) -> Fraction:
    """Mean fiber variance under the uniform measure, exact via Fractions."""
    arities = f.domain.arities
    table = as_dict(f)
    others = [r for j, r in enumerate(arities) if j != i]
    acc = Fraction(0)
    total = 0
    for rest in all_points(others):
        fiber = []
        for a in range(arities[i]):
            p = list(rest)
            p.insert(i, a)
            fiber.append(Fraction(table[tuple(p)]))
        r = arities[i]
        mean = sum(fiber) / r
        acc += sum((v - mean) ** 2 for v in fiber) / r
        total += 1
    return acc / total


def oracle_disagreement(f: TabulatedFunction, g: TabulatedFunction) -> Fraction:
    tf, tg = as_dict(f), as_dict(g)
    return Fraction(sum(1 for p in tf if tf[p] != tg[p]), len(tf))


@pytest.fixture
def maj3():
    return majority3()


@pytest.fixture
def dict3():
    return dictator(3)


@pytest.fixture
def parity3():
    return parity(3)


@pytest.fixture
def line10():
    return threshold_line(10, 1)
