"""Exact makespan distributions by exhaustive enumeration of Bierwirth vectors."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ._backend import get_kernels
from .instance import JsspInstance, total_vector_count
from .rank import unrank

DEFAULT_BUDGET = 10**8


class EnumerationBudgetError(RuntimeError):
    def __init__(self, total: int, budget: int):
        super().__init__(f"instance has {total} vectors, enumeration budget is {budget}")
        self.total = total
        self.budget = budget


@dataclass
class MakespanDistribution:
    """Exact counts per makespan."""

    counts: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.counts = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}

    @classmethod
    def from_histogram(cls, hist: np.ndarray) -> "MakespanDistribution":
        nz = np.nonzero(hist)[0]
        return cls({int(t): int(hist[t]) for t in nz})

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def minimum(self) -> int:
        return min(self.counts)

    def probability(self, makespan: int) -> float:
        return self.counts.get(makespan, 0) / self.total

    def probabilities(self) -> dict[int, float]:
        total = self.total
        return {t: c / total for t, c in self.counts.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["makespan", "count", "probability"])
        total = self.total
        for t, c in self.counts.items():
            w.writerow([t, c, f"{c / total:.10f}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MakespanDistribution":
        rows = csv.DictReader(io.StringIO(text))
        return cls({int(r["makespan"]): int(r["count"]) for r in rows})

    def summary(self) -> dict:
        return {
            "total": self.total,
            "optimum": self.minimum,
            "optimum_probability": optimum_probability(self),
            "lower_quartile": lower_quartile(self),
            "distinct_makespans": len(self.counts),
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def _chunk(args) -> np.ndarray:
    machines, durations, start, count, horizon, backend = args
    return get_kernels(backend).enumerate_histogram(machines, durations, start, count, horizon)


def enumerate_distribution(
    inst: JsspInstance,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    chunks: int | None = None,
    backend: str | None = None,
) -> MakespanDistribution:
    """Decode every Bierwirth vector once and count makespans.

    The rank range is split into ``chunks`` contiguous pieces (default: one
    per worker); each piece starts from its unranked first vector and walks
    forward lexicographically. Piece histograms are summed, so the result
    does not depend on ``workers`` or ``chunks``.
    """
    total = total_vector_count(inst)
    if total > budget:
        raise EnumerationBudgetError(total, budget)
    chunks = max(1, chunks or workers)
    chunks = min(chunks, total)
    bounds = [total * c // chunks for c in range(chunks + 1)]
    horizon = inst.horizon()
    tasks = [
        (inst.machines, inst.durations, unrank(inst, lo), hi - lo, horizon, backend)
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, tasks))
    else:
        parts = [_chunk(t) for t in tasks]
    hist = np.sum(parts, axis=0)
    return MakespanDistribution.from_histogram(hist)


def makespan_table(inst: JsspInstance, backend: str | None = None) -> np.ndarray:
    """Makespan of every rank, ``table[r]``; only sensible for small instances."""
    total = total_vector_count(inst)
    return get_kernels(backend).makespans_of_ranks(
        inst.machines, inst.durations, np.arange(total, dtype=np.int64), total
    )


def optimum_probability(dist: MakespanDistribution) -> float:
    return dist.counts[dist.minimum] / dist.total


def lower_quartile(dist: MakespanDistribution) -> int:
    """Smallest makespan t with P(makespan <= t) >= 1/4 (exact arithmetic)."""
    total = dist.total
    running = 0
    for t, c in dist.counts.items():
        running += c
        if Fraction(running, total) >= Fraction(1, 4):
            return t
    raise ValueError("empty distribution")


def sample_distribution(shots: Iterable[int] | Mapping[int, int]) -> MakespanDistribution:
    """Empirical distribution of sampled makespans.

    Accepts a sequence of makespans or a ``{makespan: count}`` mapping.
    """
    counts = Counter(shots) if not isinstance(shots, Mapping) else Counter(dict(shots))
    if sum(counts.values()) == 0:
        raise ValueError("need at least one shot")
    return MakespanDistribution(dict(counts))
