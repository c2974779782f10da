"""Job-shop instances: data model, text format and combinatorial size.

Instance file format (UTF-8 text, 0-indexed machines)::

    <n_jobs> <n_machines>
    <machine> <duration> <machine> <duration> ...   # one line per job

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

FIXTURE_NAMES = (
    "jssp-3x3-a",
    "jssp-3x3-b",
    "jssp-4x3",
    "jssp-5x2",
    "jssp-3x4",
    "jssp-4x4",
)

# Mixer variant used for each bundled instance in the reference experiments.
DEFAULT_MIXER = {
    "jssp-3x3-a": 1,
    "jssp-3x3-b": 1,
    "jssp-4x3": 4,
    "jssp-5x2": 2,
    "jssp-3x4": 3,
    "jssp-4x4": 2,
}


class InstanceError(ValueError):
    """Base class for instance parse and validation errors."""


class InstanceSyntaxError(InstanceError):
    """The text is not in the instance file format."""


class EmptyInstanceError(InstanceError):
    pass


class DuplicateMachineError(InstanceError):
    pass


class NonPositiveDurationError(InstanceError):
    pass


class OperationCountError(InstanceError):
    """A job does not list exactly one operation per machine."""


class MachineRangeError(InstanceError):
    pass


class Operation(NamedTuple):
    machine: int
    duration: int


@dataclass(frozen=True)
class JsspInstance:
    """An n-jobs x m-machines job shop where every job visits every machine once."""

    n_jobs: int
    n_machines: int
    ops: tuple[tuple[Operation, ...], ...]
    name: str = ""

    def __post_init__(self):
        _validate(self.n_jobs, self.n_machines, self.ops)

    @classmethod
    def from_lists(cls, jobs: Sequence[Sequence[tuple[int, int]]], name: str = "") -> "JsspInstance":
        """Build from ``[[(machine, duration), ...], ...]``."""
        if len(jobs) == 0:
            raise EmptyInstanceError("instance has no jobs")
        ops = tuple(tuple(Operation(int(mc), int(d)) for mc, d in job) for job in jobs)
        return cls(len(ops), len(ops[0]), ops, name)

    @property
    def n_operations(self) -> int:
        return self.n_jobs * self.n_machines

    @property
    def machines(self) -> np.ndarray:
        """``(n_jobs, n_machines)`` int64 array of machine indices."""
        return np.array([[op.machine for op in job] for job in self.ops], dtype=np.int64)

    @property
    def durations(self) -> np.ndarray:
        """``(n_jobs, n_machines)`` int64 array of processing times."""
        return np.array([[op.duration for op in job] for job in self.ops], dtype=np.int64)

    def horizon(self) -> int:
        """Sum of all durations, an upper bound on any semi-active makespan."""
        return sum(op.duration for job in self.ops for op in job)

    def machine_loads(self) -> list[int]:
        loads = [0] * self.n_machines
        for job in self.ops:
            for op in job:
                loads[op.machine] += op.duration
        return loads

    def job_lengths(self) -> list[int]:
        return [sum(op.duration for op in job) for job in self.ops]

    def lower_bound(self) -> int:
        """max(machine load, job length): no schedule can finish earlier."""
        return max(max(self.machine_loads()), max(self.job_lengths()))

    def multiplicities(self) -> list[int]:
        """Occurrences of each job in a Bierwirth vector."""
        return [len(job) for job in self.ops]

    def __iter__(self) -> Iterator[tuple[Operation, ...]]:
        return iter(self.ops)


def _validate(n_jobs, n_machines, ops):
    if n_jobs < 1 or len(ops) == 0:
        raise EmptyInstanceError("instance has no jobs")
    if n_machines < 1:
        raise EmptyInstanceError("instance has no machines")
    if len(ops) != n_jobs:
        raise OperationCountError(f"header declares {n_jobs} jobs, found {len(ops)}")
    for j, job in enumerate(ops):
        if len(job) != n_machines:
            raise OperationCountError(
                f"job {j} has {len(job)} operations, expected {n_machines}"
            )
        seen = set()
        for op in job:
            if not 0 <= op.machine < n_machines:
                raise MachineRangeError(f"job {j}: machine {op.machine} not in [0, {n_machines})")
            if op.machine in seen:
                raise DuplicateMachineError(f"job {j} visits machine {op.machine} twice")
            seen.add(op.machine)
            if op.duration < 1:
                raise NonPositiveDurationError(f"job {j}: duration {op.duration} must be >= 1")


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceSyntaxError(f"line {lineno}: expected an integer, got {token!r}") from None


def parse_instance(text: str, name: str = "") -> JsspInstance:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body.split()))
    if not lines:
        raise InstanceSyntaxError("empty instance file")

    lineno, header = lines[0]
    if len(header) != 2:
        raise InstanceSyntaxError(f"line {lineno}: header must be '<n_jobs> <n_machines>'")
    n_jobs, n_machines = (_int(t, lineno) for t in header)
    if n_jobs == 0:
        raise EmptyInstanceError("instance has no jobs")
    if n_jobs < 0 or n_machines < 1:
        raise InstanceSyntaxError(f"line {lineno}: invalid dimensions {n_jobs} x {n_machines}")

    jobs = []
    for lineno, tokens in lines[1:]:
        if len(tokens) % 2:
            raise InstanceSyntaxError(f"line {lineno}: odd number of tokens, expected machine/duration pairs")
        values = [_int(t, lineno) for t in tokens]
        jobs.append(tuple(Operation(values[i], values[i + 1]) for i in range(0, len(values), 2)))
    if len(jobs) != n_jobs:
        raise OperationCountError(f"header declares {n_jobs} jobs, found {len(jobs)}")
    return JsspInstance(n_jobs, n_machines, tuple(jobs), name)


def render_instance(inst: JsspInstance) -> str:
    out = [f"{inst.n_jobs} {inst.n_machines}"]
    for job in inst.ops:
        out.append(" ".join(f"{op.machine} {op.duration}" for op in job))
    return "\n".join(out) + "\n"


def load_instance(path: str | Path) -> JsspInstance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem)


def load_fixture(name: str) -> JsspInstance:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    text = resources.files("iqaoa_jssp").joinpath("fixtures", f"{name}.txt").read_text(encoding="utf-8")
    return parse_instance(text, name=name)


def resolve_instance(ref: str) -> JsspInstance:
    """Load a bundled fixture by name, otherwise read ``ref`` as a file path."""
    if ref in FIXTURE_NAMES:
        return load_fixture(ref)
    return load_instance(ref)


def total_vector_count(inst: JsspInstance) -> int:
    """Number of distinct Bierwirth vectors, (n*m)! / (m!)^n, exactly."""
    count = math.factorial(inst.n_operations)
    for k in inst.multiplicities():
        count //= math.factorial(k)
    return count
