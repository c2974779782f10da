"""Bierwirth vector decoding, disjunctive graphs and schedule validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Sequence

from .instance import JsspInstance

SOURCE = "source"
SINK = "sink"


class InvalidVectorError(ValueError):
    """The vector's job multiplicities do not match the instance."""


class CyclicGraphError(RuntimeError):
    pass


@dataclass
class Schedule:
    """A semi-active schedule.

    ``start[j][k]`` is the start of job j's k-th operation and
    ``machine_order[mc]`` lists ``(job, op)`` pairs in processing order.
    """

    start: list[list[int]]
    makespan: int
    machine_order: list[list[tuple[int, int]]]

    def operations(self, inst: JsspInstance):
        """Yield ``(job, op, machine, start, end)`` rows."""
        for j, job in enumerate(inst.ops):
            for k, op in enumerate(job):
                s = self.start[j][k]
                yield j, k, op.machine, s, s + op.duration

    def to_json(self, inst: JsspInstance) -> str:
        rows = [
            {"job": j, "op": k, "machine": mc, "start": s, "end": e}
            for j, k, mc, s, e in self.operations(inst)
        ]
        return json.dumps({"makespan": self.makespan, "operations": rows}, indent=2)


def check_vector(inst: JsspInstance, v: Sequence[int]) -> None:
    counts = [0] * inst.n_jobs
    for j in v:
        if not 0 <= j < inst.n_jobs:
            raise InvalidVectorError(f"job index {j} out of range [0, {inst.n_jobs})")
        counts[j] += 1
    if counts != inst.multiplicities():
        raise InvalidVectorError(
            f"job multiplicities {counts} do not match instance {inst.multiplicities()}"
        )


def decode(inst: JsspInstance, v: Sequence[int]) -> Schedule:
    """List-schedule ``v`` left to right into a semi-active schedule.

    The k-th occurrence of job j is operation (j, k); it starts when both its
    job predecessor and the last operation already placed on its machine have
    finished. No gap filling is attempted.
    """
    check_vector(inst, v)
    n, m = inst.n_jobs, inst.n_machines
    next_op = [0] * n
    job_ready = [0] * n
    mach_ready = [0] * m
    start = [[0] * len(job) for job in inst.ops]
    order: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for j in v:
        k = next_op[j]
        mc, d = inst.ops[j][k]
        s = job_ready[j] if job_ready[j] > mach_ready[mc] else mach_ready[mc]
        start[j][k] = s
        job_ready[j] = mach_ready[mc] = s + d
        order[mc].append((j, k))
        next_op[j] = k + 1
    return Schedule(start, max(job_ready), order)


def makespan(inst: JsspInstance, v: Sequence[int]) -> int:
    return decode(inst, v).makespan


@dataclass
class OrientedDisjunctiveGraph:
    """Operations ``(job, op)`` plus source and sink nodes.

    ``arcs`` maps each node to ``{successor: weight}`` where the weight is the
    processing time of the tail operation (0 out of the source).
    """

    nodes: list[Hashable]
    arcs: dict[Hashable, dict[Hashable, int]] = field(default_factory=dict)

    def add_arc(self, u, v, w: int) -> None:
        self.arcs.setdefault(u, {})[v] = w

    def predecessors(self) -> dict[Hashable, set]:
        preds: dict[Hashable, set] = {u: set() for u in self.nodes}
        for u, succ in self.arcs.items():
            for v in succ:
                preds[v].add(u)
        return preds

    def n_disjunctive_arcs(self) -> int:
        # conjunctive: source->first, within-job chain, last->sink
        total = sum(len(s) for s in self.arcs.values())
        conj = sum(1 for u, s in self.arcs.items() for v in s if _conjunctive(u, v))
        return total - conj


def _conjunctive(u, v) -> bool:
    if u == SOURCE or v == SINK:
        return True
    return u[0] == v[0] and v[1] == u[1] + 1


def graph_from_machine_orders(
    inst: JsspInstance, machine_order: Sequence[Sequence[tuple[int, int]]]
) -> OrientedDisjunctiveGraph:
    """Orient every machine's disjunctions along ``machine_order``."""
    nodes: list[Hashable] = [SOURCE]
    nodes += [(j, k) for j, job in enumerate(inst.ops) for k in range(len(job))]
    nodes.append(SINK)
    g = OrientedDisjunctiveGraph(nodes)
    for j, job in enumerate(inst.ops):
        g.add_arc(SOURCE, (j, 0), 0)
        for k in range(len(job) - 1):
            g.add_arc((j, k), (j, k + 1), job[k].duration)
        g.add_arc((j, len(job) - 1), SINK, job[-1].duration)
    # consecutive pairs suffice; the transitive arcs never lengthen a path
    for seq in machine_order:
        for a, b in zip(seq, seq[1:]):
            g.add_arc(a, b, inst.ops[a[0]][a[1]].duration)
    return g


def build_graph(inst: JsspInstance, v: Sequence[int]) -> OrientedDisjunctiveGraph:
    check_vector(inst, v)
    seen = [0] * inst.n_jobs
    order: list[list[tuple[int, int]]] = [[] for _ in range(inst.n_machines)]
    for j in v:
        k = seen[j]
        order[inst.ops[j][k].machine].append((j, k))
        seen[j] += 1
    g = graph_from_machine_orders(inst, order)
    longest_path_times(g)  # asserts acyclicity
    return g


def longest_path_times(g: OrientedDisjunctiveGraph) -> dict[Hashable, int]:
    """Earliest start of every node by DP over a topological order."""
    try:
        topo = list(TopologicalSorter(g.predecessors()).static_order())
    except CycleError as exc:
        raise CyclicGraphError(f"disjunctive graph has a cycle: {exc.args[1]}") from None
    est = {u: 0 for u in g.nodes}
    for u in topo:
        for v, w in g.arcs.get(u, {}).items():
            if est[u] + w > est[v]:
                est[v] = est[u] + w
    return est


def longest_path_makespan(g: OrientedDisjunctiveGraph) -> int:
    return longest_path_times(g)[SINK]


def validate_schedule(inst: JsspInstance, sched: Schedule) -> list[str]:
    """Return a list of violated schedule properties (empty when valid).

    Checks job precedence, machine exclusivity, semi-activity and the
    makespan, working only from start times and machine orders.
    """
    problems = []
    seen = set()
    for mc, seq in enumerate(sched.machine_order):
        for j, k in seq:
            if inst.ops[j][k].machine != mc:
                problems.append(f"operation ({j},{k}) listed on machine {mc}")
            seen.add((j, k))
    if len(seen) != inst.n_operations:
        problems.append("machine orders do not cover every operation exactly once")

    end = lambda j, k: sched.start[j][k] + inst.ops[j][k].duration  # noqa: E731
    for j, job in enumerate(inst.ops):
        if sched.start[j][0] < 0:
            problems.append(f"job {j} starts before time 0")
        for k in range(1, len(job)):
            if sched.start[j][k] < end(j, k - 1):
                problems.append(f"job precedence violated at ({j},{k})")

    mach_pred: dict[tuple[int, int], tuple[int, int]] = {}
    for mc, seq in enumerate(sched.machine_order):
        for a, b in zip(seq, seq[1:]):
            mach_pred[b] = a
            if sched.start[b[0]][b[1]] < end(*a):
                problems.append(f"machine {mc}: {a} and {b} overlap")

    for j, job in enumerate(inst.ops):
        for k in range(len(job)):
            earliest = end(j, k - 1) if k else 0
            if (j, k) in mach_pred:
                earliest = max(earliest, end(*mach_pred[(j, k)]))
            if sched.start[j][k] != earliest:
                problems.append(f"({j},{k}) starts at {sched.start[j][k]}, not left-shifted to {earliest}")

    expected = max(end(j, k) for j, job in enumerate(inst.ops) for k in range(len(job)))
    if sched.makespan != expected:
        problems.append(f"makespan {sched.makespan} != latest completion {expected}")
    return problems
