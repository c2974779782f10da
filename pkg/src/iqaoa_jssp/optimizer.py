"""Sampling objective and genetic-algorithm search over circuit angles."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._backend import get_kernels
from .circuit import CircuitParams, run_circuit, sample
from .instance import JsspInstance, total_vector_count
from .oracle import MakespanDistribution, sample_distribution
from .rank import qubit_count, unrank
from .schedule import decode

# spawn keys separating the RNG substreams derived from one master seed
_GA_STREAM = 0x6A
_EVAL_STREAM = 0xE7
_FINAL_STREAM = 0xF1


@dataclass(frozen=True)
class ObjectiveValue:
    c: float
    mean_makespan: float
    min_makespan: int
    min_count: int
    m_term: int
    shots: int

    def as_dict(self) -> dict:
        return asdict(self)


def objective_from_makespans(makespans: Sequence[int], xi: float = 100000.0, theta: float = 1.0) -> ObjectiveValue:
    """C = xi * mean + theta * min * (p - #min) over ``p`` sampled makespans."""
    arr = np.asarray(makespans, dtype=np.int64)
    p = int(arr.size)
    if p == 0:
        raise ValueError("need at least one sampled makespan")
    total = int(arr.sum())
    best = int(arr.min())
    n_best = int(np.count_nonzero(arr == best))
    m_term = best * (p - n_best)
    c = xi * total / p + theta * m_term
    return ObjectiveValue(c, total / p, best, n_best, m_term, p)


class RankDecoder:
    """Map measured register values to makespans through rank -> vector -> schedule.

    Out-of-range register values wrap modulo the vector count. Only the
    distinct ranks of a batch are decoded.
    """

    def __init__(self, inst: JsspInstance, backend: str | None = None):
        self.inst = inst
        self.total = total_vector_count(inst)
        self.q = qubit_count(inst)
        self._kernels = get_kernels(backend)
        # compiled unranking works in int64
        self._fast = self.total * max(inst.multiplicities()) < 2**63

    def ranks(self, values: np.ndarray) -> np.ndarray:
        if self._fast:
            return np.asarray(values, dtype=np.int64) % self.total
        return np.array([int(v) % self.total for v in values], dtype=object)

    def makespans_of_ranks(self, ranks: np.ndarray) -> np.ndarray:
        uniq, inverse = np.unique(ranks, return_inverse=True)
        if self._fast:
            spans = self._kernels.makespans_of_ranks(
                self.inst.machines, self.inst.durations, uniq.astype(np.int64), self.total
            )
        else:
            spans = np.array([decode(self.inst, unrank(self.inst, int(r))).makespan for r in uniq])
        return spans[inverse.reshape(-1)]

    def makespans(self, values: np.ndarray) -> np.ndarray:
        return self.makespans_of_ranks(self.ranks(values))


@dataclass
class GaConfig:
    generations: int = 200
    population: int = 15
    tournament_size: int = 3
    mutation_probability: float = 0.70
    mutation_gene_fraction: float = 0.25
    # half-width of the additive uniform mutation step
    mutation_step: float = 1.0
    gene_low: float = -math.pi
    gene_high: float = math.pi
    shots: int = 1000
    xi: float = 100000.0
    theta: float = 1.0
    depth: int = 2
    mixer: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if not 0.0 <= self.mutation_probability <= 1.0:
            raise ValueError("mutation_probability must be in [0, 1]")
        if not 0.0 <= self.mutation_gene_fraction <= 1.0:
            raise ValueError("mutation_gene_fraction must be in [0, 1]")
        if not self.gene_low < self.gene_high:
            raise ValueError("gene bounds are empty")
        if self.depth < 1 or self.shots < 1 or self.generations < 0:
            raise ValueError("depth and shots must be >= 1, generations >= 0")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")

    @property
    def n_genes(self) -> int:
        return 2 * self.depth

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate_objective(
    inst: JsspInstance,
    params: CircuitParams,
    cfg: GaConfig,
    rng=None,
    decoder: RankDecoder | None = None,
    on_sample: Callable[[np.ndarray], None] | None = None,
    backend: str | None = None,
) -> ObjectiveValue:
    """Simulate, measure ``cfg.shots`` times and score the sampled makespans."""
    decoder = decoder or RankDecoder(inst, backend)
    state = run_circuit(decoder.q, params, backend)
    values = sample(state, cfg.shots, rng)
    if on_sample is not None:
        on_sample(values)
    return objective_from_makespans(decoder.makespans(values), cfg.xi, cfg.theta)


def sample_makespans(
    inst: JsspInstance,
    params: CircuitParams,
    shots: int,
    rng=None,
    decoder: RankDecoder | None = None,
    backend: str | None = None,
    on_sample: Callable[[np.ndarray], None] | None = None,
) -> MakespanDistribution:
    decoder = decoder or RankDecoder(inst, backend)
    values = sample(run_circuit(decoder.q, params, backend), shots, rng)
    if on_sample is not None:
        on_sample(values)
    return sample_distribution(decoder.makespans(values).tolist())


def amplification(initial: MakespanDistribution, final: MakespanDistribution) -> float:
    """P_final(optimum) / P_initial(optimum), the optimum taken from ``initial``."""
    opt = initial.minimum
    return final.probability(opt) / initial.probability(opt)


@dataclass
class GenerationRecord:
    generation: int
    genes: list[float]
    objective: ObjectiveValue


@dataclass
class OptimizationResult:
    best_params: CircuitParams
    best_objective: ObjectiveValue
    history: list[GenerationRecord]
    final_distribution: MakespanDistribution
    config: GaConfig
    evaluations: int
    unique_evaluations: int
    final_seed_key: tuple = field(default=())


def _seed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=key)


def _tournament(rng: np.random.Generator, fitness: np.ndarray, k: int) -> int:
    contenders = rng.choice(fitness.size, size=min(k, fitness.size), replace=False)
    return int(contenders[np.argmin(fitness[contenders])])


def run_ga(
    inst: JsspInstance,
    cfg: GaConfig,
    on_sample: Callable[[np.ndarray], None] | None = None,
    progress: Callable[[GenerationRecord], None] | None = None,
    backend: str | None = None,
) -> OptimizationResult:
    """Minimise the sampling objective over (gamma_1..gamma_D, beta_1..beta_D).

    Steady elitism: the best chromosome survives unchanged with its stored
    score, the other ``population - 1`` slots are filled by children of
    tournament-selected parents (single-point crossover, then additive
    uniform mutation of a fraction of genes with probability
    ``mutation_probability``). Every evaluation draws its shots from a
    substream keyed by (generation, slot), so results do not depend on
    evaluation order.
    """
    rng = np.random.default_rng(_seed(cfg.seed, _GA_STREAM))
    decoder = RankDecoder(inst, backend)
    n_genes = cfg.n_genes
    n_mutate = max(1, math.ceil(cfg.mutation_gene_fraction * n_genes)) if cfg.mutation_gene_fraction else 0
    seen: set[tuple[float, ...]] = set()
    evaluations = 0

    def score(genes: np.ndarray, generation: int, slot: int) -> ObjectiveValue:
        nonlocal evaluations
        evaluations += 1
        seen.add(tuple(genes.tolist()))
        params = CircuitParams.from_genes(genes.tolist(), cfg.mixer)
        stream = np.random.default_rng(_seed(cfg.seed, _EVAL_STREAM, generation, slot))
        return evaluate_objective(inst, params, cfg, stream, decoder, on_sample, backend)

    pop = rng.uniform(cfg.gene_low, cfg.gene_high, size=(cfg.population, n_genes))
    objs = [score(pop[i], 0, i) for i in range(cfg.population)]
    fitness = np.array([o.c for o in objs])

    history = []

    def record(generation: int):
        b = int(np.argmin(fitness))
        rec = GenerationRecord(generation, pop[b].tolist(), objs[b])
        history.append(rec)
        if progress is not None:
            progress(rec)

    record(0)
    for generation in range(1, cfg.generations + 1):
        elite = int(np.argmin(fitness))
        new_pop = np.empty_like(pop)
        new_objs = [objs[elite]]
        new_pop[0] = pop[elite]
        for slot in range(1, cfg.population):
            a = pop[_tournament(rng, fitness, cfg.tournament_size)]
            b = pop[_tournament(rng, fitness, cfg.tournament_size)]
            cut = int(rng.integers(1, n_genes)) if n_genes > 1 else 0
            child = np.concatenate([a[:cut], b[cut:]])
            if n_mutate and rng.random() < cfg.mutation_probability:
                idx = rng.choice(n_genes, size=n_mutate, replace=False)
                child[idx] += rng.uniform(-cfg.mutation_step, cfg.mutation_step, size=n_mutate)
                np.clip(child, cfg.gene_low, cfg.gene_high, out=child)
            new_pop[slot] = child
            new_objs.append(score(child, generation, slot))
        pop, objs = new_pop, new_objs
        fitness = np.array([o.c for o in objs])
        record(generation)

    best = history[-1]
    best_params = CircuitParams.from_genes(best.genes, cfg.mixer)
    final_key = (_FINAL_STREAM,)
    final = sample_makespans(
        inst, best_params, cfg.shots, np.random.default_rng(_seed(cfg.seed, *final_key)), decoder, backend, on_sample
    )
    return OptimizationResult(
        best_params=best_params,
        best_objective=best.objective,
        history=history,
        final_distribution=final,
        config=cfg,
        evaluations=evaluations,
        unique_evaluations=len(seen),
        final_seed_key=final_key,
    )
