"""Dense statevector simulation of the rank-phase QAOA circuit.

Qubit j is bit j of the basis index (weight 2**j), so the basis state |x>
encodes the raw rank value x. One layer is a phase layer imprinting
exp(-i*gamma*x) on |x>, followed by one of four mixers built from a CX
ladder and identical single-qubit rotations.

Operator products are applied rightmost factor first. The CX ladder is
CX(0,1), CX(1,2), ..., CX(q-2,q-1) in that order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import get_kernels

MIXERS = (1, 2, 3, 4)
DEFAULT_MAX_AMPLITUDES = 1 << 26
BUDGET_ENV = "IQAOA_MAX_AMPLITUDES"


class MemoryBudgetError(MemoryError):
    pass


def max_amplitudes() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_MAX_AMPLITUDES))


@dataclass(frozen=True)
class CircuitParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]
    mixer: int = 1

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise ValueError("need equally many gammas and betas, at least one layer")
        if self.mixer not in MIXERS:
            raise ValueError(f"unknown mixer variant {self.mixer!r}; expected one of {MIXERS}")

    @property
    def depth(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_genes(cls, genes: Sequence[float], mixer: int) -> "CircuitParams":
        """Genes are laid out as (gamma_1..gamma_D, beta_1..beta_D)."""
        depth = len(genes) // 2
        return cls(tuple(genes[:depth]), tuple(genes[depth:]), mixer)

    def genes(self) -> list[float]:
        return list(self.gammas) + list(self.betas)


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def init_uniform(q: int) -> np.ndarray:
    """Uniform superposition over 2**q basis states."""
    if q < 1:
        raise ValueError("need at least one qubit")
    size = 1 << q
    if size > max_amplitudes():
        raise MemoryBudgetError(
            f"{q} qubits need {size} amplitudes, budget is {max_amplitudes()} (set {BUDGET_ENV})"
        )
    return np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)


def apply_phase_layer(state: np.ndarray, gamma: float, backend: str | None = None) -> np.ndarray:
    """In place: |x> -> exp(-i*gamma*x)|x>, as one phase gate per qubit."""
    get_kernels(backend).phase_layer(state, float(gamma))
    return state


def apply_cx_chain(state: np.ndarray, backend: str | None = None) -> np.ndarray:
    get_kernels(backend).cx_chain(state)
    return state


def mixer_rotation(beta: float, variant: int) -> np.ndarray:
    """Single-qubit factor of a mixer; variant 3 is RY(beta) @ RX(beta)."""
    if variant in (1, 4):
        return ry(beta)
    if variant == 2:
        return rx(beta)
    if variant == 3:
        return ry(beta) @ rx(beta)
    raise ValueError(f"unknown mixer variant {variant!r}; expected one of {MIXERS}")


def apply_mixer_layer(state: np.ndarray, beta: float, variant: int, backend: str | None = None) -> np.ndarray:
    """In place. Variants 1-3: CX ladder, then rotations. Variant 4: rotations, then CX ladder."""
    k = get_kernels(backend)
    u = mixer_rotation(beta, variant)
    if variant == 4:
        k.apply_all_qubits(state, u)
        k.cx_chain(state)
    else:
        k.cx_chain(state)
        k.apply_all_qubits(state, u)
    return state


def run_circuit(q: int, params: CircuitParams, backend: str | None = None) -> np.ndarray:
    state = init_uniform(q)
    for gamma, beta in zip(params.gammas, params.betas):
        apply_phase_layer(state, gamma, backend)
        apply_mixer_layer(state, beta, params.mixer, backend)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    return state.real ** 2 + state.imag ** 2


def sample(state: np.ndarray, shots: int, seed=None) -> np.ndarray:
    """Draw ``shots`` basis indices from |amplitude|**2 by inverse CDF.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`
    (int, SeedSequence or Generator). Returns an int64 array of raw
    bitstring values; bit j of each value is qubit j.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(probabilities(state))
    u = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, state.size - 1).astype(np.int64)


def value_to_bits(value: int, q: int) -> list[int]:
    return [(int(value) >> j) & 1 for j in range(q)]


def dump_amplitudes(state: np.ndarray, path) -> None:
    """Write ``index,re,im`` rows; only for registers of at most 12 qubits."""
    if state.size > 1 << 12:
        raise ValueError("amplitude dumps are limited to 12 qubits")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index,re,im\n")
        for i, a in enumerate(state):
            fh.write(f"{i},{float(a.real)!r},{float(a.imag)!r}\n")
