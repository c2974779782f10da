"""Pure-Python/numpy versions of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as a
reference for it in the test-suite.

Statevector conventions: index ``x`` has bit ``j`` equal to qubit ``j``
(little-endian), gates act in place and return the same array.
"""

from __future__ import annotations

import math

import numpy as np


def _next_perm(a: list[int]) -> int:
    """Advance ``a`` to the next multiset permutation; return first changed index or -1."""
    i = len(a) - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return -1
    k = len(a) - 1
    while a[k] <= a[i]:
        k -= 1
    a[i], a[k] = a[k], a[i]
    a[i + 1:] = reversed(a[i + 1:])
    return i


def enumerate_histogram(machines, durations, start, count: int, horizon: int) -> np.ndarray:
    """Histogram of makespans over ``count`` consecutive vectors from ``start``.

    Iterates in lexicographic order, re-decoding only the suffix that changed.
    Stops early after the last permutation.
    """
    mc = [list(map(int, row)) for row in machines]
    du = [list(map(int, row)) for row in durations]
    a = [int(x) for x in start]
    n, m, length = len(mc), len(mc[0]), len(a)
    hist = [0] * (horizon + 1)
    # states[d] = (next_op, job_ready, mach_ready, cmax) before position d
    states: list = [None] * (length + 1)
    states[0] = ([0] * n, [0] * n, [0] * m, 0)
    first = 0
    done = 0
    while count > 0:
        nxt, jr, mr, cm = states[first]
        nxt, jr, mr = nxt[:], jr[:], mr[:]
        for d in range(first, length):
            j = a[d]
            k = nxt[j]
            machine = mc[j][k]
            s = jr[j] if jr[j] > mr[machine] else mr[machine]
            e = s + du[j][k]
            jr[j] = mr[machine] = e
            nxt[j] = k + 1
            if e > cm:
                cm = e
            states[d + 1] = (nxt[:], jr[:], mr[:], cm)
        hist[cm] += 1
        done += 1
        if done >= count:
            break
        first = _next_perm(a)
        if first < 0:
            break
    return np.array(hist, dtype=np.int64)


def makespans_of_ranks(machines, durations, ranks, total: int) -> np.ndarray:
    """Unrank each rank and decode it; returns the makespans."""
    mc = [list(map(int, row)) for row in machines]
    du = [list(map(int, row)) for row in durations]
    n, m = len(mc), len(mc[0])
    length = n * m
    out = np.empty(len(ranks), dtype=np.int64)
    for idx, r in enumerate(ranks):
        r = int(r)
        cnt = [m] * n
        nxt = [0] * n
        jr = [0] * n
        mr = [0] * m
        block_total = int(total)
        for i in range(length):
            rem = length - i
            for j in range(n):
                if cnt[j] == 0:
                    continue
                block = block_total * cnt[j] // rem
                if r < block:
                    break
                r -= block
            block_total = block
            cnt[j] -= 1
            k = nxt[j]
            machine = mc[j][k]
            s = jr[j] if jr[j] > mr[machine] else mr[machine]
            jr[j] = mr[machine] = s + du[j][k]
            nxt[j] = k + 1
        out[idx] = max(jr)
    return out


def phase_layer(state: np.ndarray, gamma: float) -> np.ndarray:
    """Multiply the |1> half of qubit j by exp(-i*gamma*2**j), for every j."""
    q = state.size.bit_length() - 1
    for j in range(q):
        ang = math.fmod(gamma * (1 << j), 2 * math.pi)
        view = state.reshape(-1, 2, 1 << j)
        view[:, 1, :] *= complex(math.cos(ang), -math.sin(ang))
    return state


def cx_chain(state: np.ndarray) -> np.ndarray:
    """CX(control j, target j+1) for j = 0, 1, ..., q-2, in that order."""
    q = state.size.bit_length() - 1
    for j in range(q - 1):
        # axes: (high bits, target bit j+1, control bit j, low bits)
        view = state.reshape(-1, 2, 2, 1 << j)
        tmp = view[:, 0, 1, :].copy()
        view[:, 0, 1, :] = view[:, 1, 1, :]
        view[:, 1, 1, :] = tmp
    return state


def apply_all_qubits(state: np.ndarray, u) -> np.ndarray:
    """Apply the same 2x2 unitary ``u`` to every qubit."""
    u = np.asarray(u, dtype=complex)
    q = state.size.bit_length() - 1
    for j in range(q):
        view = state.reshape(-1, 2, 1 << j)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
        view[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1
    return state
