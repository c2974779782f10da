import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from iqaoa_jssp.circuit import (
    CircuitParams,
    MemoryBudgetError,
    apply_cx_chain,
    apply_mixer_layer,
    apply_phase_layer,
    dump_amplitudes,
    init_uniform,
    probabilities,
    run_circuit,
    rx,
    ry,
    sample,
    value_to_bits,
)

# ---- dense-matrix oracle, built gate by gate with np.kron (qubit j = bit j) ----


def one_qubit_op(u, j, q):
    return np.kron(np.kron(np.eye(2 ** (q - j - 1)), u), np.eye(2**j))


def cx_op(control, target, q):
    dim = 2**q
    m = np.zeros((dim, dim))
    for x in range(dim):
        y = x ^ (1 << target) if (x >> control) & 1 else x
        m[y, x] = 1
    return m


def oracle_mixer(beta, variant, q):
    ladder = np.eye(2**q)
    for j in range(q - 1):
        ladder = cx_op(j, j + 1, q) @ ladder
    rot = {1: ry(beta), 2: rx(beta), 3: ry(beta) @ rx(beta), 4: ry(beta)}[variant]
    layer = np.eye(2**q, dtype=complex)
    for j in range(q):
        layer = one_qubit_op(rot, j, q) @ layer
    return ladder @ layer if variant == 4 else layer @ ladder


def random_state(rng, q):
    s = rng.normal(size=2**q) + 1j * rng.normal(size=2**q)
    return s / np.linalg.norm(s)


def test_init_uniform():
    np.testing.assert_allclose(init_uniform(1), [1 / math.sqrt(2)] * 2)
    np.testing.assert_allclose(init_uniform(2), [0.5] * 4)
    np.testing.assert_allclose(probabilities(init_uniform(11)), np.full(2048, 1 / 2048))


def test_memory_budget(monkeypatch):
    monkeypatch.setenv("IQAOA_MAX_AMPLITUDES", "1024")
    init_uniform(10)
    with pytest.raises(MemoryBudgetError):
        init_uniform(11)


@pytest.mark.parametrize("q", range(1, 9))
def test_phase_layer_matches_diagonal(backend, q):
    rng = np.random.default_rng(q)
    for gamma in rng.uniform(-2 * np.pi, 2 * np.pi, 50):
        s = random_state(rng, q)
        expected = np.exp(-1j * gamma * np.arange(2**q)) * s
        got = apply_phase_layer(s.copy(), gamma, backend)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-10)
        np.testing.assert_allclose(np.abs(got), np.abs(s), rtol=0, atol=1e-12)


def test_phase_layer_trivial_angles(backend):
    s = random_state(np.random.default_rng(0), 6)
    assert np.array_equal(apply_phase_layer(s.copy(), 0.0, backend), s)
    np.testing.assert_allclose(apply_phase_layer(s.copy(), 2 * np.pi, backend), s, atol=1e-10)


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_mixer_matches_dense_oracle(backend, variant, q):
    rng = np.random.default_rng(10 * q + variant)
    for beta in rng.uniform(-2 * np.pi, 2 * np.pi, 100):
        s = random_state(rng, q)
        expected = oracle_mixer(beta, variant, q) @ s
        got = apply_mixer_layer(s.copy(), beta, variant, backend)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-10)


def test_mixer_zero_angle_is_cx_ladder(backend):
    s = random_state(np.random.default_rng(3), 5)
    np.testing.assert_allclose(
        apply_mixer_layer(s.copy(), 0.0, 1, backend), apply_cx_chain(s.copy(), backend), atol=1e-15
    )
    zero = np.zeros(4, dtype=complex)
    zero[0] = 1
    for variant in (1, 2, 3, 4):
        np.testing.assert_allclose(apply_mixer_layer(zero.copy(), 0.0, variant, backend), zero, atol=1e-15)


def test_unknown_mixer():
    with pytest.raises(ValueError):
        apply_mixer_layer(init_uniform(2), 0.1, 5)
    with pytest.raises(ValueError):
        CircuitParams((0.1,), (0.2,), mixer=0)


def test_gate_algebra():
    for beta in np.linspace(-3, 3, 7):
        np.testing.assert_allclose(ry(beta) @ ry(-beta), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(rx(np.pi) @ [1, 0], [0, -1j], atol=1e-12)
    cx = cx_op(0, 1, 2)
    np.testing.assert_allclose(cx @ cx, np.eye(4), atol=1e-12)


def test_cx_ladder_is_prefix_xor(backend):
    q = 6
    for x in range(2**q):
        s = np.zeros(2**q, dtype=complex)
        s[x] = 1
        y = x
        for j in range(q - 1):
            y ^= ((y >> j) & 1) << (j + 1)
        assert np.argmax(np.abs(apply_cx_chain(s, backend))) == y


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_run_circuit_norm(backend, variant):
    rng = np.random.default_rng(variant)
    for q in (3, 11, 17):
        g = rng.uniform(-np.pi, np.pi, 2)
        b = rng.uniform(-np.pi, np.pi, 2)
        s = run_circuit(q, CircuitParams(g, b, variant), backend)
        assert abs(np.vdot(s, s).real - 1) < 1e-9


def test_norm_per_layer(backend):
    rng = np.random.default_rng(7)
    s = init_uniform(12)
    for _ in range(4):
        apply_phase_layer(s, rng.uniform(-3, 3), backend)
        assert abs(np.vdot(s, s).real - 1) < 1e-10
        apply_mixer_layer(s, rng.uniform(-3, 3), 3, backend)
        assert abs(np.vdot(s, s).real - 1) < 1e-10


def test_zero_angles_keep_uniform(backend):
    s = run_circuit(9, CircuitParams((0.0,), (0.0,), 1), backend)
    np.testing.assert_allclose(probabilities(s), np.full(512, 1 / 512), atol=1e-15)


def test_run_circuit_deterministic(backend):
    p = CircuitParams((0.3, -1.2), (2.0, 0.7), 2)
    assert np.array_equal(run_circuit(11, p, backend), run_circuit(11, p, backend))


def test_backends_agree():
    from iqaoa_jssp._backend import available_backends

    if len(available_backends()) < 2:
        pytest.skip("compiled kernels not built")
    p = CircuitParams((0.3, -1.2), (2.0, 0.7), 3)
    np.testing.assert_allclose(run_circuit(13, p, "cython"), run_circuit(13, p, "python"), atol=1e-12)


def test_sample_basis_state():
    s = np.zeros(32, dtype=complex)
    s[19] = 1
    assert set(sample(s, 500, seed=1)) == {19}


def test_sample_reproducible():
    s = run_circuit(8, CircuitParams((0.5,), (1.1,), 1))
    assert np.array_equal(sample(s, 1000, seed=42), sample(s, 1000, seed=42))
    assert not np.array_equal(sample(s, 1000, seed=42), sample(s, 1000, seed=43))


def test_uniform_sampling_chi_square():
    shots = sample(init_uniform(11), 100000, seed=2024)
    counts = np.bincount(shots, minlength=2048)
    assert stats.chisquare(counts).pvalue > 0.001


def test_sample_rejects_zero_shots():
    with pytest.raises(ValueError):
        sample(init_uniform(2), 0)


def test_value_to_bits():
    assert value_to_bits(8, 11) == [0, 0, 0, 1] + [0] * 7


def test_params_genes_roundtrip():
    p = CircuitParams.from_genes([0.1, 0.2, 0.3, 0.4], 4)
    assert p.gammas == (0.1, 0.2) and p.betas == (0.3, 0.4) and p.depth == 2
    assert p.genes() == [0.1, 0.2, 0.3, 0.4]
    with pytest.raises(ValueError):
        CircuitParams((0.1, 0.2), (0.3,), 1)


def test_dump_amplitudes(tmp_path):
    s = run_circuit(3, CircuitParams((0.5,), (1.1,), 1))
    dump_amplitudes(s, tmp_path / "a.csv")
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "index,re,im" and len(lines) == 9
    assert complex(float(lines[3].split(",")[1]), float(lines[3].split(",")[2])) == s[2]
    with pytest.raises(ValueError):
        dump_amplitudes(init_uniform(13), tmp_path / "b.csv")


angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(q=st.integers(1, 10), variant=st.sampled_from([1, 2, 3, 4]),
       gammas=st.lists(angles, min_size=1, max_size=3), data=st.data())
def test_norm_preserved_property(q, variant, gammas, data):
    betas = data.draw(st.lists(angles, min_size=len(gammas), max_size=len(gammas)))
    s = run_circuit(q, CircuitParams(gammas, betas, variant))
    assert abs(np.vdot(s, s).real - 1) < 1e-10
