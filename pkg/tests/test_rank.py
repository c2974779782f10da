import math

import pytest
from hypothesis import given, settings, strategies as st

from iqaoa_jssp import load_fixture
from iqaoa_jssp._pykernels import _next_perm
from iqaoa_jssp.instance import JsspInstance, total_vector_count
from iqaoa_jssp.rank import (
    RankRangeError,
    bits_to_rank,
    bits_value,
    multinomial,
    qubit_count,
    rank_of,
    unrank,
)
from iqaoa_jssp.schedule import InvalidVectorError

from conftest import brute_vectors


@pytest.mark.parametrize(
    "remaining, counts, expected",
    [(8, [2, 3, 3], 560), (0, [0, 0, 0], 1), (3, [3], 1), (4, [1, 1, 1, 1], 24), (9, [3, 3, 3], 1680)],
)
def test_multinomial(remaining, counts, expected):
    assert multinomial(remaining, counts) == expected


def test_multinomial_sum_mismatch():
    with pytest.raises(ValueError):
        multinomial(5, [2, 2])


def test_worked_example(inst_a):
    trace = []
    assert rank_of(inst_a, [2, 0, 2, 1, 0, 1, 0, 1, 2], trace) == 1293
    assert trace[0] == 1120
    residuals = []
    assert unrank(inst_a, 1293, residuals) == [2, 0, 2, 1, 0, 1, 0, 1, 2]
    assert residuals[0] == 173


@pytest.mark.parametrize("rank, vector", [(0, [0, 0, 0, 1, 1, 1, 2, 2, 2]), (1679, [2, 2, 2, 1, 1, 1, 0, 0, 0]),
                                          (1, [0, 0, 0, 1, 1, 2, 1, 2, 2]), (1677, [2, 2, 2, 1, 1, 0, 0, 1, 0])])
def test_listing_rows(inst_a, rank, vector):
    assert rank_of(inst_a, vector) == rank
    assert unrank(inst_a, rank) == vector


def test_listing_rows_second_instance(inst_b):
    assert unrank(inst_b, 1520) == [2, 1, 2, 1, 0, 2, 0, 1, 0]
    assert unrank(inst_b, 1518) == [2, 1, 2, 1, 0, 1, 2, 0, 0]


def test_matches_brute_lexicographic_order(inst_a):
    # brute_vectors sorts with itertools; index == rank is order isomorphism plus bijection
    for r, v in enumerate(brute_vectors(inst_a)):
        assert rank_of(inst_a, v) == r
        assert unrank(inst_a, r) == list(v)


def test_first_symbol_blocks_sum_to_total(inst_5x2):
    n = inst_5x2.n_jobs
    counts = inst_5x2.multiplicities()
    blocks = []
    for j in range(n):
        c = list(counts)
        c[j] -= 1
        blocks.append(multinomial(inst_5x2.n_operations - 1, c))
    assert sum(blocks) == total_vector_count(inst_5x2)


def test_exhaustive_5x2_bijection(inst_5x2):
    v = [j for j in range(5) for _ in range(2)]
    r = 0
    while True:
        assert rank_of(inst_5x2, v) == r
        assert unrank(inst_5x2, r) == v
        r += 1
        if _next_perm(v) < 0:
            break
    assert r == 113400


@pytest.mark.parametrize("r", [-1, 1680, 10**6])
def test_unrank_out_of_range(inst_a, r):
    with pytest.raises(RankRangeError):
        unrank(inst_a, r)


def test_rank_of_rejects_invalid(inst_a):
    with pytest.raises(InvalidVectorError):
        rank_of(inst_a, [0, 0, 0, 0, 1, 1, 2, 2, 2])


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_large_instance_roundtrip(data):
    # 5x5: 25!/(5!)^5 exceeds 2**53, exercises exact big-integer arithmetic
    inst = JsspInstance.from_lists([[(k, 1) for k in range(5)] for _ in range(5)])
    total = total_vector_count(inst)
    assert total == math.factorial(25) // math.factorial(5) ** 5
    r = data.draw(st.integers(0, total - 1))
    v = unrank(inst, r)
    assert rank_of(inst, v) == r
    w = unrank(inst, data.draw(st.integers(0, total - 1)))
    assert (v < w) == (r < rank_of(inst, w))


@pytest.mark.parametrize("fixture, q", [("jssp-3x3-a", 11), ("jssp-5x2", 17), ("jssp-3x4", 16), ("jssp-4x4", 26)])
def test_qubit_count(fixture, q):
    inst = load_fixture(fixture)
    assert 2 ** (q - 1) < total_vector_count(inst) <= 2**q
    assert qubit_count(inst) == q


def test_qubit_count_floor():
    assert qubit_count(JsspInstance.from_lists([[(0, 5)]])) == 1
    assert qubit_count(JsspInstance.from_lists([[(0, 1)], [(0, 1)]])) == 1  # 2 vectors


def test_bits_to_rank(inst_a):
    assert bits_to_rank([0] * 11, inst_a) == 0
    assert bits_to_rank([0, 0, 0, 1] + [0] * 7, inst_a) == 8
    assert bits_to_rank([1] * 11, inst_a) == 2047 % 1680 == 367
    assert bits_value([1, 0, 1]) == 5
    with pytest.raises(ValueError):
        bits_value([0, 2])
