import json
import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import all_dims_up_to, naive_census
from torusloops.census import census_summary, exact_div_str, find_cycles, jsonl_record
from torusloops.sampler import SampleKey, field_from_bits, field_from_code, sample_field
from torusloops.torus import HomologyClass, TorusDims


def census_triples(census):
    return [(c.anchor, c.length, c.h_steps) for c in census.cycles]


def test_all_east_t32():
    census = find_cycles(field_from_bits(TorusDims(3, 2), [0] * 6))
    assert census.total_cycles == 2
    assert census.homology == HomologyClass(1, 0)
    assert census.lengths == [3, 3]
    assert [c.anchor for c in census.cycles] == [0, 3]


def test_all_north_t32():
    census = find_cycles(field_from_bits(TorusDims(3, 2), [1] * 6))
    assert census.total_cycles == 3
    assert census.homology == HomologyClass(0, 1)
    assert census.lengths == [2, 2, 2]


def test_self_loop_t21():
    # East at (0,0), North at (1,0): the only cycle is the self-loop at (1,0)
    census = find_cycles(field_from_bits(TorusDims(2, 1), [0, 1]))
    assert census_triples(census) == [(1, 1, 0)]
    assert census.homology == HomologyClass(0, 1)


def test_self_loop_homology_degenerate_axes():
    # n=1: an East step is a horizontal self-loop of class (1,0)
    census = find_cycles(field_from_bits(TorusDims(1, 3), [0, 0, 0]))
    assert census.total_cycles == 3
    assert census.homology == HomologyClass(1, 0)
    # m=1: a North step is a vertical self-loop of class (0,1)
    census = find_cycles(field_from_bits(TorusDims(3, 1), [1, 1, 1]))
    assert census.total_cycles == 3
    assert census.homology == HomologyClass(0, 1)


def test_summary_examples():
    s = census_summary(find_cycles(field_from_bits(TorusDims(3, 2), [0] * 6)))
    assert (s.total_cycles, s.homology) == (2, HomologyClass(1, 0))
    assert s.min_length == s.max_length == 3
    assert s.total_length == 6
    assert s.mean_length == Fraction(3)
    assert s.mean_length_str() == "3.000000"

    s = census_summary(find_cycles(field_from_bits(TorusDims(2, 1), [0, 1])))
    assert (s.total_cycles, s.homology) == (1, HomologyClass(0, 1))
    assert s.min_length == s.max_length == s.total_length == 1


def test_exact_div_str():
    assert exact_div_str(5, 2) == "2.500000"
    assert exact_div_str(10, 4, 2) == "2.50"
    assert exact_div_str(1, 3, 4) == "0.3333"
    assert exact_div_str(2, 3, 4) == "0.6667"
    assert exact_div_str(-5, 2, 1) == "-2.5"
    assert exact_div_str(7, 1, 0) == "7"


def test_matches_naive_oracle_exhaustive_small():
    for n, m in all_dims_up_to(8):
        dims = TorusDims(n, m)
        for code in range(1 << dims.size):
            field = field_from_code(dims, code)
            assert census_triples(find_cycles(field)) == naive_census(field), (n, m, code)


def test_matches_naive_oracle_random_fields(rng):
    for n, m in [(5, 9), (12, 7), (16, 16), (31, 2), (1, 25)]:
        dims = TorusDims(n, m)
        for trial in range(50):
            field = sample_field(dims, SampleKey(rng.integers(2**63), trial))
            assert census_triples(find_cycles(field)) == naive_census(field)


def test_invariants_over_many_random_fields():
    # N >= 1, single shared coprime class, length = np + mq with exact step counts
    checked = 0
    for n, m in [(64, 64), (64, 63), (17, 61), (2, 64), (48, 31)]:
        dims = TorusDims(n, m)
        for trial in range(2100):
            census = find_cycles(sample_field(dims, SampleKey(1234, trial)))
            assert census.total_cycles >= 1
            hom = census.homology
            assert math.gcd(hom.p, hom.q) == 1
            total = 0
            for c in census.cycles:
                assert c.homology == hom
                assert c.h_steps == n * hom.p
                assert c.v_steps == m * hom.q
                assert c.length == n * hom.p + m * hom.q
                total += c.length
            assert total == census.total_cycles * (n * hom.p + m * hom.q)
            assert census.class_counts == {hom: census.total_cycles}
            checked += 1
    assert checked >= 10_000


def test_cycles_sorted_and_disjoint_anchors():
    census = find_cycles(sample_field(TorusDims(40, 40), SampleKey(5, 5)))
    anchors = [c.anchor for c in census.cycles]
    assert anchors == sorted(anchors)
    assert len(set(anchors)) == len(anchors)


def test_jsonl_record_key_order():
    census = find_cycles(field_from_bits(TorusDims(3, 2), [0] * 6))
    line = jsonl_record(census, seed=9, trial=4)
    assert line == '{"n":3,"m":2,"seed":9,"trial":4,"N":2,"p":1,"q":0,"lengths":[3,3]}'
    assert list(json.loads(line)) == ["n", "m", "seed", "trial", "N", "p", "q", "lengths"]


def test_large_census_smoke():
    census = find_cycles(sample_field(TorusDims(500, 500), SampleKey(3, 0)))
    assert census.total_cycles >= 1
    assert all(c.length == 500 * c.homology.p + 500 * c.homology.q for c in census.cycles)
    assert np.all(np.diff([c.anchor for c in census.cycles]) > 0)


def test_kernels_run_without_numba(monkeypatch):
    # the kernel module degrades to plain Python when numba is unavailable
    import importlib
    import sys

    from torusloops import _kernels

    monkeypatch.setitem(sys.modules, "numba", None)  # forces ImportError on reload
    try:
        plain = importlib.reload(_kernels)
        dirs = np.zeros(6, np.uint8)
        pos = np.full(6, -1, np.int32)
        anchors = np.empty(2, np.int64)
        lengths = np.empty(2, np.int64)
        hsteps = np.empty(2, np.int64)
        k = plain.census_core(dirs, 3, 2, pos, anchors, lengths, hsteps)
        assert k == 2
        assert sorted(anchors.tolist()) == [0, 3]
        assert lengths.tolist() == [3, 3] and hsteps.tolist() == [3, 3]
    finally:
        monkeypatch.undo()
        importlib.reload(_kernels)
