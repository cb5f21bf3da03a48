import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minsample import guess_oracle as go
from minsample.guess_oracle import ClassicalJoint, SubsetStrategy
from minsample.sampler_sim import make_rng
from minsample.xor_code import ScaleError


def bit(x, i, n):
    """1-based bit ``i`` of ``x`` with bit 1 the most significant."""
    return (x >> (n - i)) & 1


def brute_subset(P, n, k):
    """Plain-loop oracle for the subset guessing probability."""
    total = 0.0
    ts = list(itertools.combinations(range(1, n + 1), k))
    for t in ts:
        for w in range(P.shape[1]):
            cells = {}
            for x in range(1 << n):
                key = tuple(bit(x, i, n) for i in t)
                cells[key] = cells.get(key, 0.0) + P[x, w]
            total += max(cells.values())
    return total / len(ts)


def brute_xor(P, n, size):
    ts = list(itertools.combinations(range(1, n + 1), size))
    total = 0.0
    for s in ts:
        for w in range(P.shape[1]):
            cells = [0.0, 0.0]
            for x in range(1 << n):
                cells[sum(bit(x, i, n) for i in s) & 1] += P[x, w]
            total += max(cells)
    return total / len(ts)


@pytest.fixture
def reveal_first():
    return ClassicalJoint.revealing_bits(2, [1], exact=True)


def test_pguess_whole_examples(reveal_first):
    assert go.pguess_whole(ClassicalJoint.uniform(2, exact=True)) == Fraction(1, 4)
    assert go.pguess_whole(ClassicalJoint.from_function(2, lambda x: x, exact=True)) == 1
    assert go.pguess_whole(reveal_first) == Fraction(1, 2)


def test_minentropy_examples(reveal_first):
    assert go.minentropy(ClassicalJoint.uniform(3)) == 3.0
    assert go.minentropy(ClassicalJoint.from_function(3, lambda x: x)) == 0.0
    assert go.minentropy(reveal_first) == 1.0


def test_pguess_subset_examples(reveal_first):
    assert go.pguess_subset(reveal_first, 1) == Fraction(3, 4)
    for k in range(4):
        assert go.pguess_subset(ClassicalJoint.uniform(3, exact=True), k) == Fraction(1, 2**k)
        assert go.pguess_subset(ClassicalJoint.from_function(3, lambda x: x, exact=True), k) == 1


def test_pguess_xor_examples(reveal_first):
    assert go.pguess_xor(reveal_first, 0) == 1
    assert go.pguess_xor(reveal_first, 1) == Fraction(3, 4)
    assert go.pguess_xor(reveal_first, 2) == Fraction(1, 2)


def test_brw_rhs_examples():
    assert go.brw_rhs([1, Fraction(3, 4)]) == Fraction(3, 4)
    assert go.brw_rhs([1] * 6) == 1
    for k in range(1, 7):
        assert go.brw_rhs([1] + [Fraction(1, 2)] * k) == Fraction(1, 2**k)


def test_verify_brw_examples(reveal_first):
    chk = go.verify_brw(reveal_first, 1)
    assert (chk.lhs, chk.rhs, chk.holds, chk.slack) == (Fraction(3, 4), Fraction(3, 4), True, 0)
    for k in (1, 2, 3):
        chk = go.verify_brw(ClassicalJoint.uniform(3, exact=True), k)
        assert chk.lhs == chk.rhs == Fraction(1, 2**k) and chk.holds


def test_verify_brw_random_joints():
    rng = make_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        j = go.random_joint(rng, n, int(rng.integers(1, 5)))
        for k in range(1, n + 1):
            chk = go.verify_brw(j, k)
            assert chk.holds and chk.slack >= -1e-12


def test_batched_kernels_match_plain_loops():
    rng = make_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        j = go.random_joint(rng, n, int(rng.integers(1, 4)))
        for k in range(n + 1):
            assert go.pguess_subset(j, k) == pytest.approx(brute_subset(j.probs, n, k), abs=1e-14)
            assert go.pguess_xor(j, k) == pytest.approx(brute_xor(j.probs, n, k), abs=1e-14)


def test_subset_k_equals_n_is_whole():
    rng = make_rng(3)
    for n in range(1, 5):
        j = go.random_joint(rng, n, 3)
        assert go.pguess_subset(j, n) == go.pguess_whole(j)


def test_single_parity_at_least_half():
    rng = make_rng(5)
    for _ in range(50):
        j = go.random_joint(rng, 3, 2)
        assert go.pguess_xor(j, 1) >= 0.5


def test_walsh_examples():
    for k in range(1, 5):
        sp = go.walsh_transform(np.full(1 << k, 2.0**-k))
        assert sp.q_s[0] == pytest.approx(2.0**-k) and np.allclose(sp.q_s[1:], 0)
        point = np.zeros(1 << k)
        point[0] = 1
        assert np.allclose(go.walsh_transform(point).q_s, 2.0**-k)
    sp = go.walsh_transform(np.array([Fraction(3, 4), Fraction(1, 4)], dtype=object))
    assert sp.q_s.tolist() == [Fraction(1, 2), Fraction(1, 4)]


def naive_walsh(p):
    k = p.size.bit_length() - 1
    return np.array([sum(p[w] * (-1) ** bin(s & w).count("1") for w in range(p.size)) for s in range(p.size)]) / 2**k


def test_walsh_involution_and_parseval():
    rng = make_rng(9)
    for k in range(0, 13):
        p = rng.dirichlet(np.ones(1 << k))
        sp = go.walsh_transform(p)
        assert np.abs(sp.inverse() - p).max() <= 1e-12
        assert (1 << k) * np.sum(sp.q_s**2) == pytest.approx(np.sum(p**2), rel=1e-10)
        if k <= 6:
            assert np.allclose(sp.q_s, naive_walsh(p), atol=1e-15)


def test_walsh_rejects_bad_input():
    with pytest.raises(ValueError):
        go.walsh_transform([0.5, 0.25, 0.25])
    with pytest.raises(ValueError):
        go.walsh_transform([0.7, 0.7])


def test_fourier_identity_examples():
    perfect = ClassicalJoint.from_function(3, lambda x: x)
    strat = SubsetStrategy.optimal(perfect, 2)
    for t in [(1, 2), (1, 3), (2, 3)]:
        chk = go.verify_fourier_identity(strat, perfect, t)
        assert chk.lhs == pytest.approx(1.0) and chk.rhs == pytest.approx(1.0)
    uni = ClassicalJoint.uniform(3)
    blind = SubsetStrategy.constant(uni, 2)
    chk = go.verify_fourier_identity(blind, uni, (1, 3))
    assert chk.lhs == pytest.approx(0.25) and chk.rhs == pytest.approx(0.25)
    j = ClassicalJoint.revealing_bits(3, [1])
    strat = SubsetStrategy.optimal(j, 2)
    for t in [(1, 2), (1, 3), (2, 3)]:
        chk = go.verify_fourier_identity(strat, j, t)
        assert abs(chk.lhs - chk.rhs) <= 1e-14


def test_fourier_identity_exact_path():
    j = ClassicalJoint.revealing_bits(3, [1], exact=True)
    chk = go.verify_fourier_identity(SubsetStrategy.optimal(j, 2), j, (1, 2))
    assert chk.lhs == chk.rhs == Fraction(1, 2)


def test_xor_guesser_examples():
    perfect = ClassicalJoint.from_function(3, lambda x: x)
    strat = SubsetStrategy.optimal(perfect, 2)
    for s in [(1,), (2,), (1, 3), (2, 3)]:
        assert go.xor_guesser_from_subset_strategy(strat, perfect, s) == pytest.approx(1.0)
    uni = ClassicalJoint.uniform(3)
    blind = SubsetStrategy.constant(uni, 3)
    for s in [(1,), (1, 2), (1, 2, 3)]:
        assert go.xor_guesser_from_subset_strategy(blind, uni, s) == pytest.approx(0.5)


def test_xor_guesser_never_beats_optimum():
    rng = make_rng(13)
    for _ in range(30):
        j = go.random_joint(rng, 3, 3)
        for k in (1, 2, 3):
            strat = SubsetStrategy.optimal(j, k)
            for size in range(1, k + 1):
                avg = np.mean([go.xor_guesser_from_subset_strategy(strat, j, s) for s in itertools.combinations(range(1, 4), size)])
                assert avg <= go.pguess_xor(j, size) + 1e-12


def test_storage_function_counts():
    assert len(list(go.enumerate_storage_functions(1, 1))) == 4
    assert len(list(go.enumerate_storage_functions(2, 1))) == 16
    assert go.storage_function_probs(3, 2).shape == (4**8, 8, 4)
    with pytest.raises(ScaleError):
        go.storage_function_tables(4, 2)
    with pytest.raises(ScaleError):
        go.storage_function_tables(5, 1)


def test_storage_functions_are_distinct_and_uniform():
    tables = go.storage_function_tables(2, 1)
    assert len({tuple(t) for t in tables.tolist()}) == 16
    P = go.storage_function_probs(2, 1)
    assert np.allclose(P.sum(axis=2), 0.25)


def test_joint_validation():
    with pytest.raises(ValueError):
        ClassicalJoint(2, np.full((4, 1), 0.3))
    with pytest.raises(ValueError):
        ClassicalJoint(2, np.full((3, 1), 1 / 3))
    with pytest.raises(ValueError):
        ClassicalJoint(1, np.array([[1.5], [-0.5]]))


def test_joint_json_round_trip():
    j = go.random_joint(make_rng(1), 2, 3)
    back = ClassicalJoint.from_dict(j.to_dict())
    assert np.array_equal(back.probs, j.probs)
    with pytest.raises(ValueError, match="probs\\[1\\]"):
        ClassicalJoint.from_dict({"n": 1, "w_size": 2, "probs": [[0.5, 0.0], [0.5]]})
    with pytest.raises(ValueError, match="w_size"):
        ClassicalJoint.from_dict({"n": 1, "probs": [[1.0], [0.0]]})


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_brw_property(n, w, seed):
    j = go.random_joint(make_rng(seed), n, w)
    for k in range(1, n + 1):
        assert go.verify_brw(j, k).holds


def test_fwht_object_arrays():
    v = np.array([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)], dtype=object)
    back = go.fwht(go.fwht(v))
    assert [x / 4 for x in back] == v.tolist()
    assert math.isclose(float(go.fwht(v.astype(float))[0]), 1.0)
