import json
import math

import numpy as np
import pytest
import scipy.linalg

from minsample import bounds
from minsample import quantum as qm
from minsample.sampler_sim import make_rng

KET0 = qm.pure([1, 0])
KET1 = qm.pure([0, 1])
PLUS = qm.pure([1, 1])
COS2_PI8 = math.cos(math.pi / 8) ** 2


def test_hermitian_eig_examples():
    assert np.allclose(qm.hermitian_eig(np.eye(2))[0], [1, 1])
    assert sorted(qm.hermitian_eig(np.diag([1.0, -1.0]))[0]) == pytest.approx([-1, 1])
    assert sorted(qm.hermitian_eig(np.array([[0, 1], [1, 0]]))[0]) == pytest.approx([-1, 1])
    with pytest.raises(ValueError):
        qm.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_hermitian_eig_reconstructs():
    rng = make_rng(4)
    for d in (1, 2, 3, 8, 64):
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        M = A + A.conj().T
        w, V = qm.hermitian_eig(M)
        assert np.abs((V * w) @ V.conj().T - M).max() <= 1e-10
        assert np.abs(V.conj().T @ V - np.eye(d)).max() <= 1e-12
    with pytest.raises(ValueError):
        qm.hermitian_eig(np.eye(65))


def test_statistical_distance_examples():
    assert qm.statistical_distance(KET0, KET0) == pytest.approx(0.0, abs=1e-15)
    assert qm.statistical_distance(KET0, KET1) == pytest.approx(1.0)
    assert qm.statistical_distance(KET0, PLUS) == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_statistical_distance_is_a_metric():
    rng = make_rng(8)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        a, b, c = (qm.random_density(rng, d) for _ in range(3))
        assert qm.statistical_distance(a, b) == qm.statistical_distance(b, a)
        assert qm.statistical_distance(a, c) <= qm.statistical_distance(a, b) + qm.statistical_distance(b, c) + 1e-10


def test_helstrom_examples():
    assert qm.helstrom_pguess(qm.CqEnsemble.uniform([KET0, KET1])) == pytest.approx(1.0)
    assert qm.helstrom_pguess(qm.CqEnsemble.uniform([PLUS, PLUS])) == pytest.approx(0.5)
    assert qm.helstrom_pguess(qm.CqEnsemble(np.array([0.3, 0.7]), np.stack([PLUS, PLUS]))) == pytest.approx(0.7)
    assert qm.helstrom_pguess(qm.CqEnsemble.uniform([KET0, PLUS])) == pytest.approx(0.5 + math.sqrt(2) / 4, abs=1e-12)
    assert qm.helstrom_pguess(qm.CqEnsemble.uniform([KET0, PLUS])) == pytest.approx(COS2_PI8, abs=1e-12)


def test_helstrom_povm_achieves_value():
    rng = make_rng(12)
    for _ in range(50):
        ens = qm.random_ensemble(rng, 2, int(rng.integers(1, 5)))
        res = qm.helstrom(ens)
        qm.check_povm(res.povm)
        assert qm.povm_pguess(ens, res.povm) == pytest.approx(res.pguess, abs=1e-10)
        gamma = ens.priors[0] * ens.states[0] - ens.priors[1] * ens.states[1]
        assert res.pguess == pytest.approx(0.5 + 0.5 * qm.trace_norm(gamma), abs=1e-12)


def test_helstrom_beats_random_measurements():
    rng = make_rng(21)
    ens = qm.random_ensemble(rng, 2, 3)
    best = qm.helstrom_pguess(ens)
    for _ in range(1000):
        povm = qm.random_projective(rng, 3, int(rng.integers(0, 4)))
        assert qm.povm_pguess(ens, povm) <= best + 1e-10
    for _ in range(100):
        assert qm.povm_pguess(ens, qm.random_povm(rng, 2, 3)) <= best + 1e-10


def test_pgm_examples():
    assert qm.pgm_pguess(qm.CqEnsemble.uniform([KET0, KET1])) == pytest.approx(1.0)
    basis = [qm.pure(np.eye(3)[i]) for i in range(3)]
    assert qm.pgm_pguess(qm.CqEnsemble.uniform(basis)) == pytest.approx(1.0)
    assert qm.pgm_pguess(qm.CqEnsemble(np.array([1.0]), np.stack([PLUS]))) == pytest.approx(1.0)
    assert qm.pgm_pguess(qm.CqEnsemble.uniform([KET0, PLUS])) == pytest.approx(COS2_PI8, abs=1e-12)


def test_pgm_matches_scipy_square_root():
    rng = make_rng(30)
    for _ in range(20):
        ens = qm.random_ensemble(rng, 3, 3)
        S = ens.average()
        R = np.linalg.inv(scipy.linalg.sqrtm(S))
        oracle = sum(p * np.trace(R @ (p * rho) @ R @ rho).real for p, rho in zip(ens.priors, ens.states))
        assert qm.pgm_pguess(ens) == pytest.approx(oracle, abs=1e-9)


def test_pgm_is_a_povm_with_rank_deficient_average():
    ens = qm.CqEnsemble.uniform([qm.pure([1, 0, 0]), qm.pure([1, 1, 0])])
    qm.check_povm(qm.pgm(ens))


def test_ordering_helstrom_pgm_prior():
    rng = make_rng(33)
    for _ in range(100):
        ens = qm.random_ensemble(rng, 2, int(rng.integers(1, 5)))
        h, p = qm.helstrom_pguess(ens), qm.pgm_pguess(ens)
        assert h >= p - 1e-10
        assert h >= ens.priors.max() - 1e-10
        # Barnum-Knill: the PGM is at worst quadratically suboptimal
        assert p >= h * h - 1e-10


def test_pgm_can_fall_below_best_prior():
    ens = qm.CqEnsemble(np.array([0.9, 0.1]), np.stack([PLUS, PLUS]))
    assert qm.pgm_pguess(ens) == pytest.approx(0.82)
    assert qm.helstrom_pguess(ens) == pytest.approx(0.9)


def test_povm_pguess_examples():
    ens = qm.CqEnsemble.uniform([KET0, PLUS])
    assert qm.povm_pguess(ens, qm.helstrom(ens).povm) == pytest.approx(qm.helstrom_pguess(ens))
    rng = make_rng(1)
    ens3 = qm.random_ensemble(rng, 3, 2)
    split = np.stack([np.eye(2) / 3] * 3)
    assert qm.povm_pguess(ens3, split) == pytest.approx(1 / 3)
    assert qm.povm_pguess(qm.CqEnsemble.uniform([KET0, KET1]), np.stack([KET0, KET1])) == pytest.approx(1.0)


def test_check_povm_rejects():
    with pytest.raises(ValueError):
        qm.check_povm(np.stack([np.eye(2), np.eye(2)]))
    with pytest.raises(ValueError):
        qm.check_povm(np.stack([np.diag([2.0, 0.0]), np.diag([-1.0, 1.0])]))


def test_lemma1_fixtures():
    chk = qm.verify_lemma1(qm.CqEnsemble.uniform([PLUS, PLUS]))
    assert chk.distance == pytest.approx(0.0, abs=1e-15) and chk.pguess == pytest.approx(0.5)
    chk = qm.verify_lemma1(qm.CqEnsemble.uniform([KET0, KET1]))
    assert chk.distance == pytest.approx(0.5, abs=1e-12) and chk.pguess == pytest.approx(1.0)
    assert abs(chk.pguess - 0.5 - chk.distance) <= 1e-9


def test_lemma1_random():
    rng = make_rng(2, stream=5)
    for _ in range(100):
        ens = qm.random_ensemble(rng, 2, int(rng.integers(1, 5)))
        chk = qm.verify_lemma1(ens)
        assert chk.holds


def test_dimension_bound_examples():
    rng = make_rng(40)
    ens = qm.CqEnsemble.uniform([qm.random_density(rng, 4) for _ in range(4)])
    chk = qm.dimension_bound_check(ens, 2)
    assert chk.rhs == 1.0 and chk.holds
    pair = qm.CqEnsemble.uniform([KET0, KET1, KET0, KET1])
    chk = qm.dimension_bound_check(pair, 1)
    assert chk.rhs == 0.5 and chk.lhs <= 0.5 + 1e-12
    assert "lower bound" in chk.note
    for _ in range(100):
        n, m = int(rng.integers(1, 4)), int(rng.integers(0, 3))
        ens = qm.random_ensemble(rng, 1 << n, 1 << m)
        assert qm.dimension_bound_check(ens, m).holds


def test_rac_examples():
    enc = qm.basis_encoding(1)
    assert qm.rac_success(enc, 1, qm.computational_strategies(1, 1)) == pytest.approx(1.0)
    for n in range(1, 4):
        enc = qm.trivial_encoding(n)
        for k in range(1, n + 1):
            assert qm.rac_success(enc, k, qm.pgm_strategies(enc, k)) == 2.0**-k
    enc = qm.qrac_2to1()
    p = qm.rac_success(enc, 1, qm.helstrom_strategies(enc))
    assert p == pytest.approx(COS2_PI8, abs=1e-12)
    assert p <= bounds.nayak_max_p(2, 1)


def test_rac_basis_full_subset():
    for n in (1, 2, 3):
        enc = qm.basis_encoding(n)
        assert qm.rac_success(enc, n, qm.computational_strategies(n, n)) == pytest.approx(1.0)


def test_rac_per_bit_helstrom_matches_direct_evaluation():
    enc = qm.qrac_2to1()
    for t in ((1,), (2,)):
        assert qm.helstrom_pguess(enc.subset_ensemble(t)) == pytest.approx(COS2_PI8, abs=1e-12)


def test_encoding_json_round_trip_and_errors():
    enc = qm.qrac_2to1()
    back = qm.RacEncoding.from_dict(json.loads(json.dumps(enc.to_dict())))
    assert np.allclose(back.states, enc.states)
    bad = enc.to_dict()
    bad["states"][2][1][0] = [0.5]
    with pytest.raises(ValueError, match=r"states\[2\]\[1\]\[0\]"):
        qm.RacEncoding.from_dict(bad)
    bad = enc.to_dict()
    del bad["m"]
    with pytest.raises(ValueError, match="^m:"):
        qm.RacEncoding.from_dict(bad)
    bad = enc.to_dict()
    bad["states"][0] = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
    with pytest.raises(ValueError, match=r"states\[0\]"):
        qm.RacEncoding.from_dict(bad)
