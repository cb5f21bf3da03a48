"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
where the lines are repeated in the terminal summary.
"""

import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np

from minsample import bounds, suites
from minsample import guess_oracle as go
from minsample import quantum as qm
from minsample.entropy_math import binary_entropy, binary_entropy_inv
from minsample.guess_oracle import ClassicalJoint

RESULTS: list[str] = []
SEED = 20240601


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_subset_xor_reduction_exhaustive():
    start = time.perf_counter()
    fams = list(suites.lemma4_families(3, (1, 2), random_joints=100, random_n=4, seed=SEED))
    res = suites.run_brw(fams, tol=1e-12)
    elapsed = time.perf_counter() - start
    n_random = sum(1 for f in fams if f.label.startswith("random"))
    ok = res.passed and n_random == 100 and elapsed < 60
    report(1, "subset guessing <= XOR bound, n<=3 storage functions + 100 random n=4 joints", ok,
           f"{res.checked} checks, {len(res.violations)} violations, min slack {res.details['min_slack']:.3g}, {elapsed:.1f}s")


def test_02_equality_fixture_exact():
    j = ClassicalJoint.revealing_bits(2, [1], exact=True)
    chk = go.verify_brw(j, 1)
    ok = chk.lhs == Fraction(3, 4) and chk.rhs == Fraction(3, 4) and isinstance(chk.rhs, Fraction)
    report(2, "n=2, W=X1, k=1 equality in rational arithmetic", ok, f"lhs={chk.lhs}, rhs={chk.rhs}")


def test_03_fourier_machinery():
    fams = list(suites.lemma4_families(3, (1, 2), random_joints=100, random_n=4, seed=SEED))
    res = suites.run_fourier(fams, tol=1e-12)
    d = res.details
    ok = res.passed and d["involution"] <= 1e-12 and d["identity"] <= 1e-12 and d["xor_margin"] >= -1e-12
    report(3, "Walsh involution, zero-error identity, XOR guesser <= optimum", ok,
           f"{res.checked} checks, max involution err {d['involution']:.2g}, max identity err {d['identity']:.2g}, "
           f"min XOR margin {d['xor_margin']:.3g}")


def test_04_bitwise_permutation_reduction():
    start = time.perf_counter()
    fams = list(suites.lemma4_families(3, (1, 2)))
    res = suites.run_theorem3(fams, tol=1e-12)
    elapsed = time.perf_counter() - start
    ok = res.passed and elapsed < 120
    report(4, "bitwise sampling equals permuted fixed-target guessing, n<=3 storage functions", ok,
           f"{res.checked} checks, max gap {res.details['max_gap']:.2g}, {elapsed:.1f}s")


def test_05_proof_step_audit():
    rep = bounds.inequality_audit(10_000, bounds.DEFAULT_C_GRID, linear_k_max=1_000_000, chain_k_max=1_000)
    ok = rep.passed and rep.first_violation is None and rep.checked["chain"] > 0
    slack = ", ".join(f"{name} {value:.3g}" for name, value in rep.min_slack.items())
    report(5, "tail <= e^(-k/8) to 1e4, 5k/12 >= log(17k)-5 to 1e6, rate chain on c grid to 1e3", ok,
           f"checked {rep.checked}, skipped {rep.skipped}, min slack: {slack}")


def test_06_entropy_math():
    xs = np.linspace(0.0, 0.5, 10_000)
    err = max(abs(binary_entropy_inv(binary_entropy(x)) - x) for x in xs)
    h = binary_entropy_inv(0.5)
    ok = err <= 1e-10 and 0.110027 <= h <= 0.110029
    report(6, "entropy inverse round trip and H^-1(1/2)", ok, f"max round-trip err {err:.2g}, H^-1(1/2)={h:.9f}")


def test_07_quantum_discrimination():
    ket0, plus = qm.pure([1, 0]), qm.pure([1, 1])
    hel = qm.helstrom_pguess(qm.CqEnsemble.uniform([ket0, plus]))
    dist = qm.statistical_distance(ket0, plus)
    res = suites.run_lemma1(SEED, count=100, d_max=4)
    orth = qm.verify_lemma1(qm.CqEnsemble.uniform([ket0, qm.pure([0, 1])]))
    eq_gap = abs(orth.pguess - (0.5 + orth.distance))
    ok = abs(hel - 0.853553) <= 1e-6 and abs(dist - 0.707107) <= 1e-6 and res.passed and eq_gap <= 1e-9
    report(7, "Helstrom |0>,|+>; distance; guessing <= 1/2 + distance on 100 random ensembles", ok,
           f"pguess={hel:.7f}, D={dist:.7f}, {res.checked} ensembles, orthogonal equality gap {eq_gap:.2g}")


def test_08_rac_fixture():
    enc = qm.qrac_2to1()
    p = qm.rac_success(enc, 1, qm.helstrom_strategies(enc))
    nayak = bounds.nayak_max_p(2, 1)
    trivial = all(
        qm.rac_success(qm.trivial_encoding(n), k, qm.pgm_strategies(qm.trivial_encoding(n), k)) == 2.0**-k
        for n in range(1, 4) for k in range(1, n + 1)
    )
    ok = abs(p - math.cos(math.pi / 8) ** 2) <= 1e-6 and abs(nayak - 0.889972) <= 1e-5 and p <= nayak and trivial
    report(8, "2->1 QRAC = cos^2(pi/8) within Nayak; zero-qubit code = 2^-k", ok,
           f"success={p:.7f}, nayak={nayak:.6f}, m=0 exact={trivial}")


def test_09_bound_cross_checks():
    mpmath.mp.dps = 40
    n, k = 10**6, 1200
    x = 6 / mpmath.mpf(k) * (mpmath.log(17, 2) + 10)
    scripted = (-x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)) * n + 8 * (mpmath.log(12, 2) + 10) + 3
    value = bounds.main_sampling_threshold(n, k, 2.0**-10).required_hmin
    rel = abs(value - float(scripted)) / float(scripted)
    inv = bounds.best_sampled_rate(n, k, value).max_log_inv_p
    floor = bounds.smoothness_floor("blockwise", 10**6, 10**3)
    ok = rel <= 1e-6 and abs(inv - 10) <= 1e-6 and floor > 1
    report(9, "threshold vs scripted evaluation, inversion, vacuous smoothing floor", ok,
           f"required_hmin={value:.6f}, rel err {rel:.2g}, inverse={inv:.9f}, floor={floor:.4f}")


def _cli(*args):
    env = dict(os.environ, QSV_THREADS="2")
    return subprocess.run([sys.executable, "-m", "minsample", *args], capture_output=True, env=env, check=False)


def test_10_determinism_and_clean_verify():
    csv_args = ("bounds-compare", "--n", "100", "--m", "50", "--k-range", "1..20")
    first, second = _cli(*csv_args), _cli(*csv_args)
    same = first.returncode == 0 and first.stdout == second.stdout and first.stdout.count(b"\n") == 21
    verify = _cli("verify", "all", "--seed", str(SEED), "--n-max", "3", "--m-max", "2", "--k-max", "10000")
    ok = same and verify.returncode == 0
    summary = verify.stderr.decode().strip().replace("\n", "; ")
    report(10, "byte-identical CSV across runs; every verify suite exits 0", ok,
           f"csv identical={same}, verify exit={verify.returncode}: {summary}")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
