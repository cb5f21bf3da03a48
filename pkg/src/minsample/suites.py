"""Exhaustive verification sweeps shared by the CLI and the acceptance tests.

Every suite returns a :class:`SuiteResult` whose ``violations`` are plain
dicts ``{suite, instance, lhs, rhs, slack}`` ready to be written as JSON lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from . import bounds
from . import guess_oracle as go
from . import quantum as qm
from . import sampler_sim as ss
from . import xor_code as xc
from .xor_code import subsets

DEFAULT_TOL = 1e-12


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    violations: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def violate(self, instance: str, lhs, rhs) -> None:
        self.violations.append(
            {"suite": self.suite, "instance": instance, "lhs": float(lhs), "rhs": float(rhs), "slack": float(rhs - lhs)}
        )


@dataclass
class JointFamily:
    """A stack of joints sharing ``n`` and ``w_size``."""

    label: str
    n: int
    probs: np.ndarray

    def instance(self, index: int) -> str:
        return f"{self.label}#{index}"


def lemma4_families(
    n_max: int = 3,
    m_values: Sequence[int] = (1, 2),
    *,
    random_joints: int = 0,
    random_n: int = 4,
    seed: Optional[int] = None,
) -> Iterator[JointFamily]:
    """Storage-function joints for ``n <= n_max`` and each ``m <= n`` in
    ``m_values``, then ``random_joints`` random stochastic joints on
    ``random_n`` bits (requires ``seed``)."""
    for n in range(1, n_max + 1):
        for m in m_values:
            if m <= n:
                yield JointFamily(f"storage(n={n},m={m})", n, go.storage_function_probs(n, m))
    if random_joints:
        if seed is None:
            raise ValueError("random joints require an explicit seed")
        rng = ss.make_rng(seed, stream=1)
        for i in range(random_joints):
            w_size = int(rng.integers(1, 5))
            j = go.random_joint(rng, random_n, w_size)
            yield JointFamily(f"random(n={random_n},w={w_size},i={i})", random_n, j.probs[None])


def run_brw(families: Sequence[JointFamily], tol: float = DEFAULT_TOL) -> SuiteResult:
    """Subset guessing never beats the XOR-derived bound."""
    res = SuiteResult("brw")
    min_slack = math.inf
    for fam in families:
        P, n = fam.probs, fam.n
        xors = [go.pguess_xor_batch(P, n, size) for size in range(n + 1)]
        for k in range(1, n + 1):
            lhs = go.pguess_subset_batch(P, n, k)
            rhs = sum(math.comb(k, j) * (2 * xors[j] - 1) for j in range(k + 1)) / 2.0**k
            slack = rhs - lhs
            min_slack = min(min_slack, float(slack.min()))
            res.checked += lhs.size
            for idx in np.flatnonzero(slack < -tol):
                res.violate(f"{fam.instance(int(idx))},k={k}", lhs[idx], rhs[idx])
    res.details["min_slack"] = min_slack
    return res


def run_fourier(families: Sequence[JointFamily], tol: float = DEFAULT_TOL) -> SuiteResult:
    """Walsh involution, the zero-error Fourier identity, and the XOR guesser
    built from the optimal subset strategy, on every instance."""
    res = SuiteResult("fourier")
    worst = {"involution": 0.0, "identity": 0.0, "xor_margin": math.inf}
    for fam in families:
        P, n = fam.probs, fam.n
        for k in range(1, n + 1):
            guesses = {}
            for t in subsets(n, k):
                M = go.subset_marginal(P, n, t)
                g = go.optimal_guesses(M)
                guesses[t] = g
                p_err = go.error_distribution_batch(M, g)
                q = go.fwht(p_err) / (1 << k)
                back = go.fwht(q)
                inv_err = np.abs(back - p_err).max(axis=1)
                id_err = np.abs(p_err[:, 0] - q.sum(axis=1))
                worst["involution"] = max(worst["involution"], float(inv_err.max()))
                worst["identity"] = max(worst["identity"], float(id_err.max()))
                res.checked += 2 * P.shape[0]
                for idx in np.flatnonzero(inv_err > tol):
                    res.violate(f"{fam.instance(int(idx))},k={k},t={t},involution", inv_err[idx], 0.0)
                for idx in np.flatnonzero(id_err > tol):
                    res.violate(f"{fam.instance(int(idx))},k={k},t={t},identity", p_err[idx, 0], q[idx].sum())
            for size in range(1, k + 1):
                optimum = go.pguess_xor_batch(P, n, size)
                total = 0
                for s in subsets(n, size):
                    success = go.xor_guess_success_batch(P, n, k, guesses, s)
                    per_s = go.best_guess_value(go.parity_marginal(P, n, s))
                    res.checked += P.shape[0]
                    for idx in np.flatnonzero(success > per_s + tol):
                        res.violate(f"{fam.instance(int(idx))},k={k},s={s}", success[idx], per_s[idx])
                    total = total + success
                avg = total / math.comb(n, size)
                worst["xor_margin"] = min(worst["xor_margin"], float((optimum - avg).min()))
                res.checked += P.shape[0]
                for idx in np.flatnonzero(avg > optimum + tol):
                    res.violate(f"{fam.instance(int(idx))},k={k},|s|={size}", avg[idx], optimum[idx])
    res.details.update(worst)
    return res


def run_theorem3(families: Sequence[JointFamily], tol: float = DEFAULT_TOL) -> SuiteResult:
    """Bitwise sampling equals the permuted fixed-target guessing problem."""
    res = SuiteResult("theorem3")
    worst = 0.0
    for fam in families:
        P, n = fam.probs, fam.n
        if n > 5:
            raise xc.ScaleError("theorem3 suite is limited to n <= 5")
        for k in range(1, n + 1):
            for t in subsets(n, k):
                lhs, rhs = ss.theorem3_sides(P, n, k, t)
                gap = np.abs(lhs - rhs)
                worst = max(worst, float(gap.max()))
                res.checked += P.shape[0]
                for idx in np.flatnonzero(gap > tol):
                    res.violate(f"{fam.instance(int(idx))},k={k},t={t}", lhs[idx], rhs[idx])
    res.details["max_gap"] = worst
    return res


def run_listdecode(n_max: int = 4, eps_grid: Sequence[float] = (0.05, 0.1, 0.25, 0.4, 0.5)) -> SuiteResult:
    """XOR-code list-decoding parameters, checked exhaustively where the
    parameter lemma's precondition holds; greedy covers are also compared with
    exact optimal covers for ``n <= 3``."""
    res = SuiteResult("listdecode")
    records = []
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            code = xc.XorCode(n, k)
            if code.m > 20:
                continue
            for eps in eps_grid:
                params = bounds.lemma42_params(n, k, eps)
                if not params.preconditions_hold:
                    continue
                delta = min(params.delta, 1.0)
                out = xc.check_list_decodable(code, eps, delta, params.L)
                records.append((n, k, eps, out.greedy_list_size, params.L, out.holds))
                res.checked += 1
                if not out.holds:
                    res.violate(f"n={n},k={k},eps={eps}", out.greedy_list_size, params.L)
    for n in range(1, min(n_max, 3) + 1):
        for radius in range(n + 1):
            for members in range(1, 1 << (1 << n)):
                greedy = len(xc.greedy_cover(members, n, radius))
                best = xc.optimal_cover_size(members, n, radius)
                res.checked += 1
                if greedy < best:
                    res.violate(f"cover n={n},r={radius},set={members}", best, greedy)
    res.details["records"] = records
    return res


def run_lemma1(seed: int, count: int = 100, d_max: int = 4, tol: float = 1e-10) -> SuiteResult:
    """Helstrom guessing stays within 1/2 + statistical distance."""
    res = SuiteResult("lemma1")
    rng = ss.make_rng(seed, stream=2)
    fixtures = [
        ("orthogonal-pure", qm.CqEnsemble.uniform([qm.pure([1, 0]), qm.pure([0, 1])])),
        ("product", qm.CqEnsemble.uniform([qm.pure([1, 1]), qm.pure([1, 1])])),
    ]
    for i in range(count):
        d = int(rng.integers(1, d_max + 1))
        fixtures.append((f"random#{i}(d={d})", qm.random_ensemble(rng, 2, d)))
    for label, ens in fixtures:
        check = qm.verify_lemma1(ens, tol)
        res.checked += 1
        if not check.holds:
            res.violate(label, check.pguess, 0.5 + check.distance)
    return res


def run_audit(
    k_max: int = 10_000,
    *,
    linear_k_max: Optional[int] = None,
    chain_k_max: Optional[int] = None,
    c_grid: Sequence[float] = bounds.DEFAULT_C_GRID,
) -> SuiteResult:
    res = SuiteResult("audit")
    report = bounds.inequality_audit(k_max, tuple(c_grid), linear_k_max=linear_k_max, chain_k_max=chain_k_max)
    res.checked = sum(report.checked.values())
    res.details.update(checked=report.checked, skipped=report.skipped, min_slack=report.min_slack)
    v = report.first_violation
    if v is not None:
        res.violate(f"{v.check},k={v.k},c={v.c}", v.lhs, v.rhs)
    return res
