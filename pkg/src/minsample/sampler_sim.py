"""Subset sampling, the permutation reduction for bitwise sampling, and Monte Carlo.

Randomness comes from numpy's Philox-4x64 counter-based generator.  Stream
``i`` of seed ``s`` is ``Philox(SeedSequence(s, spawn_key=(i,)))``, so every
worker stream is reproducible and independent of how many workers run.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .entropy_math import validate_subset
from .guess_oracle import ClassicalJoint, best_guess_value, subset_marginal
from .xor_code import ScaleError, subsets

THREADS_ENV = "QSV_THREADS"
MC_CHUNK = 4096


def parse_seed(text: str | int) -> int:
    """Accept ``1234`` or ``0x4d2``; seeds are unsigned 64-bit."""
    value = text if isinstance(text, int) else int(str(text), 0)
    if not 0 <= value < 1 << 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {text!r}")
    return value


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    seq = np.random.SeedSequence(parse_seed(seed), spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(seq))


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SamplePlan:
    """``mode`` is ``"bitwise"`` (``k`` bits) or ``"blockwise"`` (``k`` blocks of ``block_size``)."""

    mode: str
    n: int
    k: int
    seed: int = 0
    block_size: int = 1

    def __post_init__(self):
        if self.mode not in ("bitwise", "blockwise"):
            raise ValueError(f"mode must be 'bitwise' or 'blockwise', got {self.mode!r}")
        if self.n < 0 or self.k < 0:
            raise ValueError("n and k must be non-negative")
        if self.mode == "bitwise" and self.k > self.n:
            raise ValueError(f"cannot sample {self.k} of {self.n} bits")
        if self.mode == "blockwise":
            b = self.block_size
            if b < 1 or self.n % b:
                raise ValueError(f"block_size {b} must divide n = {self.n}")
            if b * self.k > self.n:
                raise ValueError(f"{self.k} blocks of size {b} exceed n = {self.n}")


def _partial_fisher_yates(rng: np.random.Generator, n: int, k: int) -> list[int]:
    pool = list(range(n))
    for i in range(k):
        j = i + int(rng.integers(n - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def sample_subset(plan: SamplePlan, rng: Optional[np.random.Generator] = None) -> tuple[int, ...]:
    """Uniform k-subset of ``[n]`` (bitwise) or the bits of ``k`` uniform blocks."""
    rng = make_rng(plan.seed) if rng is None else rng
    if plan.mode == "bitwise":
        return tuple(sorted(i + 1 for i in _partial_fisher_yates(rng, plan.n, plan.k)))
    b = plan.block_size
    blocks = sorted(_partial_fisher_yates(rng, plan.n // b, plan.k))
    return tuple(blk * b + i + 1 for blk in blocks for i in range(b))


def _check_permutation(pi: Sequence[int], n: int) -> tuple[int, ...]:
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise ValueError(f"{pi} is not a permutation of [1, {n}]")
    return pi


def permute_probs(P: np.ndarray, n: int, pi: Sequence[int]) -> np.ndarray:
    """Batched ``(Pi(X), W)``: bit ``i`` of ``X`` moves to position ``pi[i-1]``."""
    B, _, W = P.shape
    axes = [0] * n
    for i, target in enumerate(pi):
        axes[target - 1] = i + 1
    T = P.reshape((B,) + (2,) * n + (W,)).transpose([0] + axes + [n + 1])
    return T.reshape(B, 1 << n, W)


def permutation_transform(j: ClassicalJoint, pi: Sequence[int]) -> ClassicalJoint:
    """Joint of ``(Pi(X), W)`` where ``Pi(X)_{pi(i)} = X_i``."""
    pi = _check_permutation(pi, j.n)
    return ClassicalJoint(j.n, permute_probs(j.probs[None], j.n, pi)[0].copy())


@dataclass
class Theorem3Check:
    lhs: object
    rhs: object
    holds: bool


def theorem3_sides(P: np.ndarray, n: int, k: int, t: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the bitwise-sampling reduction for a stack of joints.

    Left: ``S`` uniform over k-subsets, guess ``X_S`` from ``(S, W)``.
    Right: ``Pi(X)_t`` guessed from ``(Pi, W)``, with ``S`` uniform and ``Pi``
    uniform among permutations mapping ``S`` onto ``t``.  Each permutation maps
    exactly one k-subset onto ``t``, so the pair ``(S, Pi)`` is a uniform
    permutation; all ``n!`` of them are enumerated.
    """
    t = tuple(t)
    lhs = sum(best_guess_value(subset_marginal(P, n, s)) for s in subsets(n, k)) / math.comb(n, k)
    rhs = 0
    count = 0
    for perm in itertools.permutations(range(1, n + 1)):
        rhs = rhs + best_guess_value(subset_marginal(permute_probs(P, n, perm), n, t))
        count += 1
    return lhs, rhs / count


def verify_theorem3(j: ClassicalJoint, k: int, t: Sequence[int], *, tol: float = 1e-12) -> Theorem3Check:
    if j.n > 5:
        raise ScaleError("exhaustive permutation enumeration is limited to n <= 5")
    t = validate_subset(t, j.n)
    if len(t) != k:
        raise ValueError(f"target subset {t} does not have size {k}")
    lhs, rhs = theorem3_sides(j.probs[None], j.n, k, t)
    lhs, rhs = lhs[0], rhs[0]
    return Theorem3Check(lhs, rhs, bool(abs(lhs - rhs) <= tol))


@dataclass
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int


def _chunk_stats(j: ClassicalJoint, k: int, trials: int, seed: int, stream: int, cache: dict) -> tuple[int, float, float]:
    rng = make_rng(seed, stream)
    values = np.empty(trials)
    for i in range(trials):
        t = tuple(sorted(v + 1 for v in _partial_fisher_yates(rng, j.n, k)))
        if t not in cache:
            cache[t] = float(best_guess_value(subset_marginal(j.probs[None], j.n, t))[0])
        values[i] = cache[t]
    mean = float(values.mean())
    return trials, mean, float(((values - mean) ** 2).sum())


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    """Chan et al. pairwise combination of (count, mean, M2)."""
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _pairwise_reduce(stats: list) -> tuple[int, float, float]:
    while len(stats) > 1:
        merged = [_merge(stats[i], stats[i + 1]) for i in range(0, len(stats) - 1, 2)]
        if len(stats) % 2:
            merged.append(stats[-1])
        stats = merged
    return stats[0]


def monte_carlo_pguess_subset(j: ClassicalJoint, k: int, trials: int, seed: int) -> MonteCarloEstimate:
    """Estimate :func:`pguess_subset` by sampling ``T``; the inner value is exact.

    Trials are split into fixed chunks of ``MC_CHUNK``, chunk ``i`` drawing from
    stream ``i``, and reduced pairwise in chunk order, so the result depends
    only on ``(joint, k, trials, seed)`` and not on ``QSV_THREADS``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= k <= j.n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    seed = parse_seed(seed)
    sizes = [MC_CHUNK] * (trials // MC_CHUNK) + ([trials % MC_CHUNK] if trials % MC_CHUNK else [])
    cache: dict = {}
    jobs = [(size, stream) for stream, size in enumerate(sizes)]
    workers = thread_count()
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda job: _chunk_stats(j, k, job[0], seed, job[1], {}), jobs))
    else:
        stats = [_chunk_stats(j, k, size, seed, stream, cache) for size, stream in jobs]
    count, mean, m2 = _pairwise_reduce(stats)
    stderr = math.sqrt(m2 / (count - 1) / count) if count > 1 else 0.0
    return MonteCarloEstimate(mean, stderr, count)
