"""Exact guessing probabilities with classical side information.

A :class:`ClassicalJoint` holds ``P[x, w]`` for an n-bit string ``X`` (row
``x`` is the integer value of the string, bit 1 most significant) and a finite
side-information value ``W``.  Probabilities are either floats or, for the
exact path, ``Fraction`` objects in an object array; every function here works
on both and stays exact on the latter.

The kernels operate on stacks of joints with shape ``(batch, 2^n, w_size)``
so the exhaustive sweeps over storage functions run vectorised.

Strings in error space (``e`` below) are ``k``-bit guess/truth differences
packed the same way as ``x``; ``e = 0`` means the whole subset was guessed
right.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .entropy_math import popcount, validate_subset
from .xor_code import ScaleError, subset_mask, subsets

SUM_TOL = 1e-12
COMPARE_TOL = 1e-12
EXACT_MAX_CELLS = 1 << 16


@dataclass
class ClassicalJoint:
    n: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs)
        if probs.ndim != 2 or probs.shape[0] != 1 << self.n:
            raise ValueError(f"probs must have shape (2^n={1 << self.n}, w_size), got {probs.shape}")
        if probs.shape[1] < 1:
            raise ValueError("w_size must be >= 1")
        if probs.dtype != object:
            probs = probs.astype(np.float64)
            if not np.all(np.isfinite(probs)):
                raise ValueError("probabilities must be finite")
        if any(p < 0 for p in probs.ravel()):
            raise ValueError("probabilities must be non-negative")
        total = probs.sum()
        if probs.dtype == object and all(isinstance(p, (int, Fraction)) for p in probs.ravel()):
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        elif abs(float(total) - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {float(total)!r}, not 1 within {SUM_TOL}")
        self.probs = probs

    @property
    def w_size(self) -> int:
        return self.probs.shape[1]

    @property
    def exact(self) -> bool:
        return self.probs.dtype == object

    @classmethod
    def from_function(
        cls, n: int, f: Callable[[int], int], w_size: Optional[int] = None, *, exact: bool = False
    ) -> "ClassicalJoint":
        """Uniform ``X`` with deterministic side information ``W = f(X)``."""
        values = [int(f(x)) for x in range(1 << n)]
        w_size = max(values) + 1 if w_size is None else w_size
        if exact:
            probs = np.full((1 << n, w_size), Fraction(0), dtype=object)
            for x, w in enumerate(values):
                probs[x, w] = Fraction(1, 1 << n)
        else:
            probs = np.zeros((1 << n, w_size))
            probs[np.arange(1 << n), values] = 2.0**-n
        return cls(n, probs)

    @classmethod
    def uniform(cls, n: int, *, exact: bool = False) -> "ClassicalJoint":
        """Uniform ``X`` with no side information."""
        return cls.from_function(n, lambda x: 0, 1, exact=exact)

    @classmethod
    def revealing_bits(cls, n: int, positions: Sequence[int], *, exact: bool = False) -> "ClassicalJoint":
        """Uniform ``X`` with ``W = X_positions`` (1-based positions)."""
        pos = validate_subset(positions, n)
        mask = subset_mask(pos, n)
        return cls.from_function(n, lambda x: _compress(x, mask, n), 1 << len(pos), exact=exact)

    def as_exact(self) -> "ClassicalJoint":
        """Rational copy; only sensible when the float entries are the intended values."""
        if self.exact:
            return self
        if self.probs.size > EXACT_MAX_CELLS:
            raise ScaleError("exact path is limited to 2^16 cells")
        probs = np.array([[Fraction(p) for p in row] for row in self.probs], dtype=object)
        return ClassicalJoint(self.n, probs)

    def to_dict(self) -> dict:
        return {"n": self.n, "w_size": self.w_size, "probs": [[float(p) for p in row] for row in self.probs]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ClassicalJoint":
        """Parse the JSON form ``{"n", "w_size", "probs"}``."""
        try:
            n, w_size, rows = int(data["n"]), int(data["w_size"]), data["probs"]
        except KeyError as exc:
            raise ValueError(f"missing field {exc.args[0]!r}") from None
        if len(rows) != 1 << n:
            raise ValueError(f"probs: expected {1 << n} rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != w_size:
                raise ValueError(f"probs[{i}]: expected {w_size} entries, got {len(row)}")
        return cls(n, np.array(rows, dtype=np.float64))


def _compress(x: int, mask: int, n: int) -> int:
    """Bits of ``x`` selected by ``mask``, packed in order (first selected = MSB)."""
    out = 0
    for i in range(n - 1, -1, -1):
        if mask >> i & 1:
            out = (out << 1) | (x >> i & 1)
    return out


def _division(total, count: int):
    if isinstance(total, np.ndarray) and total.dtype == object:
        return np.array([Fraction(v) / count for v in total], dtype=object)
    return total / count


def _batch(probs: np.ndarray) -> np.ndarray:
    return probs[None] if probs.ndim == 2 else probs


# -- batched kernels over arrays shaped (batch, 2^n, w_size) ------------------


def subset_marginal(P: np.ndarray, n: int, t: Sequence[int]) -> np.ndarray:
    """``P[X_t = v, w]`` with shape ``(batch, 2^|t|, w_size)``."""
    B, _, W = P.shape
    T = P.reshape((B,) + (2,) * n + (W,))
    drop = tuple(1 + i for i in range(n) if (i + 1) not in t)
    M = T.sum(axis=drop) if drop else T
    return M.reshape(B, 1 << len(t), W)


def parity_marginal(P: np.ndarray, n: int, s: Sequence[int]) -> np.ndarray:
    """``P[XOR of X_s = b, w]`` with shape ``(batch, 2, w_size)``."""
    mask = subset_mask(tuple(s), n)
    par = popcount(np.arange(1 << n) & mask) & 1
    return np.stack([P[:, par == 0, :].sum(axis=1), P[:, par == 1, :].sum(axis=1)], axis=1)


def best_guess_value(M: np.ndarray) -> np.ndarray:
    """``sum_w max_v M[v, w]`` per batch entry."""
    return M.max(axis=1).sum(axis=1)


def pguess_subset_batch(P: np.ndarray, n: int, k: int) -> np.ndarray:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    total = sum(best_guess_value(subset_marginal(P, n, t)) for t in subsets(n, k))
    return _division(total, math.comb(n, k))


def pguess_xor_batch(P: np.ndarray, n: int, size: int) -> np.ndarray:
    if not 0 <= size <= n:
        raise ValueError(f"need 0 <= size <= n, got size={size}, n={n}")
    if size == 0:
        # the empty XOR is the constant 0
        one = Fraction(1) if P.dtype == object else 1.0
        return np.full(P.shape[0], one, dtype=P.dtype)
    total = sum(best_guess_value(parity_marginal(P, n, s)) for s in subsets(n, size))
    return _division(total, math.comb(n, size))


def optimal_guesses(M: np.ndarray) -> np.ndarray:
    """Argmax guess per side-information value, ties to the lowest string."""
    return M.argmax(axis=1)


def error_distribution_batch(M: np.ndarray, guesses: np.ndarray) -> np.ndarray:
    """Distribution of ``guess XOR truth`` for guesses ``(batch, w_size)``."""
    B, V, W = M.shape
    e = np.arange(V)
    # truth v = guess ^ e
    idx = guesses[:, None, :] ^ e[None, :, None]
    gathered = np.take_along_axis(M, idx, axis=1)
    return gathered.sum(axis=2)


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis.

    ``out[s] = sum_w values[w] * (-1)^popcount(w & s)``; O(k 2^k) butterflies.
    """
    out = np.array(values, copy=True)
    size = out.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    h = 1
    while h < size:
        shaped = out.reshape(out.shape[:-1] + (size // (2 * h), 2, h))
        a = shaped[..., 0, :].copy()
        b = shaped[..., 1, :]
        shaped[..., 0, :] = a + b
        shaped[..., 1, :] = a - b
        out = shaped.reshape(out.shape)
        h *= 2
    return out


# -- single-joint API ---------------------------------------------------------


def pguess_whole(j: ClassicalJoint):
    """Optimal probability of guessing all of ``X`` from ``W``."""
    return best_guess_value(j.probs[None])[0]


def minentropy(j: ClassicalJoint) -> float:
    return -math.log2(pguess_whole(j))


def pguess_subset(j: ClassicalJoint, k: int):
    """Optimal probability of guessing ``X_T`` from ``(T, W)``, ``T`` a uniform k-subset."""
    return pguess_subset_batch(j.probs[None], j.n, k)[0]


def pguess_xor(j: ClassicalJoint, size: int):
    """Optimal probability of guessing the parity of ``X_S`` from ``(S, W)``, ``|S| = size`` uniform."""
    return pguess_xor_batch(j.probs[None], j.n, size)[0]


def brw_rhs(p_list: Sequence) -> float:
    """``2^-k sum_j C(k, j) (2 p_j - 1)`` for ``p_0, ..., p_k``."""
    k = len(p_list) - 1
    if k < 0:
        raise ValueError("need at least p_0")
    for p in p_list:
        if not 0 <= p <= 1:
            raise ValueError(f"p_j must lie in [0, 1], got {p}")
    if all(isinstance(p, (int, Fraction)) for p in p_list):
        return sum(math.comb(k, jj) * (2 * p - 1) for jj, p in enumerate(p_list)) / Fraction(1 << k)
    terms = [math.comb(k, jj) * (2.0 * float(p) - 1.0) for jj, p in enumerate(p_list)]
    return math.fsum(terms) / 2.0**k


@dataclass
class BrwCheck:
    lhs: object
    rhs: object
    holds: bool
    slack: object
    p_list: tuple = ()


def verify_brw(j: ClassicalJoint, k: int, *, tol: float = COMPARE_TOL) -> BrwCheck:
    """Compare the subset guessing probability with the XOR-based bound."""
    if not 1 <= k <= j.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={j.n}")
    lhs = pguess_subset(j, k)
    p_list = tuple(pguess_xor(j, size) for size in range(k + 1))
    rhs = brw_rhs(p_list)
    return BrwCheck(lhs, rhs, bool(lhs <= rhs + tol), rhs - lhs, p_list)


@dataclass
class ErrorSpectrum:
    k: int
    p_w: np.ndarray
    q_s: np.ndarray

    def inverse(self) -> np.ndarray:
        """``p_w(w) = sum_s q_s(s) chi_s(w)``."""
        return fwht(self.q_s)


def walsh_transform(p_w: Sequence) -> ErrorSpectrum:
    """Coefficients ``q_s = 2^-k sum_w p_w(w) chi_s(w)`` of a distribution on ``{0,1}^k``."""
    p = np.asarray(p_w)
    if p.ndim != 1:
        raise ValueError("p_w must be one-dimensional")
    size = p.size
    if size == 0 or size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    k = size.bit_length() - 1
    if p.dtype != object:
        p = p.astype(np.float64)
        if np.any(p < -SUM_TOL) or abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError("p_w is not a probability distribution")
        q = fwht(p) / size
    else:
        if any(v < 0 for v in p) or sum(p) != 1:
            raise ValueError("p_w is not a probability distribution")
        q = np.array([Fraction(v) / size for v in fwht(p)], dtype=object)
    return ErrorSpectrum(k, p, q)


@dataclass
class SubsetStrategy:
    """A guess ``g(t, w)`` (packed k-bit string) for every k-subset ``t``."""

    n: int
    k: int
    guesses: dict[tuple[int, ...], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        missing = [t for t in subsets(self.n, self.k) if t not in self.guesses]
        if missing:
            raise ValueError(f"strategy undefined on subsets {missing[:3]}...")

    @classmethod
    def optimal(cls, j: ClassicalJoint, k: int) -> "SubsetStrategy":
        return cls(j.n, k, {t: optimal_guesses(subset_marginal(j.probs[None], j.n, t))[0] for t in subsets(j.n, k)})

    @classmethod
    def constant(cls, j: ClassicalJoint, k: int, guess: int = 0) -> "SubsetStrategy":
        return cls(j.n, k, {t: np.full(j.w_size, guess, dtype=np.int64) for t in subsets(j.n, k)})


def error_distribution(strategy: SubsetStrategy, j: ClassicalJoint, t: Sequence[int]) -> np.ndarray:
    """Distribution of the strategy's error string on subset ``t``."""
    t = validate_subset(t, j.n)
    M = subset_marginal(j.probs[None], j.n, t)
    return error_distribution_batch(M, strategy.guesses[t][None])[0]


@dataclass
class FourierCheck:
    lhs: object
    rhs: object
    holds: bool


def verify_fourier_identity(
    strategy: SubsetStrategy, j: ClassicalJoint, t: Sequence[int], *, tol: float = COMPARE_TOL
) -> FourierCheck:
    """Check ``P(e = 0) = sum_s q_s`` for the strategy's error distribution on ``t``."""
    p_err = error_distribution(strategy, j, t)
    spectrum = walsh_transform(p_err)
    lhs = p_err[0]
    rhs = spectrum.q_s.sum()
    return FourierCheck(lhs, rhs, bool(abs(lhs - rhs) <= tol))


def _relative_mask(s: Sequence[int], t: Sequence[int]) -> int:
    """Mask of the positions of ``s`` inside ``t`` (first element of ``t`` = MSB)."""
    k = len(t)
    mask = 0
    for i, x in enumerate(t):
        if x in s:
            mask |= 1 << (k - 1 - i)
    return mask


def xor_guess_success_batch(P: np.ndarray, n: int, k: int, guesses: Mapping, s: Sequence[int]) -> np.ndarray:
    """Exact success of the XOR guesser built from a subset strategy.

    ``t`` is drawn from ``P(T | S = s)``: ``T`` uniform over k-subsets and
    ``S`` a uniform subset of ``T`` make this uniform over the k-subsets
    containing ``s``.  The guess is the parity of the strategy's guess on the
    positions of ``s``.
    """
    s = tuple(s)
    supersets = [t for t in subsets(n, k) if set(s) <= set(t)]
    total = 0
    for t in supersets:
        M = subset_marginal(P, n, t)
        p_err = error_distribution_batch(M, guesses[t])
        chi = 1 - 2 * (popcount(np.arange(1 << k) & _relative_mask(s, t)) & 1)
        # (1 + chi)/2 selects error strings with even parity on s
        total = total + p_err[:, chi == 1].sum(axis=1)
    return _division(total, len(supersets))


def xor_guesser_from_subset_strategy(strategy: SubsetStrategy, j: ClassicalJoint, s: Sequence[int]):
    s = validate_subset(s, j.n)
    if len(s) > strategy.k:
        raise ValueError(f"|s|={len(s)} exceeds the strategy's subset size {strategy.k}")
    guesses = {t: g[None] for t, g in strategy.guesses.items()}
    return xor_guess_success_batch(j.probs[None], j.n, strategy.k, guesses, s)[0]


# -- storage-function adversaries ---------------------------------------------

STORAGE_FUNCTION_CAP = 1 << 20


def storage_function_tables(n: int, m: int, *, cap: int = STORAGE_FUNCTION_CAP) -> np.ndarray:
    """Every ``f: {0,1}^n -> {0,1}^m`` as a value table, shape ``(count, 2^n)``."""
    if n < 1 or n > 4:
        raise ScaleError(f"storage functions are enumerated for 1 <= n <= 4, got n={n}")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}")
    count = (1 << m) ** (1 << n)
    if count > cap:
        raise ScaleError(f"{count} storage functions exceed the cap of {cap}")
    grids = np.indices((1 << m,) * (1 << n)).reshape(1 << n, -1).T
    return grids.astype(np.int64)


def storage_function_probs(n: int, m: int, *, cap: int = STORAGE_FUNCTION_CAP) -> np.ndarray:
    """Joint tables ``P[f, x, w] = 2^-n [w = f(x)]`` for all storage functions."""
    tables = storage_function_tables(n, m, cap=cap)
    P = np.zeros((tables.shape[0], 1 << n, 1 << m))
    P[np.arange(tables.shape[0])[:, None], np.arange(1 << n)[None, :], tables] = 2.0**-n
    return P


def enumerate_storage_functions(n: int, m: int, *, exact: bool = False, cap: int = STORAGE_FUNCTION_CAP) -> Iterator[ClassicalJoint]:
    """Yield uniform-``X`` joints with ``W = f(X)`` for every ``f`` into ``m`` bits.

    There are ``(2^m)^(2^n)`` of them; more than ``cap`` raises ``ScaleError``.
    """
    for table in storage_function_tables(n, m, cap=cap):
        values = table.tolist()
        yield ClassicalJoint.from_function(n, values.__getitem__, 1 << m, exact=exact)


def random_joint(rng: np.random.Generator, n: int, w_size: int) -> ClassicalJoint:
    """A random stochastic joint: Dirichlet(1) weights over all ``(x, w)`` cells."""
    probs = rng.dirichlet(np.ones((1 << n) * w_size)).reshape(1 << n, w_size)
    probs /= probs.sum()
    return ClassicalJoint(n, probs)
