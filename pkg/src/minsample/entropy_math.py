"""Scalar entropy functions, binomial tails and bit-string helpers.

Positions inside bit strings follow the 1-based ``[n] = {1, ..., n}``
convention.  When a string is packed into an integer (row index of a joint
distribution, codeword index, ...) bit 1 is the most significant bit.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

BitsLike = Union[str, Sequence[int], np.ndarray]

BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200
EXACT_BINOMIAL_MAX_K = 64
# math.comb is quadratic in k on older interpreters
EXACT_COMB_MAX_K = 2048

_LN2 = math.log(2.0)


def binary_entropy(x: float) -> float:
    """Binary entropy in bits, with ``0 log 0 = 0``."""
    x = float(x)
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise ValueError(f"binary_entropy is defined on [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def binary_entropy_inv(y: float) -> float:
    """Return the ``x`` in ``[0, 1/2]`` with ``binary_entropy(x) == y``.

    Bisection on ``[0, 1/2]``, where the entropy is strictly increasing.  The
    loop runs until ``|H(x) - y| <= 1e-12`` *and* the bracket has collapsed to
    adjacent doubles (or 200 iterations), so the inverse is accurate in ``x``
    as well near the flat maximum at 1/2.
    """
    y = float(y)
    if not 0.0 <= y <= 1.0 or math.isnan(y):
        raise ValueError(f"binary_entropy_inv is defined on [0, 1], got {y!r}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    # pick the closer endpoint
    if abs(binary_entropy(lo) - y) <= abs(binary_entropy(hi) - y):
        return lo
    return hi


def hoeffding_tail(n: int, eps: float) -> float:
    """Hoeffding bound ``exp(-2 n eps^2)`` on ``Pr[mean <= mu - eps]``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return math.exp(-2.0 * n * eps * eps)


def binomial_tail_below_exact(k: int, threshold: int) -> Fraction:
    """``sum_{j <= threshold} C(k, j) / 2^k`` as an exact fraction."""
    _check_tail_args(k, threshold)
    return Fraction(_binomial_prefix_sum(k, threshold), 1 << k)


def log_binomial_tail_below(k: int, threshold: int) -> float:
    """Natural log of ``sum_{j <= threshold} C(k, j) / 2^k``.

    Stays finite far below the double underflow limit, which the proof-step
    audit needs for large ``k``.
    """
    _check_tail_args(k, threshold)
    if 2 * threshold >= k:
        return math.log1p(-_small_tail(k, k - threshold - 1))
    mantissa, exponent = _scaled_tail(k, threshold)
    return math.log(mantissa) + exponent * _LN2


def binomial_tail_below(k: int, threshold: int) -> float:
    """``Pr[Bin(k, 1/2) <= threshold]``.

    Exact integer arithmetic for ``k <= 64``.  Above that the peak term
    ``C(k, threshold) / 2^k`` is formed as a mantissa/exponent pair and the
    other terms are accumulated as ratios to it with ``math.fsum``; the
    relative error stays within a few ulp times ``sqrt(k)``.
    """
    _check_tail_args(k, threshold)
    if k <= EXACT_BINOMIAL_MAX_K:
        return float(binomial_tail_below_exact(k, threshold))
    if 2 * threshold >= k:
        # the head holds at least half the mass; subtract the small complement
        return 1.0 - _small_tail(k, k - threshold - 1)
    return _small_tail(k, threshold)


def _small_tail(k: int, threshold: int) -> float:
    if threshold < 0:
        return 0.0
    mantissa, exponent = _scaled_tail(k, threshold)
    return math.ldexp(mantissa, exponent)


def _scaled_tail(k: int, threshold: int) -> tuple[float, int]:
    """Tail sum as ``mantissa * 2**exponent``; requires ``threshold < k/2``."""
    terms = [1.0]
    ratio = 1.0
    for j in range(threshold, 0, -1):
        ratio *= j / (k - j + 1)
        if ratio < 1e-20:
            break
        terms.append(ratio)
    mantissa, exponent = _scaled_comb(k, threshold)
    m, e = math.frexp(mantissa * math.fsum(terms))
    return m, exponent + e - k


def _scaled_comb(k: int, t: int) -> tuple[float, int]:
    """``C(k, t)`` as ``(mantissa, exponent)`` without big integers."""
    t = min(t, k - t)
    if t == 0:
        return 0.5, 1
    if k <= EXACT_COMB_MAX_K:
        c = math.comb(k, t)
        shift = max(c.bit_length() - 60, 0)
        m, e = math.frexp(float(Fraction(c, 1 << shift)))
        return m, e + shift
    i = np.arange(1, t + 1, dtype=np.float64)
    m, e = np.frexp((k - t + i) / i)
    exponent = int(e.sum())
    while m.size > 1:
        pad = (-m.size) % 32
        m = np.concatenate([m, np.ones(pad)]).reshape(-1, 32).prod(axis=1)
        m, e = np.frexp(m)
        exponent += int(e.sum())
    return float(m[0]), exponent


def _binomial_prefix_sum(k: int, threshold: int) -> int:
    total = 0
    c = 1
    for j in range(threshold + 1):
        total += c
        c = c * (k - j) // (j + 1)
    return total


def _check_tail_args(k: int, threshold: int) -> None:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if not 0 <= threshold <= k:
        raise ValueError(f"threshold must lie in [0, k={k}], got {threshold}")


def to_bits(x: BitsLike) -> np.ndarray:
    """Coerce ``"0110"``, a 0/1 sequence or an array into a ``uint8`` vector."""
    if isinstance(x, str):
        if not x or set(x) - {"0", "1"}:
            raise ValueError(f"not a bit string: {x!r}")
        return np.frombuffer(x.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("a bit string must be a non-empty 1-d sequence")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bit strings may only contain 0 and 1")
    return arr.astype(np.uint8)


def bits_to_int(x: BitsLike) -> int:
    """Pack bits into an integer, bit 1 most significant."""
    value = 0
    for b in to_bits(x):
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, n: int) -> np.ndarray:
    if not 0 <= value < (1 << n):
        raise ValueError(f"{value} does not fit in {n} bits")
    return np.array([(value >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def bits_str(x: BitsLike) -> str:
    return "".join(str(int(b)) for b in to_bits(x))


def hamming_distance(a: BitsLike, b: BitsLike) -> int:
    """Number of positions where ``a`` and ``b`` differ."""
    a, b = to_bits(a), to_bits(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return int(np.count_nonzero(a != b))


def popcount(values: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
    """Bit count of an int or of every entry of an integer array."""
    if isinstance(values, (int, np.integer)):
        return int(values).bit_count()
    return np.bitwise_count(np.asarray(values, dtype=np.uint64)).astype(np.int64)


def validate_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    """Return ``subset`` as a strictly increasing tuple of positions in ``[n]``."""
    s = tuple(int(i) for i in subset)
    if any(i < 1 or i > n for i in s):
        raise ValueError(f"subset {s} has positions outside [1, {n}]")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ValueError(f"subset {s} must be strictly increasing")
    return s
