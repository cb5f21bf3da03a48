"""The (n, k)-XOR code, its bit-extractor, and an exhaustive list-decodability check.

Codeword positions are indexed by the k-subsets of ``[n]`` in lexicographic
order; both subsets and positions (seeds) are 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .entropy_math import BitsLike, popcount, to_bits, validate_subset


class ScaleError(ValueError):
    """Raised when an exhaustive computation would leave its supported regime."""


def subset_unrank(n: int, k: int, idx: int) -> tuple[int, ...]:
    """The ``idx``-th (1-based) k-subset of ``[n]`` in lexicographic order."""
    total = math.comb(n, k)
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 1 <= idx <= total:
        raise IndexError(f"index {idx} outside [1, C({n},{k})={total}]")
    r = idx - 1
    out = []
    x = 1
    for slot in range(k, 0, -1):
        # skip every subset whose next element is x
        while (block := math.comb(n - x, slot - 1)) <= r:
            r -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def subset_rank(n: int, subset: tuple[int, ...]) -> int:
    """Inverse of :func:`subset_unrank`."""
    s = validate_subset(subset, n)
    k = len(s)
    r = 0
    prev = 0
    for slot, x in enumerate(s):
        for y in range(prev + 1, x):
            r += math.comb(n - y, k - slot - 1)
        prev = x
    return r + 1


def subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of ``[n]`` in lexicographic order."""
    return itertools.combinations(range(1, n + 1), k)


def subset_mask(subset: tuple[int, ...], n: int) -> int:
    """Bitmask of ``subset`` under the bit-1-is-MSB packing."""
    mask = 0
    for i in subset:
        mask |= 1 << (n - i)
    return mask


@dataclass(frozen=True)
class XorCode:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def m(self) -> int:
        return math.comb(self.n, self.k)

    def subset(self, seed: int) -> tuple[int, ...]:
        return subset_unrank(self.n, self.k, seed)

    def masks(self) -> np.ndarray:
        return np.array([subset_mask(s, self.n) for s in subsets(self.n, self.k)], dtype=np.int64)


def encode(code: XorCode, x: BitsLike) -> np.ndarray:
    """Codeword of ``x``: the parity of ``x`` on every k-subset, in lex order."""
    bits = to_bits(x)
    if bits.size != code.n:
        raise ValueError(f"message has {bits.size} bits, code expects {code.n}")
    idx = np.array(list(subsets(code.n, code.k)), dtype=np.int64) - 1
    return (bits[idx].sum(axis=1) & 1).astype(np.uint8)


def extract_bit(code: XorCode, x: BitsLike, seed: int) -> int:
    """``encode(code, x)[seed]`` without building the codeword."""
    bits = to_bits(x)
    if bits.size != code.n:
        raise ValueError(f"message has {bits.size} bits, code expects {code.n}")
    s = code.subset(seed)
    return int(bits[np.array(s) - 1].sum() & 1)


def _codeword_ints(code: XorCode) -> np.ndarray:
    """Codewords of all ``2^n`` messages packed as integers (position 1 = MSB)."""
    n, m = code.n, code.m
    masks = code.masks()
    xs = np.arange(1 << n, dtype=np.int64)
    parities = popcount(xs[:, None] & masks[None, :]) & 1
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return (parities * weights).sum(axis=1)


def greedy_cover(members: int, n: int, radius: int) -> list[int]:
    """Greedy cover of the message set ``members`` (bitmask over ``2^n``
    messages) by Hamming balls of ``radius`` centred anywhere in ``{0,1}^n``.
    Ties pick the lowest centre."""
    balls = _ball_masks(n, radius)
    uncovered = members
    centres = []
    while uncovered:
        gains = [(uncovered & b).bit_count() for b in balls]
        best = max(range(len(balls)), key=lambda c: (gains[c], -c))
        centres.append(best)
        uncovered &= ~balls[best]
    return centres


def optimal_cover_size(members: int, n: int, radius: int) -> int:
    """Minimum number of radius-``radius`` balls covering ``members`` (exhaustive)."""
    if n > 3:
        raise ScaleError("exact cover is only supported for n <= 3")
    if not members:
        return 0
    balls = _ball_masks(n, radius)
    for size in range(1, len(balls) + 1):
        for combo in itertools.combinations(balls, size):
            covered = 0
            for b in combo:
                covered |= b
            if members & ~covered == 0:
                return size
    raise AssertionError("unreachable: singleton balls always cover")


def _ball_masks(n: int, radius: int) -> list[int]:
    out = []
    for c in range(1 << n):
        mask = 0
        for x in range(1 << n):
            if (c ^ x).bit_count() <= radius:
                mask |= 1 << x
        out.append(mask)
    return out


@dataclass
class ListDecodeResult:
    holds: bool
    witness: Optional[np.ndarray]
    greedy_list_size: int
    max_list_members: int
    radius_message: int


LENGTH_MISMATCH_NOTE = (
    "list centres are taken in message space {0,1}^n with radius delta*n "
    "(the defining inequality compares an m-bit word with n-bit centres)"
)


def check_list_decodable(code: XorCode, eps: float, delta: float, L: int) -> ListDecodeResult:
    """Exhaustively test ``(eps, delta, L)`` approximate list-decodability.

    For every received word ``c'`` in ``{0,1}^m`` the near set
    ``B(c') = {x : d_H(c', C(x)) < (1/2 - eps) m}`` is covered greedily by
    Hamming balls of radius ``delta * n`` in message space.  ``holds`` is a
    sound certificate (greedy never undercounts); the witness is the first
    received word whose greedy cover needs more than ``L`` balls.
    """
    n, m = code.n, code.m
    if n > 4 or m > 20:
        raise ScaleError(f"exhaustive regime is n <= 4 and C(n,k) <= 20; got n={n}, m={m}")
    if not 0.0 <= eps <= 0.5:
        raise ValueError(f"eps must lie in [0, 1/2], got {eps}")
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    # d_H < (1/2 - eps) m, compared exactly
    bound = (Fraction(1, 2) - Fraction(eps)) * m
    max_dist = math.ceil(bound) - 1
    radius = math.floor(Fraction(delta) * n)

    codewords = _codeword_ints(code)
    received = np.arange(1 << m, dtype=np.int64)
    member_bits = np.zeros(received.shape, dtype=np.int64)
    for x, cw in enumerate(codewords):
        near = popcount(received ^ cw) <= max_dist
        member_bits |= near.astype(np.int64) << x

    uniq, first_idx = np.unique(member_bits, return_index=True)
    worst = 0
    witness = None
    witness_word = None
    for members, idx in zip(uniq.tolist(), first_idx.tolist()):
        size = len(greedy_cover(members, n, radius))
        if size > L and (witness_word is None or idx < witness_word):
            witness_word = idx
        worst = max(worst, size)
    if witness_word is not None:
        witness = np.array([(witness_word >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.uint8)
    return ListDecodeResult(
        holds=witness is None,
        witness=witness,
        greedy_list_size=worst,
        max_list_members=int(max((u.bit_count() for u in uniq.tolist()), default=0)),
        radius_message=radius,
    )
