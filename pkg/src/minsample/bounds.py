"""Closed-form min-entropy sampling and random-access-code bounds.

Each evaluator returns a :class:`BoundReport`: the headline value, any
secondary outputs, and a ledger of named preconditions with numeric margins
(``margin >= 0`` when satisfied).  Precondition failures are reported, never
raised; only malformed inputs raise ``ValueError``.

Logarithms are base 2 unless a formula uses ``ln`` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .entropy_math import (
    binary_entropy,
    binary_entropy_inv,
    binomial_tail_below_exact,
    log_binomial_tail_below,
)

NON_RIGOROUS = "non-rigorous comparison: C_eta is not known explicitly; caller-supplied value used"


@dataclass(frozen=True)
class Precondition:
    name: str
    satisfied: bool
    margin: float


@dataclass
class BoundReport:
    """Evaluated bound plus its precondition ledger.

    Secondary outputs live in ``outputs`` and are also readable as attributes,
    e.g. ``report.rate_loss``.
    """

    name: str
    value: float
    vacuous: bool
    preconditions: tuple[Precondition, ...] = ()
    params: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def __getattr__(self, item: str) -> Any:
        outputs = self.__dict__.get("outputs", {})
        if item in outputs:
            return outputs[item]
        raise AttributeError(item)

    @property
    def preconditions_hold(self) -> bool:
        return all(p.satisfied for p in self.preconditions)

    def precondition(self, name: str) -> Precondition:
        for p in self.preconditions:
            if p.name == name:
                return p
        raise KeyError(name)


def _pre(name: str, lhs: float, rhs: float, *, strict: bool = False) -> Precondition:
    """Precondition ``lhs <= rhs`` (or ``<``) with margin ``rhs - lhs``."""
    ok = lhs < rhs if strict else lhs <= rhs
    return Precondition(name, bool(ok), float(rhs - lhs))


def _exact(x: float | int | Fraction) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _exact_log2_inv(p: float) -> Optional[int]:
    """``log2(1/p)`` when ``p`` is an exact power of two, else ``None``."""
    m, e = math.frexp(p)
    if m == 0.5:
        return 1 - e
    return None


def _check_prob_open(name: str, eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {eps!r}")


def _check_k_n(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")


# -- Koenig-Renner block and recursive sampling -------------------------------


def kr_blockwise(num_blocks: int, alphabet_bits: float, sampled_blocks: int, xi: float) -> BoundReport:
    """Rate loss and smoothing error of blockwise min-entropy sampling.

    ``num_blocks`` blocks over an alphabet of ``2**alphabet_bits`` symbols,
    ``sampled_blocks`` of them chosen uniformly.  With
    ``kappa = num_blocks / (sampled_blocks * alphabet_bits)`` the sampled rate
    is at least the source rate minus ``3 xi + 2 kappa log(1/kappa)``, up to
    smoothing ``2 * 2^(-xi n log|X|) + 3 e^(-r xi^2 / 8)``.
    """
    n, b, r = num_blocks, alphabet_bits, sampled_blocks
    if n < 1 or r < 1 or b <= 0:
        raise ValueError("num_blocks, sampled_blocks and alphabet_bits must be positive")
    if r > n:
        raise ValueError(f"sampled_blocks={r} exceeds num_blocks={n}")
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    kappa = n / (r * b)
    rate_loss = 3.0 * xi + 2.0 * kappa * math.log2(1.0 / kappa)
    smooth_eps = 2.0 * 2.0 ** (-xi * n * b) + 3.0 * math.exp(-r * xi * xi / 8.0)
    kappa_exact = Fraction(n) / (Fraction(r) * _exact(b))
    pre = Precondition("kappa <= 0.15", kappa_exact <= Fraction(15, 100), float(Fraction(15, 100) - kappa_exact))
    return BoundReport(
        name="kr_blockwise",
        value=rate_loss,
        vacuous=rate_loss >= 1.0 or smooth_eps >= 1.0,
        preconditions=(pre,),
        params=dict(num_blocks=n, alphabet_bits=b, sampled_blocks=r, xi=xi),
        outputs=dict(kappa=kappa, rate_loss=rate_loss, smooth_eps=smooth_eps),
    )


def _floor_power(n: int, f: int) -> int:
    """``floor(n ** ((3/4) ** f))`` computed exactly for moderate ``f``."""
    est = math.floor(2.0 ** (math.log2(n) * 0.75**f))
    if f > 8:
        return est
    num, den = 3**f, 4**f
    target = n**num
    s = max(est - 2, 1)
    while (s + 1) ** den <= target:
        s += 1
    while s > 1 and s**den > target:
        s -= 1
    return s


def kr_recursive(n_bits: int, f: int, r: int) -> BoundReport:
    """Recursive sampling bound: ``n^((3/4)^f)`` sampled bits, rate loss
    ``5 f log(r) / r^(1/4)``, smoothing ``5 f 2^(-sqrt(r)/8)``."""
    if f < 1 or r < 2 or n_bits < 1:
        raise ValueError(f"need f >= 1, r >= 2, n_bits >= 1; got f={f}, r={r}, n_bits={n_bits}")
    sample_size = _floor_power(n_bits, f)
    rate_loss = 5.0 * f * math.log2(r) / r**0.25
    smooth_eps = 5.0 * f * 2.0 ** (-math.sqrt(r) / 8.0)
    pre = Precondition("n^((3/4)^f) >= r^4", sample_size >= r**4, float(sample_size - r**4))
    return BoundReport(
        name="kr_recursive",
        value=rate_loss,
        vacuous=rate_loss >= 1.0 or smooth_eps >= 1.0,
        preconditions=(pre,),
        params=dict(n_bits=n_bits, f=f, r=r),
        outputs=dict(sample_size=sample_size, rate_loss=rate_loss, smooth_eps=smooth_eps),
    )


# -- extractors from list-decodable codes -------------------------------------


def listdecode_extractor_threshold(n: int, delta: float, L: int, eps: float) -> BoundReport:
    """Entropy above which an extractor from an ``(eps, delta, L)``
    approximately list-decodable code is an ``(ell, eps)`` strong bit-extractor:
    ``ell > H(delta) n + log L + log(2/eps)``."""
    if not 0.0 <= delta <= 0.5:
        raise ValueError(f"delta must lie in [0, 1/2], got {delta}")
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    _check_prob_open("eps", eps)
    ell = binary_entropy(delta) * n + math.log2(L) + math.log2(2.0 / eps)
    return BoundReport(
        name="listdecode_extractor_threshold",
        value=ell,
        vacuous=ell >= n,
        params=dict(n=n, delta=delta, L=L, eps=eps),
        outputs=dict(ell=ell),
        notes=("strict inequality: min-entropy must exceed ell",),
    )


def kt_lift(ell: float, eps: float) -> BoundReport:
    """Classical ``(ell, eps)`` bit-extractor to quantum-proof
    ``(ell + log(1/eps), 3 sqrt(eps))``."""
    _check_prob_open("eps", eps)
    new_ell = ell + math.log2(1.0 / eps)
    error = 3.0 * math.sqrt(eps)
    return BoundReport(
        name="kt_lift",
        value=error,
        vacuous=error >= 1.0,
        params=dict(ell=ell, eps=eps),
        outputs=dict(ell=new_ell, error=error),
    )


def _entropy_or_nan(arg: float) -> float:
    return binary_entropy(arg) if 0.0 <= arg <= 1.0 else math.nan


def xor_extractor_threshold(n: int, k: int, eps: float) -> BoundReport:
    """Entropy threshold for the ``(n, k)``-XOR-code extractor against quantum
    side information: ``ell > H((1/k) ln(2/eps)) n + 4 log(1/eps) + 3`` with
    error ``3 sqrt(eps)``.

    An entropy argument above 1/2 is reported as a failed precondition and is
    not clipped; above 1 the threshold itself is undefined (``nan``).
    """
    _check_k_n(k, n)
    _check_prob_open("eps", eps)
    arg = math.log(2.0 / eps) / k
    ell = _entropy_or_nan(arg) * n + 4.0 * math.log2(1.0 / eps) + 3.0
    quantum_error = 3.0 * math.sqrt(eps)
    floor = Fraction(2 * k * k, 2**n)
    pres = (
        Precondition("eps > 2k^2/2^n", _exact(eps) > floor, float(_exact(eps) - floor)),
        _pre("k >= 2 ln(2/eps)", 2.0 * math.log(2.0 / eps), k),
    )
    return BoundReport(
        name="xor_extractor_threshold",
        value=ell,
        vacuous=math.isnan(ell) or ell >= n or quantum_error >= 1.0,
        preconditions=pres,
        params=dict(n=n, k=k, eps=eps),
        outputs=dict(ell=ell, quantum_error=quantum_error, entropy_argument=arg),
        notes=("strict inequality: min-entropy must exceed ell",),
    )


def lemma42_params(n: int, k: int, eps: float) -> BoundReport:
    """List-decoding parameters of the ``(n, k)``-XOR code:
    ``delta = (1/k) ln(2/eps)``, ``L = ceil(4/eps^2)``, valid for
    ``eps > 2 k^2 / 2^n``."""
    _check_k_n(k, n)
    _check_prob_open("eps", eps)
    delta = math.log(2.0 / eps) / k
    e = _exact(eps)
    L = math.ceil(4 / (e * e))
    floor = Fraction(2 * k * k, 2**n)
    pre = Precondition("eps > 2k^2/2^n", e > floor, float(e - floor))
    return BoundReport(
        name="lemma42_params",
        value=delta,
        vacuous=delta >= 1.0,
        preconditions=(pre,),
        params=dict(n=n, k=k, eps=eps),
        outputs=dict(delta=delta, L=L),
    )


# -- the main sampling theorem and its corollaries ----------------------------


def _log_inv_p_le_cap(k: int, p: float) -> Precondition:
    """``log2(1/p) <= k/12 - 5``, exactly when ``p`` is a power of two."""
    cap = Fraction(k, 12) - 5
    exact = _exact_log2_inv(p)
    if exact is not None:
        return Precondition("log(1/p) <= k/12 - 5", exact <= cap, float(cap - exact))
    return _pre("log(1/p) <= k/12 - 5", math.log2(1.0 / p), float(cap))


def main_sampling_threshold(n: int, k: int, p: float) -> BoundReport:
    """Min-entropy that guarantees a uniformly sampled ``k``-subset can be
    guessed with probability at most ``p``.

    ``required_hmin = H((6/k) log(17/p)) n + 8 log(12/p) + 3``, valid when
    ``log(1/p) <= k/12 - 5``.
    """
    _check_k_n(k, n)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    arg = 6.0 / k * math.log2(17.0 / p)
    required = _entropy_or_nan(arg) * n + 8.0 * math.log2(12.0 / p) + 3.0
    log_inv_p = math.log2(1.0 / p)
    pres = (
        _log_inv_p_le_cap(k, p),
        _pre("entropy argument (6/k)log(17/p) <= 1/2", arg, 0.5),
    )
    return BoundReport(
        name="main_sampling_threshold",
        value=required,
        vacuous=math.isnan(required) or required > n or log_inv_p <= 0.0,
        preconditions=pres,
        params=dict(n=n, k=k, p=p),
        outputs=dict(required_hmin=required, entropy_argument=arg, log_inv_p=log_inv_p),
        notes=(
            f"guarantee: H_min(X|Q) >= required_hmin implies H_min(X_T|TQ) >= log(1/p) = {log_inv_p:.12g}",
        ),
    )


def corollary1_bound(n: int, k: int, c: float) -> BoundReport:
    """Sampled min-entropy ``H^-1(c/2)/6 * k - 5`` from a source of rate ``c``."""
    _check_k_n(k, n)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    sampled = binary_entropy_inv(c / 2.0) / 6.0 * k - 5.0
    return BoundReport(
        name="corollary1_bound",
        value=sampled,
        vacuous=sampled <= 0.0,
        params=dict(n=n, k=k, c=c),
        outputs=dict(sampled_hmin=sampled),
        notes=(f"guarantee: H_min(X|Q) >= {c:.12g}*n implies H_min(X_T|TQ) >= sampled_hmin",),
    )


def best_sampled_rate(n: int, k: int, hmin: float, *, tol: float = 1e-12) -> BoundReport:
    """Largest ``log2(1/p)`` in ``[0, k/12 - 5]`` whose sampling threshold is
    met by ``hmin``, by bisection on the monotone threshold."""
    _check_k_n(k, n)
    if not 0.0 <= hmin <= n:
        raise ValueError(f"hmin must lie in [0, n], got {hmin}")
    cap = k / 12.0 - 5.0

    def required(log_inv_p: float) -> float:
        v = main_sampling_threshold(n, k, 2.0**-log_inv_p).required_hmin
        return math.inf if math.isnan(v) else v

    params = dict(n=n, k=k, hmin=hmin)
    if cap < 0.0 or required(0.0) > hmin:
        return BoundReport("best_sampled_rate", 0.0, True, params=params, outputs=dict(max_log_inv_p=0.0))
    if required(cap) <= hmin:
        best = cap
    else:
        lo, hi = 0.0, cap
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if required(mid) <= hmin:
                lo = mid
            else:
                hi = mid
            if hi - lo <= tol:
                break
        best = lo
    return BoundReport(
        name="best_sampled_rate",
        value=best,
        vacuous=best <= 0.0,
        params=params,
        outputs=dict(max_log_inv_p=best, cap_binds=best == cap),
    )


def rac_success_bound(n: int, m: int, k: int) -> BoundReport:
    """Success-probability bound for a ``k``-out-of-``n`` random access code
    storing ``m`` qubits: ``2^-(H^-1(eps/2)/6 * k - 5)`` with ``eps = 1 - m/n``."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    _check_k_n(k, n)
    rate = 1.0 - m / n
    cor = corollary1_bound(n, k, rate)
    p_max = 2.0 ** (-cor.sampled_hmin)
    return BoundReport(
        name="rac_success_bound",
        value=p_max,
        vacuous=p_max >= 1.0,
        params=dict(n=n, m=m, k=k),
        outputs=dict(p_max=p_max, entropy_rate=rate, sampled_hmin=cor.sampled_hmin),
        notes=("uses H_min(X|Q) >= (n - m) for uniform X and m qubits of storage",),
    )


def brw_bound(n: int, m: int, k: int, eta: float, c_eta: float = 1.0) -> BoundReport:
    """Ben-Aroya/Regev/de Wolf bound ``C_eta (1/2 + 1/2 sqrt(eta m / n))^k``."""
    if eta <= 2.0 * math.log(2.0):
        raise ValueError(f"eta must exceed 2 ln 2 ~ 1.386, got {eta}")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    radicand = eta * m / n
    p_max = c_eta * (0.5 + 0.5 * math.sqrt(radicand)) ** k
    return BoundReport(
        name="brw_bound",
        value=p_max,
        vacuous=radicand >= 1.0 or p_max >= 1.0,
        params=dict(n=n, m=m, k=k, eta=eta, c_eta=c_eta),
        outputs=dict(p_max=p_max, radicand=radicand),
        notes=(NON_RIGOROUS,),
    )


def nayak_max_p(n: int, m: int) -> float:
    """Largest ``p`` in ``[1/2, 1]`` compatible with ``m >= (1 - H(p)) n``."""
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    if m >= n:
        return 1.0
    return 1.0 - binary_entropy_inv(1.0 - m / n)


def smoothness_floor(mode: str, n: int, k: int) -> float:
    """Smallest smoothing error the KR theorems can offer for a ``k``-bit sample.

    ``blockwise``: ``3 e^(-0.15 k^2 / (8 n))`` (xi = 1);
    ``recursive``: ``5 * 2^(-k^(1/8) / 8)`` (f = 1).
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if mode == "blockwise":
        return 3.0 * math.exp(-0.15 * k * k / (8.0 * n))
    if mode == "recursive":
        return 5.0 * 2.0 ** (-(k ** 0.125) / 8.0)
    raise ValueError(f"mode must be 'blockwise' or 'recursive', got {mode!r}")


# -- numeric audit of the proof-step inequalities -----------------------------


@dataclass
class AuditViolation:
    check: str
    k: int
    c: Optional[float]
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass
class AuditReport:
    passed: bool
    checked: dict[str, int]
    skipped: dict[str, int]
    first_violation: Optional[AuditViolation] = None
    min_slack: dict[str, float] = field(default_factory=dict)


DEFAULT_C_GRID = tuple(round(0.05 * i, 2) for i in range(1, 21))


def inequality_audit(
    k_max: int,
    c_grid: tuple[float, ...] = DEFAULT_C_GRID,
    *,
    linear_k_max: Optional[int] = None,
    chain_k_max: Optional[int] = None,
    slack: float = 1e-10,
) -> AuditReport:
    """Check the scalar inequalities used in the main sampling proof.

    (i)   ``5k/12 >= log2(17k) - 5`` for ``k <= linear_k_max``;
    (ii)  ``Pr[Bin(k, 1/2) <= floor(k/4)] <= e^(-k/8)`` for ``k <= k_max``;
    (iii) for each ``c`` and ``k <= chain_k_max``, with
          ``p = 2^-(H^-1(c/2) k/6 - 5)`` and ``n = k``: ``log(1/p) <= k/12 - 5``,
          ``H((6/k) log(17/p)) <= c/2`` and ``required_hmin(n, k, p) <= c n``.
          Points where ``log(1/p) <= 0`` (a vacuous guarantee, where the entropy
          argument can turn negative) are skipped and counted.

    Integer forms are compared exactly where they are cheap; floating
    comparisons get ``slack``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    linear_k_max = k_max if linear_k_max is None else linear_k_max
    chain_k_max = k_max if chain_k_max is None else chain_k_max
    checked = {"linear": 0, "binomial": 0, "chain": 0}
    skipped = {"chain": 0}
    min_slack = {"linear": math.inf, "binomial": math.inf, "chain_entropy": math.inf, "chain_threshold": math.inf}
    first: Optional[AuditViolation] = None

    def record(v: AuditViolation) -> None:
        nonlocal first
        if first is None:
            first = v

    # (i)  2^(5k + 60) >= (17k)^12 is the exact integer form
    for k in range(1, linear_k_max + 1):
        lhs, rhs = math.log2(17 * k) - 5.0, 5.0 * k / 12.0
        ok = (1 << (5 * k + 60)) >= (17 * k) ** 12 if k <= 2000 else lhs <= rhs + slack
        min_slack["linear"] = min(min_slack["linear"], rhs - lhs)
        checked["linear"] += 1
        if not ok:
            record(AuditViolation("5k/12 >= log(17k) - 5", k, None, lhs, rhs))

    # (ii)
    for k in range(1, k_max + 1):
        t = k // 4
        if k <= 64:
            tail = binomial_tail_below_exact(k, t)
            lhs, rhs = math.log(tail), -k / 8.0
        else:
            lhs, rhs = log_binomial_tail_below(k, t), -k / 8.0
        min_slack["binomial"] = min(min_slack["binomial"], rhs - lhs)
        checked["binomial"] += 1
        if lhs > rhs + slack:
            record(AuditViolation("Pr[J <= k/4] <= exp(-k/8)", k, None, lhs, rhs))

    # (iii)
    for c in c_grid:
        hinv = binary_entropy_inv(c / 2.0)
        for k in range(1, chain_k_max + 1):
            log_inv_p = hinv * k / 6.0 - 5.0
            if log_inv_p <= 0.0:
                skipped["chain"] += 1
                continue
            checked["chain"] += 1
            cap = k / 12.0 - 5.0
            if log_inv_p > cap + slack:
                record(AuditViolation("log(1/p) <= k/12 - 5", k, c, log_inv_p, cap))
                continue
            arg = 6.0 / k * (math.log2(17.0) + log_inv_p)
            h = binary_entropy(arg) if arg <= 1.0 else math.inf
            min_slack["chain_entropy"] = min(min_slack["chain_entropy"], c / 2.0 - h)
            if h > c / 2.0 + slack:
                record(AuditViolation("H((6/k)log(17/p)) <= c/2", k, c, h, c / 2.0))
            required = h * k + 8.0 * (math.log2(12.0) + log_inv_p) + 3.0
            min_slack["chain_threshold"] = min(min_slack["chain_threshold"], c * k - required)
            if required > c * k + slack:
                record(AuditViolation("required_hmin(n=k) <= c n", k, c, required, c * k))

    return AuditReport(first is None, checked, skipped, first, min_slack)
