"""Small-dimension density-matrix tools: discrimination bounds and random access codes.

Exact optimal guessing is provided only for two hypotheses (Helstrom).  For
larger alphabets the pretty good measurement gives a certified lower bound and
is always labelled as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .xor_code import subset_mask, subsets

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
PRIOR_TOL = 1e-12
SUPPORT_TOL = 1e-12
MAX_DIM = 64


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {M.shape[0]} exceeds the cap of {MAX_DIM}")
    return M


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = _as_matrix(M)
    dev = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if dev > tol * max(1.0, np.max(np.abs(M))):
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3g})")
    return M


def hermitian_eig(M) -> tuple[np.ndarray, np.ndarray]:
    """Real eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix."""
    M = check_hermitian(M)
    return np.linalg.eigh(0.5 * (M + M.conj().T))


def check_density(rho, name: str = "state") -> np.ndarray:
    rho = check_hermitian(rho)
    w = np.linalg.eigvalsh(rho)
    if w.size and w[0] < -PSD_TOL:
        raise ValueError(f"{name} has a negative eigenvalue {w[0]:.3g}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{name} has trace {tr:.12g}, expected 1")
    return rho


def pure(vec) -> np.ndarray:
    """``|v><v|`` for a (normalised) state vector."""
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


@dataclass
class CqEnsemble:
    """Classical ``X`` (priors ``p_x``) with a density matrix ``rho_x`` per value."""

    priors: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=np.float64)
        states = np.asarray(self.states, dtype=np.complex128)
        if states.ndim != 3 or states.shape[1] != states.shape[2]:
            raise ValueError(f"states must have shape (count, d, d), got {states.shape}")
        if priors.shape != (states.shape[0],):
            raise ValueError(f"{priors.size} priors for {states.shape[0]} states")
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > PRIOR_TOL:
            raise ValueError("priors must be a probability vector")
        for x, rho in enumerate(states):
            check_density(rho, f"states[{x}]")
        self.priors, self.states = priors, states

    @classmethod
    def uniform(cls, states: Sequence) -> "CqEnsemble":
        states = np.asarray(states, dtype=np.complex128)
        return cls(np.full(states.shape[0], 1.0 / states.shape[0]), states)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return self.states.shape[0]

    def average(self) -> np.ndarray:
        """``rho_Q = sum_x p_x rho_x``."""
        return np.einsum("x,xij->ij", self.priors, self.states)


def check_povm(elements, tol: float = PSD_TOL) -> np.ndarray:
    E = np.asarray(elements, dtype=np.complex128)
    if E.ndim != 3 or E.shape[1] != E.shape[2]:
        raise ValueError(f"POVM must have shape (outcomes, d, d), got {E.shape}")
    for i, e in enumerate(E):
        check_hermitian(e)
        if np.linalg.eigvalsh(e)[0] < -tol:
            raise ValueError(f"POVM element {i} is not positive semidefinite")
    dev = np.max(np.abs(E.sum(axis=0) - np.eye(E.shape[1])))
    if dev > tol:
        raise ValueError(f"POVM elements sum to identity only within {dev:.3g}")
    return E


def trace_norm(M) -> float:
    return float(np.sum(np.abs(hermitian_eig(M)[0])))


def statistical_distance(rho, phi) -> float:
    """``D(rho, phi) = 1/2 ||rho - phi||_1``.

    Both orientations of the difference are averaged so that swapping the
    arguments gives a bitwise-identical result.
    """
    rho, phi = _as_matrix(rho), _as_matrix(phi)
    if rho.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {phi.shape}")
    return 0.25 * (trace_norm(rho - phi) + trace_norm(phi - rho))


@dataclass
class HelstromResult:
    pguess: float
    povm: np.ndarray


def helstrom(ens: CqEnsemble) -> HelstromResult:
    """Optimal two-hypothesis discrimination, ``1/2 (1 + ||p0 rho0 - p1 rho1||_1)``.

    The measurement projects onto the positive eigenspace of
    ``p0 rho0 - p1 rho1`` (outcome 0) and its complement (outcome 1).
    """
    if len(ens) != 2:
        raise ValueError(f"Helstrom discrimination needs exactly 2 hypotheses, got {len(ens)}")
    gamma = ens.priors[0] * ens.states[0] - ens.priors[1] * ens.states[1]
    w, V = hermitian_eig(gamma)
    pos = V[:, w > 0]
    E0 = pos @ pos.conj().T
    E1 = np.eye(ens.dim) - E0
    return HelstromResult(0.5 * (1.0 + float(np.sum(np.abs(w)))), np.stack([E0, E1]))


def helstrom_pguess(ens: CqEnsemble) -> float:
    return helstrom(ens).pguess


def _inv_sqrt_on_support(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, V = hermitian_eig(S)
    keep = w > SUPPORT_TOL
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    support = V[:, keep] @ V[:, keep].conj().T
    return (V * inv) @ V.conj().T, support


def pgm(ens: CqEnsemble) -> np.ndarray:
    """Pretty good measurement ``E_x = S^-1/2 p_x rho_x S^-1/2``.

    Off the support of ``S`` the identity is shared equally among the
    outcomes, which keeps the elements a POVM without changing any
    success probability on the ensemble.
    """
    inv_sqrt, support = _inv_sqrt_on_support(ens.average())
    filler = (np.eye(ens.dim) - support) / len(ens)
    return np.stack([inv_sqrt @ (p * rho) @ inv_sqrt + filler for p, rho in zip(ens.priors, ens.states)])


def povm_pguess(ens: CqEnsemble, povm) -> float:
    """``sum_x p_x tr(E_x rho_x)``."""
    E = np.asarray(povm, dtype=np.complex128)
    if E.shape[0] != len(ens):
        raise ValueError(f"POVM has {E.shape[0]} outcomes for {len(ens)} hypotheses")
    if E.shape[1:] != ens.states.shape[1:]:
        raise ValueError(f"POVM dimension {E.shape[1:]} does not match states {ens.states.shape[1:]}")
    return float(np.einsum("x,xij,xji->", ens.priors, E, ens.states).real)


def pgm_pguess(ens: CqEnsemble) -> float:
    """Success of the pretty good measurement: a lower bound on the optimal guess."""
    return povm_pguess(ens, pgm(ens))


@dataclass
class Lemma1Check:
    distance: float
    pguess: float
    holds: bool


def verify_lemma1(ens: CqEnsemble, tol: float = 1e-10) -> Lemma1Check:
    """Check ``P_guess(X|Q) <= 1/2 + D(rho_XQ, tau_X x rho_Q)`` for binary ``X``."""
    if len(ens) != 2:
        raise ValueError("binary X required")
    d = ens.dim
    rho_q = ens.average()
    joint = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    ideal = np.zeros_like(joint)
    for x in range(2):
        joint[x * d:(x + 1) * d, x * d:(x + 1) * d] = ens.priors[x] * ens.states[x]
        ideal[x * d:(x + 1) * d, x * d:(x + 1) * d] = 0.5 * rho_q
    distance = statistical_distance(joint, ideal)
    pguess = helstrom_pguess(ens)
    return Lemma1Check(distance, pguess, pguess <= 0.5 + distance + tol)


@dataclass
class DimensionCheck:
    lhs: float
    rhs: float
    holds: bool
    note: str = "lhs is the PGM success (a lower bound on the optimal guess), not the optimum"


def dimension_bound_check(ens: CqEnsemble, m: int, tol: float = 1e-10) -> DimensionCheck:
    """Consistency of the PGM success with ``P_guess <= 2^m max_x p_x`` for ``m`` qubits."""
    if ens.dim != 1 << m:
        raise ValueError(f"state dimension {ens.dim} is not 2^m = {1 << m}")
    lhs = pgm_pguess(ens)
    rhs = (1 << m) * float(ens.priors.max())
    return DimensionCheck(lhs, rhs, lhs <= rhs + tol)


# -- random access codes ------------------------------------------------------


@dataclass
class RacEncoding:
    """``n`` classical bits encoded into ``m`` qubits, one state per ``x`` (uniform ``X``)."""

    n: int
    m: int
    states: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.complex128)
        expected = (1 << self.n, 1 << self.m, 1 << self.m)
        if states.shape != expected:
            raise ValueError(f"states must have shape {expected}, got {states.shape}")
        for x, rho in enumerate(states):
            check_density(rho, f"states[{x}]")
        self.states = states

    @property
    def ensemble(self) -> CqEnsemble:
        return CqEnsemble.uniform(self.states)

    def subset_ensemble(self, t: Sequence[int]) -> CqEnsemble:
        """Ensemble of ``X_t`` values: ``rho_v`` averages ``rho_x`` over ``x_t = v``."""
        groups = _group_by_subset(self.n, t)
        priors = np.array([len(g) / (1 << self.n) for g in groups])
        states = np.stack([self.states[g].mean(axis=0) for g in groups])
        return CqEnsemble(priors, states)

    @classmethod
    def from_dict(cls, data: Mapping) -> "RacEncoding":
        """Parse ``{"n", "m", "states"}``; entries are ``[re, im]`` pairs.

        Raises ``ValueError`` whose message starts with the offending field path.
        """
        for key in ("n", "m", "states"):
            if key not in data:
                raise ValueError(f"{key}: missing field")
        n, m = data["n"], data["m"]
        for key, val in (("n", n), ("m", m)):
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                raise ValueError(f"{key}: expected a non-negative integer, got {val!r}")
        d = 1 << m
        states = data["states"]
        if not isinstance(states, list) or len(states) != 1 << n:
            raise ValueError(f"states: expected a list of {1 << n} matrices")
        arr = np.zeros((1 << n, d, d), dtype=np.complex128)
        for x, mat in enumerate(states):
            if not isinstance(mat, list) or len(mat) != d:
                raise ValueError(f"states[{x}]: expected {d} rows")
            for i, row in enumerate(mat):
                if not isinstance(row, list) or len(row) != d:
                    raise ValueError(f"states[{x}][{i}]: expected {d} entries")
                for jj, entry in enumerate(row):
                    if (
                        not isinstance(entry, list)
                        or len(entry) != 2
                        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
                    ):
                        raise ValueError(f"states[{x}][{i}][{jj}]: expected [re, im]")
                    arr[x, i, jj] = complex(entry[0], entry[1])
        for x in range(1 << n):
            try:
                check_density(arr[x], "state")
            except ValueError as exc:
                raise ValueError(f"states[{x}]: {exc}") from None
        return cls(n, m, arr)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "states": [[[[float(v.real), float(v.imag)] for v in row] for row in rho] for rho in self.states],
        }


def _group_by_subset(n: int, t: Sequence[int]) -> list[list[int]]:
    k = len(t)
    mask = subset_mask(tuple(t), n)
    groups: list[list[int]] = [[] for _ in range(1 << k)]
    for x in range(1 << n):
        v = 0
        for i in range(n - 1, -1, -1):
            if mask >> i & 1:
                v = (v << 1) | (x >> i & 1)
        groups[v].append(x)
    return groups


def rac_success(encoding: RacEncoding, k: int, strategies: Mapping[tuple[int, ...], np.ndarray]) -> float:
    """``C(n,k)^-1 sum_t sum_x 2^-n tr(E^t_{x_t} rho_x)`` for uniform ``X``.

    ``strategies[t]`` is a ``2^k``-outcome POVM whose outcome ``v`` guesses
    ``x_t = v`` (first element of ``t`` most significant).
    """
    n = encoding.n
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    d = 1 << encoding.m
    total = 0.0
    count = 0
    for t in subsets(n, k):
        if t not in strategies:
            raise ValueError(f"no measurement supplied for subset {t}")
        E = np.asarray(strategies[t], dtype=np.complex128)
        if E.shape != (1 << k, d, d):
            raise ValueError(f"measurement for {t} has shape {E.shape}, expected {(1 << k, d, d)}")
        for v, group in enumerate(_group_by_subset(n, t)):
            for x in group:
                total += np.einsum("ij,ji->", E[v], encoding.states[x]).real / (1 << n)
        count += 1
    return float(total / count)


def pgm_strategies(encoding: RacEncoding, k: int) -> dict[tuple[int, ...], np.ndarray]:
    """Pretty good measurement for each k-subset's ensemble."""
    return {t: pgm(encoding.subset_ensemble(t)) for t in subsets(encoding.n, k)}


def helstrom_strategies(encoding: RacEncoding) -> dict[tuple[int, ...], np.ndarray]:
    """Optimal single-bit measurements (``k = 1``)."""
    return {t: helstrom(encoding.subset_ensemble(t)).povm for t in subsets(encoding.n, 1)}


def basis_encoding(n: int) -> RacEncoding:
    """``x -> |x><x|`` on ``n`` qubits."""
    states = np.zeros((1 << n, 1 << n, 1 << n), dtype=np.complex128)
    for x in range(1 << n):
        states[x, x, x] = 1.0
    return RacEncoding(n, n, states)


def computational_strategies(n: int, k: int) -> dict[tuple[int, ...], np.ndarray]:
    """Measure all ``n`` qubits in the computational basis, report the bits in ``t``."""
    out = {}
    d = 1 << n
    for t in subsets(n, k):
        E = np.zeros((1 << k, d, d), dtype=np.complex128)
        for v, group in enumerate(_group_by_subset(n, t)):
            for x in group:
                E[v, x, x] = 1.0
        out[t] = E
    return out


def qrac_2to1() -> RacEncoding:
    """The 2 -> 1 quantum random access code.

    ``x1 x2`` maps to the equatorial Bloch vector
    ``((-1)^x1, (-1)^x2, 0) / sqrt(2)``: bit 1 is read along X, bit 2 along Y,
    each with success ``cos^2(pi/8)``.
    """
    states = []
    for x in range(4):
        bx, by = (-1) ** (x >> 1 & 1), (-1) ** (x & 1)
        r = np.array([bx, by, 0.0]) / math.sqrt(2.0)
        states.append(0.5 * (np.eye(2) + r[0] * _PAULI_X + r[1] * _PAULI_Y))
    return RacEncoding(2, 1, np.array(states))


def trivial_encoding(n: int) -> RacEncoding:
    """Zero qubits of storage: every ``x`` maps to the 1x1 state ``[1]``."""
    return RacEncoding(n, 0, np.ones((1 << n, 1, 1), dtype=np.complex128))


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def random_density(rng: np.random.Generator, d: int, rank: Optional[int] = None) -> np.ndarray:
    """Random density matrix ``G G^dagger / tr`` with complex Gaussian ``G``."""
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_ensemble(rng: np.random.Generator, count: int, d: int) -> CqEnsemble:
    priors = rng.dirichlet(np.ones(count))
    ranks = rng.integers(1, d + 1, size=count)
    return CqEnsemble(priors, np.stack([random_density(rng, d, int(r)) for r in ranks]))


def random_povm(rng: np.random.Generator, outcomes: int, d: int) -> np.ndarray:
    """Random POVM ``S^-1/2 A_i S^-1/2`` with ``S = sum A_i`` for random positive ``A_i``."""
    A = np.stack([random_density(rng, d) for _ in range(outcomes)])
    inv_sqrt, _ = _inv_sqrt_on_support(A.sum(axis=0))
    return np.stack([inv_sqrt @ a @ inv_sqrt for a in A])


def random_projective(rng: np.random.Generator, d: int, rank: int) -> np.ndarray:
    """Two-outcome projective measurement from a Haar-ish random unitary."""
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    P = Q[:, :rank] @ Q[:, :rank].conj().T
    return np.stack([P, np.eye(d) - P])
