"""Brute-force ground truth on the full tensor space (C^d)^{x n}.

Dense permutation operators, partial transposition on the reference leg,
Choi states of isometry-induced cloning channels, and singlet fractions.
Everything here is independent of the representation-theoretic pipeline and
is used to certify it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Decomposition, InconsistencyError
from .symgroup import Permutation

SPECTRUM_DIM_CAP = 2**18
OPERATOR_DIM_CAP = 2**20


@dataclass(frozen=True)
class DenseOperator:
    """Square matrix on (C^d)^{x n} with tensor-leg metadata."""

    matrix: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        dim = self.d**self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} != ({dim}, {dim}) for "
                f"n={self.n}, d={self.d}"
            )

    @property
    def dim(self) -> int:
        return self.d**self.n


def _check_cap(n: int, d: int, cap: int = OPERATOR_DIM_CAP):
    if d**n > cap:
        raise ValueError(f"d^n = {d**n} exceeds the dense cap {cap}")


def perm_operator(sigma: Permutation, n: int, d: int) -> DenseOperator:
    """Unitary V(sigma) with V|i_1..i_n> = |i_{sigma^-1(1)} .. i_{sigma^-1(n)}>."""
    if sigma.degree != n:
        raise ValueError(f"permutation degree {sigma.degree} != n = {n}")
    _check_cap(n, d)
    dim = d**n
    idx = np.arange(dim)
    digits = [(idx // d ** (n - 1 - leg)) % d for leg in range(n)]
    inv = sigma.inverse()
    tgt = np.zeros(dim, dtype=np.int64)
    for leg in range(n):  # output leg `leg+1` carries input leg sigma^-1(leg+1)
        tgt += digits[inv(leg + 1) - 1] * d ** (n - 1 - leg)
    V = np.zeros((dim, dim))
    V[tgt, idx] = 1.0
    return DenseOperator(V, n, d)


def pt_transposition(k: int, n: int, d: int) -> DenseOperator:
    """Partial transpose on leg 1 of the swap V((1 k)).

    Equals d times the projector onto the maximally entangled state of legs
    (1, k) tensored with identity on the rest; Hermitian, X^2 = d X.
    """
    if not 2 <= k <= n:
        raise ValueError(f"k must be in 2..{n}, got {k}")
    _check_cap(n, d)
    V = perm_operator(Permutation.transposition(1, k, n), n, d).matrix
    T = V.reshape([d] * (2 * n))
    T = np.swapaxes(T, 0, n)  # transpose output leg 1 with input leg 1
    return DenseOperator(T.reshape(d**n, d**n), n, d)


def _ptrace_to(rho: np.ndarray, keep: tuple[int, ...], n: int, d: int) -> np.ndarray:
    """Partial trace keeping the 1-based legs in `keep` (in the given order)."""
    T = rho.reshape([d] * (2 * n))
    legs = list(range(1, n + 1))
    # trace out one leg at a time, tracking remaining leg labels
    remaining = legs[:]
    for leg in legs:
        if leg in keep:
            continue
        pos = remaining.index(leg)
        m = len(remaining)
        T = np.trace(T, axis1=pos, axis2=m + pos)
        remaining.remove(leg)
    # reorder remaining legs to the requested order
    perm = [remaining.index(leg) for leg in keep]
    m = len(remaining)
    T = np.transpose(T, perm + [m + p for p in perm])
    dim = d ** len(keep)
    return T.reshape(dim, dim)


def max_entangled(d: int) -> np.ndarray:
    """|psi+> = (1/sqrt d) sum_i |ii>, unit norm."""
    v = np.zeros(d * d)
    v[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return v


@dataclass(frozen=True)
class ChannelSample:
    """Isometry C^d -> (C^d)^{x N} defining a cloning channel, plus its seed."""

    isometry: np.ndarray
    seed: int
    d: int
    N: int


def _box_muller(rng_uniform: np.ndarray) -> np.ndarray:
    """Standard normals from uniform pairs; count = len(rng_uniform)."""
    u = rng_uniform.reshape(-1, 2)
    r = np.sqrt(-2.0 * np.log(u[:, 0]))
    return np.concatenate([r * np.cos(2 * np.pi * u[:, 1]), r * np.sin(2 * np.pi * u[:, 1])])


def haar_isometry(d: int, N: int, seed: int) -> ChannelSample:
    """Haar-random isometry C^d -> (C^d)^{x N}, deterministic in seed.

    Complex Gaussian entries via PCG64 uniforms through Box-Muller, then QR
    with positive R diagonal; bit-reproducible for a fixed seed.
    """
    if d**N > 2**16:
        raise ValueError(f"d^N = {d**N} exceeds the channel cap {2**16}")
    rows = d**N
    rng = np.random.Generator(np.random.PCG64(seed))
    count = rows * d
    u = rng.random(4 * count)
    u = np.clip(u, np.finfo(float).tiny, 1.0)
    normals = _box_muller(u)
    G = (normals[:count] + 1j * normals[count : 2 * count]).reshape(rows, d)
    Q, R = np.linalg.qr(G)
    phases = np.diag(R) / np.abs(np.diag(R))
    W = Q * phases.conj()
    return ChannelSample(W, seed, d, N)


def choi_state(ch: ChannelSample) -> DenseOperator:
    """rho = (1 x Lambda)(|psi+><psi+|) with Lambda(X) = W X W^dagger."""
    d, N = ch.d, ch.N
    v = ch.isometry.T.reshape(-1) / np.sqrt(d)  # (1 x W)|psi+>
    rho = np.outer(v, v.conj())
    return DenseOperator(rho, N + 1, d)


def singlet_fractions(rho: DenseOperator) -> np.ndarray:
    """F_1k = <psi+| tr_{not 1,k} rho |psi+> for k = 2..n."""
    n, d = rho.n, rho.d
    psi = max_entangled(d)
    out = np.empty(n - 1)
    for k in range(2, n + 1):
        r1k = _ptrace_to(rho.matrix, (1, k), n, d)
        out[k - 2] = np.real(psi @ r1k @ psi)
    return out


def clone_fidelity_from_singlet(F: float, d: int) -> float:
    """Average clone fidelity f = (F d + 1)/(d + 1) from a singlet fraction."""
    if not -1e-12 <= F <= 1 + 1e-12:
        raise ValueError(f"singlet fraction must be in [0, 1], got {F}")
    return (F * d + 1.0) / (d + 1.0)


def singlet_from_clone_fidelity(f: float, d: int) -> float:
    return (f * (d + 1.0) - 1.0) / d


def special_states(kind: str, n: int, d: int, j: int | None = None) -> DenseOperator:
    """Named validation states, all with maximally mixed reference marginal.

    classical_clone:      (1/d) sum_i (|i><i|)^{x n}
    constant:             (1/d^n) identity (channel outputs I/d^{n-1})
    perfect_to_clone_j:   input routed to clone j, |0> elsewhere
    """
    dim = d**n
    if kind == "classical_clone":
        rho = np.zeros((dim, dim))
        step = (dim - 1) // (d - 1) if d > 1 else 1  # index of |i..i>
        for i in range(d):
            rho[i * step, i * step] = 1.0 / d
        return DenseOperator(rho, n, d)
    if kind == "constant":
        return DenseOperator(np.eye(dim) / dim, n, d)
    if kind == "perfect_to_clone_j":
        if j is None or not 2 <= j <= n:
            raise ValueError(f"need clone index j in 2..{n}")
        N = n - 1
        W = np.zeros((d**N, d), dtype=complex)
        for i in range(d):
            W[i * d ** (n - j), i] = 1.0  # |i> at clone j, |0> on other clones
        return choi_state(ChannelSample(W, -1, d, N))
    raise ValueError(f"unknown special state kind: {kind!r}")


@dataclass
class SpectrumReport:
    """Result of comparing full-space and block spectra in one direction w."""

    w: np.ndarray
    full_nonzero: np.ndarray
    block_eigenvalues: dict
    r: dict
    max_abs_gap: float
    matched: bool = True
    block_keys: list = field(default_factory=list)


def full_vs_block_spectrum(
    dec: Decomposition, w: np.ndarray, tol: float = 1e-8
) -> SpectrumReport:
    """Certify the block decomposition along direction w.

    Diagonalizes sum_k w_{k-1} V^{t_1}(1k) on (C^d)^{x n} and
    sum_k w_{k-1} B_{k-1} in every block; checks that the nonzero spectra
    coincide and that full multiplicities are integer multiples r(alpha) of
    the block multiplicities.
    """
    n, d = dec.n, dec.d
    w = np.asarray(w, dtype=float)
    if w.shape != (n - 1,) or not np.any(w):
        raise ValueError(f"need a nonzero direction of length {n - 1}")
    if d**n > SPECTRUM_DIM_CAP:
        raise ValueError(f"d^n = {d**n} exceeds the spectrum cap {SPECTRUM_DIM_CAP}")

    full = np.zeros((d**n, d**n))
    for k in range(2, n + 1):
        full += w[k - 2] * pt_transposition(k, n, d).matrix
    full_vals = np.linalg.eigvalsh(full)

    scale = max(1.0, float(np.max(np.abs(full_vals))))
    zero_cut = tol * scale
    full_nonzero = full_vals[np.abs(full_vals) > zero_cut]

    # distinct block eigenvalues with per-block multiplicities
    block_vals = {}
    for block in dec.blocks:
        M = sum(w[a] * block.generators[a] for a in range(n - 1))
        vals = np.linalg.eigvalsh(M)
        block_vals[block.alpha] = vals[np.abs(vals) > zero_cut]

    distinct: list[float] = []
    for vals in block_vals.values():
        for v in vals:
            if not any(abs(v - u) <= zero_cut for u in distinct):
                distinct.append(float(v))
    distinct.sort()

    # full multiplicities per distinct value, and the worst value gap
    full_mult = np.zeros(len(distinct), dtype=int)
    max_gap = 0.0
    for v in full_nonzero:
        gaps = np.abs(np.array(distinct) - v)
        j = int(np.argmin(gaps))
        if gaps[j] > zero_cut:
            raise InconsistencyError(
                f"full-space eigenvalue {v} unmatched by any block (gap {gaps[j]})"
            )
        max_gap = max(max_gap, float(gaps[j]))
        full_mult[j] += 1

    # solve full_mult = sum_alpha r_alpha * block_mult_alpha for integer r
    A = np.zeros((len(distinct), len(dec.blocks)))
    for c, block in enumerate(dec.blocks):
        for v in block_vals[block.alpha]:
            j = int(np.argmin(np.abs(np.array(distinct) - v)))
            A[j, c] += 1
    sol, *_ = np.linalg.lstsq(A, full_mult, rcond=None)
    r = {}
    for c, block in enumerate(dec.blocks):
        rc = float(sol[c])
        if abs(rc - round(rc)) > 1e-6 or round(rc) < 1:
            raise InconsistencyError(
                f"multiplicity ratio r({block.alpha}) = {rc} is not a positive integer"
            )
        r[block.alpha] = int(round(rc))
    if np.any(A @ np.array([r[b.alpha] for b in dec.blocks]) != full_mult):
        raise InconsistencyError("block multiplicities do not reproduce full spectrum")

    # every block eigenvalue must also appear in the full spectrum
    for alpha, vals in block_vals.items():
        for v in vals:
            if full_mult[int(np.argmin(np.abs(np.array(distinct) - v)))] == 0:
                raise InconsistencyError(
                    f"block eigenvalue {v} of {alpha} absent from full spectrum"
                )

    return SpectrumReport(
        w=w,
        full_nonzero=np.sort(full_nonzero),
        block_eigenvalues={a: np.sort(v) for a, v in block_vals.items()},
        r=r,
        max_abs_gap=max_gap,
        block_keys=[b.alpha for b in dec.blocks],
    )
