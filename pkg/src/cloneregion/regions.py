"""Geometry of the admissible fidelity region.

The admissible set of singlet-fraction tuples (F_12,...,F_1n) is the convex
hull of the per-block regions { (1/d) <psi| B_{k-1} |psi> : |psi| = 1, real }
together with the single point (1/d,...,1/d) contributed by the semi-trivial
ideal.  This module samples the block regions deterministically, evaluates
the exact support function h(w) via extremal eigenvalues, builds 2D/3D
convex hulls, and answers membership and constrained-maximization queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull
from scipy.special import ndtri
from scipy.stats import qmc

from .algebra import Decomposition, IrrepBlock

N_POINT_CONVENTIONS = ("paper_1_over_d", "zero", "product_1_over_d2")


class InfeasibleError(RuntimeError):
    """The constraint set has no solution inside the region."""


def n_point(n: int, d: int, convention: str = "paper_1_over_d") -> np.ndarray:
    """Fidelity vector of the semi-trivial ideal.

    The default places it at (1/d,...,1/d); the alternative conventions
    (all zeros, or the product-state overlap 1/d^2) are exposed so the three
    readings can be compared.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if convention == "paper_1_over_d":
        val = 1.0 / d
    elif convention == "zero":
        val = 0.0
    elif convention == "product_1_over_d2":
        val = 1.0 / d**2
    else:
        raise ValueError(f"unknown N-point convention {convention!r}")
    return np.full(n - 1, val)


def fidelity_vector(block: IrrepBlock, psi: np.ndarray) -> np.ndarray:
    """(F_12,...,F_1n) for a real unit vector in the block: F_1k = psi^T B_{k-1} psi / d."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (block.dim,):
        raise ValueError(f"state length {psi.shape} != block dimension {block.dim}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state must be a unit vector")
    return np.array([psi @ B @ psi for B in block.generators]) / block.d


def _sphere_grid(dim: int, count: int) -> np.ndarray:
    """Deterministic points on the unit sphere S^{dim-1}; grid for dim <= 3."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if dim == 1:
        return np.array([[1.0], [-1.0]])[: max(1, min(2, count))]
    if dim == 2:
        theta = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        na = max(2, int(round(np.sqrt(count / 2.0))))
        nb = max(1, count // na)
        theta = np.pi * (np.arange(na) + 0.5) / na       # polar
        phi = 2.0 * np.pi * np.arange(nb) / nb           # azimuth
        t, p = np.meshgrid(theta, phi, indexing="ij")
        return np.column_stack(
            [
                (np.sin(t) * np.cos(p)).ravel(),
                (np.sin(t) * np.sin(p)).ravel(),
                np.cos(t).ravel(),
            ]
        )
    return _sphere_low_discrepancy(dim, count)


def _sphere_low_discrepancy(dim: int, count: int) -> np.ndarray:
    """Unscrambled Halton points mapped to the sphere via the normal quantile."""
    sampler = qmc.Halton(d=dim, scramble=False)
    sampler.fast_forward(1)  # skip the origin
    u = sampler.random(count)
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    return g / norms[:, None]


@dataclass(frozen=True)
class RegionSample:
    """Sampled fidelity points of one source (a block label, or "N")."""

    source: str
    points: np.ndarray
    states: Optional[np.ndarray] = None


def sample_block_region(
    block: IrrepBlock, count: int, scheme: str = "grid"
) -> RegionSample:
    """Deterministic sample of the block's fidelity region.

    States live on the real unit sphere of the block dimension: an angle grid
    for dimension <= 3, a low-discrepancy sequence otherwise (or always, with
    scheme="low_discrepancy").
    """
    if scheme == "grid":
        states = _sphere_grid(block.dim, count)
    elif scheme == "low_discrepancy":
        states = _sphere_low_discrepancy(block.dim, count)
    else:
        raise ValueError(f"unknown sampling scheme {scheme!r}")
    points = np.empty((states.shape[0], block.clone_count))
    for a, B in enumerate(block.generators):
        points[:, a] = np.einsum("si,ij,sj->s", states, B, states) / block.d
    return RegionSample(source=str(block.alpha.parts), points=points, states=states)


def block_support(dec: Decomposition, w: np.ndarray) -> float:
    """max over blocks of (1/d) lambda_max(sum_k w_k B_k); N-point excluded."""
    w = np.asarray(w, dtype=float)
    best = -np.inf
    for block in dec.blocks:
        M = sum(w[a] * block.generators[a] for a in range(dec.clone_count))
        best = max(best, float(np.linalg.eigvalsh(M)[-1]))
    return best / dec.d


def support(
    dec: Decomposition, w: np.ndarray, convention: str = "paper_1_over_d"
) -> float:
    """Exact support function h(w) of the admissible region."""
    w = np.asarray(w, dtype=float)
    if w.shape != (dec.clone_count,) or not np.any(w):
        raise ValueError(f"need a nonzero direction of length {dec.clone_count}")
    hb = block_support(dec, w)
    hn = float(w @ n_point(dec.n, dec.d, convention))
    return max(hb, hn)


def axis_width(dec: Decomposition, u: np.ndarray) -> float:
    """Width of the block part of the region along the unit direction u."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise ValueError("direction must be a unit vector")
    return block_support(dec, u) + block_support(dec, -u)


def symmetric_max(dec: Decomposition, convention: str = "paper_1_over_d") -> float:
    """Largest t with (t,...,t) admissible: support along (1,..,1), over N."""
    u = np.ones(dec.clone_count)
    return support(dec, u, convention) / dec.clone_count


@dataclass(frozen=True)
class RegionHull:
    """Convex hull of the sampled region: vertices, facets, provenance."""

    dim: int
    vertices: np.ndarray
    sources: tuple[str, ...]
    facet_normals: np.ndarray  # outward unit normals
    facet_offsets: np.ndarray  # normal . x <= offset
    volume: float

    def contains(self, p: np.ndarray, tol: float = 1e-10) -> bool:
        return bool(np.all(self.facet_normals @ p <= self.facet_offsets + tol))


def build_hull(
    dec: Decomposition,
    samples_per_block: int = 10**4,
    convention: str = "paper_1_over_d",
    scheme: str = "grid",
) -> RegionHull:
    """Convex hull of the block samples plus the N-point (2D/3D only)."""
    N = dec.clone_count
    if N not in (2, 3):
        raise ValueError(
            f"exact hulls only for 2 or 3 clones (got {N}); use support/membership"
        )
    pts = []
    srcs = []
    for block in dec.blocks:
        sample = sample_block_region(block, samples_per_block, scheme)
        pts.append(sample.points)
        srcs.extend([sample.source] * sample.points.shape[0])
    pts.append(n_point(dec.n, dec.d, convention)[None, :])
    srcs.append("N")
    pts = np.vstack(pts)
    hull = ConvexHull(pts)
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    lens = np.linalg.norm(normals, axis=1)
    return RegionHull(
        dim=N,
        vertices=pts[hull.vertices],
        sources=tuple(srcs[i] for i in hull.vertices),
        facet_normals=normals / lens[:, None],
        facet_offsets=offsets / lens,
        volume=float(hull.volume),
    )


def _direction_set(dec: Decomposition, hull: Optional[RegionHull]) -> np.ndarray:
    N = dec.clone_count
    dirs = [np.eye(N), -np.eye(N), np.ones((1, N)) / np.sqrt(N), -np.ones((1, N)) / np.sqrt(N)]
    if hull is not None:
        dirs.append(hull.facet_normals)
    else:
        dirs.append(_sphere_low_discrepancy(N, 10**4))
    return np.vstack(dirs)


def _angles_to_dir(t: np.ndarray) -> np.ndarray:
    if len(t) == 1:
        return np.array([np.cos(t[0]), np.sin(t[0])])
    return np.array(
        [
            np.sin(t[0]) * np.cos(t[1]),
            np.sin(t[0]) * np.sin(t[1]),
            np.cos(t[0]),
        ]
    )


def _dir_to_angles(w: np.ndarray) -> np.ndarray:
    if len(w) == 2:
        return np.array([np.arctan2(w[1], w[0])])
    return np.array([np.arccos(np.clip(w[2], -1, 1)), np.arctan2(w[1], w[0])])


class MembershipOracle:
    """Support-function membership tester with precomputed direction supports.

    Verdicts are sound for points of the true region: "outside" is certified
    by an explicit separating direction and the exact support function; a
    local minimization of the support gap refines near-boundary verdicts.
    """

    def __init__(
        self,
        dec: Decomposition,
        hull: Optional[RegionHull] = None,
        convention: str = "paper_1_over_d",
    ):
        self.dec = dec
        self.convention = convention
        self.directions = _direction_set(dec, hull)
        self.supports = np.array(
            [support(dec, w, convention) for w in self.directions]
        )

    def gap(self, w: np.ndarray) -> float:
        """h(w) - <w, p> for the current query point (set by classify)."""
        return support(self.dec, w, self.convention) - float(w @ self._p)

    def classify(self, p: np.ndarray, tol: float = 1e-9, refine: bool = True) -> str:
        p = np.asarray(p, dtype=float)
        gaps = self.supports - self.directions @ p
        j = int(np.argmin(gaps))
        best = float(gaps[j])
        if refine and best < 1e-3 and self.dec.clone_count in (2, 3):
            self._p = p
            res = minimize(
                lambda t: self.gap(_angles_to_dir(t)),
                _dir_to_angles(self.directions[j]),
                method="Nelder-Mead",
                options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 400},
            )
            best = min(best, float(res.fun))
        if best < -tol:
            return "outside"
        if best <= tol:
            return "boundary"
        return "inside"


def membership(
    dec: Decomposition,
    p: np.ndarray,
    tol: float = 1e-9,
    hull: Optional[RegionHull] = None,
    convention: str = "paper_1_over_d",
) -> str:
    """Classify a fidelity vector as inside / boundary / outside."""
    return MembershipOracle(dec, hull, convention).classify(p, tol)


def constrained_max(
    dec: Decomposition,
    objective: np.ndarray,
    constraints: Sequence[tuple[np.ndarray, float]] = (),
    tol: float = 1e-9,
    hull: Optional[RegionHull] = None,
    samples_per_block: int = 10**4,
    convention: str = "paper_1_over_d",
) -> tuple[float, np.ndarray]:
    """Maximize <objective, F> over the hull subject to linear equalities.

    Solved as a linear program over convex combinations of hull vertices.
    Returns the optimum and an attaining fidelity vector.
    """
    if hull is None:
        hull = build_hull(dec, samples_per_block, convention)
    V = hull.vertices  # (m, N)
    c = -(V @ np.asarray(objective, dtype=float))
    A_eq = [np.ones(V.shape[0])]
    b_eq = [1.0]
    for a, b in constraints:
        A_eq.append(V @ np.asarray(a, dtype=float))
        b_eq.append(float(b))
    res = linprog(
        c,
        A_eq=np.vstack(A_eq),
        b_eq=np.array(b_eq),
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise InfeasibleError(f"no hull point satisfies the constraints: {res.message}")
    point = res.x @ V
    for a, b in constraints:
        if abs(point @ np.asarray(a, dtype=float) - b) > max(tol, 1e-7):
            raise InfeasibleError("LP solution violates an equality constraint")
    return float(-res.fun), point


def constant_point_report(dec: Decomposition, tol: float = 1e-9) -> dict:
    """Membership of the constant-channel point under all three N-point readings.

    The constant channel yields (1/d^2,...,1/d^2); whether that point is
    admissible depends on where the semi-trivial ideal's point is placed.
    Reports verdict and signed margin (max over directions of <w,p> - h(w);
    positive means outside by that amount) per convention.
    """
    p = np.full(dec.clone_count, 1.0 / dec.d**2)
    out = {}
    for convention in N_POINT_CONVENTIONS:
        oracle = MembershipOracle(dec, hull=None, convention=convention)
        verdict = oracle.classify(p, tol)
        gaps = oracle.supports - oracle.directions @ p
        margin = float(-np.min(gaps))
        if verdict != "inside" or margin > -1e-3:
            # refine the margin estimate near the boundary
            oracle._p = p
            j = int(np.argmin(gaps))
            res = minimize(
                lambda t: oracle.gap(_angles_to_dir(t)),
                _dir_to_angles(oracle.directions[j]),
                method="Nelder-Mead",
                options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 400},
            ) if dec.clone_count in (2, 3) else None
            if res is not None:
                margin = max(margin, float(-res.fun))
        out[convention] = {"point": p.tolist(), "verdict": verdict, "margin": margin}
    return out
