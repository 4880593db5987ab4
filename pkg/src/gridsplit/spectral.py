"""Laplacians, symmetric eigendecomposition, eigengap selection, embedding.

The normalized Laplacian L_N = D^{-1/2} (D - A) D^{-1/2} is the clustering
operator of choice because it is scale-independent: multiplying every edge
weight by a constant leaves it unchanged. Its eigenvalues live in [0, 2],
the multiplicity of 0 counts connected components, and a large eigengap
gamma_k = lambda_{k+1} - lambda_k signals that k clusters explain the graph.

The eigensolver is a cyclic Jacobi sweep. At zone-graph sizes (a few dozen
vertices) it is plenty fast, needs no external dependency, and its fully
deterministic rotations plus an explicit sign convention make embeddings
reproducible bit-for-bit across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .zonegraph import ZoneGraph

SPECTRAL_SCHEMA = "gridsplit-spectral/1"

JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SpectralReport:
    vertices: tuple[str, ...]
    eigenvalues: tuple[float, ...]       # ascending
    eigengaps: tuple[float, ...]         # gamma_k = lambda_{k+1} - lambda_k
    chosen_k: int
    embedding: np.ndarray                # N x k, rows unit-norm

    def to_dict(self) -> dict:
        return {
            "schema": SPECTRAL_SCHEMA,
            "vertices": list(self.vertices),
            "eigenvalues": list(self.eigenvalues),
            "eigengaps": list(self.eigengaps),
            "chosen_k": self.chosen_k,
            "embedding": [[float(x) for x in row] for row in self.embedding],
        }


def laplacians(g: ZoneGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(A, D, L, L_N) for the zone graph.

    Rejects graphs with an isolated vertex: D would not be invertible, and a
    zone with no AC coupling cannot participate in the clustering anyway.
    """
    n = g.order
    if n < 2:
        raise ValidationError(f"graph order {n} too small for spectral analysis")
    a = g.adjacency_matrix()
    degrees = a.sum(axis=1)
    dead = [g.vertices[i] for i in range(n) if degrees[i] <= 0.0]
    if dead:
        raise ValidationError(
            "vertices with zero weighted degree: " + ", ".join(dead),
            findings=[f"vertex {v!r} has no incident edge weight" for v in dead],
        )
    d = np.diag(degrees)
    lap = d - a
    inv_sqrt = np.diag(1.0 / np.sqrt(degrees))
    lap_n = inv_sqrt @ lap @ inv_sqrt
    return a, d, lap, lap_n


def eig_sym(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvectors as columns). Eigenvector
    signs are fixed so each column's largest-magnitude entry is positive
    (first such entry on ties), making the result fully deterministic.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValidationError("empty matrix")
    asym = float(np.max(np.abs(m - m.T)))
    if asym > 1e-10:
        raise ValidationError(f"matrix is not symmetric: max |M - M^T| = {asym:.3e}")

    n = m.shape[0]
    a = (m + m.T) / 2.0
    v = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), v

    def offdiag_norm() -> float:
        off = a - np.diag(np.diag(a))
        return float(np.sqrt((off * off).sum()))

    sweeps = 0
    while offdiag_norm() >= JACOBI_OFFDIAG_TOL:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NumericalError(
                f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps",
                residual=offdiag_norm(),
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # rotation angle zeroing a[p, q]
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for col in range(n):
        lead = int(np.argmax(np.abs(vectors[:, col])))
        if vectors[lead, col] < 0.0:
            vectors[:, col] = -vectors[:, col]
    return values, vectors


def eigengaps(eigenvalues: np.ndarray) -> np.ndarray:
    return np.diff(np.asarray(eigenvalues, dtype=float))


def choose_k(eigenvalues: np.ndarray, k_max: int | None = None) -> tuple[int, np.ndarray]:
    """Pick the embedding dimension k maximizing the eigengap gamma_k.

    The search runs over 2 <= k <= k_max; ties break toward the smaller k.
    The default cap max(3, ceil(N/2)) keeps the trivially large gaps at the
    top of the spectrum from hijacking the choice on bigger graphs while
    leaving small graphs (N = 4 says k in {2, 3}) fully searchable.
    Returns (k, the full eigengap table).
    """
    lam = np.asarray(eigenvalues, dtype=float)
    n = lam.size
    if n < 3:
        raise ValidationError(f"need at least 3 eigenvalues to choose k, got {n}")
    gaps = eigengaps(lam)
    if k_max is None:
        k_max = max(3, math.ceil(n / 2))
    hi = min(k_max, n - 1)
    if hi < 2:
        raise ValidationError(f"k_max {k_max} leaves no admissible k")
    best_k = 2
    for k in range(2, hi + 1):
        if gaps[k - 1] > gaps[best_k - 1]:
            best_k = k
    return best_k, gaps


def embed(lap_n: np.ndarray, k: int) -> np.ndarray:
    """Rows are vertex coordinates from the k smallest eigenvectors of L_N,
    normalized to unit Euclidean length.

    A row that is exactly zero before normalization can only happen on a
    disconnected graph with k below the component count; it is rejected with
    guidance to raise k.
    """
    values, vectors = eig_sym(lap_n)
    n = values.size
    if not 1 <= k <= n:
        raise ValidationError(f"embedding dimension k={k} outside [1, {n}]")
    x = vectors[:, :k].copy()
    norms = np.linalg.norm(x, axis=1)
    degenerate = [int(i) for i in np.nonzero(norms < 1e-12)[0]]
    if degenerate:
        raise NumericalError(
            f"zero spectral coordinates for vertices {degenerate}; "
            f"the graph likely has more than k={k} components - raise k"
        )
    return x / norms[:, None]


def spectral_report(g: ZoneGraph, k_max: int | None = None) -> SpectralReport:
    """Run Laplacian construction, eigenanalysis, k selection, and embedding.

    A two-vertex graph has no eigengap choice to make; k is pinned to 2.
    """
    _, _, _, lap_n = laplacians(g)
    values, _ = eig_sym(lap_n)
    if g.order == 2:
        k, gaps = 2, eigengaps(values)
    else:
        k, gaps = choose_k(values, k_max=k_max)
    x = embed(lap_n, k)
    return SpectralReport(
        vertices=g.vertices,
        eigenvalues=tuple(float(v) for v in values),
        eigengaps=tuple(float(v) for v in gaps),
        chosen_k=k,
        embedding=x,
    )
