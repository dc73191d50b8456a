"""Spectral co-clustering of the identifier-by-user bipartite matrix.

Rows and columns are embedded together: normalize the matrix by its row
and column degrees, take the leading non-trivial singular vectors, rescale
them by the inverse square-root degrees, stack row and column embeddings,
and run one seeded k-means over the joint point set. The known trivial
singular pair (degree square roots, singular value exactly 1) is deflated
analytically rather than trusting the numerical ordering, which keeps
disconnected components separable.

Everything is deterministic for a fixed config seed and a single thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .indexing import BipartiteMatrix

__all__ = [
    "CoClusterConfig",
    "CoClusterResult",
    "SvdConvergenceError",
    "spectral_cocluster",
]

# Below this size the deflated matrix is factored densely; ARPACK needs
# k strictly less than min(shape) and gains nothing on tiny inputs.
_DENSE_CUTOFF = 64


class SvdConvergenceError(RuntimeError):
    """Truncated SVD failed to converge; carries solver diagnostics."""


@dataclass
class CoClusterConfig:
    k: int
    n_singular_vectors: int | None = None
    kmeans_restarts: int = 10
    max_iterations: int = 300
    seed: int = 0

    def resolved_dims(self) -> int:
        if self.n_singular_vectors is not None:
            if self.n_singular_vectors < 1:
                raise ValueError("n_singular_vectors must be at least 1")
            return self.n_singular_vectors
        return max(1, math.ceil(math.log2(self.k))) if self.k > 1 else 1


@dataclass
class CoClusterResult:
    row_labels: np.ndarray
    col_labels: np.ndarray
    objective: float


def _kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[i] = points[idx]
        d2 = np.minimum(d2, ((points - centers[i]) ** 2).sum(axis=1))
    return centers


def _assign(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels and squared distance to the assigned center, chunked."""
    n = points.shape[0]
    labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n)
    chunk = max(1, 2_000_000 // max(1, centers.shape[0]))
    sq_centers = (centers**2).sum(axis=1)
    for start in range(0, n, chunk):
        block = points[start : start + chunk]
        d2 = sq_centers[None, :] - 2.0 * block @ centers.T
        d2 += (block**2).sum(axis=1)[:, None]
        np.maximum(d2, 0.0, out=d2)
        idx = d2.argmin(axis=1)
        labels[start : start + chunk] = idx
        dists[start : start + chunk] = d2[np.arange(block.shape[0]), idx]
    return labels, dists


def _kmeans_once(
    points: np.ndarray, k: int, rng: np.random.Generator, max_iter: int
) -> tuple[np.ndarray, float]:
    centers = _kmeans_plusplus(points, k, rng)
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    for _ in range(max_iter):
        new_labels, dists = _assign(points, centers)
        # Reseed any empty cluster from the current farthest point.
        for cid in range(k):
            if not (new_labels == cid).any():
                far = int(dists.argmax())
                centers[cid] = points[far]
                new_labels[far] = cid
                dists[far] = 0.0
        if (new_labels == labels).all():
            break
        labels = new_labels
        for cid in range(k):
            members = points[labels == cid]
            if members.shape[0]:
                centers[cid] = members.mean(axis=0)
    labels, dists = _assign(points, centers)
    return labels, float(dists.sum())


def _kmeans(
    points: np.ndarray, k: int, seed: int, restarts: int, max_iter: int
) -> tuple[np.ndarray, float]:
    seq = np.random.SeedSequence(seed)
    best_labels: np.ndarray | None = None
    best_inertia = math.inf
    for child in seq.spawn(max(1, restarts)):
        labels, inertia = _kmeans_once(points, k, np.random.default_rng(child), max_iter)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    assert best_labels is not None
    return best_labels, best_inertia


def _deflated_svd(
    normalized: sp.csr_matrix,
    u0: np.ndarray,
    v0: np.ndarray,
    dims: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Top ``dims`` singular vector pairs of (normalized - u0 v0^T)."""
    n_rows, n_cols = normalized.shape
    small = min(n_rows, n_cols)
    if small <= _DENSE_CUTOFF or dims >= small - 1:
        dense = normalized.toarray() - np.outer(u0, v0)
        u, _, vt = np.linalg.svd(dense, full_matrices=False)
        take = min(dims, u.shape[1])
        return u[:, :take], vt[:take, :].T

    def matvec(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x).ravel()
        return normalized @ x - u0 * float(v0 @ x)

    def rmatvec(y: np.ndarray) -> np.ndarray:
        y = np.asarray(y).ravel()
        return normalized.T @ y - v0 * float(u0 @ y)

    def matmat(xs: np.ndarray) -> np.ndarray:
        return normalized @ xs - np.outer(u0, v0 @ xs)

    operator = spla.LinearOperator(
        shape=normalized.shape, matvec=matvec, rmatvec=rmatvec, matmat=matmat,
        dtype=np.float64,
    )
    start = np.random.default_rng(seed).standard_normal(small)
    try:
        u, s, vt = spla.svds(operator, k=dims, v0=start, which="LM")
    except spla.ArpackNoConvergence as exc:  # pragma: no cover - rare
        raise SvdConvergenceError(
            f"SVD did not converge: {len(exc.eigenvalues)} of {dims} "
            f"singular values found"
        ) from exc
    order = np.argsort(s)[::-1]
    return u[:, order], vt[order, :].T


def spectral_cocluster(
    matrix: BipartiteMatrix | sp.spmatrix, cfg: CoClusterConfig
) -> CoClusterResult:
    """Jointly cluster rows and columns of a binary bipartite matrix.

    Requires a matrix with no all-zero row or column and
    ``1 <= cfg.k <= min(shape)``. Cluster ids are relabeled by descending
    row count so presentation order is stable.
    """
    a = matrix.matrix if isinstance(matrix, BipartiteMatrix) else matrix
    a = sp.csr_matrix(a, dtype=np.float64)
    n_rows, n_cols = a.shape

    if cfg.k < 1:
        raise ValueError("k must be at least 1")
    if cfg.k > min(n_rows, n_cols):
        raise ValueError(f"k={cfg.k} exceeds min(matrix dims)={min(n_rows, n_cols)}")

    row_sums = np.asarray(a.sum(axis=1)).ravel()
    col_sums = np.asarray(a.sum(axis=0)).ravel()
    if (row_sums == 0).any() or (col_sums == 0).any():
        raise ValueError("matrix has an all-zero row or column; prune before clustering")

    inv_sqrt_rows = 1.0 / np.sqrt(row_sums)
    inv_sqrt_cols = 1.0 / np.sqrt(col_sums)
    normalized = sp.diags(inv_sqrt_rows) @ a @ sp.diags(inv_sqrt_cols)
    normalized = sp.csr_matrix(normalized)

    # Trivial leading pair: sqrt degrees, singular value exactly 1.
    u0 = np.sqrt(row_sums)
    u0 /= np.linalg.norm(u0)
    v0 = np.sqrt(col_sums)
    v0 /= np.linalg.norm(v0)

    dims = cfg.resolved_dims()
    u, v = _deflated_svd(normalized, u0, v0, dims, cfg.seed)

    # Fix each pair's sign (largest-magnitude coordinate positive) so runs
    # are stable across BLAS builds.
    stacked_uv = np.vstack([u, v])
    for j in range(u.shape[1]):
        col = stacked_uv[:, j]
        pivot = np.abs(col).argmax()
        if col[pivot] < 0:
            u[:, j] = -u[:, j]
            v[:, j] = -v[:, j]

    embedding = np.vstack(
        [inv_sqrt_rows[:, None] * u, inv_sqrt_cols[:, None] * v]
    )
    labels, inertia = _kmeans(
        embedding, cfg.k, cfg.seed, cfg.kmeans_restarts, cfg.max_iterations
    )

    row_labels = labels[:n_rows]
    col_labels = labels[n_rows:]

    # Relabel by descending row membership (ties by old id).
    row_counts = np.bincount(row_labels, minlength=cfg.k)
    order = sorted(range(cfg.k), key=lambda c: (-row_counts[c], c))
    remap = np.empty(cfg.k, dtype=np.int64)
    for new_id, old_id in enumerate(order):
        remap[old_id] = new_id
    return CoClusterResult(
        row_labels=remap[row_labels],
        col_labels=remap[col_labels],
        objective=inertia,
    )
