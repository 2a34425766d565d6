"""Independent dense eigensolver used as a cross-check oracle.

Parallel cyclic Jacobi: each sweep runs a round-robin schedule of disjoint
index pairs, so every round applies ``n/2`` commuting plane rotations at once.
Shares no code with the production LAPACK/Lanczos path.
"""

from __future__ import annotations

import numpy as np


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint pairs covering every pair of ``range(m)`` once (``m`` even)."""
    m = n + (n % 2)
    ring = list(range(1, m))
    rounds = []
    for _ in range(m - 1):
        line = [0] + ring
        p = np.array([line[i] for i in range(m // 2)])
        q = np.array([line[m - 1 - i] for i in range(m // 2)])
        keep = (p < n) & (q < n)
        p, q = p[keep], q[keep]
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        ring = ring[-1:] + ring[:-1]
    return rounds


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, ascending."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("matrix must be square and symmetric")
    if n == 1:
        return a.ravel().copy()
    rounds = _round_robin(n)
    scale = max(np.linalg.norm(a), 1e-300)
    # entries below this perturb eigenvalues far less than tol; rotating them costs a full row pass
    skip = max(1e-16 * scale, 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * scale:
            break
        rotated = False
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > skip
            if not active.any():
                continue
            rotated = True
            p, q, apq = p[active], q[active], apq[active]
            tau = (a[q, q] - a[p, p]) / (2.0 * apq)
            with np.errstate(over="ignore"):
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # J^T A J: rotate rows p, q, then columns p, q
            rp, rq = a[p], a[q]
            a[p], a[q] = c[:, None] * rp - s[:, None] * rq, s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p], a[:, q] = cp * c - cq * s, cp * s + cq * c
        if not rotated:
            break
    return np.sort(np.diag(a))


def jacobi_normalized_spectrum(graph) -> np.ndarray:
    """Normalized-adjacency spectrum of a :class:`WeightedGraph` computed by Jacobi rotations."""
    adj = graph.adjacency.toarray().astype(float)
    scale = 1.0 / np.sqrt(adj.sum(axis=1))
    return jacobi_eigenvalues(adj * scale[:, None] * scale[None, :])
