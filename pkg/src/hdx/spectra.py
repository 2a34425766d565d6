"""Graph constructions and the normalized-adjacency eigensolver.

``lambda_signed`` is the second-largest eigenvalue of the normalized adjacency
matrix; ``lambda_abs`` is the largest absolute value over the non-trivial
spectrum (the norm on the complement of the stationary vector).  Spectral gaps
use the signed value, operator-norm bounds use the absolute value.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, eigsh

from .errors import DisconnectedError, ParameterError, SizeError, StructuralError
from .graphs import WeightedGraph

DEFAULT_TOL = 1e-9
DEFAULT_DENSE_CAP = 4000
DEFAULT_SPARSE_CAP = 250_000


def dense_cap() -> int:
    return int(os.environ.get("HDX_SIZE_CAP", DEFAULT_DENSE_CAP))


def sparse_cap() -> int:
    return int(os.environ.get("HDX_SPARSE_CAP", DEFAULT_SPARSE_CAP))


@dataclass(frozen=True)
class SpectralReport:
    lambda_signed: float
    lambda_abs: float
    smallest: float
    spectral_gap: float | None
    degree: int | None
    tolerance: float
    n: int
    method: str
    connected: bool = True

    def to_json(self) -> dict:
        return asdict(self)


def _check_graph(graph: WeightedGraph) -> np.ndarray:
    if graph.n < 2:
        raise ParameterError(f"spectrum needs at least 2 vertices, got {graph.n}")
    deg = graph.degrees
    if (deg <= 0).any():
        v = int(np.flatnonzero(deg <= 0)[0])
        raise ParameterError(f"vertex {graph.label(v)} has degree 0", witness={"vertex": graph.label(v)})
    return deg


def normalized_adjacency(graph: WeightedGraph) -> sp.csr_matrix:
    """``D^{-1/2} A D^{-1/2}``; similar to the random-walk matrix ``D^{-1} A``."""
    scale = 1.0 / np.sqrt(graph.degrees.astype(float))
    return sp.csr_matrix(sp.diags(scale) @ graph.adjacency.astype(float) @ sp.diags(scale))


def normalized_spectrum(graph: WeightedGraph) -> np.ndarray:
    """All eigenvalues of the normalized adjacency, ascending (dense solve)."""
    _check_graph(graph)
    if graph.n > dense_cap():
        raise SizeError(f"full spectrum of {graph.n} vertices exceeds the dense cap {dense_cap()}")
    return sla.eigvalsh(normalized_adjacency(graph).toarray())


def _disconnected(graph: WeightedGraph, labels: np.ndarray) -> DisconnectedError:
    a = 0
    b = int(np.flatnonzero(labels != labels[0])[0])
    return DisconnectedError(
        f"graph {graph.name or ''} is disconnected".replace("  ", " "),
        witness={"components": int(labels.max() + 1), "vertices_in_different_components": [graph.label(a), graph.label(b)]},
    )


def spectral_report(graph: WeightedGraph, tol: float = DEFAULT_TOL, allow_disconnected: bool = False) -> SpectralReport:
    """Second eigenvalues of the normalized adjacency matrix.

    Disconnected graphs raise unless ``allow_disconnected``, in which case the
    repeated trivial eigenvalue gives ``lambda_signed = lambda_abs = 1``.
    """
    deg = _check_graph(graph)
    ncomp, labels = graph.components()
    d = graph.degree
    if ncomp > 1:
        if not allow_disconnected:
            raise _disconnected(graph, labels)
        smallest = _smallest(graph, tol)
        return SpectralReport(1.0, 1.0, smallest, 0.0 if d is not None else None, d, tol, graph.n, "disconnected", False)
    n = graph.n
    if n <= dense_cap():
        ev = normalized_spectrum(graph)
        second, smallest, method = float(ev[-2]), float(ev[0]), "dense"
    else:
        if n > sparse_cap():
            raise SizeError(
                f"graph with {n} vertices exceeds the eigensolver cap {sparse_cap()}; use sampling mode",
                witness={"n": n, "cap": sparse_cap()},
            )
        second, smallest = _sparse_pair(graph, deg, tol)
        method = "lanczos"
    second = min(second, 1.0)
    lam_abs = max(abs(second), abs(smallest))
    gap = d * (1.0 - second) if d is not None else None
    return SpectralReport(second, lam_abs, smallest, gap, d, tol, n, method, True)


def _smallest(graph: WeightedGraph, tol: float) -> float:
    if graph.n <= dense_cap():
        return float(normalized_spectrum(graph)[0])
    return _sparse_extreme(normalized_adjacency(graph), "SA", tol)


def _sparse_extreme(op, which: str, tol: float) -> float:
    n = op.shape[0]
    v0 = np.random.default_rng(12345).standard_normal(n)
    vals = eigsh(op, k=1, which=which, tol=tol * 1e-2, v0=v0, ncv=min(n - 1, 40), maxiter=100 * n,
                 return_eigenvectors=False)
    return float(vals[0])


def _sparse_pair(graph: WeightedGraph, deg: np.ndarray, tol: float) -> tuple[float, float]:
    m = normalized_adjacency(graph)
    v = np.sqrt(deg.astype(float))
    v /= np.linalg.norm(v)

    def deflated(x):
        x = np.asarray(x).reshape(-1)
        return m @ x - 2.0 * v * (v @ x)

    op = LinearOperator(m.shape, matvec=deflated, dtype=float)
    second = _sparse_extreme(op, "LA", tol)
    smallest = _sparse_extreme(m, "SA", tol)
    return second, smallest


# short alias mirroring the usual symbol
lam = spectral_report


# -- graph constructions ----------------------------------------------------

def cayley_graph(group, multiset: Sequence[int], name: str = "") -> WeightedGraph:
    """Edge ``{g, s g}`` for every occurrence of ``s``; the multiset must be inverse-closed."""
    multiset = [int(s) for s in multiset]
    inv = group.inverse_table()
    counts = Counter(multiset)
    for s, c in counts.items():
        if counts.get(int(inv[s]), 0) != c:
            raise ParameterError(
                f"generator multiset is not inverse-closed at {group.label(s)}",
                witness={"element": group.label(s), "count": c, "inverse_count": counts.get(int(inv[s]), 0)},
            )
    n = group.order
    src = np.tile(np.arange(n, dtype=np.int64), len(multiset))
    dst = np.concatenate([group.left_table(s) for s in multiset]) if multiset else np.zeros(0, np.int64)
    return WeightedGraph.from_arcs(n, src, dst, name=name or "cayley")


def johnson_graph(S: int, k: int = 2) -> WeightedGraph:
    """``J(S, k)``: ``k``-subsets of ``range(S)`` adjacent when they share ``k-1`` points."""
    if S < 2 or not 1 <= k < S:
        raise ParameterError(f"Johnson graph needs S >= 2 and 1 <= k < S, got S={S}, k={k}")
    subsets = list(itertools.combinations(range(S), k))
    index = {s: i for i, s in enumerate(subsets)}
    us, vs = [], []
    for i, s in enumerate(subsets):
        rest = [x for x in range(S) if x not in s]
        for drop in s:
            for add in rest:
                t = tuple(sorted(set(s) - {drop} | {add}))
                j = index[t]
                if i < j:
                    us.append(i)
                    vs.append(j)
    labels = ["{" + ",".join(map(str, s)) + "}" for s in subsets]
    return WeightedGraph.from_edges(len(subsets), us, vs, labels=labels, name=f"J({S},{k})")


def johnson_lambda(S: int) -> float:
    """Second normalized eigenvalue of ``J(S, 2)``: ``(S-4) / (2(S-2))``."""
    if S < 4:
        raise ParameterError(f"the Johnson eigenvalue formula needs S >= 4, got {S}")
    return (S - 4) / (2 * (S - 2))


def cartesian_product(g: WeightedGraph, h: WeightedGraph) -> WeightedGraph:
    """Box product; vertex ``(x, y)`` has index ``x * h.n + y``."""
    for name, x in (("first", g), ("second", h)):
        if not x.is_regular:
            raise ParameterError(f"{name} factor of the Cartesian product is not regular")
    a = sp.kron(g.adjacency, sp.identity(h.n, dtype=np.int64)) + sp.kron(sp.identity(g.n, dtype=np.int64), h.adjacency)
    return WeightedGraph(sp.csr_matrix(a), name=f"{g.name}x{h.name}")


def walk_graph(complex_) -> WeightedGraph:
    """Vertices are the complex's edges; each triangle joins its three edges pairwise."""
    if complex_.n_triangles == 0:
        raise ParameterError("walk graph of a complex without triangles is undefined")
    te = complex_.triangle_edges
    u = np.concatenate([te[:, 0], te[:, 0], te[:, 1]])
    v = np.concatenate([te[:, 1], te[:, 2], te[:, 2]])
    return WeightedGraph.from_edges(complex_.n_edges, u, v, name="walk")


def zigzag_function(l1: float, l2: float) -> float:
    """``f(a, b) = (1-b^2) a / 2 + sqrt((1-b^2)^2 a^2 + 4 b^2) / 2``."""
    for name, x in (("l1", l1), ("l2", l2)):
        if not (0.0 <= x <= 1.0) or math.isnan(x):
            raise ParameterError(f"{name}={x} is outside [0, 1]")
    c = 1.0 - l2 * l2
    return 0.5 * c * l1 + 0.5 * math.sqrt(c * c * l1 * l1 + 4.0 * l2 * l2)


# -- replacement and zig-zag products ----------------------------------------

@dataclass(eq=False)
class ReplacementProduct:
    """Replacement product of a ``D``-regular base with a cloud graph on ``D`` vertices.

    Vertex ``(v, t)`` has index ``v * D + t``.  ``ports[v, t]`` is the base
    neighbour reached from port ``t`` of ``v`` and ``back_ports[v, t]`` the port
    of that neighbour that leads back, so blue edges pair ``(v, t)`` with
    ``(ports[v, t], back_ports[v, t])``.
    """

    base: WeightedGraph
    cloud: WeightedGraph
    ports: np.ndarray
    back_ports: np.ndarray
    blue_perm: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        n, D = self.base.n, self.cloud.n
        self.ports = np.asarray(self.ports, dtype=np.int64)
        self.back_ports = np.asarray(self.back_ports, dtype=np.int64)
        if self.ports.shape != (n, D) or self.back_ports.shape != (n, D):
            raise StructuralError(f"port tables must have shape ({n}, {D})")
        if self.base.degree != D:
            raise StructuralError(f"base degree {self.base.degree} differs from cloud size {D}")
        _check_ports(self.base, self.ports)
        perm = self.ports * D + self.back_ports
        perm = perm.ravel()
        if perm.min() < 0 or perm.max() >= n * D:
            raise StructuralError("back port outside the cloud")
        bad = np.flatnonzero(perm[perm] != np.arange(n * D))
        if len(bad):
            x = int(bad[0])
            raise StructuralError(
                "blue edges are not a matching",
                witness={"vertex": [x // D, x % D], "partner": [int(perm[x]) // D, int(perm[x]) % D]},
            )
        fixed = np.flatnonzero(perm == np.arange(n * D))
        if len(fixed):
            x = int(fixed[0])
            raise StructuralError("blue edge is a loop", witness={"vertex": [x // D, x % D]})
        self.blue_perm = perm

    @property
    def n(self) -> int:
        return self.base.n * self.cloud.n

    @property
    def P_R(self) -> sp.csr_matrix:
        return sp.csr_matrix(sp.kron(sp.identity(self.base.n, dtype=np.int64), self.cloud.adjacency))

    @property
    def P_B(self) -> sp.csr_matrix:
        n = self.n
        return sp.csr_matrix((np.ones(n, dtype=np.int64), (np.arange(n), self.blue_perm)), shape=(n, n))

    def red_graph(self) -> WeightedGraph:
        return WeightedGraph(self.P_R, name="red")

    def graph(self) -> WeightedGraph:
        """Red and blue edges together (degree ``deg(cloud) + 1``)."""
        return WeightedGraph(self.P_R + self.P_B, name="replacement")

    def zigzag(self) -> WeightedGraph:
        r = self.P_R
        return WeightedGraph(sp.csr_matrix(r @ self.P_B @ r), name="zigzag")


def _check_ports(base: WeightedGraph, ports: np.ndarray) -> None:
    """Each row of ``ports`` must list the base neighbours with multiplicity."""
    n, D = ports.shape
    if ports.min() < 0 or ports.max() >= n:
        raise StructuralError("port refers to an unknown base vertex")
    counted = sp.csr_matrix(
        (np.ones(n * D, dtype=np.int64), (np.repeat(np.arange(n), D), ports.ravel())), shape=(n, n)
    )
    diff = (counted - base.adjacency).tocoo()
    if diff.nnz:
        bad = diff.data != 0
        if bad.any():
            v = int(diff.row[np.flatnonzero(bad)[0]])
            raise StructuralError(
                f"ports at vertex {base.label(v)} are not a bijection onto its neighbours",
                witness={"vertex": base.label(v), "ports": ports[v].tolist()},
            )


def replacement_product(base: WeightedGraph, cloud: WeightedGraph, ports, back_ports) -> ReplacementProduct:
    return ReplacementProduct(base, cloud, ports, back_ports)


def zigzag_product(base: WeightedGraph, cloud: WeightedGraph, ports, back_ports) -> WeightedGraph:
    return ReplacementProduct(base, cloud, ports, back_ports).zigzag()
