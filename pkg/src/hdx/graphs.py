"""Undirected multigraphs stored as symmetric integer sparse adjacency matrices."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import ParameterError


@dataclass(eq=False)
class WeightedGraph:
    """Multigraph on ``0..n-1``; ``adjacency[u, v]`` is the number of ``u``-``v`` edges.

    A self-loop at ``u`` is stored as ``adjacency[u, u] == 2`` per loop, so row
    sums equal degrees and the normalized operator is ``A / d`` for regular graphs.
    """

    adjacency: sp.csr_matrix
    labels: Sequence[str] | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        a = sp.csr_matrix(self.adjacency, dtype=np.int64)
        a.sum_duplicates()
        a.eliminate_zeros()
        if a.shape[0] != a.shape[1]:
            raise ParameterError(f"adjacency must be square, got {a.shape}")
        if (a != a.T).nnz:
            raise ParameterError("adjacency matrix is not symmetric")
        if a.nnz and a.data.min() < 0:
            raise ParameterError("negative edge multiplicity")
        self.adjacency = a
        if self.labels is not None and len(self.labels) != a.shape[0]:
            raise ParameterError("label count does not match vertex count")

    @classmethod
    def from_edges(cls, n: int, u, v, **kwargs) -> "WeightedGraph":
        """Each pair ``(u[i], v[i])`` adds one undirected edge (a loop adds 2 to the diagonal)."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.ones(len(rows), dtype=np.int64)
        return cls(sp.csr_matrix((data, (rows, cols)), shape=(n, n)), **kwargs)

    @classmethod
    def from_arcs(cls, n: int, u, v, **kwargs) -> "WeightedGraph":
        """Each arc ``u[i] -> v[i]`` adds 1 to ``adjacency[u, v]``; the arc list must be symmetric."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        data = np.ones(len(u), dtype=np.int64)
        return cls(sp.csr_matrix((data, (u, v)), shape=(n, n)), **kwargs)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @functools.cached_property
    def degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    @property
    def is_regular(self) -> bool:
        d = self.degrees
        return bool(len(d) == 0 or (d == d[0]).all())

    @property
    def degree(self) -> int | None:
        """Common degree, or ``None`` if the graph is not regular."""
        return int(self.degrees[0]) if self.is_regular and self.n else None

    @property
    def edge_count(self) -> int:
        return int(self.degrees.sum() // 2)

    def components(self) -> tuple[int, np.ndarray]:
        return csgraph.connected_components(self.adjacency, directed=False)

    @property
    def is_connected(self) -> bool:
        return self.n > 0 and self.components()[0] == 1

    def dense(self) -> np.ndarray:
        return self.adjacency.toarray().astype(float)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def to_tsv(self) -> str:
        """``#n=<count>`` header then one ``u<TAB>v<TAB>multiplicity`` row per pair ``u <= v``."""
        coo = sp.triu(self.adjacency).tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"#n={self.n}"]
        for i in order:
            u, v, w = int(coo.row[i]), int(coo.col[i]), int(coo.data[i])
            lines.append(f"{u}\t{v}\t{w // 2 if u == v else w}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "WeightedGraph":
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows or not rows[0].startswith("#n="):
            raise ParameterError("graph TSV must start with a '#n=' header")
        n = int(rows[0][3:])
        us, vs = [], []
        for ln in rows[1:]:
            u, v, w = (int(x) for x in ln.split("\t"))
            us.extend([u] * w)
            vs.extend([v] * w)
        return cls.from_edges(n, us, vs)

    def __repr__(self) -> str:
        d = self.degree
        reg = f"{d}-regular" if d is not None else "irregular"
        return f"WeightedGraph(n={self.n}, {reg}{', ' + self.name if self.name else ''})"
