"""Pure 2-dimensional simplicial complexes: faces, links, regularity, coloring, Inv and HPOWER."""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csgraph

from .errors import InfeasibleError, ParameterError
from .graphs import WeightedGraph


def _canonical_triangles(tri: np.ndarray) -> np.ndarray:
    tri = np.sort(np.asarray(tri, dtype=np.int64).reshape(-1, 3), axis=1)
    if len(tri) == 0:
        return tri
    return np.unique(tri, axis=0)


@dataclass(eq=False)
class TwoComplex:
    """Triangles over the vertex list ``vertices``; triangle rows hold vertex indices.

    Rows of ``triangles`` are sorted ascending and the rows are unique and in
    lexicographic order.  Edges are derived on demand.
    """

    vertices: tuple[str, ...]
    triangles: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.vertices = tuple(str(v) for v in self.vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ParameterError("duplicate vertex ids")
        tri = np.sort(np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3), axis=1)
        if len(tri):
            if tri.min() < 0 or tri.max() >= len(self.vertices):
                raise ParameterError("triangle refers to an unknown vertex")
            bad = (tri[:, 0] == tri[:, 1]) | (tri[:, 1] == tri[:, 2])
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise ParameterError(
                    "triangle with a repeated vertex", witness=[self.vertices[x] for x in tri[i]]
                )
        self.triangles = _canonical_triangles(tri)

    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence], vertices: Sequence | None = None, **kw) -> "TwoComplex":
        """Build from triangles given by vertex ids; vertices default to first-appearance order."""
        triangles = [tuple(str(x) for x in t) for t in triangles]
        if vertices is None:
            seen: dict[str, None] = {}
            for t in triangles:
                for x in t:
                    seen.setdefault(x, None)
            vertices = list(seen)
        vertices = [str(v) for v in vertices]
        index = {v: i for i, v in enumerate(vertices)}
        try:
            rows = [[index[x] for x in t] for t in triangles]
        except KeyError as exc:
            raise ParameterError(f"unknown vertex {exc.args[0]!r}") from None
        for t in triangles:
            if len(t) != 3:
                raise ParameterError(f"triangle {t!r} does not have 3 vertices")
        return cls(tuple(vertices), np.array(rows, dtype=np.int64).reshape(-1, 3), **kw)

    # -- basic sizes ----------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @functools.cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index_of(self, v: str) -> int:
        try:
            return self.vertex_index[str(v)]
        except KeyError:
            raise ParameterError(f"unknown vertex {v!r}") from None

    # -- edges ----------------------------------------------------------
    def _triangle_edge_keys(self) -> np.ndarray:
        """Keys ``u*n+v`` of the three edges of every triangle, shape (T, 3)."""
        n = self.n_vertices
        t = self.triangles
        return np.stack([t[:, 0] * n + t[:, 1], t[:, 0] * n + t[:, 2], t[:, 1] * n + t[:, 2]], axis=1)

    @functools.cached_property
    def _edge_data(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        keys = self._triangle_edge_keys().ravel()
        uniq, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
        return uniq, inverse.reshape(-1, 3), counts

    @property
    def edge_keys(self) -> np.ndarray:
        return self._edge_data[0]

    @property
    def edges(self) -> np.ndarray:
        """Sorted ``(E, 2)`` array of vertex-index pairs with ``u < v``."""
        keys = self.edge_keys
        n = max(self.n_vertices, 1)
        return np.stack([keys // n, keys % n], axis=1)

    @property
    def n_edges(self) -> int:
        return len(self.edge_keys)

    @property
    def triangle_edges(self) -> np.ndarray:
        """``(T, 3)`` edge indices of each triangle (edges ``01``, ``02``, ``12``)."""
        return self._edge_data[1]

    @property
    def edge_triangle_counts(self) -> np.ndarray:
        return self._edge_data[2]

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge ``{u, v}`` (vertex indices) or -1."""
        u, v = sorted((int(u), int(v)))
        key = u * self.n_vertices + v
        pos = int(np.searchsorted(self.edge_keys, key))
        if pos < self.n_edges and self.edge_keys[pos] == key:
            return pos
        return -1

    def edge_indices(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`edge_index`."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        keys = np.minimum(u, v) * self.n_vertices + np.maximum(u, v)
        pos = np.searchsorted(self.edge_keys, keys)
        pos_c = np.minimum(pos, max(self.n_edges - 1, 0))
        ok = (pos < self.n_edges) & (self.edge_keys[pos_c] == keys) if self.n_edges else np.zeros(len(keys), bool)
        return np.where(ok, pos_c, -1)

    def edge_ids(self) -> list[tuple[str, str]]:
        return [(self.vertices[u], self.vertices[v]) for u, v in self.edges]

    def triangle_ids(self) -> list[tuple[str, str, str]]:
        return [tuple(self.vertices[x] for x in t) for t in self.triangles]

    # -- 1-skeleton -----------------------------------------------------
    def skeleton(self) -> WeightedGraph:
        e = self.edges
        return WeightedGraph.from_edges(self.n_vertices, e[:, 0], e[:, 1], labels=self.vertices, name="skeleton")

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        ncomp, _ = csgraph.connected_components(self.skeleton().adjacency, directed=False)
        return ncomp == 1

    def vertex_triangle_degrees(self) -> np.ndarray:
        return np.bincount(self.triangles.ravel(), minlength=self.n_vertices)

    def __repr__(self) -> str:
        return f"TwoComplex(|V|={self.n_vertices}, |E|={self.n_edges}, |T|={self.n_triangles})"


def derive_edges(complex_: TwoComplex) -> list[tuple[str, str]]:
    """All 2-subsets of triangles as sorted vertex-id pairs."""
    return complex_.edge_ids()


@dataclass(frozen=True)
class RegularityResult:
    d: int | None
    witness: dict | None = None

    @property
    def regular(self) -> bool:
        return self.d is not None


def check_regularity(complex_: TwoComplex) -> RegularityResult:
    """``d`` if every edge lies in exactly ``d`` triangles; otherwise two edges with different counts."""
    counts = complex_.edge_triangle_counts
    if len(counts) == 0:
        return RegularityResult(None, {"reason": "complex has no edges"})
    if (counts == counts[0]).all():
        return RegularityResult(int(counts[0]))
    j = int(np.flatnonzero(counts != counts[0])[0])
    ids = complex_.edge_ids()
    return RegularityResult(
        None,
        {"edges": [list(ids[0]), list(ids[j])], "counts": [int(counts[0]), int(counts[j])]},
    )


@dataclass(frozen=True)
class Coloring:
    """Ordered color classes ``classes[c] = (V^c_0, V^c_1, ...)`` of vertex ids."""

    classes: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(tuple(str(v) for v in cl) for cl in self.classes))
        seen: set[str] = set()
        for cl in self.classes:
            for v in cl:
                if v in seen:
                    raise ParameterError(f"vertex {v!r} has more than one color")
                seen.add(v)

    @property
    def chi(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(cl) for cl in self.classes)

    def color_of(self) -> dict[str, int]:
        return {v: c for c, cl in enumerate(self.classes) for v in cl}

    def color_array(self, complex_: TwoComplex) -> np.ndarray:
        colors = self.color_of()
        missing = [v for v in complex_.vertices if v not in colors]
        if missing:
            raise ParameterError(f"coloring misses vertex {missing[0]!r}")
        return np.array([colors[v] for v in complex_.vertices], dtype=np.int64)

    def index_classes(self, complex_: TwoComplex) -> list[np.ndarray]:
        return [np.array([complex_.index_of(v) for v in cl], dtype=np.int64) for cl in self.classes]

    def to_json(self) -> dict:
        return {"chi": self.chi, "classes": [list(cl) for cl in self.classes]}

    @classmethod
    def from_json(cls, data: dict) -> "Coloring":
        col = cls(tuple(tuple(cl) for cl in data["classes"]))
        if "chi" in data and int(data["chi"]) != col.chi:
            raise ParameterError("coloring chi does not match the number of classes")
        return col


@dataclass(frozen=True)
class ColoringReport:
    strong: bool
    connected: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.strong and self.connected


def validate_coloring(complex_: TwoComplex, coloring: Coloring, max_violations: int = 20) -> ColoringReport:
    """Strong-coloring check (every triangle has three colors) plus 1-skeleton connectivity."""
    col = coloring.color_array(complex_)
    tc = col[complex_.triangles]
    bad = (tc[:, 0] == tc[:, 1]) | (tc[:, 0] == tc[:, 2]) | (tc[:, 1] == tc[:, 2])
    ids = np.flatnonzero(bad)[:max_violations]
    violations = [[complex_.vertices[x] for x in complex_.triangles[i]] for i in ids]
    return ColoringReport(not bad.any(), complex_.is_connected(), violations)


def link_of(complex_: TwoComplex, v: str) -> WeightedGraph:
    """Graph on the neighbours of ``v`` with an edge ``{a, b}`` per triangle ``{v, a, b}``."""
    vi = complex_.index_of(v)
    tri = complex_.triangles[(complex_.triangles == vi).any(axis=1)]
    others = tri[tri != vi].reshape(-1, 2)
    nbrs = np.unique(others)
    local = np.searchsorted(nbrs, others)
    labels = [complex_.vertices[x] for x in nbrs]
    return WeightedGraph.from_edges(len(nbrs), local[:, 0], local[:, 1], labels=labels, name=f"link({v})")


@dataclass(frozen=True)
class InvResult:
    holds: bool
    witness: dict | None = None


def inv_shift(complex_: TwoComplex, coloring: Coloring) -> np.ndarray:
    """Vertex permutation ``V^c_i -> V^c_{i + K_c/2}``."""
    perm = np.arange(complex_.n_vertices)
    for c, cl in enumerate(coloring.index_classes(complex_)):
        k = len(cl)
        if k % 2:
            raise InfeasibleError(f"color class {c} has odd size {k}", witness={"color": c, "size": k})
        perm[cl] = np.roll(cl, -(k // 2))
    return perm


def check_property_inv(complex_: TwoComplex, coloring: Coloring) -> InvResult:
    """Whether the edge set is invariant under the half-shift of every color class."""
    perm = inv_shift(complex_, coloring)
    e = complex_.edges
    image = complex_.edge_indices(perm[e[:, 0]], perm[e[:, 1]])
    bad = np.flatnonzero(image < 0)
    if len(bad) == 0:
        return InvResult(True)
    u, v = e[bad[0]]
    vs = complex_.vertices
    return InvResult(
        False,
        {"edge": [vs[u], vs[v]], "shifted_non_edge": [vs[perm[u]], vs[perm[v]]]},
    )


_SIGNS = np.array([[(m >> 2) & 1, (m >> 1) & 1, m & 1] for m in range(8)], dtype=np.int64)


def hpower(complex_: TwoComplex, coloring: Coloring | None = None) -> tuple[TwoComplex, Coloring | None]:
    """Doubling ``{0,1} x V``: every triangle lifts to all 8 sign patterns.

    Vertex ``(x, a)`` gets id ``"(x,a)"`` and index ``x*|V| + index(a)``.  The
    returned coloring orders class ``c`` as all ``(0, a)`` then all ``(1, a)``
    following the input order, which makes the half-shift swap the two layers.
    """
    n = complex_.n_vertices
    verts = tuple(f"({x},{a})" for x in (0, 1) for a in complex_.vertices)
    tri = complex_.triangles
    lifted = (tri[:, None, :] + _SIGNS[None, :, :] * n).reshape(-1, 3)
    out = TwoComplex(verts, lifted, name=f"hpower({complex_.name})" if complex_.name else "hpower")
    new_col = None
    if coloring is not None:
        new_col = Coloring(
            tuple(tuple(f"(0,{a})" for a in cl) + tuple(f"(1,{a})" for a in cl) for cl in coloring.classes)
        )
    return out, new_col


# -- serialisation --------------------------------------------------------

def complex_to_json(complex_: TwoComplex, coloring: Coloring | None = None) -> dict:
    """Canonical JSON object: vertices sorted, triangle rows and the row list sorted.

    Colour classes keep their order since the ordering carries meaning.
    """
    order = sorted(range(complex_.n_vertices), key=lambda i: complex_.vertices[i])
    rank = np.empty(complex_.n_vertices, dtype=np.int64)
    rank[order] = np.arange(complex_.n_vertices)
    tri = _canonical_triangles(rank[complex_.triangles]) if complex_.n_triangles else complex_.triangles
    out: dict = {
        "vertices": [complex_.vertices[i] for i in order],
        "triangles": tri.tolist(),
    }
    if coloring is not None:
        out["coloring"] = coloring.to_json()
    return out


def complex_from_json(data: dict) -> tuple[TwoComplex, Coloring | None]:
    try:
        cx = TwoComplex(tuple(data["vertices"]), np.array(data["triangles"], dtype=np.int64).reshape(-1, 3))
    except KeyError as exc:
        raise ParameterError(f"complex JSON lacks {exc.args[0]!r}") from None
    col = Coloring.from_json(data["coloring"]) if data.get("coloring") else None
    return cx, col


def dumps_complex(complex_: TwoComplex, coloring: Coloring | None = None) -> str:
    return json.dumps(complex_to_json(complex_, coloring), separators=(",", ":"), sort_keys=True) + "\n"


def loads_complex(text: str) -> tuple[TwoComplex, Coloring | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"complex file is not valid JSON: {exc}") from None
    return complex_from_json(data)


def complete_partite_complex(sizes: Sequence[int], prefix: str = "c") -> tuple[TwoComplex, Coloring]:
    """All polychromatic triangles on parts of the given sizes (vertex ids ``c{part}_{i}``)."""
    if len(sizes) < 3:
        raise ParameterError("need at least 3 parts")
    classes = [[f"{prefix}{c}_{i}" for i in range(k)] for c, k in enumerate(sizes)]
    verts = [v for cl in classes for v in cl]
    offsets = np.cumsum([0, *sizes])
    rows = []
    chi = len(sizes)
    for a in range(chi):
        for b in range(a + 1, chi):
            for c in range(b + 1, chi):
                grid = np.stack(
                    np.meshgrid(
                        np.arange(sizes[a]) + offsets[a],
                        np.arange(sizes[b]) + offsets[b],
                        np.arange(sizes[c]) + offsets[c],
                        indexing="ij",
                    ),
                    axis=-1,
                ).reshape(-1, 3)
                rows.append(grid)
    cx = TwoComplex(tuple(verts), np.concatenate(rows), name="complete-partite")
    return cx, Coloring(tuple(tuple(cl) for cl in classes))
