"""Schreier complexes of a small complex acting on a group by left multiplication.

A small complex ``S`` whose vertices are group elements acts on ``G`` by
``{a, b, c} . g = {ag, bg, cg}``.  When ``S`` passes conditions 0 and A-E
(checked by :func:`validate_cts`) every edge ``{t1 g, t2 g}`` of the big
complex has exactly two names ``(g, t)`` and ``(t1 t2 g, t^-1)``, and the
random walk on edges lifts to the zig-zag structure built from
``G_dual = Cay(G, {t1 t2})`` and ``L = walk(S)``.
"""

from __future__ import annotations

import functools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .complexes import TwoComplex, check_regularity, link_of
from .errors import ParameterError, SizeError, StateError, StructuralError
from .graphs import WeightedGraph
from .groups import FiniteGroup
from .seeding import derive_rng
from .spectra import (
    DEFAULT_TOL,
    ReplacementProduct,
    SpectralReport,
    cayley_graph,
    spectral_report,
    walk_graph,
    zigzag_function,
)

CONDITIONS = ("0", "A", "B", "C", "D", "E")
LIFT_EXHAUSTIVE_LIMIT = 50_000


@dataclass(eq=False)
class ActionComplex:
    """Group ``G`` plus a small complex ``S`` whose vertex ids are element labels of ``G``.

    ``elements[i]`` is the group index of ``S``'s vertex ``i``.
    """

    group: FiniteGroup
    S: TwoComplex
    elements: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.elements = np.array([self.group.index_of_label(v) for v in self.S.vertices], dtype=np.int64)

    @classmethod
    def from_element_triangles(cls, group: FiniteGroup, triangles: Sequence[Sequence[int]], name: str = "") -> "ActionComplex":
        """Build ``S`` from triangles given as group element indices."""
        tri = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        used = np.unique(tri)
        verts = tuple(group.label(int(g)) for g in used)
        S = TwoComplex(verts, np.searchsorted(used, tri), name=name)
        return cls(group, S)

    @property
    def types(self) -> np.ndarray:
        """``(|T|, 2)`` element pairs of the edges of ``S`` (edge order of ``S``)."""
        return self.elements[self.S.edges]

    def element_triangles(self) -> np.ndarray:
        return self.elements[self.S.triangles]


def schreier_complex(action: ActionComplex, act: Callable[[int, int], int] | None = None,
                     n_points: int | None = None, point_labels: Sequence[str] | None = None) -> TwoComplex:
    """All images ``sigma . g``; left multiplication unless ``act`` is given.

    A general ``act(s, x)`` acts on ``range(n_points)``.  Duplicate images are
    merged and their number recorded in ``meta["collisions"]``.
    """
    G = action.group
    tri = action.element_triangles()
    if act is None:
        tables = {int(s): G.left_table(int(s)) for s in np.unique(tri)}
        rows = np.concatenate([
            np.stack([tables[int(a)], tables[int(b)], tables[int(c)]], axis=1) for a, b, c in tri
        ]) if len(tri) else np.zeros((0, 3), np.int64)
        labels = G.labels()
        n = G.order
    else:
        if n_points is None:
            raise ParameterError("a general action needs n_points")
        n = n_points
        out = []
        for a, b, c in tri:
            for x in range(n):
                img = (act(int(a), x), act(int(b), x), act(int(c), x))
                if len(set(img)) < 3:
                    raise StructuralError(
                        "triangle image collapses",
                        witness={"triangle": [G.label(int(a)), G.label(int(b)), G.label(int(c))], "point": x},
                    )
                out.append(img)
        rows = np.array(out, dtype=np.int64).reshape(-1, 3)
        labels = list(point_labels) if point_labels is not None else [str(x) for x in range(n)]
    total = len(rows)
    cx = TwoComplex(tuple(labels), rows, name="schreier")
    cx.meta["collisions"] = int(total - cx.n_triangles)
    return cx


def align_to_group(complex_: TwoComplex, group: FiniteGroup) -> TwoComplex:
    """Re-index a complex whose vertex ids are the group's labels into group order."""
    labels = group.labels()
    if complex_.vertices == tuple(labels):
        return complex_
    if set(complex_.vertices) != set(labels):
        raise ParameterError("complex vertex ids are not the elements of the group")
    where = np.array([group.index_of_label(v) for v in complex_.vertices], dtype=np.int64)
    out = TwoComplex(tuple(labels), where[complex_.triangles], name=complex_.name, meta=dict(complex_.meta))
    return out


# -- validation ---------------------------------------------------------------

@dataclass
class ValidationRecord:
    verdicts: dict[str, bool]
    d_tilde: int | None
    witness: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        out: dict = {c: ("pass" if self.verdicts[c] else "fail") for c in CONDITIONS}
        out["d_tilde"] = self.d_tilde
        out["witness"] = self.witness or None
        return out


def _ordered_types(action: ActionComplex) -> np.ndarray:
    t = action.types
    return np.concatenate([t, t[:, ::-1]])


def condition_d_violations(action: ActionComplex, limit: int = 10) -> list[list[list[str]]]:
    """Pairs ``t != t'`` of ordered types with ``t1 t2^-1 = t1' t2'^-1`` and ``t' != (t2^-1, t1^-1)``."""
    G = action.group
    inv = G.inverse_table()
    buckets: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a, b in _ordered_types(action):
        buckets[G.mul(int(a), int(inv[b]))].append((int(a), int(b)))
    out = []
    for members in buckets.values():
        for i, (a, b) in enumerate(members):
            for c, d in members[i + 1:]:
                if (c, d) == (a, b):
                    continue
                if c == int(inv[b]) and d == int(inv[a]):
                    continue
                out.append([[G.label(a), G.label(b)], [G.label(c), G.label(d)]])
                if len(out) >= limit:
                    return out
    return out


def validate_cts(action: ActionComplex) -> ValidationRecord:
    """Verdicts for conditions 0 and A-E, each failure with a witness."""
    G, S = action.group, action.S
    inv = G.inverse_table()
    el = action.elements
    verdicts: dict[str, bool] = {}
    witness: dict = {}
    edge_set = {(int(min(a, b)), int(max(a, b))) for a, b in action.types}

    bad0 = [int(s) for s in el if (min(s, inv[s]), max(s, inv[s])) in edge_set]
    verdicts["0"] = not bad0
    if bad0:
        witness["0"] = {"element": G.label(bad0[0]), "inverse": G.label(int(inv[bad0[0]]))}

    reg = check_regularity(S)
    verdicts["A"] = reg.regular
    if not reg.regular:
        witness["A"] = reg.witness

    badB = [(int(a), int(b)) for a, b in action.types if G.mul(int(a), int(b)) != G.mul(int(b), int(a))]
    verdicts["B"] = not badB
    if badB:
        witness["B"] = {"type": [G.label(badB[0][0]), G.label(badB[0][1])]}

    badC = [
        (int(a), int(b)) for a, b in action.types
        if (min(inv[a], inv[b]), max(inv[a], inv[b])) not in edge_set
    ]
    verdicts["C"] = not badC
    if badC:
        a, b = badC[0]
        witness["C"] = {"type": [G.label(a), G.label(b)], "missing_inverse": [G.label(int(inv[a])), G.label(int(inv[b]))]}

    badD = condition_d_violations(action)
    verdicts["D"] = not badD
    if badD:
        witness["D"] = {"ordered_types": badD[0]}

    conn = S.is_connected()
    verdicts["E"] = conn
    if not conn:
        _, labels = S.skeleton().components()
        other = int(np.flatnonzero(labels != labels[0])[0])
        witness["E"] = {"vertices_in_different_components": [S.vertices[0], S.vertices[other]]}
    return ValidationRecord(verdicts, reg.d, witness)


# -- the instance --------------------------------------------------------------

@dataclass(frozen=True)
class EdgeName:
    center: str
    type: tuple[str, str]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural check; ``witness`` is set on failure."""

    name: str
    passed: bool
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"check": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.details:
            out["details"] = self.details
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class CtsInstance:
    """Schreier complex of ``action`` together with its derived graphs.

    ``complex_`` may be supplied to check a complex from elsewhere (a file, or
    a deliberately corrupted copy) against the structure predicted by ``action``.
    Rep vertex ``(g, t)`` has index ``g * |T| + t``.
    """

    def __init__(self, action: ActionComplex, complex_: TwoComplex | None = None,
                 record: ValidationRecord | None = None) -> None:
        self.action = action
        self.group = action.group
        self.record = record if record is not None else validate_cts(action)
        if complex_ is not None:
            complex_ = align_to_group(complex_, action.group)
        self._complex = complex_
        self.meta: dict = {}

    @property
    def complex(self) -> TwoComplex:
        """The big complex, built on first use."""
        if self._complex is None:
            self._complex = schreier_complex(self.action)
        return self._complex

    @property
    def complex_built(self) -> bool:
        return self._complex is not None

    def attach_complex(self, complex_: TwoComplex) -> None:
        """Check ``complex_`` instead of the Schreier complex; drops caches that depend on it."""
        self._complex = align_to_group(complex_, self.group)
        for key in ("edge_name_table", "walk"):
            self.__dict__.pop(key, None)

    def __repr__(self) -> str:
        cx = repr(self._complex) if self._complex is not None else "lazy"
        return f"CtsInstance(G={self.group!r}, |T|={self.n_types}, C={cx})"

    @property
    def types(self) -> np.ndarray:
        return self.action.types

    @property
    def n_types(self) -> int:
        return len(self.action.types)

    def _require(self, *conds: str) -> None:
        failed = [c for c in conds if not self.record.verdicts.get(c, False)]
        if failed:
            raise StateError(
                f"operation needs conditions {', '.join(conds)}; failed: {', '.join(failed)}",
                witness={c: self.record.witness.get(c) for c in failed},
            )

    # -- type bookkeeping
    @functools.cached_property
    def type_inverse(self) -> np.ndarray:
        """``type_inverse[t]`` is the index of ``{t1^-1, t2^-1}`` in the type list."""
        self._require("C")
        inv = self.group.inverse_table()
        keys = {(int(min(a, b)), int(max(a, b))): i for i, (a, b) in enumerate(self.types)}
        return np.array([keys[(int(min(inv[a], inv[b])), int(max(inv[a], inv[b])))] for a, b in self.types])

    @functools.cached_property
    def hat_elements(self) -> np.ndarray:
        """``t1 t2`` for every type (well defined once the pair commutes)."""
        self._require("B")
        return np.array([self.group.mul(int(a), int(b)) for a, b in self.types], dtype=np.int64)

    @functools.cached_property
    def edge_name_table(self) -> np.ndarray:
        """``E[g, t]``: index in ``complex.edges`` of ``{t1 g, t2 g}``, or -1 if absent."""
        G = self.group
        cols = []
        for a, b in self.types:
            cols.append(self.complex.edge_indices(G.left_table(int(a)), G.left_table(int(b))))
        return np.stack(cols, axis=1) if cols else np.zeros((G.order, 0), np.int64)

    def _point_index(self) -> np.ndarray:
        """Complex vertex index of every group element (identity map for Schreier complexes)."""
        labels = self.group.labels()
        if tuple(labels) == self.complex.vertices:
            return np.arange(self.group.order)
        return np.array([self.complex.vertex_index.get(x, -1) for x in labels])

    # -- derived graphs
    @functools.cached_property
    def L(self) -> WeightedGraph:
        g = walk_graph(self.action.S)
        g.labels = ["{" + ",".join(self.group.label(int(x)) for x in t) + "}" for t in self.types]
        g.name = "L"
        return g

    @functools.cached_property
    def G_dual(self) -> WeightedGraph:
        self._require("B", "C")
        return cayley_graph(self.group, self.hat_elements, name="G_dual")

    @functools.cached_property
    def rep(self) -> ReplacementProduct:
        self._require("B", "C")
        G = self.group
        ports = np.stack([G.left_table(int(h)) for h in self.hat_elements], axis=1)
        back = np.broadcast_to(self.type_inverse, ports.shape)
        return ReplacementProduct(self.G_dual, self.L, ports, back)

    @functools.cached_property
    def zigzag(self) -> WeightedGraph:
        return self.rep.zigzag()

    @functools.cached_property
    def walk(self) -> WeightedGraph:
        return walk_graph(self.complex)

    def graph(self, selector: str) -> WeightedGraph:
        if selector == "walk":
            return self.walk
        if selector == "dual":
            return self.G_dual
        if selector == "L":
            return self.L
        if selector == "rep":
            return self.rep.graph()
        if selector == "zigzag":
            return self.zigzag
        raise ParameterError(f"unknown graph selector {selector!r}")

    def graph_size(self, selector: str) -> int:
        """Vertex count of a derived graph without building it."""
        if selector == "walk":
            # each edge has two names when the conditions hold
            return self.complex.n_edges if self.complex_built else self.group.order * self.n_types // 2
        return {
            "dual": self.group.order,
            "L": self.n_types,
            "rep": self.group.order * self.n_types,
            "zigzag": self.group.order * self.n_types,
        }[selector]

    def edge_name(self, center: int, t: int) -> EdgeName:
        a, b = self.types[t]
        G = self.group
        return EdgeName(G.label(int(center)), (G.label(int(a)), G.label(int(b))))


def centers_of(cts: CtsInstance, edge: Sequence[str]) -> list[EdgeName]:
    """Every name ``(g, t)`` with ``{t1 g, t2 g}`` equal to ``edge``, by exhaustive inversion."""
    u, v = (cts.complex.index_of(x) for x in edge)
    e = cts.complex.edge_index(u, v)
    if e < 0:
        raise ParameterError(f"{list(edge)} is not an edge of the complex")
    gs, ts = np.nonzero(cts.edge_name_table == e)
    return [cts.edge_name(int(g), int(t)) for g, t in zip(gs, ts)]


def predicted_centers(cts: CtsInstance, center: int, t: int) -> list[EdgeName]:
    """The pair ``{(g, t), (t1 t2 g, t^-1)}``."""
    g2 = cts.group.mul(int(cts.hat_elements[t]), int(center))
    return [cts.edge_name(center, t), cts.edge_name(g2, int(cts.type_inverse[t]))]


def check_two_centers(cts: CtsInstance) -> CheckResult:
    """Every edge has exactly two names, and they are ``(g, t)`` and ``(t1 t2 g, t^-1)``."""
    E = cts.edge_name_table
    C = cts.complex
    if cts.complex.vertices != tuple(cts.group.labels()):
        return CheckResult("two-centers", False, {"reason": "complex vertices are not the group elements"})
    missing = np.argwhere(E < 0)
    if len(missing):
        g, t = (int(x) for x in missing[0])
        a, b = cts.types[t]
        G = cts.group
        return CheckResult("two-centers", False, {
            "name": {"center": G.label(g), "type": [G.label(int(a)), G.label(int(b))]},
            "non_edge": [G.label(G.mul(int(a), g)), G.label(G.mul(int(b), g))],
        })
    counts = np.bincount(E.ravel(), minlength=C.n_edges)
    bad = np.flatnonzero(counts != 2)
    if len(bad):
        e = int(bad[0])
        u, v = C.edges[e]
        names = centers_of(cts, (C.vertices[u], C.vertices[v]))
        return CheckResult("two-centers", False, {
            "edge": [C.vertices[u], C.vertices[v]], "names": [[n.center, list(n.type)] for n in names],
            "count": int(counts[e]),
        })
    if cts.record.verdicts["B"] and cts.record.verdicts["C"]:
        G = cts.group
        partner_center = np.stack([G.left_table(int(h)) for h in cts.hat_elements], axis=1)
        partner = E[partner_center, np.broadcast_to(cts.type_inverse, E.shape)]
        off = np.argwhere(partner != E)
        if len(off):
            g, t = (int(x) for x in off[0])
            return CheckResult("two-centers", False, {
                "name": [cts.edge_name(g, t).center, list(cts.edge_name(g, t).type)],
                "reason": "second name is not (t1 t2 g, t^-1)",
            })
    return CheckResult("two-centers", True, details={"edges": int(C.n_edges)})


def dual_graph(cts: CtsInstance) -> WeightedGraph:
    return cts.G_dual


def link_graph(cts: CtsInstance) -> WeightedGraph:
    """Graph on ``{x y^-1}`` (ordered types) with an edge ``{a c^-1, b c^-1}`` per triangle and apex ``c``."""
    G = cts.group
    inv = G.inverse_table()
    verts = sorted({G.mul(int(x), int(inv[y])) for x, y in _ordered_types(cts.action)})
    index = {g: i for i, g in enumerate(verts)}
    us, vs = [], []
    for tri in cts.action.element_triangles():
        for k in range(3):
            c = int(tri[k])
            a, b = (int(x) for j, x in enumerate(tri) if j != k)
            us.append(index[G.mul(a, int(inv[c]))])
            vs.append(index[G.mul(b, int(inv[c]))])
    return WeightedGraph.from_edges(len(verts), us, vs, labels=[G.label(g) for g in verts], name="link")


def translated_link_matches(cts: CtsInstance, template: WeightedGraph, v: int) -> dict | None:
    """Compare ``link_of(C, v)`` with ``template`` moved by ``x -> x v``; ``None`` when equal."""
    G = cts.group
    C = cts.complex
    link = link_of(C, C.vertices[v])
    labels = [G.index_of_label(x) for x in template.labels]
    image = np.array([C.index_of(G.label(G.mul(g, int(v)))) for g in labels])
    link_ids = np.array([C.index_of(x) for x in link.labels])
    pos = np.searchsorted(link_ids, image) if len(link_ids) else np.zeros(0, np.int64)
    pos_c = np.minimum(pos, max(len(link_ids) - 1, 0))
    if len(image) != len(link_ids) or not (link_ids[pos_c] == image).all():
        return {"vertex": C.vertices[v], "reason": "link vertex sets differ"}
    # link_of sorts its vertices by complex index, which pos maps into
    moved = template.adjacency.tocoo()
    m = sp.csr_matrix((moved.data, (pos[moved.row], pos[moved.col])), shape=link.adjacency.shape)
    if (m != link.adjacency).nnz:
        return {"vertex": C.vertices[v], "reason": "link edges differ from the translated template"}
    return None


def check_link_graph(cts: CtsInstance, sample: int | None = 200, seed: int = 0) -> CheckResult:
    """Verify ``link_of(C, v)`` is the translate of :func:`link_graph` at sampled vertices."""
    template = link_graph(cts)
    n = cts.group.order
    verts = _sample(n, sample, seed, "link-graph")
    for v in verts:
        w = translated_link_matches(cts, template, int(v))
        if w is not None:
            return CheckResult("link-graph", False, w)
    return CheckResult("link-graph", True, details={"checked_vertices": len(verts), "link_vertices": template.n})


def _sample(n: int, sample: int | None, seed: int, key: str) -> np.ndarray:
    if sample is None or n <= sample:
        return np.arange(n)
    return np.sort(derive_rng(seed, key).choice(n, size=sample, replace=False))


# -- the lift -------------------------------------------------------------------

def verify_lift(cts: CtsInstance, blue_perm: np.ndarray | None = None, seed: int = 0,
                exhaustive_limit: int = LIFT_EXHAUSTIVE_LIMIT) -> CheckResult:
    """Covering-map check of ``E`` from ``G_zig`` onto ``G_walk(C)``.

    ``G_zig`` joins ``x`` to its red neighbours and to the red neighbours of
    its blue partner.  For every checked ``x`` the image multiset of its
    neighbourhood must equal the walk-graph neighbourhood of ``E(x)``; also
    ``E`` must hit every walk vertex exactly twice.
    """
    rep = cts.rep
    perm = rep.blue_perm if blue_perm is None else np.asarray(blue_perm, dtype=np.int64)
    N = rep.n
    E = cts.edge_name_table.ravel()
    name = "lift"
    if (E < 0).any():
        x = int(np.flatnonzero(E < 0)[0])
        return CheckResult(name, False, {"rep_vertex": _rep_label(cts, x), "reason": "name maps to a non-edge"})
    counts = np.bincount(E, minlength=cts.complex.n_edges)
    if (counts != 2).any():
        e = int(np.flatnonzero(counts != 2)[0])
        u, v = cts.complex.edges[e]
        return CheckResult(name, False, {
            "edge": [cts.complex.vertices[u], cts.complex.vertices[v]], "preimages": int(counts[e]),
            "reason": "E is not 2-to-1",
        })
    if N <= exhaustive_limit:
        rows = np.arange(N)
        coverage = "exhaustive"
    else:
        rows = np.sort(derive_rng(seed, "lift").choice(N, size=max(1, N // 10), replace=False))
        coverage = "sampled-10pct"
    red = rep.P_R
    red_rows = red[rows] + red[perm[rows]]
    n_edges = cts.complex.n_edges
    proj = sp.csr_matrix((np.ones(N, dtype=np.int64), (np.arange(N), E)), shape=(N, n_edges))
    image = red_rows @ proj
    walk = cts.walk.adjacency
    diff = (image - walk[E[rows]]).tocsr()
    diff.eliminate_zeros()
    bad_rows = np.flatnonzero(np.diff(diff.indptr))
    details = {"rep_vertices": int(N), "checked": int(len(rows)), "coverage": coverage}
    if len(bad_rows):
        x = int(rows[bad_rows[0]])
        return CheckResult(name, False, {"rep_vertex": _rep_label(cts, x),
                                         "reason": "neighbourhood is not mapped bijectively"}, details)
    return CheckResult(name, True, details=details)


def _rep_label(cts: CtsInstance, x: int) -> dict:
    g, t = divmod(int(x), cts.n_types)
    name = cts.edge_name(g, t)
    return {"center": name.center, "type": list(name.type)}


def corrupt_blue_edges(cts: CtsInstance, seed: int = 0) -> np.ndarray:
    """A blue matching with two pairs rewired (still an involution), for fault injection."""
    perm = cts.rep.blue_perm.copy()
    rng = derive_rng(seed, "corrupt-blue")
    x = int(rng.integers(len(perm)))
    y = int(perm[x])
    candidates = np.flatnonzero((np.arange(len(perm)) != x) & (np.arange(len(perm)) != y))
    u = int(rng.choice(candidates))
    v = int(perm[u])
    perm[x], perm[u] = u, x
    perm[y], perm[v] = v, y
    return perm


# -- the bound --------------------------------------------------------------------

@dataclass
class BoundReport:
    walk: SpectralReport
    zigzag: SpectralReport
    dual: SpectralReport
    L: SpectralReport
    bound_zigzag: float
    bound_function: float
    margin: float
    holds: bool
    relaxation_consistent: bool
    tolerance: float

    def to_json(self) -> dict:
        return {
            "lambda_walk": self.walk.lambda_abs,
            "lambda_zigzag": self.zigzag.lambda_abs,
            "lambda_dual": self.dual.lambda_abs,
            "lambda_L": self.L.lambda_abs,
            "bound_zigzag": self.bound_zigzag,
            "bound_function": self.bound_function,
            "margin": self.margin,
            "holds": self.holds,
            "relaxation_consistent": self.relaxation_consistent,
            "tolerance": self.tolerance,
            "graphs": {
                "walk": self.walk.to_json(), "zigzag": self.zigzag.to_json(),
                "dual": self.dual.to_json(), "L": self.L.to_json(),
            },
        }


def cts_bound_check(cts: CtsInstance, tol: float = 1e-6, eig_tol: float = DEFAULT_TOL) -> BoundReport:
    """Check ``lambda(G_walk) <= sqrt(1/2 + lambda(zigzag)/2) + tol`` (absolute lambdas).

    Also reports the relaxed form with the zig-zag function of
    ``lambda(G_dual)`` and ``lambda(L)``.  Disconnected graphs count as
    ``lambda = 1``.
    """
    for sel in ("walk", "zigzag"):
        from .spectra import sparse_cap

        if cts.graph_size(sel) > sparse_cap():
            raise SizeError(f"{sel} graph has {cts.graph_size(sel)} vertices, above the eigensolver cap {sparse_cap()}")
    walk = spectral_report(cts.walk, eig_tol, allow_disconnected=True)
    zz = spectral_report(cts.zigzag, eig_tol, allow_disconnected=True)
    dual = spectral_report(cts.G_dual, eig_tol, allow_disconnected=True)
    lg = spectral_report(cts.L, eig_tol, allow_disconnected=True)
    b1 = math.sqrt(0.5 + 0.5 * min(zz.lambda_abs, 1.0))
    f = zigzag_function(min(dual.lambda_abs, 1.0), min(lg.lambda_abs, 1.0))
    b2 = math.sqrt(0.5 + 0.5 * f)
    return BoundReport(
        walk, zz, dual, lg, b1, b2, b1 - walk.lambda_abs, walk.lambda_abs <= b1 + tol,
        zz.lambda_abs <= f + tol, tol,
    )
