"""Small-graph isomorphism: colour refinement, canonical forms and backtracking search.

Graphs are dense symmetric integer matrices (edge multiplicities).  Everything
here is exponential in the worst case and meant for links and other graphs of
a few dozen vertices.
"""

from __future__ import annotations

import hashlib
import itertools

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class BudgetExceeded(RuntimeError):
    pass


def refine(adj: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Coarsest equitable refinement of ``colors`` with canonically numbered cells.

    A cell's new number is the rank of its signature (old colour, multiset of
    neighbour colours), so equal inputs up to relabelling give equal outputs.
    """
    colors = np.asarray(colors, dtype=np.int64)
    n = len(colors)
    if n == 0:
        return colors
    k = -1
    while True:
        _, colors = np.unique(colors, return_inverse=True)
        k_new = int(colors.max()) + 1
        if k_new == k:
            return colors
        k = k_new
        onehot = np.zeros((n, k), dtype=np.int64)
        onehot[np.arange(n), colors] = 1
        counts = adj @ onehot
        sig = np.concatenate([colors[:, None], counts], axis=1)
        _, colors = np.unique(sig, axis=0, return_inverse=True)
        colors = colors.reshape(-1)


def wl_hash(adj: np.ndarray) -> str:
    """Hash of the refined colour-class sizes and the quotient matrix (an isomorphism invariant)."""
    colors = refine(adj, np.zeros(len(adj), dtype=np.int64))
    k = int(colors.max()) + 1 if len(colors) else 0
    sizes = np.bincount(colors, minlength=k)
    onehot = np.zeros((len(adj), k), dtype=np.int64)
    onehot[np.arange(len(adj)), colors] = 1
    quotient = onehot.T @ adj @ onehot
    h = hashlib.sha256()
    h.update(sizes.tobytes())
    h.update(quotient.tobytes())
    return h.hexdigest()


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    out = 2 * colors + 1
    out[v] -= 1
    return out


def _target_cell(colors: np.ndarray) -> np.ndarray | None:
    counts = np.bincount(colors)
    multi = np.flatnonzero(counts > 1)
    if len(multi) == 0:
        return None
    sizes = counts[multi]
    c = multi[np.argmin(sizes)]
    return np.flatnonzero(colors == c)


def _twin_representatives(adj: np.ndarray, cell: np.ndarray) -> list[int]:
    """One vertex per class of ``cell`` under "swapping the two is an automorphism".

    ``u`` and ``v`` are twins when their rows agree off ``{u, v}`` and their loops
    match; the transposition then fixes the colouring, so both branches give the
    same leaves.
    """
    reps: list[int] = []
    for v in (int(x) for x in cell):
        twin = False
        for u in reps:
            if adj[u, u] != adj[v, v]:
                continue
            ru, rv = adj[u].copy(), adj[v].copy()
            ru[[u, v]] = rv[[u, v]] = 0
            if np.array_equal(ru, rv):
                twin = True
                break
        if not twin:
            reps.append(v)
    return reps


def canonical_form(adj: np.ndarray, budget: int = 20000) -> tuple[bytes, np.ndarray]:
    """Canonical certificate and a canonical ordering of the vertices.

    Individualization-refinement over the whole search tree; the certificate
    is the lexicographically least relabelled adjacency.  Raises
    :class:`BudgetExceeded` after ``budget`` tree nodes.
    """
    adj = np.asarray(adj, dtype=np.int64)
    n = len(adj)
    best: list = [None, None]
    nodes = [0]

    def visit(colors: np.ndarray) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"canonical labeling exceeded {budget} search nodes")
        cell = _target_cell(colors)
        if cell is None:
            order = np.argsort(colors)
            cert = adj[np.ix_(order, order)].tobytes()
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            return
        for v in _twin_representatives(adj, cell):
            visit(refine(adj, _individualize(colors, v)))

    visit(refine(adj, np.zeros(n, dtype=np.int64)))
    header = np.array([n], dtype=np.int64).tobytes()
    return header + (best[0] or b""), best[1] if best[1] is not None else np.zeros(0, np.int64)


def find_isomorphism(a: np.ndarray, b: np.ndarray, budget: int = 200000) -> np.ndarray | None:
    """Vertex map ``m`` with ``a[i, j] == b[m[i], m[j]]`` or ``None``; refinement-guided backtracking."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = len(a)
    if a.shape != b.shape:
        return None
    joint = np.zeros((2 * n, 2 * n), dtype=np.int64)
    joint[:n, :n] = a
    joint[n:, n:] = b
    nodes = [0]

    def split(colors):
        return colors[:n], colors[n:]

    def search(colors: np.ndarray) -> np.ndarray | None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"isomorphism search exceeded {budget} nodes")
        ca, cb = split(colors)
        if not np.array_equal(np.bincount(ca, minlength=colors.max() + 1), np.bincount(cb, minlength=colors.max() + 1)):
            return None
        counts = np.bincount(ca)
        multi = np.flatnonzero(counts > 1)
        if len(multi) == 0:
            m = np.empty(n, dtype=np.int64)
            pos_b = np.empty(colors.max() + 1, dtype=np.int64)
            pos_b[cb] = np.arange(n)
            m[:] = pos_b[ca]
            if np.array_equal(a, b[np.ix_(m, m)]):
                return m
            return None
        c = multi[np.argmin(counts[multi])]
        v = int(np.flatnonzero(ca == c)[0])
        for w in np.flatnonzero(cb == c):
            trial = 2 * colors + 1
            trial[v] -= 1
            trial[n + int(w)] -= 1
            res = search(refine(joint, trial))
            if res is not None:
                return res
        return None

    start = refine(joint, np.zeros(2 * n, dtype=np.int64))
    return search(start)


def brute_force_isomorphic(a: np.ndarray, b: np.ndarray, max_n: int = 12) -> bool:
    """Plain backtracking over vertex maps with degree pruning; oracle for tiny graphs."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = len(a)
    if n > max_n:
        raise ValueError(f"brute force limited to {max_n} vertices")
    if a.shape != b.shape:
        return False
    da, db = a.sum(axis=1), b.sum(axis=1)
    if sorted(da) != sorted(db):
        return False
    m = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for w in range(n):
            if used[w] or da[i] != db[w] or a[i, i] != b[w, w]:
                continue
            if all(a[i, j] == b[w, m[j]] for j in range(i)):
                m[i] = w
                used[w] = True
                if extend(i + 1):
                    return True
                used[w] = False
        m[i] = -1
        return False

    return extend(0)


def complex_automorphism(
    n: int,
    triangles: np.ndarray,
    fixed: dict[int, int],
    budget: int = 500000,
) -> np.ndarray | None:
    """A vertex permutation preserving the triangle set and extending ``fixed``, or ``None``.

    Backtracking for complexes of at most a few dozen vertices; edge and
    triangle incidence of assigned vertices are checked at every step.
    """
    tri = np.asarray(triangles, dtype=np.int64)
    adj = np.zeros((n, n), dtype=np.int64)
    for u, v, w in tri:
        for x, y in ((u, v), (u, w), (v, w)):
            adj[x, y] += 1
            adj[y, x] += 1
    is_tri = np.zeros((n, n, n), dtype=bool)
    for p in itertools.permutations(range(3)):
        is_tri[tri[:, p[0]], tri[:, p[1]], tri[:, p[2]]] = True
    base = refine(adj, np.zeros(n, dtype=np.int64))
    order = _bfs_order(adj, list(fixed))
    m = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)
    for k, v in fixed.items():
        if base[k] != base[v] or used[v]:
            return None
        m[k] = v
        used[v] = True
    for k in fixed:
        assigned = np.flatnonzero(m >= 0)
        if not np.array_equal(adj[k, assigned], adj[m[k], m[assigned]]):
            return None
    nodes = [0]
    todo = [v for v in order if v not in fixed]

    def ok(x: int, y: int) -> bool:
        assigned = np.flatnonzero(m >= 0)
        if not np.array_equal(adj[x, assigned], adj[y, m[assigned]]):
            return False
        if len(assigned) >= 2:
            pa, pb = np.triu_indices(len(assigned), 1)
            sa, sb = assigned[pa], assigned[pb]
            if not np.array_equal(is_tri[x, sa, sb], is_tri[y, m[sa], m[sb]]):
                return False
        return True

    def extend(i: int) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("automorphism search budget exhausted")
        if i == len(todo):
            return True
        x = todo[i]
        for y in np.flatnonzero((base == base[x]) & ~used):
            y = int(y)
            if adj[x, x] != adj[y, y] or not ok(x, y):
                continue
            m[x] = y
            used[y] = True
            if extend(i + 1):
                return True
            m[x] = -1
            used[y] = False
        return False

    if not extend(0):
        return None
    return m.copy()


def _bfs_order(adj: np.ndarray, start: list[int]) -> list[int]:
    n = len(adj)
    seen = set(start)
    order = list(start)
    queue = list(start) or ([0] if n else [])
    if not start and n:
        seen.add(0)
        order.append(0)
    while len(order) < n:
        while queue:
            x = queue.pop(0)
            for y in np.flatnonzero(adj[x]):
                y = int(y)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        rest = [v for v in range(n) if v not in seen]
        if rest:
            seen.add(rest[0])
            order.append(rest[0])
            queue.append(rest[0])
    return order


def union_find_orbits(n: int, maps: list[np.ndarray]) -> np.ndarray:
    """Orbit label of every point under the group generated by the given permutations."""
    if not maps:
        return np.arange(n)
    src = np.concatenate([np.arange(n)] * len(maps))
    dst = np.concatenate([np.asarray(p, dtype=np.int64) for p in maps])
    g = sp.csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return csgraph.connected_components(g, directed=True, connection="weak")[1]


def orbit_sizes(labels: np.ndarray) -> list[int]:
    _, counts = np.unique(labels, return_counts=True)
    return sorted(int(c) for c in counts)
