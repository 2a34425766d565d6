import itertools

import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from hdx.complexes import TwoComplex, complete_partite_complex
from hdx.errors import DisconnectedError, ParameterError, SizeError, StructuralError
from hdx.graphs import WeightedGraph
from hdx.groups import BooleanVectorGroup, CyclicGroup
from hdx.spectra import (
    cartesian_product,
    cayley_graph,
    johnson_graph,
    johnson_lambda,
    normalized_spectrum,
    replacement_product,
    spectral_report,
    walk_graph,
    zigzag_function,
)
from oracles import cayley_adjacency, second_eigs, walk_adjacency


def _graph(nxg) -> WeightedGraph:
    return WeightedGraph(sp.csr_matrix(nx.to_scipy_sparse_array(nxg, dtype=np.int64)))


def _cycle(n: int) -> WeightedGraph:
    return _graph(nx.cycle_graph(n))


def test_k4_second_eigenvalues():
    """K4 has normalized spectrum {1, -1/3, -1/3, -1/3}."""
    r = spectral_report(_graph(nx.complete_graph(4)))
    assert r.lambda_signed == pytest.approx(-1 / 3, abs=1e-12)
    assert r.lambda_abs == pytest.approx(1 / 3, abs=1e-12)
    assert r.spectral_gap == pytest.approx(3 * (1 + 1 / 3))


def test_c4_bipartite():
    """C4 has spectrum {1, 0, 0, -1}: signed value 0, absolute value 1."""
    r = spectral_report(_cycle(4))
    assert r.lambda_signed == pytest.approx(0, abs=1e-12)
    assert r.lambda_abs == pytest.approx(1, abs=1e-12)


def test_multiplicity_scaling_is_invariant():
    """Doubling every edge leaves the normalized spectrum unchanged."""
    g = _graph(nx.petersen_graph())
    g2 = WeightedGraph(g.adjacency * 2)
    assert np.allclose(normalized_spectrum(g), normalized_spectrum(g2), atol=1e-12)


def test_disconnected_graph():
    """Disconnected graphs raise, or report 1 when allowed."""
    g = _graph(nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3)))
    with pytest.raises(DisconnectedError):
        spectral_report(g)
    r = spectral_report(g, allow_disconnected=True)
    assert (r.lambda_signed, r.lambda_abs, r.connected) == (1.0, 1.0, False)


def test_degree_zero_rejected():
    """An isolated vertex has no normalized row."""
    g = WeightedGraph.from_edges(3, [0], [1])
    with pytest.raises(ParameterError):
        spectral_report(g)


def test_cayley_z5_is_c5():
    """Cay(Z5, {1, 4}) is the 5-cycle."""
    g = cayley_graph(CyclicGroup(5), [1, 4])
    assert nx.is_isomorphic(nx.from_scipy_sparse_array(g.adjacency), nx.cycle_graph(5))
    assert spectral_report(g).lambda_signed == pytest.approx(np.cos(2 * np.pi / 5), abs=1e-12)


def test_cayley_multiset_counts_multiplicity():
    """Repeated self-inverse generators give parallel edges."""
    g = cayley_graph(CyclicGroup(6), [1, 5, 3, 3])
    assert g.degree == 4
    assert g.adjacency[0, 3] == 2


def test_cayley_f2_squared_is_c4():
    """Cay(F2^2, {01, 10}) is a 4-cycle."""
    G = BooleanVectorGroup(2)
    g = cayley_graph(G, [1, 2])
    assert nx.is_isomorphic(nx.from_scipy_sparse_array(g.adjacency), nx.cycle_graph(4))


def test_cayley_matches_oracle():
    """Adjacency agrees with the loop-based a[g, s g] construction."""
    G = CyclicGroup(9)
    gens = [2, 7, 3, 6]
    assert np.array_equal(cayley_graph(G, gens).dense(), cayley_adjacency(9, G.mul, gens))


def test_cayley_rejects_non_symmetric():
    """A multiset without inverses is rejected."""
    with pytest.raises(ParameterError):
        cayley_graph(CyclicGroup(7), [1, 2])


@pytest.mark.parametrize("S", [4, 5, 6, 7, 9])
def test_johnson_lambda_formula(S):
    """J(S,2) has second eigenvalue (S-4)/(2(S-2))."""
    g = johnson_graph(S)
    assert g.degree == 2 * (S - 2)
    assert spectral_report(g).lambda_signed == pytest.approx(johnson_lambda(S), abs=1e-12)


def test_johnson_small_values():
    """Values for S = 4, 5, 6."""
    assert [johnson_lambda(S) for S in (4, 5, 6)] == [0.0, pytest.approx(1 / 6), pytest.approx(1 / 4)]
    with pytest.raises(ParameterError):
        johnson_lambda(3)


def test_johnson_is_line_graph_of_complete_graph():
    """J(S,2) is the line graph of K_S."""
    g = nx.from_scipy_sparse_array(johnson_graph(6).adjacency)
    assert nx.is_isomorphic(g, nx.line_graph(nx.complete_graph(6)))


def test_cartesian_k3_k3():
    """K3 x K3 is 4-regular with second eigenvalue 1/4."""
    k3 = _graph(nx.complete_graph(3))
    g = cartesian_product(k3, k3)
    assert g.degree == 4
    assert spectral_report(g).lambda_signed == pytest.approx(0.25, abs=1e-12)


def test_cartesian_c4_k2():
    """C4 x K2 is the cube graph."""
    g = cartesian_product(_cycle(4), _graph(nx.complete_graph(2)))
    assert nx.is_isomorphic(nx.from_scipy_sparse_array(g.adjacency), nx.hypercube_graph(3))


@given(st.integers(3, 7), st.integers(3, 7))
def test_cartesian_eigenvalue_of_cycles(a, b):
    """Second eigenvalue of a sum of regular graphs is the degree-weighted max."""
    g, h = _cycle(a), _cycle(b)
    lg = spectral_report(g).lambda_signed
    lh = spectral_report(h).lambda_signed
    want = max((2 * lg + 2) / 4, (2 + 2 * lh) / 4)
    assert spectral_report(cartesian_product(g, h)).lambda_signed == pytest.approx(want, abs=1e-10)


def test_walk_graph_single_triangle_is_k3():
    """One triangle gives a triangle of edges."""
    w = walk_graph(TwoComplex.from_triangles([("a", "b", "c")]))
    assert w.n == 3 and w.degree == 2


def test_walk_graph_octahedron():
    """K_{2,2,2} gives a 4-regular walk graph on 12 vertices."""
    cx, _ = complete_partite_complex([2, 2, 2])
    w = walk_graph(cx)
    assert w.n == 12 and w.degree == 4


def test_walk_graph_shared_edge_degree():
    """An edge in two triangles has walk degree 4."""
    cx = TwoComplex.from_triangles([("a", "b", "c"), ("a", "b", "d")])
    w = walk_graph(cx)
    ab = cx.edge_index(cx.index_of("a"), cx.index_of("b"))
    assert w.degrees[ab] == 4


@given(
    st.lists(
        st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)).filter(lambda t: len(set(t)) == 3),
        min_size=1,
        max_size=15,
    )
)
def test_walk_graph_matches_bruteforce(tris):
    """Adjacency equals the set-based walk construction, and degree is twice the triangle count."""
    tris = [tuple(str(x) for x in t) for t in tris]
    cx = TwoComplex.from_triangles(tris)
    uniq = [tuple(sorted(t)) for t in {frozenset(t) for t in tris}]
    edges, a = walk_adjacency(uniq)
    order = [edges.index(frozenset(e)) for e in cx.edge_ids()]
    assert np.array_equal(walk_graph(cx).dense(), a[np.ix_(order, order)])
    assert np.array_equal(walk_graph(cx).degrees, 2 * cx.edge_triangle_counts)


def _cycle_ports(n: int):
    ports = np.array([[(v - 1) % n, (v + 1) % n] for v in range(n)])
    back = np.array([[1, 0]] * n)
    return ports, back


def test_replacement_product_structure():
    """Blue edges form a fixed-point-free involution and degree is deg(cloud)+1."""
    base = _cycle(5)
    cloud = _graph(nx.complete_graph(2))
    ports, back = _cycle_ports(5)
    rp = replacement_product(base, cloud, ports, back)
    pb = rp.P_B.toarray()
    assert np.array_equal(pb @ pb, np.eye(10, dtype=np.int64))
    assert (np.diag(pb) == 0).all()
    assert rp.graph().degree == cloud.degree + 1
    assert rp.zigzag().degree == cloud.degree ** 2


def test_replacement_product_edgeless_cloud():
    """With an edgeless cloud only the blue matching remains and the zig-zag graph is empty."""
    base = _cycle(4)
    cloud = WeightedGraph(sp.csr_matrix((2, 2), dtype=np.int64))
    ports, back = _cycle_ports(4)
    rp = replacement_product(base, cloud, ports, back)
    assert rp.graph().degree == 1
    assert rp.zigzag().adjacency.nnz == 0


def test_replacement_product_rejects_bad_ports():
    """Ports that are not a bijection onto neighbours are rejected."""
    base = _cycle(5)
    cloud = _graph(nx.complete_graph(2))
    ports, back = _cycle_ports(5)
    ports[0, 0] = 2
    with pytest.raises(StructuralError):
        replacement_product(base, cloud, ports, back)
    ports, back = _cycle_ports(5)
    back[0, 0] = 0
    with pytest.raises(StructuralError):
        replacement_product(base, cloud, ports, back)


def test_zigzag_function_identities():
    """Boundary values: f(a,0)=a, f(0,b)=b, f(1,b)=f(a,1)=1."""
    for x in np.linspace(0, 1, 11):
        assert zigzag_function(x, 0) == pytest.approx(x)
        assert zigzag_function(0, x) == pytest.approx(x)
        assert zigzag_function(1, x) == pytest.approx(1)
        assert zigzag_function(x, 1) == pytest.approx(1)


def test_zigzag_function_domain():
    """Arguments outside [0,1] raise."""
    with pytest.raises(ParameterError):
        zigzag_function(1.5, 0.1)
    with pytest.raises(ParameterError):
        zigzag_function(0.1, float("nan"))


def test_zigzag_function_grid_bounds():
    """max(a,b) <= f(a,b) <= min(a+b, 1) on a grid, and f is monotone."""
    grid = np.linspace(0, 1, 21)
    vals = np.array([[zigzag_function(a, b) for b in grid] for a in grid])
    for (i, a), (j, b) in itertools.product(enumerate(grid), repeat=2):
        assert max(a, b) - 1e-12 <= vals[i, j] <= min(a + b, 1) + 1e-12
    assert (np.diff(vals, axis=0) >= -1e-12).all() and (np.diff(vals, axis=1) >= -1e-12).all()


@pytest.mark.parametrize("name", ["petersen", "cube", "k33", "c7"])
def test_eigensolver_matches_general_solver(name):
    """Production values agree with the non-symmetric D^-1 A oracle."""
    g = {
        "petersen": nx.petersen_graph(),
        "cube": nx.hypercube_graph(3),
        "k33": nx.complete_bipartite_graph(3, 3),
        "c7": nx.cycle_graph(7),
    }[name]
    wg = _graph(g)
    r = spectral_report(wg)
    signed, absv = second_eigs(wg.dense())
    assert r.lambda_signed == pytest.approx(signed, abs=1e-9)
    assert r.lambda_abs == pytest.approx(absv, abs=1e-9)


def test_sparse_path_matches_dense(monkeypatch):
    """The deflated Lanczos route agrees with the dense route."""
    g = cayley_graph(CyclicGroup(101), [1, 100, 7, 94])
    dense = spectral_report(g)
    monkeypatch.setenv("HDX_SIZE_CAP", "50")
    sparse = spectral_report(g)
    assert sparse.method == "lanczos" and dense.method == "dense"
    assert sparse.lambda_signed == pytest.approx(dense.lambda_signed, abs=1e-8)
    assert sparse.lambda_abs == pytest.approx(dense.lambda_abs, abs=1e-8)


def test_sparse_cap_raises(monkeypatch):
    """Graphs above the sparse cap raise SizeError."""
    monkeypatch.setenv("HDX_SIZE_CAP", "10")
    monkeypatch.setenv("HDX_SPARSE_CAP", "20")
    with pytest.raises(SizeError):
        spectral_report(_cycle(30))
