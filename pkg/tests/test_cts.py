import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdx.complexes import check_regularity
from hdx.constructions import build_conlon, find_sidon_set
from hdx.cts import (
    ActionComplex,
    CtsInstance,
    centers_of,
    check_link_graph,
    check_two_centers,
    condition_d_violations,
    corrupt_blue_edges,
    cts_bound_check,
    predicted_centers,
    schreier_complex,
    validate_cts,
    verify_lift,
)
from hdx.errors import StateError
from hdx.groups import BooleanVectorGroup, CyclicGroup, SpecialLinearGroup
from oracles import condition_d_pairs, edge_names, walk_adjacency


def _z7(triangles):
    return ActionComplex.from_element_triangles(CyclicGroup(7), triangles)


def test_schreier_z7_single_triangle():
    """One triangle acting on Z7 gives 7 distinct triangles."""
    cx = schreier_complex(_z7([[0, 1, 3]]))
    assert cx.n_triangles == 7 and cx.meta["collisions"] == 0


def test_schreier_conlon_triangle_count():
    """Conlon on F2^4 has |S(2)| * 16 triangles."""
    inst = build_conlon(4, [1, 2, 4, 8])
    assert inst.complex.n_triangles == 4 * 16


def test_conditions_pass_on_conlon(conlon_6_5):
    """Sidon sets give all six conditions."""
    assert conlon_6_5.record.all_pass
    assert conlon_6_5.record.d_tilde == 3


def test_condition_zero_failure():
    """An edge {s, s^-1} breaks condition 0."""
    rec = validate_cts(_z7([[1, 6, 2]]))
    assert not rec.verdicts["0"] and rec.witness["0"]["element"] in {"1", "6"}


def test_condition_a_failure():
    """Triangles sharing one edge are not edge-regular."""
    rec = validate_cts(_z7([[1, 2, 3], [1, 2, 5]]))
    assert not rec.verdicts["A"]


def test_condition_c_failure():
    """A type whose inverse pair is not an edge breaks condition C."""
    rec = validate_cts(_z7([[1, 2, 4]]))
    assert not rec.verdicts["C"] and rec.witness["C"]["missing_inverse"] == ["6", "5"]


def test_condition_e_failure():
    """Two disjoint triangles give a disconnected small complex."""
    rec = validate_cts(ActionComplex.from_element_triangles(CyclicGroup(13), [[1, 2, 3], [10, 11, 12]]))
    assert not rec.verdicts["E"]


def test_condition_b_fails_on_nonabelian_types():
    """Non-commuting vertices of an edge break condition B."""
    G = SpecialLinearGroup(3)
    a, b = next((a, b) for a, b in itertools.combinations(range(1, G.order), 2) if G.mul(a, b) != G.mul(b, a))
    c = next(c for c in range(1, G.order) if c not in (a, b))
    rec = validate_cts(ActionComplex.from_element_triangles(G, [[a, b, c]]))
    assert not rec.verdicts["B"]


def test_condition_d_non_sidon():
    """1+2 = 4+7 in F2^3 breaks condition D."""
    inst = build_conlon(3, [1, 2, 4, 7], strict=False)
    assert not inst.record.verdicts["D"]


@pytest.mark.parametrize("els", [(1, 2, 4, 8), (1, 2, 4, 7), (1, 2, 3, 4, 8), (3, 5, 6, 9, 12)])
def test_condition_d_matches_bruteforce(els):
    """Violations agree with the loop-based oracle (unordered vs ordered listing)."""
    G = BooleanVectorGroup(4)
    action = build_conlon(4, els, strict=False).action
    types = [tuple(int(x) for x in t) for t in action.types]
    want = condition_d_pairs(G.mul, lambda x: int(G.inverse_table()[x]), types)
    got = condition_d_violations(action, limit=10**6)
    assert 2 * len(got) == len(want)


def test_centers_example():
    """Edge {0001, 0010} has centers 0000 and 0011."""
    inst = build_conlon(4, [1, 2, 4, 8])
    names = centers_of(inst, ("0001", "0010"))
    assert sorted(n.center for n in names) == ["0000", "0011"]
    t = next(i for i, (a, b) in enumerate(inst.types) if {int(a), int(b)} == {1, 2})
    assert {n.center for n in predicted_centers(inst, 0, t)} == {"0000", "0011"}


def test_edge_names_match_exhaustive_search(conlon_6_5):
    """Every edge has the same names as a search over all (g, t)."""
    inst = conlon_6_5
    G = inst.group
    types = [tuple(int(x) for x in t) for t in inst.types]
    C = inst.complex
    for u, v in C.edges[::7]:
        want = edge_names(G.order, G.mul, types, (int(u), int(v)))
        got = centers_of(inst, (C.vertices[u], C.vertices[v]))
        assert len(want) == len(got) == 2
        assert sorted(G.label(g) for g, _ in want) == sorted(n.center for n in got)


def test_two_centers_pass(conlon_6_5):
    """Two-centers holds on a valid instance."""
    assert check_two_centers(conlon_6_5).passed


def test_dual_generators_are_pair_sums(conlon_6_5):
    """G_dual uses t1 t2 (XOR for F2^t) with degree |T|."""
    inst = conlon_6_5
    assert sorted(inst.hat_elements.tolist()) == sorted(int(a) ^ int(b) for a, b in inst.types)
    assert inst.G_dual.degree == inst.n_types


def test_rep_is_twice_walk(conlon_6_5):
    """The replacement product has two vertices per walk vertex."""
    inst = conlon_6_5
    assert inst.rep.n == 2 * inst.walk.n


def test_walk_degree(conlon_6_5):
    """The walk graph is 4 d~ regular."""
    inst = conlon_6_5
    assert check_regularity(inst.complex).d == 2 * inst.record.d_tilde
    assert inst.walk.degree == 4 * inst.record.d_tilde


def test_walk_matches_bruteforce():
    """Walk adjacency of a small Conlon complex agrees with the set-based oracle."""
    inst = build_conlon(4, [1, 2, 4, 8])
    C = inst.complex
    edges, a = walk_adjacency([tuple(t) for t in C.triangles.tolist()])
    order = [edges.index(frozenset(int(x) for x in e)) for e in C.edges]
    assert np.array_equal(inst.walk.dense(), a[np.ix_(order, order)])


def test_lift_passes(conlon_6_5):
    """Every rep neighbourhood maps onto the walk neighbourhood."""
    r = verify_lift(conlon_6_5)
    assert r.passed and r.details["coverage"] == "exhaustive"


def test_lift_detects_corrupt_blue_edges(conlon_6_5):
    """Rewired blue edges are caught with a witness."""
    r = verify_lift(conlon_6_5, blue_perm=corrupt_blue_edges(conlon_6_5, seed=3))
    assert not r.passed and "rep_vertex" in r.witness


def test_lift_sampled_mode(conlon_6_5):
    """Above the exhaustive limit a tenth of the rep vertices is checked."""
    r = verify_lift(conlon_6_5, exhaustive_limit=10)
    assert r.passed and r.details["checked"] == r.details["rep_vertices"] // 10


def test_link_graph_matches_vertex_links(conlon_6_5):
    """Each vertex link is a translate of the predicted link graph."""
    assert check_link_graph(conlon_6_5).passed


def test_corrupted_complex_fails_checks(conlon_6_5):
    """Replacing one triangle breaks two-centers and the lift."""
    inst = CtsInstance(conlon_6_5.action)
    tri = conlon_6_5.complex.triangles.copy()
    tri[0] = [0, 1, 2]
    C = conlon_6_5.complex
    inst.attach_complex(type(C)(C.vertices, tri))
    assert not check_two_centers(inst).passed
    assert not verify_lift(inst).passed


def test_bound_relaxation(conlon_6_5):
    """The zig-zag-function form is never tighter than the direct form."""
    inst = build_conlon(6, find_sidon_set(6, 7, seed=0))
    r = cts_bound_check(inst)
    assert r.holds and r.relaxation_consistent
    assert r.bound_function >= r.bound_zigzag - 1e-9


def test_operations_need_conditions():
    """Derived graphs refuse to build without B and C."""
    inst = CtsInstance(_z7([[1, 2, 4]]))
    with pytest.raises(StateError):
        inst.G_dual


@settings(max_examples=10)
@given(t=st.integers(4, 6), size=st.integers(3, 5), seed=st.integers(0, 10**6))
def test_random_sidon_instances_pass_checks(t, size, seed):
    """Random Sidon sets give instances passing two-centers and the lift."""
    inst = build_conlon(t, find_sidon_set(t, size, seed=seed))
    assert check_two_centers(inst).passed and verify_lift(inst).passed
