import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdx.errors import InfeasibleError, ParameterError, SizeError
from hdx.groups import (
    BooleanVectorGroup,
    CyclicGroup,
    GeneratorSet,
    ProductGroup,
    SpecialLinearGroup,
    enumerate_and_index,
    group_from_descriptor,
    make_group,
    product_group,
    sample_symmetric_generators,
)


def _sl2_count(p: int) -> int:
    return sum(
        1 for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1
    )


SMALL_GROUPS = [
    CyclicGroup(7),
    BooleanVectorGroup(3),
    SpecialLinearGroup(3),
    SpecialLinearGroup(5, projective=True),
    ProductGroup([CyclicGroup(2), CyclicGroup(3), BooleanVectorGroup(2)]),
    ProductGroup([SpecialLinearGroup(3), CyclicGroup(4)]),
]


def test_cyclic_inverse():
    assert make_group("cyclic", m=5).inv(2) == 3


def test_boolean_vector_self_inverse():
    g = make_group("boolean-vector", t=4)
    assert all(g.inv(x) == x for x in g.elements())


@pytest.mark.parametrize("p", [2, 3, 5])
def test_special_linear_order_matches_enumeration(p):
    g = make_group("special-linear", p=p)
    assert g.order == _sl2_count(p) == p * (p * p - 1)


def test_projective_quotient_order():
    assert SpecialLinearGroup(5, projective=True).order == 60
    assert SpecialLinearGroup(3, projective=True).order == 12


def test_product_examples():
    assert product_group([CyclicGroup(2), CyclicGroup(3)]).order == 6
    z = product_group([CyclicGroup(5)] * 3)
    assert z.mul(z.index((1, 2, 3)), z.index((4, 3, 2))) == z.identity
    mixed = product_group([BooleanVectorGroup(2), CyclicGroup(3)])
    assert mixed.element(mixed.identity) == ((0, 0), 0)


def test_enumeration_lengths_and_order():
    assert len(enumerate_and_index(CyclicGroup(3))) == 3
    assert len(enumerate_and_index(SpecialLinearGroup(3))) == 24
    e = enumerate_and_index(product_group([CyclicGroup(2), CyclicGroup(2)]))
    assert list(e.elements) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumeration_cap():
    with pytest.raises(SizeError):
        enumerate_and_index(CyclicGroup(100), cap=50)


@pytest.mark.parametrize("g", SMALL_GROUPS, ids=repr)
def test_group_axioms_exhaustive(g):
    n = g.order
    table = np.array([[g.mul(a, b) for b in range(n)] for a in range(n)])
    inv = g.inverse_table()
    assert all(sorted(row) == list(range(n)) for row in table)
    assert (table[np.arange(n), inv] == g.identity).all()
    assert (table[g.identity] == np.arange(n)).all()
    # (g h) h^-1 = g
    assert all(table[table[a, b], inv[b]] == a for a in range(n) for b in range(n))
    # associativity on a grid
    for a, b, c in itertools.product(range(0, n, max(1, n // 6)), repeat=3):
        assert table[table[a, b], c] == table[a, table[b, c]]


@pytest.mark.parametrize("g", SMALL_GROUPS, ids=repr)
def test_translation_tables_and_index_roundtrip(g):
    for s in range(0, g.order, max(1, g.order // 5)):
        assert list(g.left_table(s)) == [g.mul(s, x) for x in range(g.order)]
        assert list(g.right_table(s)) == [g.mul(x, s) for x in range(g.order)]
    assert [g.index(g.element(i)) for i in range(g.order)] == list(range(g.order))
    assert [g.index_of_label(g.label(i)) for i in range(g.order)] == list(range(g.order))


def test_descriptor_roundtrip():
    for g in SMALL_GROUPS:
        assert group_from_descriptor(g.descriptor()) == g


def test_nonabelian_detected():
    assert not SpecialLinearGroup(3).is_abelian
    assert CyclicGroup(6).is_abelian


def test_bad_parameters():
    with pytest.raises(ParameterError):
        make_group("cyclic", m=1)
    with pytest.raises(ParameterError):
        make_group("special-linear", p=4)
    with pytest.raises(ParameterError):
        make_group("nope")
    with pytest.raises(ParameterError):
        make_group("cyclic")


def test_sample_z5_single_pair():
    for seed in range(5):
        f = sample_symmetric_generators(CyclicGroup(5), 1, seed)
        g, h = f.elements
        assert g in {1, 2, 3, 4} and h == (-g) % 5


def test_sample_boolean_infeasible():
    with pytest.raises(InfeasibleError):
        sample_symmetric_generators(BooleanVectorGroup(4), 2, 0)


def test_sample_z7_closed_under_negation():
    f = sample_symmetric_generators(CyclicGroup(7), 2, 11)
    els = set(f.elements)
    assert len(els) == 4 and {(-x) % 7 for x in els} == els and 0 not in els


def test_sample_is_deterministic():
    g = SpecialLinearGroup(5)
    assert sample_symmetric_generators(g, 3, 9).elements == sample_symmetric_generators(g, 3, 9).elements


@given(m=st.integers(7, 60), k=st.integers(1, 3), seed=st.integers(0, 2**32))
def test_generator_set_invariant(m, k, seed):
    g = CyclicGroup(m)
    f = sample_symmetric_generators(g, k, seed)
    inv = g.inverse_table()
    assert all(inv[f.elements[i]] == f.elements[(i + k) % (2 * k)] for i in range(2 * k))
    assert len(set(f.elements)) == 2 * k and g.identity not in f.elements


def test_generator_set_rejects_bad_lists():
    g = CyclicGroup(7)
    with pytest.raises(ParameterError):
        GeneratorSet(g, (1, 2), 1)  # 2 is not the inverse of 1
    with pytest.raises(ParameterError):
        GeneratorSet(g, (0, 0), 1)
    with pytest.raises(ParameterError):
        GeneratorSet(CyclicGroup(6), (3, 3), 1)
    f = GeneratorSet(g, (1, 3, 6, 4), 2)
    assert GeneratorSet.from_json(f.to_json()) == f
