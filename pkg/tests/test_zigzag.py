import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.cartan import preset
from qloop.zigzag import (
    DistZigZag,
    Edge,
    GeneralZigZag,
    M_Z,
    coarse_selections,
    enumerate_distinguished,
    graph,
    m_Z,
    refined_selections,
    selection_sum,
    topological_order,
    topological_orders,
    verify_selection_identity,
)


def test_geometry():
    Z = DistZigZag("i", "j", 1, 0, 1)
    assert Z.top == [0, 2] and Z.bottom == [1]
    Z2 = DistZigZag("i", "j", 2, 0, 1)
    assert Z2.top == [0, 2, 4] and Z2.bottom == [2]
    assert DistZigZag.parse(Z2.descriptor()) == Z2
    with pytest.raises(ValueError):
        DistZigZag("i", "j", 1, 0, 0)
    with pytest.raises(ValueError):
        DistZigZag("i", "j", 1, 1, 1).check(preset("rank2:-1"))


def test_m_Z_and_M_Z():
    C7 = preset("rank2:-7")
    assert m_Z(DistZigZag("i", "j", 2, 5, 3), C7) == 3
    for k, l, m in [(0, 0, 2), (1, 2, 3), (2, 0, 1)]:
        C = preset(f"rank2:{-(k + l)}")
        assert m_Z(DistZigZag("i", "j", k, l, m), C) == m
    C1 = preset("rank2:-1")
    assert m_Z(GeneralZigZag("i", "j", 0, 0, 5, 5), C1) == 0
    C0 = preset("rank2:0")
    Z0 = DistZigZag("i", "j", 0, 0, 2)
    assert M_Z(Z0, C0) == m_Z(Z0, C0)
    assert M_Z(DistZigZag("i", "j", 2, 0, 1), preset("rank2:-2")) == 2
    assert M_Z(DistZigZag("i", "j", 1, 0, 1), C1) == 1


def test_enumerate():
    C1 = preset("rank2:-1")
    got = {(Z.k, Z.l, Z.m) for Z in enumerate_distinguished(C1, "i", "j", 2, 1)}
    assert got == {(1, 0, 1)}
    assert enumerate_distinguished(C1, "i", "j", 1, 1) == []
    got0 = {(Z.k, Z.l, Z.m) for Z in enumerate_distinguished(preset("rank2:0"), "i", "j", 1, 1)}
    assert got0 == {(0, 0, 1)}


def test_graph_examples():
    G = graph(DistZigZag("i", "j", 0, 0, 1))
    assert set(G.vertices) == {("x", 0), ("y", 0)}
    assert set(G.edges) == {Edge(("x", 0), ("y", 0), "SW"), Edge(("y", 0), ("x", 0), "NW")}
    G = graph(DistZigZag("i", "j", 1, 0, 1))
    assert set(G.vertices) == {("x", 0), ("x", 2), ("y", 1)}
    assert set(G.edges) == {
        Edge(("x", 0), ("x", 2), "H"),
        Edge(("x", 2), ("y", 1), "SW"),
        Edge(("y", 1), ("x", 0), "NW"),
    }


def test_distinguished_graph_counts():
    for k, l, m in [(1, 2, 2), (3, 0, 3), (0, 4, 1)]:
        G = graph(DistZigZag("i", "j", k, l, m))
        assert G.count("SW") == m and G.count("NW") == m
        assert G.count("H") == (k + m - 1) + (l + m - 1)


ALL_Z = [DistZigZag("i", "j", k, D - k, m) for D in range(0, 5) for k in range(D + 1) for m in range(1, 4)]


@pytest.mark.parametrize("Z", ALL_Z, ids=lambda Z: Z.descriptor())
def test_selection_identity(Z):
    assert verify_selection_identity(Z)
    assert verify_selection_identity(Z, coarse=True)
    assert selection_sum(Z).is_zero()


def test_selection_signs_and_counts():
    Z = DistZigZag("i", "j", 0, 0, 2)
    tags = {S.tags: S.sign for S in refined_selections(Z)}
    # SW may only be followed by SW, NW only by NW
    assert tags == {(("SW", 0), ("SW", 0)): 1, (("NW", 0), ("NW", 0)): -1}
    assert len(coarse_selections(DistZigZag("i", "j", 1, 1, 1))) == 4


def _brute_orders(G, S):
    chosen = S.multiplicities()
    comp = [e for e in G.edges if chosen[e] == 0]
    out = []
    for perm in itertools.permutations(sorted(G.vertices)):
        pos = {v: a for a, v in enumerate(perm)}
        if all(pos[e.src] < pos[e.tgt] for e in comp):
            out.append(list(perm))
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(1, 2), st.data())
def test_topological_orders_match_brute_force(k, l, m, data):
    Z = DistZigZag("i", "j", k, l, m)
    G = graph(Z)
    sels = refined_selections(Z)
    S = data.draw(st.sampled_from(sels))
    brute = _brute_orders(G, S)
    got = list(topological_orders(G, S))
    assert sorted(map(tuple, got)) == sorted(map(tuple, brute))
    assert topological_order(G, S) in brute
