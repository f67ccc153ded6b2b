from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elr.errors import IsK4, NotGeneralizedHalin, NotHalin, PreconditionViolated
from elr.families import (
    OrderedTree,
    gen_k4,
    gen_random_generalized_halin,
    gen_random_halin,
    gen_random_tufted_halin,
    gen_wheel,
    halin_from_tree,
    random_ordered_tree,
    recognize_generalized_halin,
    recognize_halin,
)
from elr.graph import subdivide_edge
from elr.halin import (
    build_aux,
    decompose,
    draw_generalized_halin,
    draw_halin,
    external_path,
    layout_characteristic,
    pruned_tree,
    tufts_of,
)
from elr.leveling import double_levels, max_span, realize_straight_line, validate_swlp
from elr.metrics import check_planar_straight_line, ratios

from oracles import brute_force_tufts, pruned_leaf_count


def adjacency(t: OrderedTree) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in t.vertices()}
    for u, v in t.edges():
        adj[u].append(v)
        adj[v].append(u)
    return adj


def star(n: int) -> OrderedTree:
    return OrderedTree(0, {0: tuple(range(1, n + 1)), **{i: () for i in range(1, n + 1)}})


def double_star(a: int, b: int) -> OrderedTree:
    """Root 0 with a leaves, the last child being hub 1 with b leaves."""
    left = tuple(range(2, 2 + a))
    right = tuple(range(2 + a, 2 + a + b))
    children = {0: left + (1,), 1: right}
    children.update({v: () for v in left + right})
    return OrderedTree(0, children)


# -- tufts and the pruned tree --------------------------------------------


def test_star_decomposes_into_one_path_and_one_tuft():
    dec = decompose(star(5))
    # leaves are one-vertex paths of their own
    assert dec.paths[0] == (0,)
    assert sorted(dec.paths[1:]) == [(i,) for i in range(1, 6)]
    assert dec.tufts == (frozenset(range(1, 6)),)
    assert dec.pruned_vertices == frozenset({0})
    assert dec.pruned_leaves == [0]


def test_double_star_has_two_tufts():
    t = double_star(3, 2)
    dec = decompose(t)
    assert sorted(map(sorted, dec.tufts)) == [[2, 3, 4], [5, 6]]
    assert sorted(dec.pruned_leaves) == [0, 1]


@settings(max_examples=200)
@given(st.integers(3, 40), st.integers(0, 10**6))
def test_tufts_match_definition(leaves, seed):
    t = random_ordered_tree(leaves, random.Random(seed))
    adj = adjacency(t)
    assert sorted(map(sorted, tufts_of(adj))) == sorted(map(sorted, brute_force_tufts(adj)))
    assert len(tufts_of(adj)) == pruned_leaf_count(adj)


def test_pruned_tree_drops_leaves_only():
    t = double_star(2, 2)
    pr = pruned_tree(adjacency(t))
    assert pr == {0: [1], 1: [0]}


@pytest.mark.parametrize("seed", range(20))
def test_paths_partition_the_vertices(seed):
    t = random_ordered_tree(random.Random(seed).randint(3, 30), random.Random(seed))
    dec = decompose(t)
    flat = [v for p in dec.paths for v in p]
    assert len(flat) == len(set(flat))
    assert set(flat) == set(t.vertices())
    assert all(dec.path_of[v] == i for i, p in enumerate(dec.paths) for v in p)


@pytest.mark.parametrize("seed", range(20))
def test_external_path_joins_the_extreme_leaf_parents(seed):
    t = random_ordered_tree(random.Random(seed).randint(3, 30), random.Random(seed))
    parent = t.parent_map()
    leaves = t.leaves()
    path = external_path(t, t.root, parent)
    assert path[0] == parent[leaves[0]]
    assert path[-1] == parent[leaves[-1]]
    for a, b in zip(path, path[1:]):
        assert parent.get(a) == b or parent.get(b) == a


@pytest.mark.parametrize("seed", range(20))
def test_auxiliary_depths_follow_parents(seed):
    t = random_ordered_tree(random.Random(seed).randint(3, 30), random.Random(seed))
    dec = decompose(t)
    aux = build_aux(t, dec)
    assert aux.depth[aux.root] == 0
    for p, cs in aux.children.items():
        for c in cs:
            assert aux.depth[c] == aux.depth[p] + 1
            u, z = aux.pertinent_edge[(p, c)]
            assert u in aux.pertinent_path[p] and z == aux.pertinent_path[c][0] or z in aux.pertinent_path[c]


# -- characteristic layout -------------------------------------------------


def test_double_star_layout_has_two_levels():
    t = double_star(3, 3)
    d = layout_characteristic(t)
    assert validate_swlp(d, 1).ok
    assert len(d.levels()) == 2
    top = d.row(min(d.order))
    assert top[0] == t.leaves()[0] and top[-1] == t.leaves()[-1]


def test_layout_requires_extreme_leaves_in_tufts():
    # the leftmost leaf is alone under the root, which has two internal children
    children = {0: (1, 2, 3), 1: (), 2: (4, 5), 3: (6, 7), 4: (), 5: (), 6: (), 7: ()}
    with pytest.raises(PreconditionViolated):
        layout_characteristic(OrderedTree(0, children))


# -- whole Halin graphs ---------------------------------------------------------


def test_k4_is_rejected():
    with pytest.raises(IsK4):
        draw_halin(recognize_halin(gen_k4()))


@pytest.mark.parametrize("m", [4, 5, 6, 9, 20])
def test_wheels(m):
    d = draw_halin(recognize_halin(gen_wheel(m)))
    assert validate_swlp(d, 1).ok
    sd = realize_straight_line(double_levels(d), Fraction(1, 100))
    assert ratios(sd).global_at_most("3.01")


def test_wheel_has_one_internal_vertex():
    h = recognize_halin(gen_wheel(6))
    assert h.trivial and not h.is_k4
    assert h.internal == frozenset({0})


def test_recognizer_rejects_subdivided_spoke():
    g, _ = subdivide_edge(gen_wheel(5), (0, 1), 1)
    with pytest.raises(NotHalin):
        recognize_halin(g)


@pytest.mark.parametrize("seed", range(30))
def test_random_halin_pipeline(seed):
    g = gen_random_tufted_halin(3 + seed % 6, seed) if seed % 2 else gen_random_halin(4 + seed, seed)
    d = draw_halin(recognize_halin(g))
    assert d.edges == g.edges
    assert max_span(d) <= 1
    sd = realize_straight_line(double_levels(d), Fraction(1, 100))
    assert check_planar_straight_line(sd).planar
    assert ratios(sd).global_at_most("3.01")


def test_double_star_halin_graph():
    g = halin_from_tree(double_star(2, 2))
    d = draw_halin(recognize_halin(g))
    assert validate_swlp(d, 1).ok


# -- generalized Halin ---------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_k4_core_with_subdivided_spokes(seed):
    g = gen_random_generalized_halin(3, seed, density=1.0, core=gen_k4())
    h, rec = recognize_generalized_halin(g)
    assert h.is_k4 and not rec.is_identity
    d = draw_generalized_halin(g)
    assert max_span(d) <= 2
    assert validate_swlp(d, 2).ok
    sd = realize_straight_line(double_levels(d), Fraction(1, 100))
    assert ratios(sd).global_at_most("5.01")


@pytest.mark.parametrize("seed", range(20))
def test_generalized_halin_pipeline(seed):
    g = gen_random_generalized_halin(3 + seed, seed)
    d = draw_generalized_halin(g)
    assert d.edges == g.edges
    assert validate_swlp(d, 2).ok


def test_subdivided_cycle_edge_is_not_generalized_halin():
    g, _ = subdivide_edge(gen_wheel(5), (1, 2), 1)
    with pytest.raises(NotGeneralizedHalin):
        recognize_generalized_halin(g)
