from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from elr.errors import NotHalin, NotInFamily
from elr.families import (
    CYCLE_CATERPILLAR,
    CYCLE_CYCLE,
    OUTERPLANAR_CATERPILLAR,
    OUTERPLANAR_CYCLE,
    gen_k4,
    gen_lower_bound_chain,
    gen_lower_bound_glued,
    gen_random_cycle_caterpillar,
    gen_random_cycle_cycle,
    gen_random_generalized_halin,
    gen_random_halin,
    gen_random_outerplanar,
    gen_random_outerplanar_attachment,
    gen_random_tufted_halin,
    gen_wheel,
    halin_from_tree,
    is_planar_3_tree,
    maximize_mixed_edges,
    random_ordered_tree,
    recognize_generalized_halin,
    recognize_halin,
    recognize_two_outer,
    triangulate_pockets,
)
from elr.graph import edge_key, extract_faces, subdivide_edge


@pytest.mark.parametrize("k", [1, 2, 3, 7, 50, 200])
def test_chain_counts(k):
    ch = gen_lower_bound_chain(k)
    assert ch.graph.n == 2 * k + 1
    assert ch.graph.m == 6 * k - 3
    assert set(extract_faces(ch.graph).outer) == {ch.apex, ch.b[-1], ch.c[-1]}


def test_chain_k1_is_triangle():
    g = gen_lower_bound_chain(1).graph
    assert g.n == 3 and g.m == 3


def test_chain_edges_follow_recursion():
    ch = gen_lower_bound_chain(4)
    a = ch.apex
    for i in range(1, 4):
        b, c, pb, pc = ch.b[i], ch.c[i], ch.b[i - 1], ch.c[i - 1]
        for e in ((a, b), (a, c), (b, c), (b, pb), (c, pc), (c, pb)):
            assert ch.graph.has_edge(*e)


@pytest.mark.parametrize("k", [1, 2, 5, 40])
def test_glued_counts(k):
    gl = gen_lower_bound_glued(k)
    assert gl.graph.n == 4 * k
    assert gl.graph.m == 3 * gl.graph.n - 6
    assert is_planar_3_tree(gl.graph)


def test_glued_k1_is_k4():
    assert gen_lower_bound_glued(1).graph.n == 4


@pytest.mark.parametrize("k", [1, 2, 3, 10])
def test_chain_is_planar_3_tree(k):
    assert is_planar_3_tree(gen_lower_bound_chain(k).graph)


def test_peeling_oracle_rejects_octahedron():
    from elr.graph import from_edges_with_positions

    pos = {0: (0, 0), 1: (10, 0), 2: (5, 9), 3: (5, 1), 4: (7, 4.5), 5: (3, 4.5)}
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (3, 0), (3, 1), (4, 1), (4, 2), (5, 2), (5, 0)]
    octa = from_edges_with_positions(edges, pos, [0, 1, 2])
    assert all(octa.degree(v) == 4 for v in octa.vertices)
    assert not is_planar_3_tree(octa)


def test_balanced_start_embeds():
    from elr.leveling import StraightLineDrawing
    from elr.metrics import check_planar_straight_line, orientation_valid

    ch = gen_lower_bound_chain(30)
    d = StraightLineDrawing(ch.balanced_positions(), ch.graph.edges)
    assert check_planar_straight_line(d).planar and orientation_valid(d, ch.graph)


@pytest.mark.parametrize("bad", [0, -3])
def test_lower_families_reject_small(bad):
    with pytest.raises(ValueError):
        gen_lower_bound_chain(bad)
    with pytest.raises(ValueError):
        gen_lower_bound_glued(bad)


def test_halin_k4_flags():
    h = recognize_halin(gen_k4())
    assert h.is_k4 and h.trivial


def test_halin_wheel_flags():
    h = recognize_halin(gen_wheel(6))
    assert h.trivial and not h.is_k4


def test_three_leaf_halin_is_k4():
    assert recognize_halin(gen_random_halin(3, 99)).is_k4


@given(st.integers(0, 10**6), st.integers(3, 40))
def test_halin_generator_round_trip(seed, leaves):
    rng = random.Random(seed)
    t = random_ordered_tree(leaves, rng)
    g = halin_from_tree(t)
    h = recognize_halin(g)
    assert set(h.tree_edges) == t.edges()
    assert set(h.cycle) == set(t.leaves())


def test_halin_rejects_cycle_cycle():
    with pytest.raises(NotHalin):
        recognize_halin(gen_random_cycle_cycle(5, 3, 1))


def test_halin_rejects_subdivided():
    g, _ = subdivide_edge(gen_wheel(5), next(e for e in sorted(gen_wheel(5).edges) if 0 in e))
    with pytest.raises(NotHalin):
        recognize_halin(g)


def test_generalized_identity_record():
    g = gen_random_halin(9, 2)
    core, rec = recognize_generalized_halin(g)
    assert core.graph == g
    assert rec.is_identity or not any(rec.chains.values())


def test_generalized_k4_spoke():
    k4 = gen_k4()
    spoke = sorted(k4.edges)[0]
    g, new = subdivide_edge(k4, spoke, 2)
    core, rec = recognize_generalized_halin(g)
    assert core.is_k4
    assert sorted(len(c) for c in rec.chains.values() if c) == [2]


@pytest.mark.parametrize("seed", range(25))
def test_generalized_round_trip(seed):
    rng = random.Random(seed)
    base = halin_from_tree(random_ordered_tree(rng.randint(3, 20), rng))
    g = gen_random_generalized_halin(0, seed, core=base)
    core, _ = recognize_generalized_halin(g)
    assert core.graph == base


@pytest.mark.parametrize("seed", range(10))
def test_tufted_halin_recognized(seed):
    h = recognize_halin(gen_random_tufted_halin(3 + seed % 5, seed))
    assert not h.trivial


@pytest.mark.parametrize("seed", range(30))
def test_cycle_cycle_recognized(seed):
    g = gen_random_cycle_cycle(3 + seed % 8, 3 + seed % 5, seed)
    s = recognize_two_outer(g)
    assert s.kind == CYCLE_CYCLE
    assert len(s.inner_cycle) == 3 + seed % 5


def test_octahedron_like():
    g = gen_random_cycle_cycle(3, 3, 5)
    assert g.n == 6 and recognize_two_outer(g).kind == CYCLE_CYCLE


@pytest.mark.parametrize("seed", range(30))
def test_cycle_caterpillar_recognized(seed):
    g = gen_random_cycle_caterpillar(4 + seed % 6, 1 + seed % 5, 2 + seed % 6, seed, wrap_ends=seed % 2 == 0)
    s = recognize_two_outer(g)
    assert s.kind == CYCLE_CATERPILLAR
    assert len(s.spine) >= 1


def test_star_inside_cycle_is_caterpillar():
    g = gen_random_cycle_caterpillar(6, 1, 4, 3)
    s = recognize_two_outer(g)
    assert s.kind == CYCLE_CATERPILLAR and len(s.spine) == 1


@pytest.mark.parametrize("seed", range(20))
def test_attachments_recognized(seed):
    core = gen_random_cycle_cycle(5, 3, seed) if seed % 2 else gen_random_cycle_caterpillar(6, 3, 2, seed)
    g = gen_random_outerplanar_attachment(core, 2, seed)
    s = recognize_two_outer(g)
    assert s.kind == (OUTERPLANAR_CYCLE if seed % 2 else OUTERPLANAR_CATERPILLAR)
    assert len(s.attachments) >= 1


def test_outerplanar_has_no_inner():
    with pytest.raises(NotInFamily):
        recognize_two_outer(gen_random_outerplanar(12, 1))


def test_glued_not_two_outer():
    with pytest.raises(NotInFamily):
        recognize_two_outer(gen_lower_bound_glued(3).graph)


@pytest.mark.parametrize("seed", range(10))
def test_triangulate_pockets_idempotent(seed):
    s = recognize_two_outer(gen_random_cycle_cycle(6, 4, seed))
    once = triangulate_pockets(s)
    assert triangulate_pockets(once).graph == once.graph
    assert once.kind == s.kind


def test_square_in_square_triangulated():
    # outer 0..3 clockwise, inner 4..7, four mixed edges i -- i+4
    from elr.families import from_faces

    faces = [[4, 5, 6, 7]] + [[i, (i + 1) % 4, 4 + (i + 1) % 4, 4 + i] for i in range(4)]
    g = from_faces(faces, [3, 2, 1, 0])
    s = recognize_two_outer(g)
    t = triangulate_pockets(s)
    inner = set(t.inner_cycle)
    for i, f in enumerate(extract_faces(t.graph).faces):
        if i == extract_faces(t.graph).outer_index or set(f) == inner:
            continue
        assert len(f) == 3
    assert recognize_two_outer(t.graph).kind == CYCLE_CYCLE


def test_maximize_is_idempotent():
    g = gen_random_cycle_caterpillar(7, 3, 3, 8)
    inner = recognize_two_outer(g).inner_vertices
    assert maximize_mixed_edges(g, inner) == g


@pytest.mark.parametrize("seed", range(5))
def test_generators_deterministic(seed):
    assert gen_random_halin(15, seed) == gen_random_halin(15, seed)
    assert gen_random_cycle_caterpillar(6, 3, 3, seed) == gen_random_cycle_caterpillar(6, 3, 3, seed)


def test_generator_minimums():
    with pytest.raises(ValueError):
        gen_random_cycle_cycle(2, 3, 0)
    with pytest.raises(ValueError):
        random_ordered_tree(2, random.Random(0))
