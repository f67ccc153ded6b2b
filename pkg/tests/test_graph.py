from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from elr.errors import DegreeNotTwo, DisconnectedGraph, InconsistentRotation, UnknownEdge, WouldCreateMultiEdge
from elr.families import gen_k4, gen_lower_bound_chain, gen_random_cycle_cycle, gen_random_halin, gen_wheel
from elr.graph import (
    PlaneGraph,
    classify_vertices,
    edge_key,
    extract_faces,
    from_edges_with_positions,
    smooth_all,
    smooth_vertex,
    subdivide_edge,
)

from oracles import euler_ok


def triangle() -> PlaneGraph:
    return PlaneGraph.build({0: (1, 2), 1: (2, 0), 2: (0, 1)}, [0, 2, 1])


def test_triangle_faces():
    fs = extract_faces(triangle())
    assert len(fs) == 2
    assert all(len(f) == 3 for f in fs.faces)


def test_k4_faces():
    fs = extract_faces(gen_k4())
    assert len(fs) == 4 and all(len(f) == 3 for f in fs.faces)


def test_chain_face_count():
    g = gen_lower_bound_chain(3).graph
    assert len(extract_faces(g)) == 10


@pytest.mark.parametrize("seed", range(20))
def test_euler_on_random_halin(seed):
    g = gen_random_halin(3 + seed, seed)
    assert euler_ok(g, len(extract_faces(g)))


def test_every_dart_in_one_face():
    g = gen_random_cycle_cycle(6, 4, 3)
    darts = [d for f in extract_faces(g).faces for d in zip(f, f[1:] + f[:1])]
    assert len(darts) == len(set(darts)) == 2 * g.m


def test_rotation_must_be_symmetric():
    with pytest.raises(InconsistentRotation):
        PlaneGraph.build({0: (1,), 1: ()}, [0, 1])


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraph):
        PlaneGraph.build({0: (1,), 1: (0,), 2: (3,), 3: (2,)}, [0, 1]).validate()


def test_smooth_inside_square():
    # square 0-1-2-3 with 0-4-2 path inside
    g = PlaneGraph.build({0: (1, 4, 3), 1: (2, 0), 2: (3, 4, 1), 3: (0, 2), 4: (2, 0)}, [0, 3, 2, 1])
    h = smooth_vertex(g, 4)
    assert h.has_edge(0, 2) and 4 not in h.vertices
    assert euler_ok(h, len(extract_faces(h)))


def test_smooth_wrong_degree():
    with pytest.raises(DegreeNotTwo):
        smooth_vertex(gen_k4(), 0)


def test_smooth_would_duplicate():
    pos = {0: (0, 0), 1: (2, 0), 2: (1, 2), 3: (1, 0.5)}
    g = from_edges_with_positions([(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)], pos, [0, 1, 2])
    with pytest.raises(WouldCreateMultiEdge):
        smooth_vertex(g, 3)


def test_subdivide_spoke():
    g = gen_k4()
    spoke = sorted(g.edges)[0]
    h, new = subdivide_edge(g, spoke)
    assert h.n == 5 and h.degree(new[0]) == 2


def test_subdivide_zero_rejected():
    with pytest.raises(ValueError):
        subdivide_edge(gen_k4(), sorted(gen_k4().edges)[0], 0)


def test_subdivide_unknown_edge():
    with pytest.raises(UnknownEdge):
        subdivide_edge(triangle(), (0, 7))


@given(st.integers(0, 10_000), st.integers(3, 25), st.integers(1, 4))
def test_subdivide_smooth_round_trip(seed, leaves, count):
    g = gen_random_halin(leaves, seed)
    rng = random.Random(seed)
    e = rng.choice(sorted(g.edges))
    h, new = subdivide_edge(g, e, count)
    assert smooth_all(h, new) == g


def test_classify_wheel():
    c = classify_vertices(gen_wheel(5))
    assert len(c.inner_vertices) == 1
    hub = next(iter(c.inner_vertices))
    assert all(hub in e for e in c.mixed_edges)
    assert len(c.outer_edges) == 5


def test_classify_triangle():
    c = classify_vertices(triangle())
    assert not c.inner_vertices and len(c.outer_edges) == 3


def test_classify_cycle_cycle_inner_edges():
    g = gen_random_cycle_cycle(7, 4, 11)
    inner = set(range(7, 11))
    c = classify_vertices(g)
    assert set(c.inner_vertices) == inner
    assert {e for e in c.inner_edges} == {edge_key(u, v) for u, v in g.edges if u in inner and v in inner}
    assert len(c.inner_edges) == 4


@pytest.mark.parametrize("seed", range(5))
def test_json_round_trip(seed):
    g = gen_random_halin(8, seed)
    assert PlaneGraph.from_json(g.to_json()) == g


def test_faces_deterministic():
    g = gen_random_halin(12, 4)
    assert extract_faces(g) == extract_faces(PlaneGraph.from_json(g.to_json()))
