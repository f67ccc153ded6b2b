from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from elr.errors import InvalidDrawing, NotOuterplanar, SeamCrossing
from elr.families import gen_random_outerplanar, from_faces
from elr.graph import PlaneGraph
from elr.leveling import (
    EdgeLeftmost,
    EdgeOnTop,
    LevelDrawing,
    StraightLineDrawing,
    double_levels,
    max_span,
    mirror,
    outerplanar_1swlp,
    realize_straight_line,
    span_histogram,
    stack,
    strip_conflicts,
    validate_swlp,
)
from elr.metrics import check_planar_straight_line

from corpus import drawing
from oracles import brute_force_planar

EPS = Fraction(1, 100)


def rows(*levels, edges=(), gaps=None):
    return LevelDrawing.from_rows(levels, edges, gaps)


def test_path_on_one_level():
    d = rows([0, 1, 2], edges=[(0, 1), (1, 2)])
    assert max_span(d) == 0
    assert validate_swlp(d, 0)


def test_inverted_pair_crosses():
    d = rows([0, 1], [2, 3], edges=[(0, 3), (1, 2)])
    v = validate_swlp(d, 1)
    assert not v.ok
    assert any({(0, 3), (1, 2)} == {w[0], w[1]} for w in v.witnesses)


def test_span_bound_enforced():
    d = rows([0], [1], [2], edges=[(0, 1), (1, 2)])
    assert validate_swlp(d, 1) and not validate_swlp(d, 0)


def test_flat_edge_must_join_neighbours():
    d = rows([0, 1, 2], edges=[(0, 2)])
    assert not validate_swlp(d, 1)


def test_long_edge_needs_gap():
    d = rows([0], [1], [2], edges=[(0, 1), (1, 2), (0, 2)])
    assert not validate_swlp(d, 2)
    ok = rows([0], [1], [2], edges=[(0, 1), (1, 2), (0, 2)], gaps={(0, 2): {1: 1}})
    assert validate_swlp(ok, 2)


def test_strip_conflict_jumped_flat_edge():
    edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)]
    bad = rows([0], [1, 2], [3], edges=edges, gaps={(0, 3): {1: 1}})
    assert ((0, 3), (1, 2)) in strip_conflicts(bad) or ((1, 2), (0, 3)) in strip_conflicts(bad)
    good = rows([0], [1, 2], [3], edges=edges, gaps={(0, 3): {1: 0}})
    assert strip_conflicts(good) == []
    assert validate_swlp(good, 2) and not validate_swlp(bad, 2)


def test_double_flat_edge_gets_span_one():
    d = double_levels(rows([0, 1], edges=[(0, 1)]))
    assert d.span((0, 1)) == 1


def test_double_single_vertex():
    d = double_levels(rows([0]))
    assert d.vertices == {0} and max_span(d) == 0


def test_single_edge_length_bracket():
    sd = realize_straight_line(rows([0], [1], edges=[(0, 1)]), EPS)
    ln = sd.squared_length((0, 1))
    assert 1 <= ln <= 1 + EPS * EPS


def test_realize_rejects_flat():
    with pytest.raises(InvalidDrawing):
        realize_straight_line(rows([0, 1], edges=[(0, 1)]), EPS)


SEEDS = st.integers(0, 3000)


@settings(max_examples=60)
@given(SEEDS)
def test_doubling_properties(seed):
    k, d = drawing(seed)
    assert validate_swlp(d, k)
    dd = double_levels(d)
    assert all(dd.span(e) >= 1 for e in dd.edges)
    assert max_span(dd) <= 2 * max_span(d) + 1
    for e in d.edges:
        assert dd.span(e) <= 2 * d.span(e) + 1
        assert dd.span(e) >= d.span(e)
    assert validate_swlp(dd, 2 * k + 1)


@settings(max_examples=40)
@given(SEEDS)
def test_realized_lengths_within_bracket(seed):
    _, d = drawing(seed)
    dd = double_levels(d)
    sd = realize_straight_line(dd, EPS)
    xs = [x for x, _ in sd.coords.values()]
    assert max(xs) - min(xs) <= EPS
    for e in sd.edges:
        s = dd.span(e)
        assert s * s <= sd.squared_length(e) <= s * s + EPS * EPS
    for L, vs in dd.order.items():
        assert [sd.coords[v][0] for v in vs] == sorted(sd.coords[v][0] for v in vs)


@settings(max_examples=25)
@given(SEEDS)
def test_realization_matches_brute_force(seed):
    _, d = drawing(seed)
    sd = realize_straight_line(double_levels(d), EPS)
    if len(sd.edges) <= 60:
        assert brute_force_planar(sd.coords, sd.edges)
    assert check_planar_straight_line(sd).planar


@settings(max_examples=40)
@given(SEEDS, st.booleans(), st.booleans())
def test_mirror_preserves_validity(seed, h, v):
    k, d = drawing(seed)
    m = mirror(d, horizontal=h, vertical=v)
    assert max_span(m) == max_span(d)
    assert validate_swlp(m, k).ok
    assert mirror(m, horizontal=h, vertical=v) == d


def test_horizontal_mirror_swaps_ends():
    d = rows([0, 1, 2], [3, 4], edges=[(0, 1), (1, 2), (3, 4), (1, 3), (1, 4)])
    m = mirror(d, horizontal=True)
    assert m.order[0] == (2, 1, 0) and m.order[1] == (4, 3)


def test_stack_two_paths():
    top = rows([0, 1], edges=[(0, 1)])
    bot = rows([2, 3], edges=[(2, 3)])
    s = stack(top, bot, [(1, 2)])
    assert len(s.order) == 2 and s.span((1, 2)) == 1
    assert validate_swlp(s, 1)


def test_stack_with_empty_levels():
    top = rows([0, 1], edges=[(0, 1)])
    bot = rows([2, 3], edges=[(2, 3)])
    s = stack(top, bot, [(0, 2), (1, 3)], empty_levels=2)
    assert s.span((0, 2)) == 3
    assert validate_swlp(s, 3)


def test_stack_crossing_seams():
    top = rows([0, 1], edges=[(0, 1)])
    bot = rows([2, 3], edges=[(2, 3)])
    with pytest.raises(SeamCrossing):
        stack(top, bot, [(0, 3), (1, 2)])


def test_edge_on_top_single_edge():
    g = PlaneGraph.build({0: (1,), 1: (0,)}, [0, 1])
    d = outerplanar_1swlp(g, EdgeOnTop(0, 1))
    assert d.order[0] == (0, 1) and len(d.order) == 1


def fan(n: int) -> PlaneGraph:
    # hub 0, path 1..n
    faces = [[0, i, i + 1] for i in range(1, n)]
    return from_faces(faces, [0, *range(n, 0, -1)])


def test_fan_drawing():
    g = fan(5)
    for anchor in (EdgeOnTop(0, 1), EdgeLeftmost(0, 5), EdgeLeftmost(3, 4), EdgeOnTop(4, 3)):
        d = outerplanar_1swlp(g, anchor)
        assert max_span(d) <= 1 and validate_swlp(d, 1)


def test_triangle_leftmost():
    g = from_faces([[0, 1, 2]], [0, 2, 1])
    d = outerplanar_1swlp(g, EdgeLeftmost(0, 1))
    assert d.order[0] == (0,) and d.order[1][0] == 1


def test_not_outerplanar():
    from elr.families import gen_wheel

    with pytest.raises(NotOuterplanar):
        outerplanar_1swlp(gen_wheel(4), EdgeOnTop(1, 2))


def test_chord_anchor_rejected():
    with pytest.raises(NotOuterplanar):
        outerplanar_1swlp(fan(5), EdgeLeftmost(0, 3))


def check_anchor(g, anchor, d) -> None:
    assert validate_swlp(d, 1)
    if isinstance(anchor, EdgeOnTop):
        assert d.order[min(d.order)] == (anchor.u, anchor.v)
    else:
        top = min(d.order)
        assert d.order[top] == (anchor.u,)
        assert d.order[top + 1][0] == anchor.v


@pytest.mark.parametrize("seed", range(40))
def test_outerplanar_both_anchors(seed):
    g = gen_random_outerplanar(3 + seed % 25, seed)
    walk = g.outer_face
    outer = sorted({tuple(sorted(p)) for p in zip(walk, walk[1:] + walk[:1]) if p[0] != p[1]})
    for u, v in outer[:: max(1, len(outer) // 4)]:
        for anchor in (EdgeOnTop(u, v), EdgeOnTop(v, u), EdgeLeftmost(u, v), EdgeLeftmost(v, u)):
            check_anchor(g, anchor, outerplanar_1swlp(g, anchor))


def test_span_histogram_of_edge_free():
    assert span_histogram(rows([0])) == {}


@pytest.mark.parametrize("seed", range(7))
def test_level_json_round_trip(seed):
    _, d = drawing(seed)
    assert LevelDrawing.from_json(d.to_json()) == d


def test_straight_json_round_trip():
    sd = StraightLineDrawing({0: (Fraction(1, 3), 0), 1: (2, Fraction(-5, 7))}, {(0, 1)})
    back = StraightLineDrawing.from_json(sd.to_json())
    assert back.coords == sd.coords and back.edges == sd.edges
    assert math.isclose(float(back.squared_length((0, 1))), float(sd.squared_length((0, 1))))
