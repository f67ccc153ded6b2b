"""Embedded planar graphs given by a rotation system and an outer face walk.

Rotations list neighbours in counterclockwise order.  Faces are traced with
the rule: after the dart ``u -> v`` comes ``v -> w`` where ``w`` precedes ``u``
in the rotation of ``v``.  Bounded faces then come out counterclockwise and
the outer face clockwise.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    DegreeNotTwo,
    DisconnectedGraph,
    InconsistentRotation,
    NotPlanarEmbedding,
    UnknownEdge,
    WouldCreateMultiEdge,
)

Vertex = int
Edge = tuple[int, int]


def edge_key(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u <= v else (v, u)


def _rotate_to_min(walk: Sequence[int]) -> tuple[int, ...]:
    if not walk:
        return ()
    i = min(range(len(walk)), key=lambda j: (walk[j], j))
    return tuple(walk[i:]) + tuple(walk[:i])


def walk_darts(walk: Sequence[Vertex]) -> list[tuple[Vertex, Vertex]]:
    n = len(walk)
    if n < 2:
        return []
    return [(walk[i], walk[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True, eq=False)
class PlaneGraph:
    """Immutable embedded graph.  Construct through :meth:`build` to validate."""

    rotation: Mapping[Vertex, tuple[Vertex, ...]]
    outer_face: tuple[Vertex, ...]
    vertices: frozenset[Vertex] = field(init=False)
    edges: frozenset[Edge] = field(init=False)

    def __post_init__(self) -> None:
        rot = {int(v): tuple(int(x) for x in ns) for v, ns in self.rotation.items()}
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "outer_face", tuple(int(x) for x in self.outer_face))
        object.__setattr__(self, "vertices", frozenset(rot))
        es = set()
        for v, ns in rot.items():
            for w in ns:
                es.add(edge_key(v, w))
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def build(
        cls, rotation: Mapping[Vertex, Sequence[Vertex]], outer_face: Sequence[Vertex]
    ) -> PlaneGraph:
        g = cls({v: tuple(ns) for v, ns in rotation.items()}, tuple(outer_face))
        g.validate()
        return g

    # -- basic queries -------------------------------------------------
    def degree(self, v: Vertex) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        return self.rotation[v]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return edge_key(u, v) in self.edges

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def next_dart(self, u: Vertex, v: Vertex) -> tuple[Vertex, Vertex]:
        rot = self.rotation[v]
        i = rot.index(u)
        return v, rot[i - 1]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = min(self.vertices)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self.rotation[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def validate(self) -> FaceSet:
        for v, ns in self.rotation.items():
            if len(set(ns)) != len(ns):
                raise InconsistentRotation(f"vertex {v} lists a neighbour twice")
            if v in ns:
                raise InconsistentRotation(f"self-loop at {v}")
            for w in ns:
                if w not in self.rotation or v not in self.rotation[w]:
                    raise InconsistentRotation(f"edge {v}-{w} is not symmetric")
        if not self.is_connected():
            raise DisconnectedGraph("graph is not connected")
        return extract_faces(self)

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": sorted(self.vertices),
            "edges": [list(e) for e in sorted(self.edges)],
            "rotation": {str(v): list(self.rotation[v]) for v in sorted(self.vertices)},
            "outer_face": list(self.outer_face),
        }

    def to_json(self, **extra: Any) -> str:
        data = self.to_dict()
        data.update(extra)
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> PlaneGraph:
        rotation = {int(k): [int(x) for x in v] for k, v in data["rotation"].items()}
        for v in data.get("vertices", []):
            rotation.setdefault(int(v), [])
        g = cls.build(rotation, [int(x) for x in data["outer_face"]])
        listed = {edge_key(int(a), int(b)) for a, b in data.get("edges", g.edges)}
        if listed != set(g.edges):
            raise InconsistentRotation("edge list disagrees with the rotation system")
        return g

    @classmethod
    def from_json(cls, text: str) -> PlaneGraph:
        return cls.from_dict(json.loads(text))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        if self.rotation.keys() != other.rotation.keys():
            return False
        for v, ns in self.rotation.items():
            if _rotate_to_min(ns) != _rotate_to_min(other.rotation[v]):
                return False
        return _rotate_to_min(self.outer_face) == _rotate_to_min(other.outer_face)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[tuple[Vertex, ...], ...]
    outer_index: int

    @property
    def outer(self) -> tuple[Vertex, ...]:
        return self.faces[self.outer_index]

    def __len__(self) -> int:
        return len(self.faces)


def trace_faces(g: PlaneGraph) -> list[tuple[Vertex, ...]]:
    """All face walks, each starting at its smallest dart, in a fixed order."""
    darts = sorted((u, v) for u in g.rotation for v in g.rotation[u])
    seen: set[tuple[Vertex, Vertex]] = set()
    faces = []
    limit = len(darts) + 1
    for d in darts:
        if d in seen:
            continue
        walk = []
        cur = d
        steps = 0
        while cur not in seen:
            seen.add(cur)
            walk.append(cur[0])
            try:
                cur = g.next_dart(*cur)
            except (KeyError, ValueError) as exc:
                raise InconsistentRotation(f"dart {cur} cannot be continued") from exc
            steps += 1
            if steps > limit:
                raise InconsistentRotation("face walk does not close")
        if cur != d:
            raise InconsistentRotation(f"dart {d} is never closed into a cycle")
        faces.append(tuple(walk))
    return faces


def _face_index_of(faces: Sequence[tuple[Vertex, ...]], walk: Sequence[Vertex]) -> int | None:
    if len(walk) < 2:
        return None
    target = walk_darts(walk)
    first = target[0]
    for i, f in enumerate(faces):
        darts = walk_darts(f)
        if first in darts and len(darts) == len(target):
            j = darts.index(first)
            if darts[j:] + darts[:j] == target:
                return i
    return None


def extract_faces(g: PlaneGraph) -> FaceSet:
    if not g.is_connected():
        raise DisconnectedGraph("graph is not connected")
    if not g.edges:
        if len(g.vertices) != 1:
            raise DisconnectedGraph("edgeless graph with several vertices")
        return FaceSet(faces=(tuple(g.vertices),), outer_index=0)
    faces = trace_faces(g)
    if g.n - g.m + len(faces) != 2:
        raise NotPlanarEmbedding(
            f"Euler count fails: V={g.n} E={g.m} F={len(faces)}"
        )
    idx = _face_index_of(faces, g.outer_face)
    if idx is None:
        raise NotPlanarEmbedding("outer_face is not a face of the rotation system")
    return FaceSet(faces=tuple(faces), outer_index=idx)


def face_with_dart(g: PlaneGraph, u: Vertex, v: Vertex) -> tuple[Vertex, ...]:
    walk = [u]
    cur = g.next_dart(u, v)
    while cur != (u, v):
        walk.append(cur[0])
        cur = g.next_dart(*cur)
    return tuple(walk)


# -- structural edits --------------------------------------------------


def _splice_outer(walk: Sequence[Vertex], u: Vertex, v: Vertex, path: Sequence[Vertex]) -> tuple[Vertex, ...]:
    """Insert ``path`` wherever the dart u->v (or v->u reversed) occurs."""
    n = len(walk)
    out: list[Vertex] = []
    for i in range(n):
        a, b = walk[i], walk[(i + 1) % n]
        out.append(a)
        if n >= 2 and (a, b) == (u, v):
            out.extend(path)
        elif n >= 2 and (a, b) == (v, u):
            out.extend(reversed(path))
    return tuple(out)


def smooth_vertex(g: PlaneGraph, v: Vertex) -> PlaneGraph:
    ns = g.rotation.get(v)
    if ns is None or len(ns) != 2:
        raise DegreeNotTwo(f"vertex {v} does not have degree 2")
    u, w = ns
    if g.has_edge(u, w):
        raise WouldCreateMultiEdge(f"edge {u}-{w} already exists")
    rot = {x: list(r) for x, r in g.rotation.items() if x != v}
    rot[u][rot[u].index(v)] = w
    rot[w][rot[w].index(v)] = u
    outer = tuple(x for x in g.outer_face if x != v)
    return PlaneGraph({x: tuple(r) for x, r in rot.items()}, outer)


def subdivide_edge(
    g: PlaneGraph, e: Edge, count: int = 1, first_id: int | None = None
) -> tuple[PlaneGraph, list[Vertex]]:
    """Replace ``e`` by a path through ``count`` fresh vertices.

    Returns the new graph and the new vertices ordered from ``e[0]`` to ``e[1]``.
    """
    u, v = e
    if not g.has_edge(u, v):
        raise UnknownEdge(f"{u}-{v} is not an edge")
    if count < 1:
        raise ValueError("count must be positive")
    start = (max(g.vertices) + 1) if first_id is None else first_id
    path = list(range(start, start + count))
    if set(path) & g.vertices:
        raise ValueError("fresh vertex ids collide with existing ones")
    rot = {x: list(r) for x, r in g.rotation.items()}
    rot[u][rot[u].index(v)] = path[0]
    rot[v][rot[v].index(u)] = path[-1]
    chain = [u, *path, v]
    for i in range(1, len(chain) - 1):
        rot[chain[i]] = [chain[i - 1], chain[i + 1]]
    outer = _splice_outer(g.outer_face, u, v, path)
    return PlaneGraph({x: tuple(r) for x, r in rot.items()}, outer), path


def smooth_all(g: PlaneGraph, vertices: Iterable[Vertex]) -> PlaneGraph:
    for v in vertices:
        g = smooth_vertex(g, v)
    return g


def insert_edge(g: PlaneGraph, u: Vertex, after_u: Vertex, v: Vertex, after_v: Vertex, outer: Sequence[Vertex] | None = None) -> PlaneGraph:
    """Add edge u-v, placing v right after ``after_u`` in u's rotation and vice versa."""
    if g.has_edge(u, v):
        raise WouldCreateMultiEdge(f"edge {u}-{v} already exists")
    rot = {x: list(r) for x, r in g.rotation.items()}
    rot[u].insert(rot[u].index(after_u) + 1, v)
    rot[v].insert(rot[v].index(after_v) + 1, u)
    return PlaneGraph(
        {x: tuple(r) for x, r in rot.items()},
        tuple(outer) if outer is not None else g.outer_face,
    )


def relabel(g: PlaneGraph, mapping: Mapping[Vertex, Vertex]) -> PlaneGraph:
    return PlaneGraph(
        {mapping[v]: tuple(mapping[w] for w in ns) for v, ns in g.rotation.items()},
        tuple(mapping[v] for v in g.outer_face),
    )


def induced_subgraph_edges(g: PlaneGraph, keep: Iterable[Vertex]) -> set[Edge]:
    ks = set(keep)
    return {e for e in g.edges if e[0] in ks and e[1] in ks}


# -- classification ----------------------------------------------------


@dataclass(frozen=True)
class Classification:
    outer_vertices: frozenset[Vertex]
    inner_vertices: frozenset[Vertex]
    outer_edges: frozenset[Edge]
    inner_edges: frozenset[Edge]
    mixed_edges: frozenset[Edge]


def classify_vertices(g: PlaneGraph) -> Classification:
    outer = frozenset(g.outer_face)
    inner = frozenset(g.vertices - outer)
    oe, ie, me = set(), set(), set()
    for e in g.edges:
        a, b = (x in outer for x in e)
        if a and b:
            oe.add(e)
        elif not a and not b:
            ie.add(e)
        else:
            me.add(e)
    return Classification(outer, inner, frozenset(oe), frozenset(ie), frozenset(me))


def from_edges_with_positions(
    edges: Iterable[Edge], pos: Mapping[Vertex, tuple[float, float]], outer_face: Sequence[Vertex]
) -> PlaneGraph:
    """Build a rotation system by sorting neighbours by angle around given points."""
    import math

    adj: dict[Vertex, list[Vertex]] = {v: [] for v in pos}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    rot = {}
    for v, ns in adj.items():
        x0, y0 = pos[v]
        rot[v] = tuple(sorted(ns, key=lambda w: math.atan2(pos[w][1] - y0, pos[w][0] - x0)))
    return with_outer_walk(rot, outer_face)


def with_outer_walk(rotation: Mapping[Vertex, Sequence[Vertex]], walk: Sequence[Vertex]) -> PlaneGraph:
    """Build a graph accepting the outer walk in either direction."""
    try:
        return PlaneGraph.build(rotation, walk)
    except NotPlanarEmbedding:
        return PlaneGraph.build(rotation, list(reversed(walk)))
