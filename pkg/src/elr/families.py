"""Generators and recognizers for the graph families drawn by the package."""

from __future__ import annotations

import math

import random
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    GraphError,
    NotGeneralizedHalin,
    NotHalin,
    NotInFamily,
)
from .graph import (
    Edge,
    PlaneGraph,
    Vertex,
    edge_key,
    extract_faces,
    from_edges_with_positions,
    smooth_vertex,
    subdivide_edge,
    trace_faces,
    with_outer_walk,
)

# -- embedding helpers -------------------------------------------------


def from_faces(faces: Sequence[Sequence[Vertex]], outer: Sequence[Vertex]) -> PlaneGraph:
    """Rotation system from bounded faces (counterclockwise) and the outer walk (clockwise)."""
    succ: dict[Vertex, dict[Vertex, Vertex]] = {}
    for walk in [*faces, outer]:
        n = len(walk)
        for i in range(n):
            p, x, s = walk[i - 1], walk[i], walk[(i + 1) % n]
            nxt = succ.setdefault(x, {})
            if s in nxt:
                raise GraphError(f"corner at {x} listed twice")
            nxt[s] = p
    rot = {}
    for x, nxt in succ.items():
        start = min(nxt)
        cyc = [start]
        cur = nxt[start]
        while cur != start:
            cyc.append(cur)
            cur = nxt[cur]
        if len(cyc) != len(nxt):
            raise GraphError(f"faces around {x} do not close into one cycle")
        rot[x] = tuple(cyc)
    return PlaneGraph.build(rot, outer)


def add_diagonal(g: PlaneGraph, walk: Sequence[Vertex], i: int, j: int, outer: bool = False) -> PlaneGraph:
    """Split the face traced by ``walk`` with an edge between corners i and j."""
    n = len(walk)
    x, y = walk[i], walk[j]
    if x == y or g.has_edge(x, y):
        raise GraphError(f"cannot add {x}-{y}")
    rot = {v: list(r) for v, r in g.rotation.items()}
    sx, sy = walk[(i + 1) % n], walk[(j + 1) % n]
    rot[x].insert(rot[x].index(sx) + 1, y)
    rot[y].insert(rot[y].index(sy) + 1, x)
    new_outer = g.outer_face
    if outer:
        # keep the part of the walk that still sees the unbounded side
        a, b = sorted((i, j))
        part1 = list(walk[a : b + 1])
        part2 = list(walk[b:]) + list(walk[: a + 1])
        new_outer = tuple(part1) if len(part1) >= len(part2) else tuple(part2)
    return PlaneGraph({v: tuple(r) for v, r in rot.items()}, new_outer)


def insert_in_face(g: PlaneGraph, walk: Sequence[Vertex], i: int, new: Vertex) -> PlaneGraph:
    """Add a pendant vertex inside the face ``walk`` attached at corner i."""
    x, s = walk[i], walk[(i + 1) % len(walk)]
    rot = {v: list(r) for v, r in g.rotation.items()}
    rot[x].insert(rot[x].index(s) + 1, new)
    rot[new] = [x]
    return PlaneGraph({v: tuple(r) for v, r in rot.items()}, g.outer_face)


def bounded_faces(g: PlaneGraph) -> list[tuple[Vertex, ...]]:
    fs = extract_faces(g)
    return [f for i, f in enumerate(fs.faces) if i != fs.outer_index]


# -- lower-bound family -----------------------------------------------


@dataclass(frozen=True)
class LowerBoundChain:
    k: int
    graph: PlaneGraph
    apex: Vertex
    b: tuple[Vertex, ...]
    c: tuple[Vertex, ...]
    positions: Mapping[Vertex, tuple[Fraction, Fraction]]

    def triangles(self) -> list[tuple[Vertex, Vertex, Vertex]]:
        return [(self.apex, self.b[i], self.c[i]) for i in range(self.k)]

    def balanced_positions(self) -> dict[Vertex, tuple[Fraction, Fraction]]:
        """Nested triangles whose heights above the apex grow geometrically.

        With growth factor 1 + 1/r and r * ln(r) close to k, the apex spread
        and the step between consecutive triangles both stay near r, which
        makes a far better search start than the reference positions.
        """
        r = 2.0
        while r * math.log(r) < self.k:
            r *= 1.05
        q = Fraction(1) + Fraction(1, max(1, round(r)))
        pos = {self.apex: (Fraction(0), Fraction(0))}
        height = Fraction(1)
        for i in range(1, self.k + 1):
            height *= q
            # half-width over height grows with i, so each triangle nests in the next
            half = height * Fraction(self.k + i, 4 * self.k)
            pos[self.b[i - 1]] = (-half, height)
            pos[self.c[i - 1]] = (half, height)
        return pos


def _chain_edges(k: int) -> tuple[list[Edge], dict[Vertex, tuple[Fraction, Fraction]]]:
    a = 0
    pos = {a: (Fraction(0), Fraction(0))}
    edges: list[Edge] = []
    for i in range(1, k + 1):
        b, c = 2 * i - 1, 2 * i
        # nested triangles sharing the apex; C_{i-1} lies strictly inside C_i
        pos[b] = (Fraction(-i * i), Fraction(i))
        pos[c] = (Fraction(i * i), Fraction(i))
        edges += [(a, b), (a, c), (b, c)]
        if i > 1:
            edges += [(b, b - 2), (c, c - 2), (c, b - 2)]
    return edges, pos


def gen_lower_bound_chain(k: int) -> LowerBoundChain:
    if k < 1:
        raise ValueError("k must be at least 1")
    edges, pos = _chain_edges(k)
    fpos = {v: (float(x), float(y)) for v, (x, y) in pos.items()}
    g = from_edges_with_positions(edges, fpos, [0, 2 * k - 1, 2 * k])
    return LowerBoundChain(
        k, g, 0, tuple(2 * i - 1 for i in range(1, k + 1)), tuple(2 * i for i in range(1, k + 1)), pos
    )


def _affine_onto(
    src: Sequence[tuple[Fraction, Fraction]], dst: Sequence[tuple[Fraction, Fraction]]
):
    (x0, y0), (x1, y1), (x2, y2) = src
    (X0, Y0), (X1, Y1), (X2, Y2) = dst
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)

    def f(p: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        px, py = p[0] - x0, p[1] - y0
        s = (px * (y2 - y0) - py * (x2 - x0)) / det
        t = ((x1 - x0) * py - (y1 - y0) * px) / det
        return (X0 + s * (X1 - X0) + t * (X2 - X0), Y0 + s * (Y1 - Y0) + t * (Y2 - Y0))

    return f


@dataclass(frozen=True)
class GluedLowerBound:
    k: int
    graph: PlaneGraph
    positions: Mapping[Vertex, tuple[Fraction, Fraction]]
    copies: tuple[tuple[tuple[Vertex, Vertex, Vertex], ...], ...]


def gen_lower_bound_glued(k: int) -> GluedLowerBound:
    """K4 with a copy of the chain graph filling two of its inner faces."""
    if k < 1:
        raise ValueError("k must be at least 1")
    F = Fraction
    k4 = {0: (F(0), F(0)), 1: (F(1000), F(0)), 2: (F(0), F(1000)), 3: (F(250), F(250))}
    pos = dict(k4)
    edges = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)]
    cedges, cpos = _chain_edges(k)
    copies = []
    next_id = 4
    for face in ((0, 1, 3), (1, 2, 3)):
        outer_src = [cpos[0], cpos[2 * k - 1], cpos[2 * k]]
        f = _affine_onto(outer_src, [k4[v] for v in face])
        mapping = {0: face[0], 2 * k - 1: face[1], 2 * k: face[2]}
        for v in sorted(cpos):
            if v not in mapping:
                mapping[v] = next_id
                next_id += 1
            pos[mapping[v]] = f(cpos[v])
        for u, v in cedges:
            e = edge_key(mapping[u], mapping[v])
            if e not in {edge_key(*x) for x in edges}:
                edges.append(e)
        copies.append(tuple((mapping[0], mapping[2 * i - 1], mapping[2 * i]) for i in range(1, k + 1)))
    fpos = {v: (float(x), float(y)) for v, (x, y) in pos.items()}
    g = from_edges_with_positions(edges, fpos, [0, 1, 2])
    return GluedLowerBound(k, g, pos, tuple(copies))


def is_planar_3_tree(g: PlaneGraph) -> bool:
    """Peel degree-3 vertices whose neighbours form a triangle down to a triangle."""
    adj = {v: set(g.rotation[v]) for v in g.vertices}
    if len(adj) < 3:
        return False
    queue = deque(sorted(adj))
    while len(adj) > 3 and queue:
        v = queue.popleft()
        if v not in adj or len(adj[v]) != 3:
            continue
        a, b, c = adj[v]
        if b in adj[a] and c in adj[a] and c in adj[b]:
            for w in (a, b, c):
                adj[w].discard(v)
                queue.append(w)
            del adj[v]
    if len(adj) != 3:
        return False
    a, b, c = adj
    return adj[a] == {b, c} and adj[b] == {a, c}


# -- Halin graphs -----------------------------------------------------


@dataclass(frozen=True)
class HalinStructure:
    graph: PlaneGraph
    tree_edges: frozenset[Edge]
    cycle: tuple[Vertex, ...]
    trivial: bool
    is_k4: bool

    @property
    def internal(self) -> frozenset[Vertex]:
        return frozenset(self.graph.vertices - set(self.cycle))

    def tree_neighbors(self, v: Vertex) -> list[Vertex]:
        return [w for w in self.graph.rotation[v] if edge_key(v, w) in self.tree_edges]


def recognize_halin(g: PlaneGraph) -> HalinStructure:
    g.validate()
    cycle = g.outer_face
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise NotHalin("outer face is not a simple cycle")
    cyc_edges = {edge_key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    tree = frozenset(g.edges - cyc_edges)
    if len(tree) != g.n - 1:
        raise NotHalin("outer removal not a tree")
    adj: dict[Vertex, list[Vertex]] = {v: [] for v in g.vertices}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    seen = {cycle[0]}
    stack = [cycle[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != g.n:
        raise NotHalin("outer removal not a tree")
    on_cycle = set(cycle)
    for v in sorted(g.vertices):
        d = len(adj[v])
        if v in on_cycle and d != 1:
            raise NotHalin(f"outer vertex {v} is not a tree leaf")
        if v not in on_cycle:
            if d == 1:
                raise NotHalin(f"leaf {v} off the outer face")
            if d == 2:
                raise NotHalin(f"tree has internal degree-2 vertex {v}")
    internal = g.n - len(cycle)
    return HalinStructure(g, tree, tuple(cycle), internal == 1, g.n == 4)


@dataclass(frozen=True)
class OrderedTree:
    """Rooted ordered tree with children listed left to right."""

    root: Vertex
    children: Mapping[Vertex, tuple[Vertex, ...]]

    def parent_map(self) -> dict[Vertex, Vertex]:
        return {c: p for p, cs in self.children.items() for c in cs}

    def leaves(self) -> list[Vertex]:
        out: list[Vertex] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            cs = self.children.get(v, ())
            if not cs:
                out.append(v)
            stack.extend(reversed(cs))
        return out

    def vertices(self) -> list[Vertex]:
        out: list[Vertex] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children.get(v, ())))
        return out

    def edges(self) -> set[Edge]:
        return {edge_key(p, c) for p, cs in self.children.items() for c in cs}


def random_ordered_tree(leaf_count: int, rng: random.Random, first_id: int = 0) -> OrderedTree:
    """Ordered tree whose internal vertices have degree >= 3 and ``leaf_count`` leaves."""
    if leaf_count < 3:
        raise ValueError("need at least 3 leaves")
    nid = first_id
    root = nid
    nid += 1
    children: dict[Vertex, list[Vertex]] = {root: []}
    for _ in range(3):
        children[root].append(nid)
        children[nid] = []
        nid += 1
    leaves = list(children[root])
    parent = {c: root for c in leaves}
    count = 3
    while count < leaf_count:
        room = leaf_count - count
        if rng.random() < 0.55 or room < 1:
            # add a sibling leaf next to an existing child
            p = rng.choice([v for v, cs in children.items() if cs])
            pos = rng.randint(0, len(children[p]))
            children[p].insert(pos, nid)
            children[nid] = []
            parent[nid] = p
            leaves.append(nid)
            nid += 1
            count += 1
        else:
            # grow a leaf into a vertex with at least two children
            leaf = rng.choice(leaves)
            extra = rng.randint(2, min(4, room + 1))
            leaves.remove(leaf)
            for _ in range(extra):
                children[leaf].append(nid)
                children[nid] = []
                parent[nid] = leaf
                leaves.append(nid)
                nid += 1
            count += extra - 1
    return OrderedTree(root, {v: tuple(cs) for v, cs in children.items()})


def halin_from_tree(t: OrderedTree) -> PlaneGraph:
    """Embed a tree with its leaves closed into a cycle in left-to-right order."""
    par = t.parent_map()
    leaves = t.leaves()
    rot: dict[Vertex, tuple[Vertex, ...]] = {}
    for v in t.vertices():
        cs = t.children.get(v, ())
        if cs:
            rot[v] = ((par[v],) if v in par else ()) + tuple(cs)
    n = len(leaves)
    for i, lf in enumerate(leaves):
        rot[lf] = (par[lf], leaves[i - 1], leaves[(i + 1) % n])
    return with_outer_walk(rot, leaves)


def gen_random_halin(leaf_count: int, seed: int) -> PlaneGraph:
    if leaf_count < 3:
        raise ValueError("a Halin graph needs at least 3 leaves")
    rng = random.Random(seed)
    return halin_from_tree(random_ordered_tree(leaf_count, rng))


def gen_random_tufted_halin(skeleton_leaves: int, seed: int, max_tuft: int = 4) -> PlaneGraph:
    """Halin graph in which every leaf sits in a tuft.

    A random skeleton tree (internal degree >= 3) gets 2..``max_tuft`` fresh
    leaves under each of its own leaves.
    """
    rng = random.Random(seed)
    base = random_ordered_tree(skeleton_leaves, rng)
    children = {v: list(cs) for v, cs in base.children.items()}
    nid = max(children) + 1
    for leaf in base.leaves():
        for _ in range(rng.randint(2, max_tuft)):
            children[leaf].append(nid)
            children[nid] = []
            nid += 1
    return halin_from_tree(OrderedTree(base.root, {v: tuple(cs) for v, cs in children.items()}))


def gen_wheel(m: int) -> PlaneGraph:
    """Hub 0 joined to the rim cycle 1..m."""
    if m < 3:
        raise ValueError("a wheel needs at least 3 rim vertices")
    return halin_from_tree(OrderedTree(0, {0: tuple(range(1, m + 1))}))


def gen_k4() -> PlaneGraph:
    return gen_wheel(3)


@dataclass(frozen=True)
class SubdivisionRecord:
    chains: Mapping[Edge, tuple[Vertex, ...]]  # core edge (sorted) -> chain from e[0] to e[1]

    @property
    def is_identity(self) -> bool:
        return not self.chains


def recognize_generalized_halin(g: PlaneGraph) -> tuple[HalinStructure, SubdivisionRecord]:
    g.validate()
    outer = set(g.outer_face)
    subdiv = {v for v in g.vertices if v not in outer and g.degree(v) == 2}
    chains: dict[Edge, tuple[Vertex, ...]] = {}
    seen: set[Vertex] = set()
    for v in sorted(subdiv):
        if v in seen:
            continue
        # walk to both ends of the maximal chain through v
        chain = deque([v])
        seen.add(v)
        ends = []
        for side in (0, 1):
            prev, cur = v, g.rotation[v][side]
            while cur in subdiv and cur not in seen:
                seen.add(cur)
                if side == 0:
                    chain.appendleft(cur)
                else:
                    chain.append(cur)
                a, b = g.rotation[cur]
                prev, cur = cur, (b if a == prev else a)
            if cur in subdiv:
                raise NotGeneralizedHalin("subdivision vertices form a cycle")
            ends.append(cur)
        a, b = ends
        if a == b:
            raise NotGeneralizedHalin("subdivided edge would become a loop")
        key = edge_key(a, b)
        if key in chains or g.has_edge(a, b):
            raise NotGeneralizedHalin(f"smoothing creates a multi-edge {a}-{b}")
        seq = list(chain)
        chains[key] = tuple(seq if a == key[0] else reversed(seq))
    core = g
    try:
        for v in sorted(subdiv):
            core = smooth_vertex(core, v)
        h = recognize_halin(core)
    except (GraphError, NotHalin) as exc:
        raise NotGeneralizedHalin(str(exc)) from exc
    for e in chains:
        if e not in h.tree_edges:
            raise NotGeneralizedHalin("an outer edge is subdivided")
    return h, SubdivisionRecord(chains)


def gen_random_generalized_halin(
    leaf_count: int, seed: int, density: float = 0.4, max_chain: int = 3, core: PlaneGraph | None = None
) -> PlaneGraph:
    rng = random.Random(seed)
    g = core if core is not None else halin_from_tree(random_ordered_tree(leaf_count, rng))
    h = recognize_halin(g)
    tree = sorted(h.tree_edges)
    picked = [e for e in tree if rng.random() < density] or [rng.choice(tree)]
    for e in picked:
        g, _ = subdivide_edge(g, e, rng.randint(1, max_chain))
    return g


# -- 2-outerplanar families -------------------------------------------

CYCLE_CYCLE = "cycle-cycle"
OUTERPLANAR_CYCLE = "outerplanar-cycle"
CYCLE_CATERPILLAR = "cycle-caterpillar"
OUTERPLANAR_CATERPILLAR = "outerplanar-caterpillar"
KINDS = (CYCLE_CYCLE, OUTERPLANAR_CYCLE, CYCLE_CATERPILLAR, OUTERPLANAR_CATERPILLAR)


@dataclass(frozen=True)
class Attachment:
    graph: PlaneGraph  # outerplanar piece, outer face walk covers all its vertices
    edge: Edge  # edge shared with the core boundary, oriented along the core boundary walk


@dataclass(frozen=True)
class TwoOuterStructure:
    graph: PlaneGraph
    kind: str
    outer_vertices: frozenset[Vertex]
    inner_vertices: frozenset[Vertex]
    core_cycle: tuple[Vertex, ...]  # boundary of the core, counterclockwise
    inner_cycle: tuple[Vertex, ...] = ()  # counterclockwise, cycle kinds only
    spine: tuple[Vertex, ...] = ()
    leaves: Mapping[Vertex, tuple[Vertex, ...]] = field(default_factory=dict)
    attachments: tuple[Attachment, ...] = ()

    @property
    def inner_edges(self) -> frozenset[Edge]:
        ins = self.inner_vertices
        return frozenset(e for e in self.graph.edges if e[0] in ins and e[1] in ins)

    @property
    def core_vertices(self) -> frozenset[Vertex]:
        return frozenset(self.core_cycle) | self.inner_vertices

    def core_graph(self) -> PlaneGraph:
        keep = self.core_vertices
        rot = {v: tuple(w for w in self.graph.rotation[v] if w in keep) for v in keep}
        walk = list(reversed(self.core_cycle))
        return with_outer_walk(rot, walk)


def _restricted(g: PlaneGraph, keep: set[Vertex]) -> dict[Vertex, tuple[Vertex, ...]]:
    return {v: tuple(w for w in g.rotation[v] if w in keep) for v in keep}


def _core_face(g: PlaneGraph, inner: set[Vertex]) -> tuple[Vertex, ...]:
    """Face of the outer-vertex subgraph that contains the inner vertices."""
    outer = set(g.vertices) - inner
    rot_h = _restricted(g, outer)
    hg = PlaneGraph(rot_h, g.outer_face)
    for u in sorted(outer):
        rot = g.rotation[u]
        for i, x in enumerate(rot):
            if x in inner:
                n = len(rot)
                p = next(rot[(i + j) % n] for j in range(1, n + 1) if rot[(i + j) % n] in outer)
                cur = hg.next_dart(p, u)
                walk_d = [(p, u)]
                while cur != (p, u):
                    walk_d.append(cur)
                    cur = hg.next_dart(*cur)
                return tuple(d[1] for d in walk_d)
    raise NotInFamily("no mixed edge")


def _caterpillar_spine(inner: set[Vertex], adj: Mapping[Vertex, set[Vertex]]) -> tuple[list[Vertex], dict[Vertex, tuple[Vertex, ...]]]:
    if len(inner) <= 2:
        s = min(inner)
        return [s], {s: tuple(sorted(inner - {s}))}
    spine = {v for v in inner if len(adj[v]) > 1}
    sub = {v: adj[v] & spine for v in spine}
    if any(len(ns) > 2 for ns in sub.values()):
        raise NotInFamily("inner tree is not a caterpillar")
    ends = sorted(v for v, ns in sub.items() if len(ns) <= 1)
    start = ends[0]
    path = [start]
    while len(path) < len(spine):
        nxt = [w for w in sub[path[-1]] if w not in path]
        if not nxt:
            raise NotInFamily("inner tree is not a caterpillar")
        path.append(nxt[0])
    leaves = {v: tuple(sorted(w for w in adj[v] if w not in spine)) for v in path}
    return path, leaves


def _ccw_cycle(g: PlaneGraph, verts: Sequence[Vertex], adj: Mapping[Vertex, set[Vertex]]) -> tuple[Vertex, ...]:
    start = min(verts)
    a, b = sorted(adj[start])
    cyc = [start, a]
    while len(cyc) < len(verts):
        nxt = [w for w in adj[cyc[-1]] if w != cyc[-2]]
        cyc.append(nxt[0])
    # the region inside the inner cycle is a face when traced counterclockwise
    faces = trace_faces(g)
    target = set(zip(cyc, cyc[1:] + cyc[:1]))
    for f in faces:
        if len(f) == len(cyc) and set(zip(f, f[1:] + f[:1])) == target:
            return tuple(cyc)
    return tuple([cyc[0]] + cyc[1:][::-1])


def recognize_two_outer(g: PlaneGraph) -> TwoOuterStructure:
    g.validate()
    outer = set(g.outer_face)
    inner = set(g.vertices) - outer
    if not inner:
        raise NotInFamily("graph has no inner vertices")
    adj = {v: set(w for w in g.rotation[v] if w in inner) for v in inner}
    seen = {min(inner)}
    stack = [min(inner)]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != inner:
        raise NotInFamily("inner vertices are not connected")
    m_in = sum(len(a) for a in adj.values()) // 2
    core = _core_face(g, inner)
    if len(set(core)) != len(core) or len(core) < 3:
        raise NotInFamily("core boundary is not a simple cycle")
    outer_simple = len(set(g.outer_face)) == len(g.outer_face)
    outer_edges = {e for e in g.edges if e[0] in outer and e[1] in outer}
    plain = outer_simple and len(outer_edges) == len(outer) and set(core) == outer
    attachments = () if plain else _attachments(g, inner, core)
    common = dict(
        graph=g,
        outer_vertices=frozenset(outer),
        inner_vertices=frozenset(inner),
        core_cycle=tuple(core),
        attachments=attachments,
    )
    if m_in == len(inner) and len(inner) >= 3 and all(len(a) == 2 for a in adj.values()):
        kind = CYCLE_CYCLE if plain else OUTERPLANAR_CYCLE
        return TwoOuterStructure(kind=kind, inner_cycle=_ccw_cycle(g, sorted(inner), adj), **common)
    if m_in == len(inner) - 1:
        spine, leaves = _caterpillar_spine(inner, adj)
        kind = CYCLE_CATERPILLAR if plain else OUTERPLANAR_CATERPILLAR
        return TwoOuterStructure(kind=kind, spine=tuple(spine), leaves=leaves, **common)
    raise NotInFamily("inner vertices induce neither a cycle nor a caterpillar")


def _attachments(g: PlaneGraph, inner: set[Vertex], core: Sequence[Vertex]) -> tuple[Attachment, ...]:
    outer = set(g.vertices) - inner
    core_set = set(core)
    rest = outer - core_set
    adj = {v: set(w for w in g.rotation[v] if w in outer) for v in outer}
    comps: dict[Edge, set[Vertex]] = {}
    seen: set[Vertex] = set()
    for v in sorted(rest):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in rest and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        feet = sorted({y for x in comp for y in adj[x] if y in core_set})
        if len(feet) != 2:
            raise NotInFamily("an outer component is not attached along one edge")
        key = edge_key(*feet)
        if not g.has_edge(*key) or key in comps:
            raise NotInFamily("an outer component is not attached along a boundary edge")
        comps[key] = comp
    n = len(core)
    out = []
    for i in range(n):
        a, b = core[i], core[(i + 1) % n]
        key = edge_key(a, b)
        if key not in comps:
            continue
        keep = comps[key] | {a, b}
        rot = _restricted(g, keep)
        piece = PlaneGraph(rot, ())
        # the piece's outer face is the one that would contain the core: dart a->b
        walk = [a]
        cur = piece.next_dart(a, b)
        while cur != (a, b):
            walk.append(cur[0])
            cur = piece.next_dart(*cur)
        piece = PlaneGraph.build(rot, walk)
        if set(walk) != keep:
            raise NotInFamily("attachment is not outerplanar")
        out.append(Attachment(piece, (a, b)))
    out.sort(key=lambda att: min(att.graph.vertices - set(att.edge)))
    return tuple(out)


def _mixed_candidates(g: PlaneGraph, inner: frozenset[Vertex] | set[Vertex]):
    fs = extract_faces(g)
    for idx, f in enumerate(fs.faces):
        if idx == fs.outer_index or len(f) < 4:
            continue
        for i, x in enumerate(f):
            if x in inner:
                continue
            for j, y in enumerate(f):
                if y in inner and not g.has_edge(x, y):
                    yield f, i, j


def maximize_mixed_edges(g: PlaneGraph, inner: Iterable[Vertex]) -> PlaneGraph:
    """Add outer-inner edges inside faces until no more can be added."""
    ins = set(inner)
    while True:
        cand = next(_mixed_candidates(g, ins), None)
        if cand is None:
            return g
        f, i, j = cand
        g = add_diagonal(g, f, i, j)


def triangulate_pockets(s: TwoOuterStructure) -> TwoOuterStructure:
    g = maximize_mixed_edges(s.graph, s.inner_vertices)
    if g is s.graph:
        return s
    out = recognize_two_outer(g)
    if out.kind != s.kind:
        raise NotInFamily("triangulation changed the family")
    return out


def _annulus_faces(h: int, walk: Sequence[Vertex], outer: Sequence[Vertex], rng: random.Random) -> list[list[Vertex]] | None:
    """Random triangulated strip between an outer cycle and an inner closed walk.

    Both sequences run counterclockwise.  Returns None if the strip would
    repeat a mixed edge.
    """
    k = len(walk)
    steps = ["o"] * h + ["i"] * k
    rng.shuffle(steps)
    faces = []
    seen = set()
    i = j = 0
    pairs = [(outer[0], walk[0])]
    for st in steps:
        u, v = outer[i % h], walk[j % k]
        if st == "o":
            faces.append([u, outer[(i + 1) % h], v])
            i += 1
        else:
            faces.append([u, walk[(j + 1) % k], v])
            j += 1
        pairs.append((outer[i % h], walk[j % k]))
    for p in pairs[:-1]:
        if p in seen:
            return None
        seen.add(p)
    if pairs[-1] != pairs[0]:
        return None
    return faces


def gen_random_cycle_cycle(h: int, k: int, seed: int) -> PlaneGraph:
    if h < 3 or k < 3:
        raise ValueError("both cycles need at least 3 vertices")
    rng = random.Random(seed)
    outer = list(range(h))
    inner = list(range(h, h + k))
    for _ in range(1000):
        faces = _annulus_faces(h, inner, outer, rng)
        if faces is not None:
            break
    else:  # pragma: no cover - practically unreachable
        raise RuntimeError("could not sample an annulus triangulation")
    return from_faces(faces + [inner], list(reversed(outer)))


def gen_random_cycle_caterpillar(
    h: int,
    spine_len: int,
    leaf_count: int,
    seed: int,
    extra_diagonals: float = 0.5,
    wrap_ends: bool = False,
) -> PlaneGraph:
    """Outer cycle around a caterpillar, maximal with respect to mixed edges.

    With ``wrap_ends`` two opposite outer vertices are tied to the two spine
    ends and receive all the extra diagonals, which tends to make them wrap
    around the ends and see both sides of the spine.
    """
    if h < 3 or spine_len < 1:
        raise ValueError("need h >= 3 and a non-empty spine")
    if spine_len >= 2 and leaf_count < 2:
        raise ValueError("both spine ends need a leaf")
    rng = random.Random(seed)
    outer = list(range(h))
    spine = list(range(h, h + spine_len))
    # single mixed edge first: one big face between the cycle and the spine
    rot: dict[Vertex, list[Vertex]] = {}
    for i, u in enumerate(outer):
        rot[u] = [outer[(i - 1) % h], outer[(i + 1) % h]]
    for i, v in enumerate(spine):
        rot[v] = [w for w in (spine[i - 1] if i else None, spine[i + 1] if i + 1 < spine_len else None) if w is not None]
    u0 = rng.choice(outer)
    # outer vertex sees the interior between its two cycle neighbours
    i0 = outer.index(u0)
    rot[u0] = [outer[(i0 + 1) % h], spine[0], outer[(i0 - 1) % h]]
    rot[spine[0]].append(u0)
    g = PlaneGraph.build({v: tuple(r) for v, r in rot.items()}, list(reversed(outer)))
    ins = set(spine)
    hubs = None
    if wrap_ends:
        um = outer[(i0 + h // 2) % h]
        hubs = {u0, um}
        if spine_len > 1:
            f = next(f for i, f in enumerate(extract_faces(g).faces) if um in f and spine[-1] in f)
            g = add_diagonal(g, f, f.index(um), f.index(spine[-1]))
    # random extra mixed edges before maximality
    for _ in range(int(extra_diagonals * h)):
        fs = extract_faces(g)
        opts = []
        for idx, f in enumerate(fs.faces):
            if idx == fs.outer_index:
                continue
            for i, x in enumerate(f):
                for j, y in enumerate(f):
                    if x not in ins and y in ins and not g.has_edge(x, y) and (hubs is None or x in hubs):
                        opts.append((f, i, j))
        if not opts:
            break
        g = add_diagonal(g, *rng.choice(opts))
    g = maximize_mixed_edges(g, ins)
    # leaves
    nid = h + spine_len
    ends = [spine[0], spine[-1]] if spine_len >= 2 else []
    owners = ends + [rng.choice(spine) for _ in range(leaf_count - len(ends))]
    for s in owners:
        fs = extract_faces(g)
        corners = [
            (f, i)
            for idx, f in enumerate(fs.faces)
            if idx != fs.outer_index
            for i, x in enumerate(f)
            if x == s
        ]
        f, i = rng.choice(corners)
        g = insert_in_face(g, f, i, nid)
        ins.add(nid)
        nid += 1
    g = maximize_mixed_edges(g, ins)
    g.validate()
    return g


def gen_random_outerplanar_attachment(
    core: PlaneGraph, count: int, seed: int, max_size: int = 6, chord_prob: float = 0.6
) -> PlaneGraph:
    """Glue random outerplanar polygons onto distinct outer edges of ``core``."""
    rng = random.Random(seed)
    g = core
    walk = list(g.outer_face)
    if len(set(walk)) != len(walk):
        raise ValueError("core outer face must be a simple cycle")
    n = len(walk)
    picks = rng.sample(range(n), min(count, n))
    darts = [(walk[i], walk[(i + 1) % n]) for i in picks]
    nid = max(g.vertices) + 1
    for a, b in darts:
        size = rng.randint(1, max_size)
        new = list(range(nid, nid + size))
        nid += size
        # polygon a, b, new... is a bounded counterclockwise face; outer walk gets it reversed
        fs = extract_faces(g)
        faces = [f for i, f in enumerate(fs.faces) if i != fs.outer_index]
        ow = list(g.outer_face)
        j = next(i for i in range(len(ow)) if ow[i] == a and ow[(i + 1) % len(ow)] == b)
        ow = ow[: j + 1] + list(reversed(new)) + ow[j + 1 :]
        faces += _split_polygon([a, b, *new], rng, chord_prob)
        g = from_faces(faces, ow)
    return g


def _split_polygon(poly: list[Vertex], rng: random.Random, p: float) -> list[list[Vertex]]:
    m = len(poly)
    if m <= 3 or rng.random() > p:
        return [poly]
    i = rng.randrange(m)
    j = (i + rng.randint(2, m - 2)) % m
    a, b = sorted((i, j))
    first = poly[a : b + 1]
    second = poly[b:] + poly[: a + 1]
    return _split_polygon(first, rng, p) + _split_polygon(second, rng, p)


def gen_random_outerplanar(n: int, seed: int, chord_prob: float = 0.7, pendant_prob: float = 0.2) -> PlaneGraph:
    """Random connected outerplanar graph: polygons glued at vertices, plus pendant paths."""
    rng = random.Random(seed)
    if n < 2:
        raise ValueError("need at least 2 vertices")
    # start from one polygon and keep gluing blocks at random outer corners
    size = min(n, rng.randint(2, max(2, n // 2 + 1)))
    verts = list(range(size))
    if size == 2:
        g = PlaneGraph.build({0: (1,), 1: (0,)}, [0, 1])
    else:
        faces = _split_polygon(verts, rng, chord_prob)
        g = from_faces(faces, list(reversed(verts)))
    nid = size
    while nid < n:
        walk = list(g.outer_face)
        pos = rng.randrange(len(walk))
        x = walk[pos]
        room = n - nid
        blk = 1 if rng.random() < pendant_prob else rng.randint(1, min(room, 5))
        new = list(range(nid, nid + blk))
        nid += blk
        rot = {v: list(r) for v, r in g.rotation.items()}
        s = walk[(pos + 1) % len(walk)]
        # a block glued at the corner of the outer face at x (between s and the previous dart)
        if blk == 1:
            y = new[0]
            rot[x].insert(rot[x].index(s) + 1, y)
            rot[y] = [x]
            ow = walk[: pos + 1] + [y] + walk[pos:]
            g = PlaneGraph.build({v: tuple(r) for v, r in rot.items()}, ow)
        else:
            poly = [x, *new]
            fs = extract_faces(g)
            faces = [f for i, f in enumerate(fs.faces) if i != fs.outer_index]
            ow = walk[: pos + 1] + list(reversed(new)) + walk[pos:]
            faces += _split_polygon(poly, rng, chord_prob)
            g = from_faces(faces, ow)
    return g
