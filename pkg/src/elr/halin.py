"""Weakly 1-span level planar drawings of Halin graphs and their subdivisions.

The construction roots the characteristic tree so that two cycle-adjacent
leaves are extreme, decomposes it into nested external paths, and lays the
contracted path tree out by depth.  Special shapes (wheels, two-star and
star-of-stars trees) get dedicated layouts.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .errors import ConstructionGap, IsK4, NotGeneralizedHalin, PreconditionViolated
from .families import HalinStructure, OrderedTree, SubdivisionRecord, recognize_generalized_halin
from .graph import Edge, PlaneGraph, Vertex, edge_key
from .leveling import LevelDrawing, mirror, stack, validate_swlp

TreeRotation = dict[Vertex, list[Vertex]]


# -- tree helpers --------------------------------------------------------


def tree_rotation(h: HalinStructure) -> TreeRotation:
    return {v: h.tree_neighbors(v) for v in h.graph.vertices}


def tufts_of(adj: Mapping[Vertex, Sequence[Vertex]]) -> list[frozenset[Vertex]]:
    """Sibling leaf groups (size >= 2) whose parent has at most one internal neighbour.

    A star is a single tuft; its centre has no internal neighbour at all.
    """
    leaves = {v for v, ns in adj.items() if len(ns) == 1}
    if len(adj) <= 2:
        return []
    out = []
    for p in sorted(adj):
        if p in leaves:
            continue
        lv = [w for w in adj[p] if w in leaves]
        internal = [w for w in adj[p] if w not in leaves]
        if len(lv) >= 2 and len(internal) <= 1:
            out.append(frozenset(lv))
    return out


def pruned_tree(adj: Mapping[Vertex, Sequence[Vertex]]) -> dict[Vertex, list[Vertex]]:
    leaves = {v for v, ns in adj.items() if len(ns) == 1}
    return {v: [w for w in ns if w not in leaves] for v, ns in adj.items() if v not in leaves}


def orient_tree(
    rot: Mapping[Vertex, Sequence[Vertex]],
    root: Vertex,
    *,
    first: Vertex | None = None,
    after: Vertex | None = None,
    exclude: Iterable[Vertex] = (),
) -> OrderedTree:
    """Order children counterclockwise after the parent.

    The root's children start at ``first``, or right after ``after``; with
    ``after``, that neighbour itself is dropped when listed in ``exclude``
    and otherwise goes last.
    """
    skip = set(exclude)
    children: dict[Vertex, tuple[Vertex, ...]] = {}
    ns = list(rot[root])
    if first is not None:
        i = ns.index(first)
        seq = ns[i:] + ns[:i]
    elif after is not None:
        i = ns.index(after)
        seq = ns[i + 1 :] + ns[: i + 1]
    else:
        seq = ns
    children[root] = tuple(w for w in seq if w not in skip)
    stack_ = [(c, root) for c in children[root]]
    while stack_:
        v, p = stack_.pop()
        ns = list(rot[v])
        i = ns.index(p)
        cs = tuple(w for w in ns[i + 1 :] + ns[:i] if w not in skip)
        children[v] = cs
        stack_.extend((c, v) for c in cs)
    return OrderedTree(root, children)


def smooth_in_tree(rot: TreeRotation, x: Vertex, chains: dict[tuple[Vertex, Vertex], list[Vertex]]) -> Edge:
    """Smooth a degree-2 tree vertex, remembering the chain it came from."""
    a, b = rot[x]
    rot[a][rot[a].index(x)] = b
    rot[b][rot[b].index(x)] = a
    del rot[x]
    ca = chains.pop((a, x), None) or list(reversed(chains.pop((x, a), [])))
    cb = chains.pop((x, b), None) or list(reversed(chains.pop((b, x), [])))
    chains[(a, b)] = ca + [x] + cb
    return (a, b)


# -- decomposition into characteristic paths ----------------------------


@dataclass(frozen=True)
class CharacteristicDecomposition:
    paths: tuple[tuple[Vertex, ...], ...]
    path_of: Mapping[Vertex, int]
    tufts: tuple[frozenset[Vertex], ...]
    pruned_vertices: frozenset[Vertex]
    pruned_edges: frozenset[Edge]
    parent_path: Mapping[int, int]
    pertinent_edge: Mapping[int, Edge]  # path id -> tree edge joining it to its parent path
    child_paths: Mapping[int, tuple[int, ...]]

    @property
    def pruned_leaves(self) -> list[Vertex]:
        deg = {v: 0 for v in self.pruned_vertices}
        for u, v in self.pruned_edges:
            deg[u] += 1
            deg[v] += 1
        if len(deg) == 1:
            return list(deg)
        return sorted(v for v, d in deg.items() if d == 1)


def _extreme_leaf(t: OrderedTree, v: Vertex, side: int) -> Vertex:
    while t.children.get(v):
        v = t.children[v][side]
    return v


def external_path(t: OrderedTree, w: Vertex, parent: Mapping[Vertex, Vertex]) -> list[Vertex]:
    if not t.children.get(w):
        return [w]
    pl = parent[_extreme_leaf(t, w, 0)]
    pr = parent[_extreme_leaf(t, w, -1)]
    up = [pl]
    while up[-1] != w:
        up.append(parent[up[-1]])
    down = [pr]
    while down[-1] != w:
        down.append(parent[down[-1]])
    return up + list(reversed(down[:-1]))


def decompose(t: OrderedTree) -> CharacteristicDecomposition:
    parent = t.parent_map()
    paths: list[tuple[Vertex, ...]] = []
    path_of: dict[Vertex, int] = {}
    parent_path: dict[int, int] = {}
    pert: dict[int, Edge] = {}
    kids: dict[int, list[int]] = {}
    todo = [(t.root, None, None)]
    while todo:
        w, pp, pe = todo.pop()
        pi = external_path(t, w, parent)
        pid = len(paths)
        paths.append(tuple(pi))
        kids[pid] = []
        for v in pi:
            path_of[v] = pid
        if pp is not None:
            parent_path[pid] = pp
            pert[pid] = pe
            kids[pp].append(pid)
        on = set(pi)
        pending = [(z, pid, (u, z)) for u in pi for z in t.children.get(u, ()) if z not in on]
        todo.extend(reversed(pending))
    adj = {v: [] for v in t.vertices()}
    for u, v in t.edges():
        adj[u].append(v)
        adj[v].append(u)
    pr = pruned_tree(adj)
    pedges = frozenset(edge_key(u, v) for u, ns in pr.items() for v in ns)
    return CharacteristicDecomposition(
        tuple(paths),
        path_of,
        tuple(tufts_of(adj)),
        frozenset(pr),
        pedges,
        parent_path,
        pert,
        {k: tuple(v) for k, v in kids.items()},
    )


@dataclass(frozen=True)
class AuxiliaryTree:
    root: int
    children: Mapping[int, tuple[int, ...]]
    pertinent_path: Mapping[int, tuple[Vertex, ...]]
    pertinent_edge: Mapping[tuple[int, int], Edge]
    depth: Mapping[int, int]

    def leaves(self) -> list[int]:
        out = []
        stack_ = [self.root]
        while stack_:
            v = stack_.pop()
            cs = self.children.get(v, ())
            if not cs:
                out.append(v)
            stack_.extend(reversed(cs))
        return out


def build_aux(t: OrderedTree, dec: CharacteristicDecomposition) -> AuxiliaryTree:
    """Contract each characteristic path; children keep the order along the path."""
    path_pos = {v: i for p in dec.paths for i, v in enumerate(p)}
    children = {}
    for pid, cs in dec.child_paths.items():
        def key(c: int) -> tuple[int, int]:
            u, z = dec.pertinent_edge[c]
            return (path_pos[u], t.children[u].index(z))

        children[pid] = tuple(sorted(cs, key=key))
    depth = {0: 0}
    stack_ = [0]
    while stack_:
        v = stack_.pop()
        for c in children[v]:
            depth[c] = depth[v] + 1
            stack_.append(c)
    pert = {(dec.parent_path[c], c): dec.pertinent_edge[c] for c in dec.parent_path}
    return AuxiliaryTree(0, children, dict(enumerate(dec.paths)), pert, depth)


def layout_characteristic(t: OrderedTree) -> LevelDrawing:
    """Tree drawing with levels = auxiliary depth; extreme leaves lifted to the top level."""
    leaves = t.leaves()
    vl, vr = leaves[0], leaves[-1]
    dec = decompose(t)
    in_tuft = set().union(*dec.tufts) if dec.tufts else set()
    if vl not in in_tuft or vr not in in_tuft:
        raise PreconditionViolated("extreme leaves must belong to tufts")
    aux = build_aux(t, dec)
    rows: dict[int, list[Vertex]] = {}
    stack_ = [aux.root]
    while stack_:
        node = stack_.pop()
        rows.setdefault(aux.depth[node], []).extend(aux.pertinent_path[node])
        stack_.extend(reversed(aux.children[node]))
    if rows[1][0] != vl or rows[1][-1] != vr:
        raise ConstructionGap("extreme leaves are not at the ends of level 1")
    rows[1] = rows[1][1:-1]
    rows[0] = [vl, *rows[0], vr]
    seq = [rows[d] for d in range(max(rows) + 1)]
    return LevelDrawing.from_rows(seq, t.edges())


# -- whole-graph drawings ------------------------------------------------


def _cycle_edges(cycle: Sequence[Vertex]) -> set[Edge]:
    n = len(cycle)
    return {edge_key(cycle[i], cycle[(i + 1) % n]) for i in range(n)}


def _leaf_blocks(h: HalinStructure) -> list[tuple[Vertex, list[Vertex]]]:
    """Cycle split into maximal runs of leaves sharing a parent, rotated to start a run."""
    cyc = list(h.cycle)
    par = {v: h.tree_neighbors(v)[0] for v in cyc}
    n = len(cyc)
    start = next(i for i in range(n) if par[cyc[i]] != par[cyc[i - 1]])
    cyc = cyc[start:] + cyc[:start]
    blocks: list[tuple[Vertex, list[Vertex]]] = []
    for v in cyc:
        if blocks and blocks[-1][0] == par[v]:
            blocks[-1][1].append(v)
        else:
            blocks.append((par[v], [v]))
    return blocks


def _wheel(h: HalinStructure) -> LevelDrawing:
    hub = next(iter(h.internal))
    rim = list(h.cycle)
    rows = [[rim[0]], [rim[1], hub, rim[-1]], rim[2:-1]]
    return LevelDrawing.from_rows(rows, h.graph.edges)


def _two_stars(h: HalinStructure) -> LevelDrawing:
    blocks = _leaf_blocks(h)
    (a, al), (b, bl) = blocks
    if len(bl) == 2 and len(al) > 2:
        (a, al), (b, bl) = (b, bl), (a, al)
    if len(al) == 2:
        rows = [[b], [a, al[1], *bl], [al[0]]]
    else:
        rows = [list(reversed(bl[1:-1])), [bl[-1], b, bl[0]], [al[0], a, al[-1]], al[1:-1]]
    return LevelDrawing.from_rows([r for r in rows if r], h.graph.edges)


def _star_of_stars(h: HalinStructure) -> LevelDrawing:
    blocks = _leaf_blocks(h)
    centre = next(v for v in h.internal if all(p != v for p, _ in blocks))
    m = len(blocks)
    top, right, left = blocks[: m - 2], blocks[m - 2], blocks[m - 1]
    top_leaves = [v for _, ls in top for v in ls]
    rows = [
        top_leaves[:-1],
        [*left[1][1:], *(s for s, _ in top), top_leaves[-1]],
        [left[1][0], left[0], centre, right[0], right[1][0]],
        list(reversed(right[1][1:])),
    ]
    return LevelDrawing.from_rows(rows, h.graph.edges)


def _insert_chains(d: LevelDrawing, chains: Mapping[tuple[Vertex, Vertex], Sequence[Vertex]]) -> LevelDrawing:
    """Put smoothed-away vertices back between the (flat, consecutive) edge ends."""
    order = {L: list(vs) for L, vs in d.order.items()}
    level = dict(d.level)
    edges = set(d.edges)
    for (a, b), chain in chains.items():
        if level[a] != level[b]:
            raise ConstructionGap(f"smoothed edge {a}-{b} is not flat")
        row = order[level[a]]
        i, j = row.index(a), row.index(b)
        if abs(i - j) != 1:
            raise ConstructionGap(f"smoothed edge {a}-{b} is not between neighbours")
        seq = list(chain) if i < j else list(reversed(chain))
        row[min(i, j) + 1 : min(i, j) + 1] = seq
        for v in chain:
            level[v] = level[a]
        edges.discard(edge_key(a, b))
        path = [a, *chain, b]
        edges |= {edge_key(path[k], path[k + 1]) for k in range(len(path) - 1)}
    return LevelDrawing(frozenset(edges), level, order, {})


def _case_single_leaves(h: HalinStructure, singles: set[Vertex], tuft_of: Mapping[Vertex, frozenset[Vertex]]) -> LevelDrawing:
    cyc = list(h.cycle)  # clockwise
    n = len(cyc)
    runs = []
    for i in range(n):
        if cyc[i] in singles and cyc[i - 1] not in singles:
            j = i
            run = []
            while cyc[j % n] in singles:
                run.append(cyc[j % n])
                j += 1
            runs.append((min(tuft_of[cyc[i - 1]]), cyc[i - 1], run, cyc[j % n]))
    _, vl, run, vr = min(runs)
    rot = tree_rotation(h)
    for x in run:
        p = rot[x][0]
        rot[p].remove(x)
        del rot[x]
    chains: dict[tuple[Vertex, Vertex], list[Vertex]] = {}
    parents = sorted({h.tree_neighbors(x)[0] for x in run})
    for q in parents:
        if len(rot[q]) == 2:
            smooth_in_tree(rot, q, chains)
    pl = rot[vl][0]
    t = orient_tree(rot, pl, first=vl)
    lv = t.leaves()
    if lv[0] != vl or lv[-1] != vr:
        raise ConstructionGap("rooting does not make the cut leaves extreme")
    body = _insert_chains(layout_characteristic(t), chains)
    top = min(body.order)
    order = {L: list(vs) for L, vs in body.order.items()}
    order[top - 1] = list(run)
    level = dict(body.level)
    for x in run:
        level[x] = top - 1
    return LevelDrawing(h.graph.edges, level, order, {})


def _half(rot: TreeRotation, root: Vertex, other: Vertex, keep: set[Vertex]) -> LevelDrawing:
    sub = {v: [w for w in rot[v] if w in keep] for v in keep}
    ns = [w for w in rot[root] if w != other]
    if len(ns) == 2:
        # the cut end would have degree two: smooth it and root at one neighbour
        i = rot[root].index(other)
        seq = rot[root][i + 1 :] + rot[root][:i]
        c1, c2 = seq
        chains: dict[tuple[Vertex, Vertex], list[Vertex]] = {}
        smooth_in_tree(sub, root, chains)
        t = orient_tree(sub, c1, after=c2)
        return _insert_chains(layout_characteristic(t), chains)
    t = orient_tree({**sub, root: list(rot[root])}, root, after=other, exclude=[other])
    return layout_characteristic(t)


def _split_tree(h: HalinStructure, pruned: Mapping[Vertex, list[Vertex]]) -> LevelDrawing:
    cands = sorted(
        edge_key(u, v) for u, ns in pruned.items() for v in ns if len(pruned[u]) >= 2 and len(pruned[v]) >= 2
    )
    ra, rb = cands[0]
    rot = tree_rotation(h)
    side = {ra}
    stack_ = [ra]
    while stack_:
        x = stack_.pop()
        for y in rot[x]:
            if y not in side and not (x == ra and y == rb):
                side.add(y)
                stack_.append(y)
    other = set(h.graph.vertices) - side
    da = _half(rot, ra, rb, side)
    db = _half(rot, rb, ra, other)
    top = mirror(db, horizontal=True, vertical=True)
    ta, tb = da.row(min(da.order)), top.row(max(top.order))
    seams = [(tb[0], ta[0]), (rb, ra), (tb[-1], ta[-1])]
    cyc = _cycle_edges(h.cycle)
    if edge_key(tb[0], ta[0]) not in cyc:
        top = mirror(db, vertical=True)  # pragma: no cover - orientation fallback
        tb = top.row(max(top.order))
        seams = [(tb[0], ta[0]), (rb, ra), (tb[-1], ta[-1])]
    d = stack(top, da, seams)
    return d.with_edges(h.graph.edges)


def draw_halin(h: HalinStructure, verify: bool = True) -> LevelDrawing:
    """Weakly 1-span drawing of any Halin graph other than K4."""
    if h.is_k4:
        raise IsK4("K4 has no weakly 1-span level planar drawing")
    if h.trivial:
        d = _wheel(h)
    else:
        rot = tree_rotation(h)
        tf = tufts_of(rot)
        tuft_of = {v: t for t in tf for v in t}
        singles = {v for v in h.cycle if v not in tuft_of}
        pruned = pruned_tree(rot)
        centres = [v for v, ns in pruned.items() if len(ns) >= 2]
        if singles:
            d = _case_single_leaves(h, singles, tuft_of)
        elif len(pruned) == 2:
            d = _two_stars(h)
        elif len(centres) == 1:
            d = _star_of_stars(h)
        else:
            d = _split_tree(h, pruned)
    d = d.normalized()
    if d.edges != h.graph.edges:
        raise ConstructionGap("drawing does not cover every edge")
    if verify:
        verdict = validate_swlp(d, 1)
        if not verdict.ok:
            raise ConstructionGap("; ".join(verdict.failures[:3]))
    return d


# -- generalized Halin graphs -------------------------------------------


def _k4_core_layout(h: HalinStructure, record: SubdivisionRecord) -> LevelDrawing:
    hub = next(iter(h.internal))
    a, b, c = h.cycle

    def chain(x: Vertex, y: Vertex) -> list[Vertex]:
        e = edge_key(x, y)
        ch = list(record.chains.get(e, ()))
        return ch if e[0] == x else list(reversed(ch))

    rows = [
        [a],
        [b, *chain(b, hub), hub, *chain(hub, a)],
        [c, *chain(c, hub)],
    ]
    return LevelDrawing.from_rows(rows, [])


def _subdivide_layout(d: LevelDrawing, record: SubdivisionRecord) -> tuple[LevelDrawing, list[Edge]]:
    """Interleave fresh levels; flat chains stay put, span-1 chains go on the new level."""
    level = {v: 2 * L for v, L in d.level.items()}
    order = {2 * L: list(vs) for L, vs in d.order.items()}
    gaps: dict[Edge, dict[int, int]] = {}
    for L in d.levels():
        order.setdefault(2 * L + 1, [])
    new_edges: list[Edge] = []
    for L in d.levels():
        strip = [e for e in d.edges if {d.level[e[0]], d.level[e[1]]} == {L, L + 1}]

        def key(e: Edge) -> tuple[int, int]:
            u, v = e if d.level[e[0]] == L else (e[1], e[0])
            return (d.position(u), d.position(v))

        strip.sort(key=key)
        mid = 2 * L + 1
        for e in strip:
            u, v = e if d.level[e[0]] == L else (e[1], e[0])
            ch = list(record.chains.get(e, ()))
            if not ch:
                gaps[e] = {mid: len(order[mid])}
                new_edges.append(e)
                continue
            if e[0] != u:
                ch.reverse()
            order[mid].extend(ch)
            for x in ch:
                level[x] = mid
            path = [u, *ch, v]
            new_edges += [edge_key(path[k], path[k + 1]) for k in range(len(path) - 1)]
    for e in d.edges:
        if d.span(e) == 0:
            ch = list(record.chains.get(e, ()))
            if not ch:
                new_edges.append(e)
                continue
            u, v = e
            row = order[2 * d.level[u]]
            i, j = row.index(u), row.index(v)
            seq = ch if i < j else list(reversed(ch))
            row[min(i, j) + 1 : min(i, j) + 1] = seq
            for x in ch:
                level[x] = 2 * d.level[u]
            path = [u, *ch, v]
            new_edges += [edge_key(path[k], path[k + 1]) for k in range(len(path) - 1)]
    return LevelDrawing(frozenset(new_edges), level, order, gaps), new_edges


def draw_generalized_halin(g: PlaneGraph, verify: bool = True) -> LevelDrawing:
    """Weakly 2-span drawing of a subdivided Halin graph."""
    h, record = recognize_generalized_halin(g)
    if h.is_k4:
        d = _k4_core_layout(h, record)
        d = d.with_edges(g.edges, {edge_key(h.cycle[0], h.cycle[2]): {1: 0}})
    else:
        base = draw_halin(h, verify=False)
        d, _ = _subdivide_layout(base, record)
    d = d.normalized()
    if d.edges != g.edges:
        raise ConstructionGap("drawing does not cover every edge")
    if verify:
        verdict = validate_swlp(d, 2)
        if not verdict.ok:
            raise ConstructionGap("; ".join(verdict.failures[:3]))
    return d
