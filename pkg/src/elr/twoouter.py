"""Bounded-span level drawings of cycle-cycle, cycle-caterpillar and their outerplanar extensions."""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConstructionGap, NotInFamily
from .families import (
    CYCLE_CATERPILLAR,
    CYCLE_CYCLE,
    OUTERPLANAR_CATERPILLAR,
    OUTERPLANAR_CYCLE,
    Attachment,
    TwoOuterStructure,
    recognize_two_outer,
    triangulate_pockets,
)
from .graph import Edge, PlaneGraph, Vertex, edge_key, trace_faces
from .leveling import EdgeLeftmost, EdgeOnTop, LevelDrawing, outerplanar_1swlp, strip_conflicts, validate_swlp

HALF = Fraction(1, 2)


def _require(s: TwoOuterStructure, *kinds: str) -> None:
    if s.kind not in kinds:
        raise NotInFamily(f"expected {' or '.join(kinds)}, got {s.kind}")


# -- cycle-cycle --------------------------------------------------------


def _pick_apex(g: PlaneGraph, outer: Sequence[Vertex], inner: frozenset[Vertex]) -> Vertex:
    k = len(inner)
    for u in sorted(outer):
        c = sum(1 for w in g.rotation[u] if w in inner)
        if 2 <= c < k:
            return u
    raise ConstructionGap("no outer vertex sees between two and k-1 inner vertices")


def draw_cycle_cycle(s: TwoOuterStructure, verify: bool = True) -> LevelDrawing:
    """Four-level drawing with the apex alone on top; the two apex-to-bottom edges have span 3."""
    _require(s, CYCLE_CYCLE)
    st = triangulate_pockets(s)
    g = st.graph
    inner = st.inner_vertices
    apex = _pick_apex(g, st.core_cycle, inner)
    rot = list(g.rotation[apex])
    n = len(rot)
    # outer neighbours bracket a contiguous run of inner neighbours
    start = next(i for i in range(n) if rot[i] not in inner and rot[(i + 1) % n] in inner)
    fan = []
    j = (start + 1) % n
    while rot[j] in inner:
        fan.append(rot[j])
        j = (j + 1) % n
    left_out, right_out = rot[start], rot[j]
    cyc = list(st.inner_cycle)
    k = len(cyc)
    i0 = cyc.index(fan[0])
    if cyc[(i0 + 1) % k] != fan[1]:
        cyc.reverse()
        i0 = cyc.index(fan[0])
    ring = cyc[i0:] + cyc[:i0]  # v_1 .. v_k with v_1..v_k' = fan
    kp = len(fan)
    if ring[:kp] != fan:
        raise ConstructionGap("apex neighbours are not consecutive on the inner cycle")
    oc = list(st.core_cycle)
    h = len(oc)
    a = oc.index(apex)
    if oc[(a + 1) % h] != right_out:
        oc.reverse()
        a = oc.index(apex)
    outer_seq = oc[a + 1 :] + oc[:a]  # u_2 .. u_h
    if outer_seq[0] != right_out or outer_seq[-1] != left_out:
        raise ConstructionGap("apex outer neighbours do not match its fan")
    rows = [[apex], ring[:kp], list(reversed(ring[kp:])), list(reversed(outer_seq))]
    d = LevelDrawing.from_rows(rows, g.edges)
    first2, last2 = ring[0], ring[kp - 1]
    len1, len2 = len(rows[1]), len(rows[2])
    gaps: dict[Edge, dict[int, int]] = {}
    for e in g.edges:
        lo, hi = sorted((d.level[e[0]], d.level[e[1]]))
        if hi - lo < 2:
            continue
        x = e[0] if d.level[e[0]] == lo else e[1]
        if lo == 0:
            at_left = d.position(e[0] if x == e[1] else e[1]) == 0
            gaps[e] = {1: 0, 2: 0} if at_left else {1: len1, 2: len2}
        elif x == first2:
            gaps[e] = {2: 0}
        elif x == last2:
            gaps[e] = {2: len2}
        else:
            raise ConstructionGap(f"unexpected long edge {e}")
    d = d.with_edges(s.graph.edges, gaps)
    if verify:
        _verify(d, 3)
    return d


def _verify(d: LevelDrawing, k: int) -> None:
    v = validate_swlp(d, k)
    if not v.ok:
        raise ConstructionGap("; ".join(v.failures[:3]))


# -- cycle-caterpillar ----------------------------------------------


@dataclass(frozen=True)
class MixedEdgeClassification:
    kinds: Mapping[Edge, str]  # "extreme", "left" or "right"
    both_sided: tuple[Vertex, ...]
    landmarks: Mapping[str, int] = field(default_factory=dict)  # spine indices, 0-based

    def side_edges(self, u: Vertex, side: str) -> list[Edge]:
        return sorted(e for e, k in self.kinds.items() if k == side and u in e)


def _stripped(st: TwoOuterStructure) -> PlaneGraph:
    spine = set(st.spine)
    keep = st.outer_vertices | spine
    rot = {v: tuple(w for w in st.graph.rotation[v] if w in keep) for v in keep}
    return PlaneGraph(rot, st.graph.outer_face)


def classify_mixed(s: TwoOuterStructure) -> MixedEdgeClassification:
    """Side of the spine each mixed edge of the leafless core leaves from."""
    _require(s, CYCLE_CATERPILLAR)
    st = triangulate_pockets(s)
    gp = _stripped(st)
    spine = list(st.spine)
    k = len(spine)
    idx = {v: i for i, v in enumerate(spine)}
    kinds: dict[Edge, str] = {}
    for j, v in enumerate(spine):
        rot = list(gp.rotation[v])
        if j in (0, k - 1):
            for w in rot:
                if w not in idx:
                    kinds[edge_key(v, w)] = "extreme"
            continue
        f = rot.index(spine[j + 1])
        seq = rot[f + 1 :] + rot[:f]
        b = seq.index(spine[j - 1])
        for w in seq[:b]:
            kinds[edge_key(v, w)] = "left"
        for w in seq[b + 1 :]:
            kinds[edge_key(v, w)] = "right"
    sides: dict[Vertex, set[str]] = {}
    for e, kd in kinds.items():
        u = e[0] if e[0] not in idx else e[1]
        sides.setdefault(u, set()).add(kd)
    both = tuple(sorted(u for u, ks in sides.items() if {"left", "right"} <= ks))
    marks: dict[str, int] = {}
    for u in both:
        left = [idx[e[0] if e[0] in idx else e[1]] for e, kd in kinds.items() if kd == "left" and u in e]
        right = [idx[e[0] if e[0] in idx else e[1]] for e, kd in kinds.items() if kd == "right" and u in e]
        if gp.has_edge(u, spine[0]) and "l1" not in marks:
            marks["l1"], marks["r1"] = max(left), max(right)
        elif gp.has_edge(u, spine[-1]):
            marks["l2"], marks["r2"] = min(left), min(right)
    return MixedEdgeClassification(kinds, both, marks)


def _cut_candidates(faces: list[tuple[Vertex, ...]], v: Vertex, cyc: Sequence[Vertex], outer_face: set[Edge]) -> list[int]:
    h = len(cyc)
    where = {(cyc[i], cyc[(i + 1) % h]): i for i in range(h)}
    where.update({(cyc[(i + 1) % h], cyc[i]): i for i in range(h)})
    out = []
    for f in faces:
        if v not in f:
            continue
        for a, b in zip(f, f[1:] + f[:1]):
            if (a, b) in where and (a, b) not in outer_face:
                out.append(where[(a, b)])
    return sorted(set(out))


def _monotone(arc: Sequence[Vertex], nbrs: Mapping[Vertex, list[int]]) -> bool:
    reach = -1
    for u in arc:
        ns = nbrs[u]
        if ns:
            if ns[0] < reach:
                return False
            reach = ns[-1]
    return True


def _leaf_options(x: Vertex, parent_index: int, k: int, top: set[Vertex], bottom: set[Vertex], outer_nbrs: list[Vertex]):
    t = [u for u in outer_nbrs if u in top]
    b = [u for u in outer_nbrs if u in bottom]
    if not b:
        return [("up", None)]
    if not t:
        return [("down", None)]
    opts = []
    if parent_index == 0:
        opts.append(("end", "L"))
    if parent_index == k - 1:
        opts.append(("end", "R"))
    opts += [("up", "L"), ("up", "R"), ("down", "L"), ("down", "R")]
    return opts


def _sort_level(items: list[tuple[tuple, str, object]]) -> list[tuple[str, object]]:
    items.sort(key=lambda it: it[0])
    return [(kind, obj) for _, kind, obj in items]


def _caterpillar_layout(
    st: TwoOuterStructure,
    top: list[Vertex],
    bottom: list[Vertex],
    choice: Mapping[Vertex, tuple[str, str | None]],
) -> LevelDrawing:
    g = st.graph
    spine = list(st.spine)
    k = len(spine)
    parent = {x: v for v, ls in st.leaves.items() for x in ls}
    outer = st.outer_vertices
    tset, bset = set(top), set(bottom)
    ends_l = [x for x, c in choice.items() if c == ("end", "L")]
    ends_r = [x for x, c in choice.items() if c == ("end", "R")]
    if len(ends_l) > 1 or len(ends_r) > 1:
        raise ConstructionGap("two leaves compete for one spine end")
    row2 = ends_l + spine + ends_r
    pos0 = {u: i for i, u in enumerate(top)}
    pos2 = {v: i for i, v in enumerate(row2)}
    pos4 = {u: i for i, u in enumerate(bottom)}
    level = {u: 0 for u in top} | {v: 2 for v in row2} | {u: 4 for u in bottom}
    # where long leaf edges cross the spine level
    cross2: dict[Edge, Fraction] = {}
    for x, (kind, side) in choice.items():
        if kind == "end":
            continue
        level[x] = 1 if kind == "up" else 3
        if side is None:
            continue
        # a long leaf edge can only pass the spine level around one of its ends
        gpos = 0 if side == "L" else len(row2)
        far = bset if kind == "up" else tset
        for u in g.rotation[x]:
            if u in far:
                cross2[edge_key(x, u)] = Fraction(gpos) - HALF
    cut_l, cut_r = edge_key(top[0], bottom[0]), edge_key(top[-1], bottom[-1])
    n2 = len(row2)
    cross2[cut_l] = -HALF
    cross2[cut_r] = Fraction(n2) - HALF
    items1: list = []
    items3: list = []
    for x, (kind, _) in choice.items():
        if kind == "end":
            continue
        near_row = pos0 if kind == "up" else pos4
        ns = [near_row[u] for u in g.rotation[x] if u in near_row]
        mids = [Fraction(pos2[parent[x]])] + [c for e, c in cross2.items() if x in e]
        if not ns:
            raise ConstructionGap(f"leaf {x} has no outer neighbour on its side")
        if kind == "up":
            key = (min(ns), min(mids), max(ns), max(mids), 1, x)
            items1.append((key, "v", x))
        else:
            key = (min(mids), min(ns), max(mids), max(ns), 1, x)
            items3.append((key, "v", x))
    for e in g.edges:
        a, b = e
        la, lb = level[a], level[b]
        if la > lb:
            a, b, la, lb = b, a, lb, la
        if lb - la < 2:
            continue
        # e runs from a (upper) to b (lower)
        if la == 0 and lb >= 2:
            mid = Fraction(pos2[b]) if lb == 2 else cross2[e]
            items1.append(((pos0[a], mid, pos0[a], mid, 0, e), "d", e))
        if la <= 2 and lb == 4:
            mid = Fraction(pos2[a]) if la == 2 else cross2[e]
            items3.append(((mid, pos4[b], mid, pos4[b], 0, e), "d", e))
    gaps: dict[Edge, dict[int, int]] = {}
    rows = {0: list(top), 2: row2, 4: list(bottom)}
    for L, items in ((1, items1), (3, items3)):
        seq = _sort_level(items)
        row: list[Vertex] = []
        for kind, obj in seq:
            if kind == "v":
                row.append(obj)  # type: ignore[arg-type]
            else:
                gaps.setdefault(obj, {})[L] = len(row)  # type: ignore[index]
        rows[L] = row
    for e, c in cross2.items():
        if e in g.edges and {level[e[0]], level[e[1]]} != {2}:
            lo, hi = sorted((level[e[0]], level[e[1]]))
            if lo < 2 < hi:
                gaps.setdefault(e, {})[2] = int(c + HALF)
    return LevelDrawing(g.edges, level, {L: tuple(r) for L, r in rows.items()}, gaps)


def _caterpillar_splits(st: TwoOuterStructure):
    gp = _stripped(st)
    spine = list(st.spine)
    idx = {v: i for i, v in enumerate(spine)}
    cyc = list(st.core_cycle)
    h = len(cyc)
    nbrs = {u: sorted(idx[w] for w in gp.rotation[u] if w in idx) for u in cyc}
    faces = trace_faces(gp)
    ow = list(st.graph.outer_face)
    outer_darts = set(zip(ow, ow[1:] + ow[:1]))
    # cuts next to the spine ends first, then every other cycle edge
    rest = list(range(h))
    near_l = _cut_candidates(faces, spine[0], cyc, outer_darts)
    near_r = _cut_candidates(faces, spine[-1], cyc, outer_darts)
    lefts = near_l + [i for i in rest if i not in near_l]
    rights = near_r + [i for i in rest if i not in near_r]
    for il in lefts:
        for ir in rights:
            if il == ir:
                continue
            arc1 = [cyc[(il + 1 + t) % h] for t in range((ir - il) % h)]
            arc2 = [cyc[(ir + 1 + t) % h] for t in range((il - ir) % h)][::-1]
            if not arc1 or not arc2:
                continue
            if _monotone(arc1, nbrs) and _monotone(arc2, nbrs):
                yield arc1, arc2


def draw_cycle_caterpillar(s: TwoOuterStructure, verify: bool = True, max_tries: int = 64) -> LevelDrawing:
    """Five levels: outer arcs on the extremes, spine in the middle, caterpillar leaves between."""
    _require(s, CYCLE_CATERPILLAR)
    st = triangulate_pockets(s)
    g = st.graph
    spine = list(st.spine)
    k = len(spine)
    idx = {v: i for i, v in enumerate(spine)}
    parent = {x: v for v, ls in st.leaves.items() for x in ls}
    tries = 0
    last = "no admissible split of the outer cycle"
    for top, bottom in _caterpillar_splits(st):
        tset, bset = set(top), set(bottom)
        opts = {
            x: _leaf_options(x, idx[p], k, tset, bset, [u for u in g.rotation[x] if u in st.outer_vertices])
            for x, p in parent.items()
        }
        free = sorted(x for x, o in opts.items() if len(o) > 1)
        fixed = {x: o[0] for x, o in opts.items() if len(o) == 1}
        for combo in itertools.product(*(opts[x] for x in free)):
            tries += 1
            if tries > max_tries:
                raise ConstructionGap(f"search budget exhausted: {last}")
            choice = dict(fixed)
            choice.update(zip(free, combo))
            try:
                d = _caterpillar_layout(st, top, bottom, choice)
            except ConstructionGap as exc:
                last = str(exc)
                continue
            if strip_conflicts(d):
                last = "strip conflict"
                continue
            d = d.with_edges(s.graph.edges)
            if not verify:
                return d
            v = validate_swlp(d, 4)
            if v.ok:
                return d
            last = "; ".join(v.failures[:2])
    raise ConstructionGap(last)


# -- attachments ---------------------------------------------------


@dataclass(frozen=True)
class AttachmentDecomposition:
    core: TwoOuterStructure
    components: tuple[Attachment, ...]

    def vertex_cover(self) -> set[Vertex]:
        out = set(self.core.graph.vertices)
        for c in self.components:
            out |= c.graph.vertices
        return out

    def edge_cover(self) -> set[Edge]:
        out = set(self.core.graph.edges)
        for c in self.components:
            out |= c.graph.edges
        return out


def decompose_attachments(g: PlaneGraph) -> AttachmentDecomposition:
    s = recognize_two_outer(g)
    core = recognize_two_outer(s.core_graph()) if s.attachments else s
    want = {OUTERPLANAR_CYCLE: CYCLE_CYCLE, OUTERPLANAR_CATERPILLAR: CYCLE_CATERPILLAR}.get(s.kind, s.kind)
    if core.kind != want:
        raise NotInFamily(f"core is {core.kind}, expected {want}")
    return AttachmentDecomposition(core, tuple(s.attachments))


def glue_attachments(core: LevelDrawing, components: Sequence[Attachment]) -> LevelDrawing:
    """Hang each outerplanar piece off its shared edge of the core drawing."""
    core = core.normalized()
    top, bot = min(core.order), max(core.order)
    above: list[tuple[int, list[list[Vertex]]]] = []
    below: list[tuple[int, list[list[Vertex]]]] = []
    sides: dict[str, tuple[int, list[list[Vertex]], Vertex]] = {}
    edges = set(core.edges)
    for att in components:
        a, b = att.edge
        e = edge_key(a, b)
        if e not in core.edges:
            raise ConstructionGap(f"shared edge {a}-{b} is missing from the core drawing")
        edges |= att.graph.edges
        span = core.span(e)
        if span == 0:
            x, y = sorted((a, b), key=core.position)
            sub = outerplanar_1swlp(att.graph, EdgeOnTop(x, y))
            rows = [list(sub.row(L)) for L in range(1, max(sub.order) + 1)]
            if core.level[x] == bot:
                below.append((core.position(x), rows))
            elif core.level[x] == top:
                above.append((core.position(x), rows))
            else:
                raise ConstructionGap(f"flat shared edge {a}-{b} is not on an extreme level")
            continue
        u, v = (a, b) if core.level[a] < core.level[b] else (b, a)
        sub = outerplanar_1swlp(att.graph, EdgeLeftmost(u, v))
        rows = [[w for w in sub.row(L) if w != v] for L in range(1, max(sub.order) + 1)]
        ru, rv = core.row(core.level[u]), core.row(core.level[v])
        if ru[0] == u and rv[0] == v:
            side = "L"
            rows = [list(reversed(r)) for r in rows]
        elif ru[-1] == u and rv[-1] == v:
            side = "R"
        else:
            raise ConstructionGap(f"long shared edge {a}-{b} is not on the drawing boundary")
        if side in sides:
            raise ConstructionGap("two pieces compete for one side of the drawing")
        sides[side] = (core.level[v], rows, u)
    order: dict[int, list[Vertex]] = {L: [] for L in core.order}
    offset: dict[int, int] = {}
    left_rows: dict[int, list[Vertex]] = {}
    right_rows: dict[int, list[Vertex]] = {}
    for side, store in (("L", left_rows), ("R", right_rows)):
        if side in sides:
            L0, rows, _ = sides[side]
            for t, r in enumerate(rows):
                store[L0 + t] = r
    middle: dict[int, list[Vertex]] = {L: list(core.row(L)) for L in core.order}
    for pos, rows in sorted(below):
        for t, r in enumerate(rows):
            middle.setdefault(bot + 1 + t, []).extend(r)
    for pos, rows in sorted(above):
        for t, r in enumerate(rows):
            middle.setdefault(top - 1 - t, []).extend(r)
    all_levels = set(middle) | set(left_rows) | set(right_rows)
    for L in sorted(all_levels):
        lr, mr, rr = left_rows.get(L, []), middle.get(L, []), right_rows.get(L, [])
        order[L] = lr + mr + rr
        offset[L] = len(lr)
    level = {v: L for L, vs in order.items() for v in vs}
    gaps: dict[Edge, dict[int, int]] = {}
    for e, gp in core.gaps.items():
        gaps[e] = {L: p + offset.get(L, 0) for L, p in gp.items()}
    for side in sides:
        L0, rows, u = sides[side]
        first = rows[0] if rows else []
        for w in first:
            e = edge_key(u, w)
            if e in edges:
                gaps[e] = {
                    L: (0 if side == "L" else len(order[L])) for L in range(core.level[u] + 1, L0)
                }
    return LevelDrawing(frozenset(edges), level, order, gaps)


def _draw_extended(g: PlaneGraph, core_kind: str, k: int, verify: bool) -> LevelDrawing:
    dec = decompose_attachments(g)
    if dec.core.kind != core_kind:
        raise NotInFamily(f"core is {dec.core.kind}")
    drawer = draw_cycle_cycle if core_kind == CYCLE_CYCLE else draw_cycle_caterpillar
    base = drawer(dec.core, verify=verify and not dec.components)
    if not dec.components:
        return base
    d = glue_attachments(base, dec.components)
    if d.edges != g.edges:
        raise ConstructionGap("glued drawing misses edges")
    if verify:
        _verify(d, k)
    return d.normalized()


def draw_outerplanar_cycle(g: PlaneGraph, verify: bool = True) -> LevelDrawing:
    return _draw_extended(g, CYCLE_CYCLE, 3, verify)


def draw_outerplanar_caterpillar(g: PlaneGraph, verify: bool = True) -> LevelDrawing:
    return _draw_extended(g, CYCLE_CATERPILLAR, 4, verify)
