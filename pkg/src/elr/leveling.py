"""Leveled drawings with bounded span and their straight-line realization."""

from __future__ import annotations

import functools
import json
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import InfeasibleGaps, InvalidDrawing, NotOuterplanar, SeamCrossing
from .graph import Edge, PlaneGraph, Vertex, edge_key

Point = tuple[Fraction, Fraction]
DEFAULT_EPSILON = Fraction(1, 100)


def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class LevelDrawing:
    """Vertices on horizontal levels (top level has the smallest number).

    ``gaps[e][L] = p`` says that the long edge ``e`` crosses level ``L``
    between ``order[L][p-1]`` and ``order[L][p]``.
    """

    edges: frozenset[Edge]
    level: Mapping[Vertex, int]
    order: Mapping[int, tuple[Vertex, ...]]
    gaps: Mapping[Edge, Mapping[int, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(edge_key(*e) for e in self.edges))
        order = {int(L): tuple(vs) for L, vs in self.order.items()}
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "level", dict(self.level))
        object.__setattr__(
            self, "gaps", {edge_key(*e): dict(g) for e, g in self.gaps.items() if g}
        )
        pos = {}
        for vs in order.values():
            for i, v in enumerate(vs):
                pos[v] = i
        object.__setattr__(self, "_pos", pos)

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[Vertex]],
        edges: Iterable[Edge],
        gaps: Mapping[Edge, Mapping[int, int]] | None = None,
        first_level: int = 0,
    ) -> LevelDrawing:
        order = {first_level + i: tuple(r) for i, r in enumerate(rows)}
        level = {v: L for L, r in order.items() for v in r}
        return cls(frozenset(edges), level, order, gaps or {})

    # -- queries --------------------------------------------------------
    @property
    def vertices(self) -> frozenset[Vertex]:
        return frozenset(self.level)

    def position(self, v: Vertex) -> int:
        return self._pos[v]  # type: ignore[attr-defined]

    def span(self, e: Edge) -> int:
        return abs(self.level[e[0]] - self.level[e[1]])

    def levels(self) -> list[int]:
        return sorted(self.order)

    def row(self, L: int) -> tuple[Vertex, ...]:
        return self.order.get(L, ())

    def structure_errors(self) -> list[str]:
        errs = []
        seen: set[Vertex] = set()
        for L, vs in self.order.items():
            for v in vs:
                if v in seen:
                    errs.append(f"vertex {v} appears twice")
                seen.add(v)
                if self.level.get(v) != L:
                    errs.append(f"vertex {v} level mismatch")
        if seen != set(self.level):
            errs.append("level map and orders disagree")
        for u, v in self.edges:
            if u not in self.level or v not in self.level:
                errs.append(f"edge {u}-{v} has an undrawn endpoint")
        return errs

    def with_edges(self, edges: Iterable[Edge], gaps: Mapping[Edge, Mapping[int, int]] | None = None) -> LevelDrawing:
        g = dict(self.gaps)
        if gaps:
            g.update({edge_key(*e): p for e, p in gaps.items()})
        es = frozenset(edge_key(*e) for e in edges)
        return LevelDrawing(es, self.level, self.order, {e: p for e, p in g.items() if e in es})

    def restrict(self, vertices: Iterable[Vertex]) -> LevelDrawing:
        """Sub-drawing on a vertex subset, with gaps re-indexed."""
        keep = set(vertices)
        order = {L: tuple(v for v in vs if v in keep) for L, vs in self.order.items()}
        edges = frozenset(e for e in self.edges if e[0] in keep and e[1] in keep)
        gaps = {}
        for e in edges:
            if e in self.gaps:
                gaps[e] = {
                    L: sum(1 for v in self.order[L][:p] if v in keep)
                    for L, p in self.gaps[e].items()
                }
        return LevelDrawing(edges, {v: L for v, L in self.level.items() if v in keep}, order, gaps)

    def shifted(self, delta: int) -> LevelDrawing:
        return LevelDrawing(
            self.edges,
            {v: L + delta for v, L in self.level.items()},
            {L + delta: vs for L, vs in self.order.items()},
            {e: {L + delta: p for L, p in g.items()} for e, g in self.gaps.items()},
        )

    def normalized(self) -> LevelDrawing:
        """Drop empty levels at the extremes and start numbering at 0."""
        used = [L for L, vs in self.order.items() if vs]
        if not used:
            return self
        lo, hi = min(used), max(used)
        d = LevelDrawing(
            self.edges,
            self.level,
            {L: vs for L, vs in self.order.items() if lo <= L <= hi},
            self.gaps,
        )
        return d.shifted(-lo)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        d = self.normalized()
        lo, hi = (min(d.order), max(d.order)) if d.order else (0, -1)
        return {
            "levels": {str(v): d.level[v] for v in sorted(d.level)},
            "order": {str(L): list(d.order.get(L, ())) for L in range(lo, hi + 1)},
            "gaps": {
                f"{e[0]}-{e[1]}": {str(L): p for L, p in sorted(g.items())}
                for e, g in sorted(d.gaps.items())
            },
            "edges": [list(e) for e in sorted(d.edges)],
        }

    def to_json(self, **extra: Any) -> str:
        data = self.to_dict()
        data.update(extra)
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], edges: Iterable[Edge] | None = None) -> LevelDrawing:
        level = {int(v): int(L) for v, L in data["levels"].items()}
        order = {int(L): tuple(int(v) for v in vs) for L, vs in data["order"].items()}
        gaps = {}
        for key, g in data.get("gaps", {}).items():
            a, b = key.split("-")
            gaps[edge_key(int(a), int(b))] = {int(L): int(p) for L, p in g.items()}
        if edges is None:
            edges = [tuple(e) for e in data.get("edges", [])]
        return cls(frozenset(edge_key(int(a), int(b)) for a, b in edges), level, order, gaps)

    @classmethod
    def from_json(cls, text: str, edges: Iterable[Edge] | None = None) -> LevelDrawing:
        return cls.from_dict(json.loads(text), edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LevelDrawing):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.edges)


@dataclass(frozen=True, eq=False)
class StraightLineDrawing:
    coords: Mapping[Vertex, Point]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coords", {v: (Fraction(x), Fraction(y)) for v, (x, y) in self.coords.items()}
        )
        object.__setattr__(self, "edges", frozenset(edge_key(*e) for e in self.edges))

    def squared_length(self, e: Edge) -> Fraction:
        (x1, y1), (x2, y2) = self.coords[e[0]], self.coords[e[1]]
        return (x1 - x2) ** 2 + (y1 - y2) ** 2

    def scaled(self, factor: Fraction) -> StraightLineDrawing:
        f = Fraction(factor)
        return StraightLineDrawing({v: (x * f, y * f) for v, (x, y) in self.coords.items()}, self.edges)

    def to_dict(self) -> dict[str, Any]:
        return {
            "coords": {
                str(v): [format_fraction(x), format_fraction(y)]
                for v, (x, y) in sorted(self.coords.items())
            },
            "edges": [list(e) for e in sorted(self.edges)],
        }

    def to_json(self, **extra: Any) -> str:
        data = self.to_dict()
        data.update(extra)
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> StraightLineDrawing:
        coords = {
            int(v): (parse_fraction(x), parse_fraction(y)) for v, (x, y) in data["coords"].items()
        }
        return cls(coords, frozenset(edge_key(int(a), int(b)) for a, b in data["edges"]))

    @classmethod
    def from_json(cls, text: str) -> StraightLineDrawing:
        return cls.from_dict(json.loads(text))


# -- span and validation ------------------------------------------------


def max_span(d: LevelDrawing) -> int:
    return max((d.span(e) for e in d.edges), default=0)


def span_histogram(d: LevelDrawing) -> dict[int, int]:
    hist: dict[int, int] = {}
    for e in d.edges:
        s = d.span(e)
        hist[s] = hist.get(s, 0) + 1
    return dict(sorted(hist.items()))


@dataclass
class Verdict:
    ok: bool
    failures: list[str] = field(default_factory=list)
    witnesses: list[Any] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def combinatorial_errors(d: LevelDrawing, k: int | None = None) -> tuple[list[str], list[Any]]:
    """Checks that need no geometry: spans, flat edges, gap bookkeeping."""
    msgs = list(d.structure_errors())
    wit: list[Any] = []
    if msgs:
        return msgs, wit
    for e in sorted(d.edges):
        u, v = e
        s = d.span(e)
        if k is not None and s > k:
            msgs.append(f"edge {u}-{v} has span {s} > {k}")
            wit.append(("span", e, s))
        if s == 0:
            if abs(d.position(u) - d.position(v)) != 1:
                msgs.append(f"flat edge {u}-{v} joins non-consecutive vertices")
                wit.append(("flat", e))
        elif s >= 2:
            lo, hi = sorted((d.level[u], d.level[v]))
            g = d.gaps.get(e, {})
            for L in range(lo + 1, hi):
                p = g.get(L)
                if p is None:
                    msgs.append(f"edge {u}-{v} has no gap on level {L}")
                    wit.append(("gap", e, L))
                elif not 0 <= p <= len(d.row(L)):
                    msgs.append(f"edge {u}-{v} has gap {p} out of range on level {L}")
                    wit.append(("gap", e, L))
    return msgs, wit


def strip_conflicts(d: LevelDrawing) -> list[tuple[Edge, Edge]]:
    """Pairs of edges whose pieces swap order inside a strip, or a flat edge jumped over.

    Purely combinatorial; a drawing with no conflicts may still need the
    exact realization to confirm straight-line feasibility.
    """
    if combinatorial_errors(d)[0]:
        raise InvalidDrawing("drawing is structurally broken")
    rows = _dummy_orders(d)
    rank: dict[tuple[int, Any], int] = {}
    for L, seq in rows.items():
        for i, it in enumerate(seq):
            rank[(L, it[1])] = i
    out: list[tuple[Edge, Edge]] = []
    for e in d.edges:
        if d.span(e) == 0:
            i, j = sorted((rank[(d.level[e[0]], e[0])], rank[(d.level[e[1]], e[1])]))
            if j - i != 1:
                between = rows[d.level[e[0]]][i + 1]
                out.append((e, between[1] if between[0] == "d" else (between[1], between[1])))
    strips: dict[int, list[tuple[int, int, Edge]]] = {}
    for e in d.edges:
        u, v = e
        lo, hi = sorted((d.level[u], d.level[v]))
        if lo == hi:
            continue
        top, bot = (u, v) if d.level[u] == lo else (v, u)
        for L in range(lo, hi):
            a = rank[(L, top if L == lo else e)]
            b = rank[(L + 1, bot if L + 1 == hi else e)]
            strips.setdefault(L, []).append((a, b, e))
    for segs in strips.values():
        segs.sort()
        best: tuple[int, Edge] | None = None
        i = 0
        while i < len(segs):
            j = i
            while j < len(segs) and segs[j][0] == segs[i][0]:
                j += 1
            group = segs[i:j]
            if best is not None:
                for a, b, e in group:
                    if b < best[0]:
                        out.append((best[1], e))
            for a, b, e in group:
                if best is None or b > best[0]:
                    best = (b, e)
            i = j
    return out


def validate_swlp(d: LevelDrawing, k: int) -> Verdict:
    from .metrics import check_planar_straight_line

    msgs, wit = combinatorial_errors(d, k)
    if msgs:
        return Verdict(False, msgs, wit)
    try:
        sl = _realize(d, DEFAULT_EPSILON, allow_flat=True)
    except InfeasibleGaps as exc:
        return Verdict(False, [f"realization infeasible: {exc}"], [("infeasible",)])
    pv = check_planar_straight_line(sl)
    if not pv.planar:
        return Verdict(
            False,
            [f"{kind}: {e} / {f}" for e, f, kind in pv.violations],
            list(pv.violations),
        )
    return Verdict(True)


# -- transformations ----------------------------------------------------


def _crossing_keys(d: LevelDrawing, e: Edge) -> dict[int, Fraction]:
    """Horizontal rank of ``e`` on each level it touches (vertex i -> i, gap p -> p-1/2)."""
    u, v = e
    keys = {d.level[u]: Fraction(d.position(u)), d.level[v]: Fraction(d.position(v))}
    for L, p in d.gaps.get(e, {}).items():
        keys[L] = Fraction(p) - Fraction(1, 2)
    return keys


def double_levels(d: LevelDrawing) -> LevelDrawing:
    """Split level L into 2L and 2L+1, alternating vertices between them."""
    msgs, _ = combinatorial_errors(d)
    if msgs:
        raise InvalidDrawing("; ".join(msgs))
    level = {v: 2 * d.level[v] + d.position(v) % 2 for v in d.level}
    order: dict[int, list[Vertex]] = {}
    for L in d.levels():
        order.setdefault(2 * L, [])
        order.setdefault(2 * L + 1, [])
        for i, v in enumerate(d.row(L)):
            order[2 * L + i % 2].append(v)
    gaps: dict[Edge, dict[int, int]] = {}
    for e in d.edges:
        lo, hi = sorted((level[e[0]], level[e[1]]))
        if hi - lo < 2:
            continue
        keys = _crossing_keys(d, e)
        g = {}
        for L in range(lo + 1, hi):
            key = keys[L // 2]
            g[L] = sum(1 for w in order[L] if d.position(w) < key)
        gaps[e] = g
    return LevelDrawing(d.edges, level, {L: tuple(vs) for L, vs in order.items()}, gaps)


def mirror(d: LevelDrawing, horizontal: bool = False, vertical: bool = False) -> LevelDrawing:
    order = {L: tuple(reversed(vs)) if horizontal else vs for L, vs in d.order.items()}
    gaps = {
        e: {L: (len(d.row(L)) - p if horizontal else p) for L, p in g.items()}
        for e, g in d.gaps.items()
    }
    level = dict(d.level)
    if vertical and d.order:
        top = min(d.order) + max(d.order)
        order = {top - L: vs for L, vs in order.items()}
        level = {v: top - L for v, L in level.items()}
        gaps = {e: {top - L: p for L, p in g.items()} for e, g in gaps.items()}
    return LevelDrawing(d.edges, level, order, gaps)


def stack(
    top: LevelDrawing,
    bottom: LevelDrawing,
    seam_edges: Sequence[Edge] = (),
    empty_levels: int = 0,
) -> LevelDrawing:
    """Place ``top`` directly above ``bottom`` and join them by ``seam_edges``.

    ``empty_levels`` blank levels are inserted between the two parts; seam
    edges cross them at their only gap.
    """
    if top.vertices & bottom.vertices:
        raise ValueError("stacked drawings must have disjoint vertex sets")
    t_lo, t_hi = min(top.order), max(top.order)
    b_lo = min(bottom.order)
    delta = t_hi + 1 + empty_levels - b_lo
    low = bottom.shifted(delta)
    level = {**top.level, **low.level}
    order = {**top.order, **low.order}
    for L in range(t_hi + 1, t_hi + 1 + empty_levels):
        order[L] = ()
    gaps = {**top.gaps, **low.gaps}
    seams = []
    for u, v in seam_edges:
        if u in low.level:
            u, v = v, u
        if u not in top.level or v not in low.level:
            raise SeamCrossing(f"seam {u}-{v} does not join the two parts")
        if level[u] != t_hi or level[v] != t_hi + 1 + empty_levels:
            raise SeamCrossing(f"seam {u}-{v} does not join the facing levels")
        seams.append((u, v))
        if empty_levels:
            gaps[edge_key(u, v)] = {L: 0 for L in range(t_hi + 1, t_hi + 1 + empty_levels)}
    tp = {u: top.position(u) for u, _ in seams}
    bp = {v: low.position(v) for _, v in seams}
    for i, (a, b) in enumerate(seams):
        for c, e2 in seams[i + 1 :]:
            if (tp[a] - tp[c]) * (bp[b] - bp[e2]) < 0:
                raise SeamCrossing(f"seams {a}-{b} and {c}-{e2} cross")
    edges = top.edges | low.edges | {edge_key(u, v) for u, v in seams}
    return LevelDrawing(edges, level, order, gaps)


# -- outerplanar BFS layering -----------------------------------------


@dataclass(frozen=True)
class EdgeOnTop:
    """Top level holds exactly the edge (u, v), with u on the left."""

    u: Vertex
    v: Vertex


@dataclass(frozen=True)
class EdgeLeftmost:
    """u alone on the top level, v the leftmost vertex of the next level."""

    u: Vertex
    v: Vertex


AnchorMode = EdgeOnTop | EdgeLeftmost


def _walk_from(walk: Sequence[Vertex], a: Vertex, b: Vertex) -> list[Vertex]:
    """Cyclic walk re-started at an occurrence of ``a`` followed by ``b``."""
    n = len(walk)
    for i in range(n):
        if walk[i] == a and walk[(i + 1) % n] == b:
            return list(walk[i:]) + list(walk[:i])
    raise NotOuterplanar(f"edge {a}-{b} is not on the outer face")


def outerplanar_1swlp(g: PlaneGraph, anchor: AnchorMode) -> LevelDrawing:
    if set(g.outer_face) != set(g.vertices):
        raise NotOuterplanar("some vertex is not on the outer face")
    u, v = anchor.u, anchor.v
    if not g.has_edge(u, v):
        raise NotOuterplanar(f"anchor {u}-{v} is not an edge")
    walk = g.outer_face
    # with the edge on top, the walk must reach v last: start it on the dart v -> u
    a, b = (v, u) if isinstance(anchor, EdgeOnTop) else (u, v)
    if len(walk) == 2:
        seq = [a, b]
    else:
        try:
            seq = _walk_from(walk, a, b)
        except NotOuterplanar:
            seq = _walk_from(list(reversed(walk)), a, b)
    rank: dict[Vertex, int] = {}
    for i, x in enumerate(seq):
        rank.setdefault(x, i)
    if isinstance(anchor, EdgeOnTop):
        # a virtual apex glued to u and v sits before u in the walk
        dist = {u: 0, v: 0}
        queue = deque([u, v])
    else:
        dist = {u: 0}
        queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    rows: dict[int, list[Vertex]] = {}
    for x in sorted(dist, key=lambda x: rank[x]):
        rows.setdefault(dist[x], []).append(x)
    if isinstance(anchor, EdgeOnTop):
        rows[0] = [u, v]
    order = {L: tuple(vs) for L, vs in rows.items()}
    return LevelDrawing(g.edges, dist, order, {})


# -- straight-line realization -----------------------------------------


def _dummy_orders(d: LevelDrawing) -> dict[int, list[tuple[str, Any]]]:
    """Per-level left-to-right items: ('v', vertex) or ('d', edge)."""
    keys = {e: _crossing_keys(d, e) for e in d.gaps}
    by_gap: dict[tuple[int, int], list[Edge]] = {}
    for e, g in d.gaps.items():
        lo, hi = sorted((d.level[e[0]], d.level[e[1]]))
        for L, p in g.items():
            if lo < L < hi:
                by_gap.setdefault((L, p), []).append(e)

    def compare_at(L: int):
        def cmp(e: Edge, f: Edge) -> int:
            ke, kf = keys[e], keys[f]
            for step in (-1, 1):
                j = L + step
                while j in ke and j in kf:
                    if ke[j] != kf[j]:
                        return -1 if ke[j] < kf[j] else 1
                    if ke[j] == int(ke[j]):  # shared endpoint vertex
                        break
                    j += step
            return (e > f) - (e < f)

        return cmp

    items: dict[int, list[tuple[str, Any]]] = {}
    for L in d.levels():
        row = d.row(L)
        seq: list[tuple[str, Any]] = []
        for p in range(len(row) + 1):
            here = by_gap.get((L, p), [])
            here.sort(key=functools.cmp_to_key(compare_at(L)))
            seq.extend(("d", e) for e in here)
            if p < len(row):
                seq.append(("v", row[p]))
        items[L] = seq
    return items


def _item_expr(d: LevelDrawing, item: tuple[str, Any], L: int) -> dict[Vertex, Fraction]:
    if item[0] == "v":
        return {item[1]: Fraction(1)}
    u, v = item[1]
    lu, lv = d.level[u], d.level[v]
    t = Fraction(L - lu, lv - lu)
    return {u: 1 - t, v: t}


def _solve_positions(d: LevelDrawing, rows: dict[int, list[tuple[str, Any]]]) -> dict[Vertex, float]:
    from scipy.optimize import linprog
    from scipy.sparse import lil_matrix

    verts = sorted(d.vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    cons: list[dict[Vertex, Fraction]] = []
    for L, seq in rows.items():
        for a, b in zip(seq, seq[1:]):
            ea, eb = _item_expr(d, a, L), _item_expr(d, b, L)
            c = dict(eb)
            for v, w in ea.items():
                c[v] = c.get(v, 0) - w
            cons.append(c)
    if not cons:
        return {v: 0.0 for v in verts}
    # variables: x_0..x_{n-1}, width W; minimize W subject to 0 <= x <= W
    A = lil_matrix((len(cons) + n, n + 1))
    b = np.empty(len(cons) + n)
    for r, c in enumerate(cons):
        for v, w in c.items():
            A[r, index[v]] = -float(w)
        b[r] = -1.0
    for i in range(n):
        A[len(cons) + i, i] = 1.0
        A[len(cons) + i, n] = -1.0
        b[len(cons) + i] = 0.0
    cost = np.zeros(n + 1)
    cost[n] = 1.0
    res = linprog(cost, A_ub=A.tocsr(), b_ub=b, bounds=[(0, None)] * (n + 1), method="highs")
    if res.status != 0:
        raise InfeasibleGaps(res.message)
    return {v: float(res.x[index[v]]) for v in verts}


def _exact_ok(d: LevelDrawing, rows: dict[int, list[tuple[str, Any]]], x: Mapping[Vertex, Fraction]) -> bool:
    for L, seq in rows.items():
        prev = None
        for it in seq:
            val = sum(w * x[v] for v, w in _item_expr(d, it, L).items())
            if prev is not None and val <= prev:
                return False
            prev = val
    return True


def _realize(d: LevelDrawing, epsilon: Fraction, allow_flat: bool) -> StraightLineDrawing:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    msgs, _ = combinatorial_errors(d)
    if msgs:
        raise InvalidDrawing("; ".join(msgs))
    if not allow_flat and any(d.span(e) == 0 for e in d.edges):
        raise InvalidDrawing("drawing has span-0 edges; double the levels first")
    rows = _dummy_orders(d)
    approx = _solve_positions(d, rows)
    for scale in (3, 10, 100, 10_000, 1_000_000):
        x = {v: Fraction(round(val * scale)) for v, val in approx.items()}
        if _exact_ok(d, rows, x):
            break
    else:
        raise InfeasibleGaps("could not round the horizontal positions exactly")
    lo = min(x.values())
    width = max(x.values()) - lo
    f = eps / width if width else Fraction(1)
    coords = {v: ((x[v] - lo) * f, Fraction(-d.level[v])) for v in d.level}
    return StraightLineDrawing(coords, d.edges)


def realize_straight_line(d: LevelDrawing, epsilon: Fraction = DEFAULT_EPSILON) -> StraightLineDrawing:
    """Straight-line drawing of a proper leveled drawing with unit level spacing and width epsilon."""
    return _realize(d, epsilon, allow_flat=False)


def realize_any(d: LevelDrawing, epsilon: Fraction = DEFAULT_EPSILON) -> StraightLineDrawing:
    """Realize after doubling when the drawing still has span-0 edges."""
    if any(d.span(e) == 0 for e in d.edges):
        d = double_levels(d)
    return realize_straight_line(d, epsilon)


def realize_weak(d: LevelDrawing, epsilon: Fraction = Fraction(1)) -> StraightLineDrawing:
    """Like :func:`realize_straight_line` but keeps span-0 edges horizontal."""
    return _realize(d, epsilon, allow_flat=True)
