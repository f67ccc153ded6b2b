"""Independent reference implementations used to cross-check the library."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _between(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_conflict(p1, p2, q1, q2, shared: int) -> bool:
    """True when two segments meet anywhere other than one shared endpoint."""
    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if shared:
        # a single common endpoint is allowed unless the segments overlap
        if o1 == o2 == o3 == o4 == 0:
            common = {p1, p2} & {q1, q2}
            c = next(iter(common))
            other_p = p2 if p1 == c else p1
            other_q = q2 if q1 == c else q1
            dot = (other_p[0] - c[0]) * (other_q[0] - c[0]) + (other_p[1] - c[1]) * (other_q[1] - c[1])
            return dot > 0
        return False
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    for o, a, b, p in ((o1, p1, p2, q1), (o2, p1, p2, q2), (o3, q1, q2, p1), (o4, q1, q2, p2)):
        if o == 0 and _between(a, b, p):
            return True
    return False


def brute_force_planar(coords, edges) -> bool:
    pts = {v: (Fraction(x), Fraction(y)) for v, (x, y) in coords.items()}
    if len(set(pts.values())) != len(pts):
        return False
    es = sorted(edges)
    for e in es:
        if pts[e[0]] == pts[e[1]]:
            return False
        for v, p in pts.items():
            if v not in e and orient(pts[e[0]], pts[e[1]], p) == 0 and _between(pts[e[0]], pts[e[1]], p):
                return False
    for e, f in combinations(es, 2):
        shared = len(set(e) & set(f))
        if segments_conflict(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]], shared):
            return False
    return True


def brute_force_tufts(adj) -> list[frozenset]:
    """Tufts straight from the definition: all leaf children of a vertex with one internal neighbour."""
    leaves = {v for v, ns in adj.items() if len(ns) == 1}
    out = []
    for p, ns in adj.items():
        if p in leaves:
            continue
        lv = {w for w in ns if w in leaves}
        internal = [w for w in ns if w not in leaves]
        if len(lv) >= 2 and len(internal) <= 1:
            out.append(frozenset(lv))
    return out


def pruned_leaf_count(adj) -> int:
    leaves = {v for v, ns in adj.items() if len(ns) == 1}
    rest = {v: [w for w in ns if w not in leaves] for v, ns in adj.items() if v not in leaves}
    if len(rest) == 1:
        return 1
    return sum(1 for ns in rest.values() if len(ns) == 1)


def euler_ok(g, faces: int) -> bool:
    return g.n - g.m + faces == 2
