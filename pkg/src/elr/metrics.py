"""Exact measurement and verification of straight-line drawings."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import DegenerateEdge, NotEmbeddingPreserving
from .graph import Edge, Vertex, edge_key
from .leveling import LevelDrawing, StraightLineDrawing, Verdict, max_span, span_histogram

# -- edge-length ratios -------------------------------------------------


@dataclass(frozen=True)
class RatioReport:
    rho_local_sq: Fraction
    rho_global_sq: Fraction
    local_witness: tuple[Edge, Edge]
    global_witness: tuple[Edge, Edge]
    shortest: Edge
    longest: Edge

    @property
    def rho_local(self) -> float:
        return math.sqrt(self.rho_local_sq)

    @property
    def rho_global(self) -> float:
        return math.sqrt(self.rho_global_sq)

    def global_at_most(self, bound: Fraction | float | str) -> bool:
        b = Fraction(bound)
        return self.rho_global_sq <= b * b

    def local_at_least(self, bound: Fraction | float | str) -> bool:
        b = Fraction(bound)
        return self.rho_local_sq >= b * b


def ratios(d: StraightLineDrawing) -> RatioReport:
    if not d.edges:
        raise DegenerateEdge("drawing has no edges")
    sq = {}
    for e in sorted(d.edges):
        s = d.squared_length(e)
        if s == 0:
            raise DegenerateEdge(f"edge {e} has zero length")
        sq[e] = s
    shortest = min(sq, key=lambda e: (sq[e], e))
    longest = max(sq, key=lambda e: (sq[e], e))
    incident: dict[Vertex, list[Edge]] = {}
    for e in sq:
        for v in e:
            incident.setdefault(v, []).append(e)
    best = Fraction(1)
    witness = (shortest, shortest)
    for v in sorted(incident):
        es = incident[v]
        lo = min(es, key=lambda e: (sq[e], e))
        hi = max(es, key=lambda e: (sq[e], e))
        r = sq[hi] / sq[lo]
        if r > best:
            best, witness = r, (lo, hi)
    return RatioReport(best, sq[longest] / sq[shortest], witness, (shortest, longest), shortest, longest)


def ratios_float(coords: np.ndarray, edges: np.ndarray) -> tuple[float, float]:
    """Floating-point (local, global) ratios for vectorized search loops."""
    diff = coords[edges[:, 0]] - coords[edges[:, 1]]
    ln = np.hypot(diff[:, 0], diff[:, 1])
    n = coords.shape[0]
    vmax = np.zeros(n)
    vmin = np.full(n, np.inf)
    for col in (0, 1):
        np.maximum.at(vmax, edges[:, col], ln)
        np.minimum.at(vmin, edges[:, col], ln)
    mask = np.isfinite(vmin)
    return float(np.max(vmax[mask] / vmin[mask])), float(ln.max() / ln.min())


# -- planarity ----------------------------------------------------------


@dataclass
class PlanarityVerdict:
    planar: bool
    violations: list[tuple[Edge, Edge, str]] = field(default_factory=list)


def _integer_coords(coords: Mapping[Vertex, tuple[Fraction, Fraction]]) -> dict[Vertex, tuple[int, int]]:
    den = 1
    for x, y in coords.values():
        den = math.lcm(den, Fraction(x).denominator, Fraction(y).denominator)
    return {v: (int(x * den), int(y * den)) for v, (x, y) in coords.items()}


def _orient(a: tuple[int, int], b: tuple[int, int], c: tuple[int, int]) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_closed(a: tuple[int, int], b: tuple[int, int], p: tuple[int, int]) -> bool:
    """p collinear with a-b assumed; is it inside the closed segment?"""
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segment_relation(
    p1: tuple[int, int], p2: tuple[int, int], q1: tuple[int, int], q2: tuple[int, int], shared: bool
) -> str | None:
    """Violation kind between two segments, or None when they are compatible.

    With ``shared`` the segments have a common endpoint p1 == q1 (same vertex).
    """
    if shared:
        if _orient(p1, p2, q2) != 0:
            return None
        dot = (p2[0] - p1[0]) * (q2[0] - p1[0]) + (p2[1] - p1[1]) * (q2[1] - p1[1])
        return "overlap" if dot > 0 else None
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 == o2 == o3 == o4 == 0:
        # collinear: compare projections on the dominant axis
        ax = 0 if max(p1[0], p2[0], q1[0], q2[0]) - min(p1[0], p2[0], q1[0], q2[0]) else 1
        a0, a1 = sorted((p1[ax], p2[ax]))
        b0, b1 = sorted((q1[ax], q2[ax]))
        lo, hi = max(a0, b0), min(a1, b1)
        if lo < hi:
            return "overlap"
        if lo == hi:
            return "endpoint-through-vertex"
        return None
    if o1 * o2 < 0 and o3 * o4 < 0:
        return "crossing"
    if (
        (o1 == 0 and _on_closed(p1, p2, q1))
        or (o2 == 0 and _on_closed(p1, p2, q2))
        or (o3 == 0 and _on_closed(q1, q2, p1))
        or (o4 == 0 and _on_closed(q1, q2, p2))
    ):
        return "endpoint-through-vertex"
    return None


def _pair_relation(pts: Mapping[Vertex, tuple[int, int]], e: Edge, f: Edge) -> str | None:
    common = set(e) & set(f)
    if common:
        c = next(iter(common))
        a = e[0] if e[1] == c else e[1]
        b = f[0] if f[1] == c else f[1]
        return segment_relation(pts[c], pts[a], pts[c], pts[b], shared=True)
    return segment_relation(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]], shared=False)


def _candidate_pairs(pts: Mapping[Vertex, tuple[int, int]], edges: Sequence[Edge]) -> Iterable[tuple[int, int]]:
    """Edge index pairs whose bounding boxes may touch (conservative)."""
    m = len(edges)
    if m < 2:
        return []
    big = max(max(abs(x), abs(y)) for x, y in pts.values()) or 1
    scale = 1.0 / big
    arr = np.array([[pts[u][0], pts[u][1], pts[v][0], pts[v][1]] for u, v in edges], dtype=object)
    f = (arr.astype(float)) * scale
    xlo = np.minimum(f[:, 0], f[:, 2])
    xhi = np.maximum(f[:, 0], f[:, 2])
    ylo = np.minimum(f[:, 1], f[:, 3])
    yhi = np.maximum(f[:, 1], f[:, 3])
    slack = 1e-9
    order = np.argsort(xlo, kind="stable")
    out = []
    xlo_s, xhi_s = xlo[order], xhi[order]
    # sweep along x; for each edge compare with following edges that start before it ends
    ends = np.searchsorted(xlo_s, xhi_s + slack, side="right")
    for a in range(m):
        i = order[a]
        if ends[a] <= a + 1:
            continue
        js = order[a + 1 : ends[a]]
        ok = (ylo[js] <= yhi[i] + slack) & (yhi[js] >= ylo[i] - slack)
        for j in js[ok]:
            out.append((int(min(i, j)), int(max(i, j))))
    return out


def check_planar_straight_line(d: StraightLineDrawing, brute_force: bool = False) -> PlanarityVerdict:
    pts = _integer_coords(d.coords)
    violations: list[tuple[Edge, Edge, str]] = []
    seen: dict[tuple[int, int], Vertex] = {}
    for v in sorted(pts):
        if pts[v] in seen:
            violations.append(((seen[pts[v]], seen[pts[v]]), (v, v), "overlap"))
        seen.setdefault(pts[v], v)
    edges = sorted(d.edges)
    for e in edges:
        if pts[e[0]] == pts[e[1]]:
            violations.append((e, e, "overlap"))
    if brute_force:
        pairs: Iterable[tuple[int, int]] = (
            (i, j) for i in range(len(edges)) for j in range(i + 1, len(edges))
        )
    else:
        pairs = sorted(_candidate_pairs(pts, edges))
    for i, j in pairs:
        kind = _pair_relation(pts, edges[i], edges[j])
        if kind:
            violations.append((edges[i], edges[j], kind))
    # isolated vertices lying on edges
    touched = {v for e in edges for v in e}
    for v in sorted(set(pts) - touched):
        for e in edges:
            a, b = pts[e[0]], pts[e[1]]
            if _orient(a, b, pts[v]) == 0 and _on_closed(a, b, pts[v]):
                violations.append((e, (v, v), "endpoint-through-vertex"))
    return PlanarityVerdict(not violations, violations)


# -- span audit -----------------------------------------------------------


@dataclass(frozen=True)
class SpanAudit:
    histogram: dict[int, int]
    maximum: int
    bound: int | None = None

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.maximum <= self.bound


def audit_span(d: LevelDrawing, bound: int | None = None) -> SpanAudit:
    hist = span_histogram(d)
    return SpanAudit(hist, max_span(d) if d.edges else 0, bound)


# -- perimeter growth for the nested-triangle family -------------------------

GAMMA = Fraction(3, 10)


def _perimeter_sq_parts(d: StraightLineDrawing, tri: Sequence[Vertex]) -> list[Fraction]:
    a, b, c = tri
    return [d.squared_length(edge_key(a, b)), d.squared_length(edge_key(b, c)), d.squared_length(edge_key(a, c))]


def _sqrt_interval(q: Fraction, digits: int = 40) -> tuple[Fraction, Fraction]:
    """Rational bracket lo <= sqrt(q) <= hi."""
    s = 10**digits
    num = q.numerator * s * s
    lo = math.isqrt(num // q.denominator)
    return Fraction(lo, s), Fraction(lo + 1, s)


def triangle_orientation(d: StraightLineDrawing, tri: Sequence[Vertex]) -> int:
    (ax, ay), (bx, by), (cx, cy) = (d.coords[v] for v in tri)
    val = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (val > 0) - (val < 0)


@dataclass
class PerimeterVerdict(Verdict):
    first_failure: int | None = None
    perimeters: list[float] = field(default_factory=list)


def check_perimeter_growth(
    d: StraightLineDrawing,
    triangles: Sequence[Sequence[Vertex]],
    gamma: Fraction = GAMMA,
    orientation: int | None = None,
    normalize: str = "drawing",
) -> PerimeterVerdict:
    """Nested triangles must grow in perimeter by more than gamma each step.

    Lengths are normalized so that the shortest edge of the whole drawing
    has length 1 (``normalize="drawing"``) or, with ``"triangles"``, the
    shortest edge of the listed triangles. The second mode is strictly
    stronger and fails on nearly similar nested triangles.

    Square roots are bracketed by rationals, so a pass is certified and a
    failure reported only when the bracket decides it.
    """
    if orientation is not None:
        for i, t in enumerate(triangles):
            if triangle_orientation(d, t) != orientation:
                raise NotEmbeddingPreserving(f"triangle {i + 1} has the wrong orientation")
    parts = [_perimeter_sq_parts(d, t) for t in triangles]
    if normalize == "drawing":
        shortest = min(d.squared_length(e) for e in d.edges)
    elif normalize == "triangles":
        shortest = min(min(p) for p in parts)
    else:
        raise ValueError(f"unknown normalization {normalize!r}")
    if shortest == 0:
        raise NotEmbeddingPreserving("degenerate triangle")
    norm = [[q / shortest for q in p] for p in parts]
    brackets = []
    for p in norm:
        lo = hi = Fraction(0)
        for q in p:
            a, b = _sqrt_interval(q)
            lo += a
            hi += b
        brackets.append((lo, hi))
    perims = [float(lo) for lo, _ in brackets]
    gamma = Fraction(gamma)
    for i in range(1, len(brackets)):
        # a pass needs lo_i > hi_{i-1} + gamma
        if not brackets[i][0] > brackets[i - 1][1] + gamma:
            return PerimeterVerdict(False, [f"growth fails at triangle {i + 1}"], [i + 1], i + 1, perims)
    k = len(brackets)
    if not brackets[-1][0] > gamma * k:
        return PerimeterVerdict(False, [f"final perimeter below {gamma}*{k}"], [k], k, perims)
    return PerimeterVerdict(True, perimeters=perims)


def local_ratio_lower_bound(k: int) -> float:
    return math.sqrt(k / 20)


def describe(report: RatioReport) -> dict[str, Any]:
    return {
        "rho_local": round(report.rho_local, 9),
        "rho_global": round(report.rho_global, 9),
        "local_witness": [list(e) for e in report.local_witness],
        "global_witness": [list(e) for e in report.global_witness],
    }


# -- local-ratio optimizer ---------------------------------------------------


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of the annealed quasi-Newton search.

    Each stage of ``schedule`` is a (softness, barrier) pair: the log-sum-exp
    temperature of the smoothed max and the weight of the shape barrier that
    keeps internal triangles positively oriented. Stages run from soft to
    sharp and share the iteration budget equally.
    """

    schedule: tuple[tuple[float, float], ...] = (
        (0.1, 1e-3),
        (0.05, 1e-4),
        (0.02, 1e-5),
        (0.01, 1e-6),
        (0.005, 1e-7),
    )
    jitter: float = 0.3
    min_quality: float = 1e-12
    snapshot_every: int = 0


@dataclass
class OptimizationResult:
    drawing: StraightLineDrawing
    rho_local: float
    restart: int
    per_restart: list[float]
    snapshots: list[StraightLineDrawing] = field(default_factory=list)


class _Problem:
    def __init__(self, g: Any) -> None:
        from .graph import extract_faces

        fs = extract_faces(g)
        self.vertices = sorted(g.vertices)
        index = {v: i for i, v in enumerate(self.vertices)}
        self.edges = np.array(sorted({edge_key(u, w) for u in g.vertices for w in g.rotation[u]}), dtype=np.int64)
        self.e = np.vectorize(index.__getitem__)(self.edges) if len(self.edges) else self.edges
        tris = [f for i, f in enumerate(fs.faces) if i != fs.outer_index]
        if any(len(f) != 3 for f in tris):
            raise ValueError("every internal face must be a triangle")
        self.tris = np.array([[index[v] for v in f] for f in tris], dtype=np.int64).reshape(-1, 3)
        inc_v = np.concatenate([self.e[:, 0], self.e[:, 1]])
        inc_e = np.concatenate([np.arange(len(self.e))] * 2)
        order = np.lexsort((inc_e, inc_v))
        self.inc_v, self.inc_e = inc_v[order], inc_e[order]
        self.starts = np.flatnonzero(np.r_[True, self.inc_v[1:] != self.inc_v[:-1]])
        self.owners = self.inc_v[self.starts]
        self.n = len(self.vertices)

    def quality(self, x: np.ndarray) -> np.ndarray:
        p0, p1, p2 = x[self.tris[:, 0]], x[self.tris[:, 1]], x[self.tris[:, 2]]
        a2 = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])
        ss = ((p0 - p1) ** 2).sum(1) + ((p1 - p2) ** 2).sum(1) + ((p2 - p0) ** 2).sum(1)
        return a2 / ss

    def rho(self, x: np.ndarray) -> float:
        d = x[self.e[:, 0]] - x[self.e[:, 1]]
        lg = 0.5 * np.log((d * d).sum(1))[self.inc_e]
        spread = np.maximum.reduceat(lg, self.starts) - np.minimum.reduceat(lg, self.starts)
        return float(np.exp(spread.max()))

    def objective(self, x: np.ndarray, tau: float, barrier: float) -> tuple[float, np.ndarray]:
        d = x[self.e[:, 0]] - x[self.e[:, 1]]
        s = (d * d).sum(1)
        lg = 0.5 * np.log(s)[self.inc_e]
        hi = np.maximum.reduceat(lg, self.starts)
        lo = np.minimum.reduceat(lg, self.starts)
        counts = np.diff(np.r_[self.starts, len(lg)])
        hi_i, lo_i = np.repeat(hi, counts), np.repeat(lo, counts)
        ep = np.exp((lg - hi_i) / tau)
        em = np.exp((lo_i - lg) / tau)
        sp, sm = np.add.reduceat(ep, self.starts), np.add.reduceat(em, self.starts)
        smax = hi + tau * np.log(sp)
        smin = lo - tau * np.log(sm)
        r = smax - smin
        top = r.max()
        w = np.exp((r - top) / tau)
        zw = w.sum()
        f = top + tau * math.log(zw)
        w /= zw
        coef = np.repeat(w, counts) * (ep / np.repeat(sp, counts) - em / np.repeat(sm, counts))
        dl = np.bincount(self.inc_e, weights=coef, minlength=len(self.e))
        ge = (dl / s)[:, None] * d
        grad = self._scatter(self.e[:, 0], ge) - self._scatter(self.e[:, 1], ge)
        if barrier and len(self.tris):
            t = self.tris
            p0, p1, p2 = x[t[:, 0]], x[t[:, 1]], x[t[:, 2]]
            a2 = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])
            ss = ((p0 - p1) ** 2).sum(1) + ((p1 - p2) ** 2).sum(1) + ((p2 - p0) ** 2).sum(1)
            f -= barrier * float(np.log(a2 / ss).sum())
            ia, iss = (1 / a2)[:, None], (2 / ss)[:, None]
            da0 = np.stack([p1[:, 1] - p2[:, 1], p2[:, 0] - p1[:, 0]], 1)
            da1 = np.stack([p2[:, 1] - p0[:, 1], p0[:, 0] - p2[:, 0]], 1)
            da2 = np.stack([p0[:, 1] - p1[:, 1], p1[:, 0] - p0[:, 0]], 1)
            g0 = da0 * ia - iss * (2 * p0 - p1 - p2)
            g1 = da1 * ia - iss * (2 * p1 - p0 - p2)
            g2 = da2 * ia - iss * (2 * p2 - p0 - p1)
            for col, gv in ((0, g0), (1, g1), (2, g2)):
                grad -= barrier * self._scatter(t[:, col], gv)
        return f, grad

    def _scatter(self, idx: np.ndarray, vals: np.ndarray) -> np.ndarray:
        return np.stack(
            [np.bincount(idx, weights=vals[:, 0], minlength=self.n), np.bincount(idx, weights=vals[:, 1], minlength=self.n)], 1
        )

    def local_scale(self, x: np.ndarray) -> np.ndarray:
        d = x[self.e[:, 0]] - x[self.e[:, 1]]
        ln = np.sqrt((d * d).sum(1))[self.inc_e]
        out = np.ones(self.n)
        out[self.owners] = np.minimum.reduceat(ln, self.starts)
        return out


def _normalize(x: np.ndarray) -> np.ndarray:
    x = x - x.mean(0)
    return x / np.abs(x).max()


def _tutte(p: _Problem, outer: Sequence[int], weights: np.ndarray) -> np.ndarray:
    """Barycentric placement with the outer face on a regular polygon."""
    n = p.n
    fixed = np.zeros(n, dtype=bool)
    x = np.zeros((n, 2))
    k = len(outer)
    for i, v in enumerate(outer):
        # outer walk runs clockwise
        ang = -2 * math.pi * i / k
        x[v] = (math.cos(ang), math.sin(ang))
        fixed[v] = True
    lap = np.zeros((n, n))
    for (u, v), wt in zip(p.e, weights):
        lap[u, v] -= wt
        lap[v, u] -= wt
        lap[u, u] += wt
        lap[v, v] += wt
    free = ~fixed
    if free.any():
        rhs = -lap[np.ix_(free, fixed)] @ x[fixed]
        x[free] = np.linalg.solve(lap[np.ix_(free, free)], rhs)
    return x


def _to_drawing(p: _Problem, x: np.ndarray) -> StraightLineDrawing:
    ln = np.sqrt(((x[p.e[:, 0]] - x[p.e[:, 1]]) ** 2).sum(1))
    grid = np.rint(x * (2.0**30 / ln.min()))
    coords = {v: (int(grid[i, 0]), int(grid[i, 1])) for i, v in enumerate(p.vertices)}
    return StraightLineDrawing(coords, frozenset(map(tuple, p.edges.tolist())))


def orientation_valid(d: StraightLineDrawing, g: Any) -> bool:
    """Every internal face strictly counter-clockwise, the outer walk clockwise."""
    from .graph import extract_faces

    fs = extract_faces(g)
    for i, f in enumerate(fs.faces):
        pts = [d.coords[v] for v in f]
        area2 = sum(pts[j][0] * pts[(j + 1) % len(pts)][1] - pts[(j + 1) % len(pts)][0] * pts[j][1] for j in range(len(pts)))
        if (area2 >= 0) if i == fs.outer_index else (area2 <= 0):
            return False
    return True


def _run_restart(
    p: _Problem, x0: np.ndarray, iterations: int, cfg: OptimizerConfig
) -> tuple[np.ndarray, float, list[np.ndarray]]:
    from scipy.optimize import minimize

    x = _normalize(x0)
    best_x, best_rho = x.copy(), p.rho(x)
    snaps: list[np.ndarray] = []
    seen = 0
    budget = max(1, iterations // len(cfg.schedule))
    for tau, barrier in cfg.schedule:

        def fun(z: np.ndarray) -> tuple[float, np.ndarray]:
            pts = z.reshape(-1, 2)
            if p.quality(pts).min() <= cfg.min_quality:
                return 1e12, np.zeros_like(z)
            f, g = p.objective(pts, tau, barrier)
            return f, g.ravel()

        def record(z: np.ndarray) -> None:
            nonlocal seen, best_x, best_rho
            seen += 1
            pts = z.reshape(-1, 2)
            r = p.rho(pts)
            if r < best_rho:
                best_x, best_rho = pts.copy(), r
            if cfg.snapshot_every and seen % cfg.snapshot_every == 0:
                snaps.append(pts.copy())

        res = minimize(fun, x.ravel(), jac=True, method="L-BFGS-B", callback=record, options={"maxiter": budget, "ftol": 1e-15, "gtol": 1e-12})
        x = _normalize(res.x.reshape(-1, 2))
        if p.quality(x).min() <= cfg.min_quality:
            x = _normalize(best_x)
    return best_x, best_rho, snaps


def _jitter(p: _Problem, x: np.ndarray, rng: np.random.Generator, amount: float = 0.3) -> np.ndarray:
    scale = p.local_scale(x)[:, None]
    for _ in range(30):
        cand = x + rng.normal(size=x.shape) * amount * scale
        if p.quality(cand).min() > 0:
            return cand
        amount *= 0.5
    return x


def optimize_local_ratio(
    g: Any,
    restarts: int = 4,
    iterations: int = 2000,
    seed: int = 0,
    initial: Mapping[Vertex, tuple[float, float]] | None = None,
    config: OptimizerConfig | None = None,
) -> OptimizationResult:
    """Search for a drawing of ``g`` with small local edge-length ratio.

    Every internal face must be a triangle and keeps its orientation
    throughout. Restart 0 starts from ``initial`` (or a uniform barycentric
    drawing); later restarts jitter ``initial`` or, without one, use
    barycentric drawings with random positive weights. The returned drawing is on an integer grid and has
    passed the exact planarity and orientation checks.
    """
    from .errors import InfeasibleStart
    from .graph import extract_faces

    cfg = config or OptimizerConfig()
    p = _Problem(g)
    outer = [p.vertices.index(v) for v in extract_faces(g).outer]
    seeds = np.random.SeedSequence(seed).spawn(max(restarts, 1))
    results: list[tuple[float, int, StraightLineDrawing]] = []
    snapshots: list[StraightLineDrawing] = []
    for r in range(max(restarts, 1)):
        rng = np.random.default_rng(seeds[r])
        if initial is not None:
            x0 = np.array([initial[v] for v in p.vertices], dtype=float)
            if r:
                x0 = _jitter(p, x0, rng, cfg.jitter)
        else:
            wts = np.ones(len(p.e)) if r == 0 else rng.uniform(0.2, 5.0, len(p.e))
            x0 = _tutte(p, outer, wts)
        if len(p.tris) and p.quality(x0).min() <= 0:
            raise InfeasibleStart(f"restart {r} starts from a drawing with a flipped face")
        bx, brho, snaps = _run_restart(p, x0, iterations, cfg)
        for s in snaps:
            snapshots.append(_to_drawing(p, s))
        d = _to_drawing(p, bx)
        if not (orientation_valid(d, g) and check_planar_straight_line(d).planar):
            d = _to_drawing(p, x0)
            brho = p.rho(x0)
        results.append((brho, r, d))
    rho, idx, drawing = min(results, key=lambda t: (t[0], t[1]))
    exact = ratios(drawing).rho_local
    return OptimizationResult(drawing, exact, idx, [t[0] for t in results], snapshots)
