"""Command-line interface: generate, draw, realize, check, render.

Every JSON document written carries a ``manifest`` entry with the command,
its parameters, the seed, the tool version and content hashes, so reruns can
be compared byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .errors import DrawingError, ElrError, FamilyError, GraphError, IsK4, NotInFamily
from .graph import PlaneGraph
from .leveling import LevelDrawing, StraightLineDrawing, double_levels, realize_straight_line, validate_swlp

EXIT_OK, EXIT_INVALID, EXIT_FAMILY, EXIT_IO = 0, 1, 2, 3

ALGORITHMS = ("auto", "halin", "ghalin", "cycle-cycle", "op-cycle", "cycle-cat", "op-cat")
FAMILIES = (
    "halin",
    "tufted-halin",
    "wheel",
    "k4",
    "ghalin",
    "cycle-cycle",
    "outerplanar-cycle",
    "cycle-caterpillar",
    "outerplanar-caterpillar",
    "outerplanar",
    "lower-chain",
    "lower-glued",
)


class CliFailure(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


# -- manifests and I/O ------------------------------------------------------


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict[str, Any]
    seed: int | None
    input_sha256: str | None
    output_sha256: str
    version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "input_sha256": self.input_sha256,
            "output_sha256": self.output_sha256,
            "version": self.version,
        }


def _with_manifest(payload: dict[str, Any], command: str, params: dict[str, Any], seed: int | None, source: str | None) -> str:
    body = json.dumps(payload, sort_keys=True)
    manifest = RunManifest(command, params, seed, _sha(source) if source is not None else None, _sha(body))
    return json.dumps({**payload, "manifest": manifest.to_dict()}, sort_keys=True) + "\n"


def _read_text(path: str | None) -> str:
    try:
        if path in (None, "-"):
            return sys.stdin.read()
        return Path(path).read_text()
    except OSError as exc:
        raise CliFailure(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _read_json(path: str | None) -> tuple[dict[str, Any], str]:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliFailure(EXIT_IO, f"{path or 'stdin'} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliFailure(EXIT_IO, f"{path or 'stdin'} does not hold a JSON object")
    return data, text


def _write_text(path: str | None, text: str) -> None:
    try:
        if path in (None, "-"):
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            Path(path).write_text(text)
    except OSError as exc:
        raise CliFailure(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _kind(data: dict[str, Any]) -> str:
    if "rotation" in data:
        return "graph"
    if "levels" in data:
        return "level"
    if "coords" in data:
        return "straight"
    raise CliFailure(EXIT_IO, "input is neither a graph, a level drawing nor a straight-line drawing")


def _load_graph(data: dict[str, Any]) -> PlaneGraph:
    try:
        return PlaneGraph.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliFailure(EXIT_IO, f"malformed graph: {exc}") from exc


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ELR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise CliFailure(EXIT_IO, f"ELR_SEED must be an integer, got {env!r}") from exc


def _emit_rows(rows: Sequence[tuple[str, Any]], out: Any = None) -> None:
    out = out or sys.stderr
    for key, value in rows:
        out.write(f"{key}\t{value}\n")


# -- gen --------------------------------------------------------------------


def generate(family: str, size: int, seed: int, k: int | None = None) -> PlaneGraph:
    """Build a graph of the named family; ``size`` is family specific."""
    from . import families as fam

    if family == "halin":
        return fam.gen_random_halin(max(size, 3), seed)
    if family == "tufted-halin":
        return fam.gen_random_tufted_halin(max(size, 2), seed)
    if family == "wheel":
        return fam.gen_wheel(max(size, 3))
    if family == "k4":
        return fam.gen_k4()
    if family == "ghalin":
        return fam.gen_random_generalized_halin(max(size, 3), seed)
    if family == "cycle-cycle":
        return fam.gen_random_cycle_cycle(max(size, 3), max(3, size // 2), seed)
    if family == "cycle-caterpillar":
        return fam.gen_random_cycle_caterpillar(max(size, 4), max(2, size // 2), max(2, size // 2), seed)
    if family == "outerplanar-cycle":
        core = fam.gen_random_cycle_cycle(max(size, 3), max(3, size // 2), seed)
        return fam.gen_random_outerplanar_attachment(core, max(1, size // 3), seed)
    if family == "outerplanar-caterpillar":
        core = fam.gen_random_cycle_caterpillar(max(size, 4), max(2, size // 2), max(2, size // 2), seed)
        return fam.gen_random_outerplanar_attachment(core, max(1, size // 3), seed)
    if family == "outerplanar":
        return fam.gen_random_outerplanar(max(size, 3), seed)
    if family == "lower-chain":
        return fam.gen_lower_bound_chain(k or size).graph
    if family == "lower-glued":
        # only multiples of four are constructible; round the vertex count down
        return fam.gen_lower_bound_glued(k or max(1, size // 4)).graph
    raise CliFailure(EXIT_IO, f"unknown family {family!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    seed = _seed(args)
    size = args.size if args.size is not None else (args.k or 10)
    g = generate(args.family, size, seed, args.k)
    params = {"family": args.family, "size": size, "k": args.k}
    payload = g.to_dict()
    payload["family"] = args.family
    _write_text(args.output, _with_manifest(payload, "gen", params, seed, None))
    return EXIT_OK


# -- draw -------------------------------------------------------------------


def _draw_auto(g: PlaneGraph) -> tuple[str, LevelDrawing]:
    from .errors import NotGeneralizedHalin, NotHalin
    from .families import recognize_generalized_halin, recognize_halin

    try:
        h = recognize_halin(g)
    except NotHalin:
        pass
    else:
        from .halin import draw_halin

        return "halin", draw_halin(h)
    try:
        recognize_generalized_halin(g)
    except (NotGeneralizedHalin, NotHalin):
        pass
    else:
        from .halin import draw_generalized_halin

        return "ghalin", draw_generalized_halin(g)
    try:
        return _draw_two_outer(g, None)
    except NotInFamily as exc:
        raise NotInFamily(f"no drawer applies: {exc}") from exc


_TWO_OUTER = {
    "cycle-cycle": "cycle-cycle",
    "op-cycle": "outerplanar-cycle",
    "cycle-cat": "cycle-caterpillar",
    "op-cat": "outerplanar-caterpillar",
}


def _draw_two_outer(g: PlaneGraph, algorithm: str | None) -> tuple[str, LevelDrawing]:
    from .families import recognize_two_outer
    from .twoouter import draw_cycle_caterpillar, draw_cycle_cycle, draw_outerplanar_caterpillar, draw_outerplanar_cycle

    s = recognize_two_outer(g)
    want = _TWO_OUTER.get(algorithm or "", s.kind)
    # plain cores are also valid inputs of the attachment drawers
    accepted = {
        "cycle-cycle": {"cycle-cycle"},
        "outerplanar-cycle": {"cycle-cycle", "outerplanar-cycle"},
        "cycle-caterpillar": {"cycle-caterpillar"},
        "outerplanar-caterpillar": {"cycle-caterpillar", "outerplanar-caterpillar"},
    }[want]
    if s.kind not in accepted:
        raise NotInFamily(f"graph is {s.kind}, not {want}")
    if want == "cycle-cycle":
        return want, draw_cycle_cycle(s)
    if want == "cycle-caterpillar":
        return want, draw_cycle_caterpillar(s)
    if want == "outerplanar-cycle":
        return want, draw_outerplanar_cycle(g)
    return want, draw_outerplanar_caterpillar(g)


def draw_graph(g: PlaneGraph, algorithm: str = "auto") -> tuple[str, LevelDrawing]:
    """Dispatch to a drawer; returns the family name used and the drawing."""
    if algorithm == "auto":
        return _draw_auto(g)
    if algorithm == "halin":
        from .families import recognize_halin
        from .halin import draw_halin

        return "halin", draw_halin(recognize_halin(g))
    if algorithm == "ghalin":
        from .halin import draw_generalized_halin

        return "ghalin", draw_generalized_halin(g)
    if algorithm in _TWO_OUTER:
        return _draw_two_outer(g, algorithm)
    raise CliFailure(EXIT_IO, f"unknown algorithm {algorithm!r}")


def cmd_draw(args: argparse.Namespace) -> int:
    data, text = _read_json(args.input)
    g = _load_graph(data)
    used, d = draw_graph(g, args.algorithm)
    payload = d.to_dict()
    payload["family"] = used
    _write_text(args.output, _with_manifest(payload, "draw", {"algorithm": args.algorithm}, None, text))
    return EXIT_OK


# -- realize ----------------------------------------------------------------


def cmd_realize(args: argparse.Namespace) -> int:
    data, text = _read_json(args.input)
    if _kind(data) != "level":
        raise CliFailure(EXIT_IO, "realize expects a level drawing")
    d = LevelDrawing.from_dict(data)
    doubled = any(d.span(e) == 0 for e in d.edges)
    if doubled:
        d = double_levels(d)
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliFailure(EXIT_IO, f"bad epsilon {args.epsilon!r}") from exc
    sd = realize_straight_line(d, eps)
    payload = sd.to_dict()
    payload["doubled"] = doubled
    _write_text(args.output, _with_manifest(payload, "realize", {"epsilon": str(eps)}, None, text))
    return EXIT_OK


# -- check ------------------------------------------------------------------


def check_document(
    data: dict[str, Any],
    graph: PlaneGraph | None = None,
    span: int | None = None,
    ratio: str | None = None,
    local_ratio: str | None = None,
    perimeter: bool = False,
) -> tuple[bool, list[tuple[str, Any]]]:
    """Run the requested checks; returns overall verdict and report rows."""
    from .metrics import (
        audit_span,
        check_perimeter_growth,
        check_planar_straight_line,
        orientation_valid,
        ratios,
    )

    rows: list[tuple[str, Any]] = []
    ok = True
    kind = _kind(data)
    if kind == "level":
        d = LevelDrawing.from_dict(data)
        audit = audit_span(d)
        rows.append(("max_span", audit.maximum))
        rows.append(("span_histogram", json.dumps(audit.histogram, sort_keys=True)))
        k = span if span is not None else max(audit.maximum, 0)
        verdict = validate_swlp(d, k)
        rows.append((f"swlp_{k}", "pass" if verdict.ok else "fail"))
        for msg in verdict.failures[:10]:
            rows.append(("failure", msg))
        ok &= verdict.ok
        if ratio is not None or local_ratio is not None or perimeter:
            raise CliFailure(EXIT_IO, "ratio and perimeter checks need a straight-line drawing")
        return ok, rows
    if kind != "straight":
        raise CliFailure(EXIT_IO, "check expects a drawing")
    sd = StraightLineDrawing.from_dict(data)
    planar = check_planar_straight_line(sd)
    rows.append(("planar", "pass" if planar.planar else "fail"))
    for e, f, why in planar.violations[:10]:
        rows.append(("violation", f"{e} {f} {why}"))
    ok &= planar.planar
    rep = ratios(sd)
    rows.append(("rho_global", f"{rep.rho_global:.9f}"))
    rows.append(("rho_local", f"{rep.rho_local:.9f}"))
    if ratio is not None:
        good = rep.global_at_most(ratio)
        rows.append((f"rho_global<={ratio}", "pass" if good else "fail"))
        ok &= good
    if local_ratio is not None:
        good = rep.local_at_least(local_ratio)
        rows.append((f"rho_local>={local_ratio}", "pass" if good else "fail"))
        ok &= good
    if graph is not None:
        good = orientation_valid(sd, graph)
        rows.append(("embedding_preserved", "pass" if good else "fail"))
        ok &= good
    if perimeter:
        n = len(sd.coords)
        if n % 2 != 1 or n < 3:
            raise CliFailure(EXIT_IO, "perimeter check expects a drawing of the nested-triangle chain")
        k = (n - 1) // 2
        tris = [(0, 2 * i - 1, 2 * i) for i in range(1, k + 1)]
        pv = check_perimeter_growth(sd, tris)
        rows.append(("perimeter_growth", "pass" if pv.ok else f"fail at {pv.first_failure}"))
        ok &= pv.ok
    return ok, rows


def cmd_check(args: argparse.Namespace) -> int:
    data, _ = _read_json(args.input)
    graph = None
    if args.graph:
        gdata, _ = _read_json(args.graph)
        graph = _load_graph(gdata)
    ok, rows = check_document(data, graph, args.span, args.ratio, args.local_ratio, args.perimeter)
    rows.append(("verdict", "pass" if ok else "fail"))
    _emit_rows(rows, sys.stdout)
    return EXIT_OK if ok else EXIT_INVALID


# -- lower ------------------------------------------------------------------


def cmd_lower(args: argparse.Namespace) -> int:
    from .families import gen_lower_bound_chain
    from .metrics import OptimizerConfig, check_perimeter_growth, local_ratio_lower_bound, optimize_local_ratio

    seed = _seed(args)
    chain = gen_lower_bound_chain(args.k)
    start = {v: (float(x), float(y)) for v, (x, y) in chain.balanced_positions().items()}
    cfg = OptimizerConfig(snapshot_every=args.snapshot_every)
    res = optimize_local_ratio(chain.graph, args.restarts, args.iters, seed, initial=start, config=cfg)
    bound = local_ratio_lower_bound(args.k)
    growth = [check_perimeter_growth(s, chain.triangles()).ok for s in [res.drawing, *res.snapshots]]
    ok = res.rho_local >= bound and all(growth)
    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["restart", "k", "best_rho_local", "bound"])
                for i, r in enumerate(res.per_restart):
                    w.writerow([i, args.k, f"{r:.9f}", f"{bound:.9f}"])
        except OSError as exc:
            raise CliFailure(EXIT_IO, f"cannot write {args.csv}: {exc}") from exc
    if args.plot:
        from .render import plot_restarts

        plot_restarts(res.per_restart, bound, args.plot, title=f"G_{args.k}: best local ratio per restart")
    if args.output:
        params = {"k": args.k, "restarts": args.restarts, "iters": args.iters}
        _write_text(args.output, _with_manifest(res.drawing.to_dict(), "lower", params, seed, None))
    _emit_rows(
        [
            ("k", args.k),
            ("vertices", chain.graph.n),
            ("best_rho_local", f"{res.rho_local:.9f}"),
            ("bound", f"{bound:.9f}"),
            ("gap", f"{res.rho_local - bound:.9f}"),
            ("best_restart", res.restart),
            ("perimeter_checks", f"{sum(growth)}/{len(growth)}"),
            ("verdict", "pass" if ok else "fail"),
        ],
        sys.stdout,
    )
    return EXIT_OK if ok else EXIT_INVALID


# -- svg and report ---------------------------------------------------------


def cmd_svg(args: argparse.Namespace) -> int:
    from .render import plot_level_drawing, plot_straight_line

    data, _ = _read_json(args.input)
    kind = _kind(data)
    if kind == "level":
        plot_level_drawing(LevelDrawing.from_dict(data), args.output, labels=not args.no_labels)
    elif kind == "straight":
        plot_straight_line(StraightLineDrawing.from_dict(data), args.output, labels=not args.no_labels)
    else:
        from .render import plot_level_drawing as _pl

        _, d = draw_graph(_load_graph(data))
        _pl(d, args.output, labels=not args.no_labels)
    return EXIT_OK


def report_graph(g: PlaneGraph, out_dir: str | Path, algorithm: str = "auto", epsilon: Fraction = Fraction(1, 100)) -> list[tuple[str, Any]]:
    """Draw, realize and measure ``g``; write figures and a TSV summary into ``out_dir``."""
    from .metrics import audit_span, check_planar_straight_line, ratios
    from .render import plot_level_drawing, plot_span_histogram, plot_straight_line

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    used, d = draw_graph(g, algorithm)
    audit = audit_span(d)
    dd = double_levels(d) if any(d.span(e) == 0 for e in d.edges) else d
    sd = realize_straight_line(dd, epsilon)
    rep = ratios(sd)
    planar = check_planar_straight_line(sd).planar
    rows: list[tuple[str, Any]] = [
        ("family", used),
        ("vertices", g.n),
        ("edges", g.m),
        ("levels", len(d.order)),
        ("max_span", audit.maximum),
        ("max_span_doubled", audit_span(dd).maximum),
        ("rho_global", f"{rep.rho_global:.9f}"),
        ("rho_local", f"{rep.rho_local:.9f}"),
        ("planar", "pass" if planar else "fail"),
    ]
    (out / "summary.tsv").write_text("".join(f"{k}\t{v}\n" for k, v in rows))
    (out / "level_drawing.json").write_text(d.to_json(family=used) + "\n")
    (out / "straight_line.json").write_text(sd.to_json() + "\n")
    plot_level_drawing(d, out / "level_drawing.svg", title=f"{used}: {g.n} vertices")
    plot_straight_line(sd.scaled(Fraction(1) / epsilon), out / "straight_line.svg", labels=g.n <= 60)
    plot_span_histogram(audit.histogram, out / "spans.png", title="span histogram")
    return rows


def cmd_report(args: argparse.Namespace) -> int:
    data, _ = _read_json(args.input)
    rows = report_graph(_load_graph(data), args.out_dir, args.algorithm, Fraction(args.epsilon))
    _emit_rows(rows, sys.stdout)
    return EXIT_OK if dict(rows)["planar"] == "pass" else EXIT_INVALID


# -- batch ------------------------------------------------------------------


def _batch_one(path: str, algorithm: str, epsilon: str) -> tuple[str, str, str]:
    try:
        data, _ = _read_json(path)
        g = _load_graph(data)
        used, d = draw_graph(g, algorithm)
        from .metrics import audit_span, check_planar_straight_line, ratios

        dd = double_levels(d) if any(d.span(e) == 0 for e in d.edges) else d
        sd = realize_straight_line(dd, Fraction(epsilon))
        planar = check_planar_straight_line(sd).planar
        rep = ratios(sd)
        status = "ok" if planar else "invalid"
        return path, status, f"{used}\t{audit_span(d).maximum}\t{rep.rho_global:.9f}"
    except FamilyError as exc:
        return path, "rejected", str(exc)
    except (DrawingError, GraphError) as exc:
        return path, "invalid", str(exc)
    except CliFailure as exc:
        return path, "io", str(exc)


def cmd_batch(args: argparse.Namespace) -> int:
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_batch_one, args.inputs, [args.algorithm] * len(args.inputs), [args.epsilon] * len(args.inputs)))
    else:
        results = [_batch_one(p, args.algorithm, args.epsilon) for p in args.inputs]
    sys.stdout.write("input\tstatus\tdetail\n")
    for path, status, detail in results:
        sys.stdout.write(f"{path}\t{status}\t{detail}\n")
    statuses = {s for _, s, _ in results}
    if "io" in statuses:
        return EXIT_IO
    if "invalid" in statuses:
        return EXIT_INVALID
    if "rejected" in statuses:
        return EXIT_FAMILY
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elr", description="Leveled drawings with bounded edge-length ratio.")
    p.add_argument("--version", action="version", version=f"elr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph of a family")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--size", type=int, help="family size parameter (leaves, cycle length, ...)")
    g.add_argument("--k", type=int, help="chain length for the lower-bound families")
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("draw", help="compute a leveled drawing")
    d.add_argument("input", nargs="?")
    d.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_draw)

    r = sub.add_parser("realize", help="turn a leveled drawing into a straight-line drawing")
    r.add_argument("input", nargs="?")
    r.add_argument("--epsilon", default="1/100")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_realize)

    c = sub.add_parser("check", help="verify a drawing")
    c.add_argument("input", nargs="?")
    c.add_argument("--graph", help="graph file, enables the embedding check")
    c.add_argument("--span", type=int, help="maximum allowed span for level drawings")
    c.add_argument("--ratio", help="upper bound on the global ratio, e.g. 3.01")
    c.add_argument("--local-ratio", help="lower bound on the local ratio")
    c.add_argument("--perimeter", action="store_true", help="perimeter growth of the nested-triangle chain")
    c.set_defaults(func=cmd_check)

    lo = sub.add_parser("lower", help="search drawings of the lower-bound chain")
    lo.add_argument("--k", type=int, default=80)
    lo.add_argument("--restarts", type=int, default=32)
    lo.add_argument("--iters", type=int, default=20000)
    lo.add_argument("--seed", type=int)
    lo.add_argument("--snapshot-every", type=int, default=0)
    lo.add_argument("--csv")
    lo.add_argument("--plot", help="figure of the per-restart results (.png, .svg or .pdf)")
    lo.add_argument("-o", "--output", help="best drawing as JSON")
    lo.set_defaults(func=cmd_lower)

    s = sub.add_parser("svg", help="render a drawing or graph")
    s.add_argument("input", nargs="?")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--no-labels", action="store_true")
    s.set_defaults(func=cmd_svg)

    rp = sub.add_parser("report", help="draw, realize, measure and plot a graph")
    rp.add_argument("input", nargs="?")
    rp.add_argument("--out-dir", required=True)
    rp.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    rp.add_argument("--epsilon", default="1/100")
    rp.set_defaults(func=cmd_report)

    b = sub.add_parser("batch", help="draw and measure many graph files")
    b.add_argument("inputs", nargs="+")
    b.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    b.add_argument("--epsilon", default="1/100")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_batch)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except CliFailure as exc:
        print(f"elr: {exc}", file=sys.stderr)
        return exc.code
    except IsK4 as exc:
        print(f"elr: IsK4: {exc}", file=sys.stderr)
        return EXIT_FAMILY
    except FamilyError as exc:
        print(f"elr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAMILY
    except (DrawingError, GraphError) as exc:
        print(f"elr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ElrError as exc:
        print(f"elr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
