from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from elr.cli import FAMILIES, main


def run(argv: list[str], capsys) -> tuple[int, str]:
    code = main(argv)
    return code, capsys.readouterr().out


def rows(text: str) -> dict[str, str]:
    return dict(line.split("\t", 1) for line in text.splitlines() if "\t" in line)


@pytest.fixture
def halin_files(tmp_path: Path, capsys):
    g = tmp_path / "g.json"
    d = tmp_path / "d.json"
    s = tmp_path / "s.json"
    assert main(["gen", "halin", "--size", "30", "--seed", "7", "-o", str(g)]) == 0
    assert main(["draw", str(g), "--algorithm", "halin", "-o", str(d)]) == 0
    assert main(["realize", str(d), "--epsilon", "1/100", "-o", str(s)]) == 0
    capsys.readouterr()
    return g, d, s


def test_pipeline_passes_ratio_check(halin_files, capsys):
    g, _, s = halin_files
    code, out = run(["check", str(s), "--graph", str(g), "--ratio", "3.01"], capsys)
    r = rows(out)
    assert code == 0
    assert r["verdict"] == "pass" and r["planar"] == "pass" and r["embedding_preserved"] == "pass"
    assert float(r["rho_global"]) <= 3.01


def test_level_check_reports_spans(halin_files, capsys):
    _, d, _ = halin_files
    code, out = run(["check", str(d), "--span", "1"], capsys)
    assert code == 0
    assert rows(out)["max_span"] == "1"


def test_tight_ratio_fails_with_exit_one(halin_files, capsys):
    _, _, s = halin_files
    code, out = run(["check", str(s), "--ratio", "1"], capsys)
    assert code == 1 and rows(out)["verdict"] == "fail"


def test_manifest_is_deterministic(tmp_path: Path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["gen", "cycle-caterpillar", "--size", "8", "--seed", "3", "-o", str(a)])
    main(["gen", "cycle-caterpillar", "--size", "8", "--seed", "3", "-o", str(b)])
    assert a.read_text() == b.read_text()
    m = json.loads(a.read_text())["manifest"]
    assert m["command"] == "gen" and m["seed"] == 3 and len(m["output_sha256"]) == 64


def test_seed_from_environment(tmp_path: Path, monkeypatch, capsys):
    monkeypatch.setenv("ELR_SEED", "5")
    out = tmp_path / "g.json"
    main(["gen", "halin", "--size", "6", "-o", str(out)])
    assert json.loads(out.read_text())["manifest"]["seed"] == 5


@pytest.mark.parametrize("family", [f for f in FAMILIES if f not in ("k4", "lower-chain", "lower-glued", "outerplanar")])
def test_auto_draws_every_family(family, tmp_path: Path, capsys):
    g = tmp_path / "g.json"
    assert main(["gen", family, "--size", "8", "--seed", "2", "-o", str(g)]) == 0
    d = tmp_path / "d.json"
    assert main(["draw", str(g), "-o", str(d)]) == 0
    assert json.loads(d.read_text())["family"]


def test_k4_is_a_family_rejection(tmp_path: Path, capsys):
    g = tmp_path / "k4.json"
    main(["gen", "k4", "-o", str(g)])
    code = main(["draw", str(g)])
    assert code == 2
    assert "IsK4" in capsys.readouterr().err


def test_wrong_family_for_algorithm(tmp_path: Path, capsys):
    g = tmp_path / "g.json"
    main(["gen", "halin", "--size", "8", "-o", str(g)])
    assert main(["draw", str(g), "--algorithm", "cycle-cycle"]) == 2


def test_missing_file_is_io_error(tmp_path: Path, capsys):
    assert main(["draw", str(tmp_path / "nope.json")]) == 3


def test_malformed_json_is_io_error(tmp_path: Path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", str(bad)]) == 3


def test_lower_chain_sizes(tmp_path: Path, capsys):
    g = tmp_path / "g.json"
    main(["gen", "lower-chain", "--k", "3", "-o", str(g)])
    data = json.loads(g.read_text())
    assert len(data["rotation"]) == 7


def test_lower_command_writes_artifacts(tmp_path: Path, capsys):
    csv_path, png, js = tmp_path / "r.csv", tmp_path / "r.png", tmp_path / "best.json"
    code, out = run(
        ["lower", "--k", "4", "--restarts", "2", "--iters", "200", "--seed", "1", "--snapshot-every", "20",
         "--csv", str(csv_path), "--plot", str(png), "-o", str(js)],
        capsys,
    )
    r = rows(out)
    assert code == 0 and r["verdict"] == "pass"
    assert float(r["best_rho_local"]) >= float(r["bound"])
    assert csv_path.read_text().splitlines()[0] == "restart,k,best_rho_local,bound"
    assert png.stat().st_size > 0
    code, out = run(["check", str(js), "--perimeter", "--local-ratio", r["bound"]], capsys)
    assert code == 0


def test_report_writes_figures_and_tsv(tmp_path: Path, capsys):
    g = tmp_path / "g.json"
    main(["gen", "cycle-cycle", "--size", "6", "--seed", "4", "-o", str(g)])
    out_dir = tmp_path / "rep"
    code, out = run(["report", str(g), "--out-dir", str(out_dir)], capsys)
    assert code == 0
    for name in ("summary.tsv", "level_drawing.json", "level_drawing.svg", "straight_line.json", "straight_line.svg", "spans.png"):
        assert (out_dir / name).stat().st_size > 0
    summary = rows((out_dir / "summary.tsv").read_text())
    assert summary["family"] == "cycle-cycle" and summary["max_span"] == "3"


def test_svg_is_byte_stable(halin_files, tmp_path: Path, capsys):
    _, d, _ = halin_files
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    main(["svg", str(d), "-o", str(a)])
    main(["svg", str(d), "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_batch_mixes_statuses(tmp_path: Path, capsys):
    good, k4 = tmp_path / "good.json", tmp_path / "k4.json"
    main(["gen", "wheel", "--size", "6", "-o", str(good)])
    main(["gen", "k4", "-o", str(k4)])
    capsys.readouterr()
    code, out = run(["batch", str(good), str(k4)], capsys)
    lines = out.splitlines()
    assert lines[0] == "input\tstatus\tdetail"
    assert lines[1].split("\t")[1] == "ok" and lines[2].split("\t")[1] == "rejected"
    assert code == 2


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["gen", "no-such-family"])
    assert exc.value.code == 2


def test_shell_pipeline(tmp_path: Path):
    exe = [sys.executable, "-m", "elr.cli"]
    steps = [
        ["gen", "halin", "--size", "50", "--seed", "7"],
        ["draw", "--algorithm", "halin"],
        ["realize", "--epsilon", "1/100"],
        ["check", "--ratio", "3.01"],
    ]
    data = b""
    for i, step in enumerate(steps):
        proc = subprocess.run(exe + step, input=data, capture_output=True, check=False)
        assert proc.returncode == 0, proc.stderr.decode()
        data = proc.stdout
    assert rows(data.decode())["verdict"] == "pass"
