from __future__ import annotations

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from digiseg.cli import main, parse_args

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_extract_waterline(capsys):
    code, out, _ = run(capsys, "extract", "waterline", "--point", "0,0", "--domain", "0,5")
    assert code == 0
    assert out == "0 1 2 3 4 5\n"
    code, out, _ = run(capsys, "extract", "waterline", "--point", "0,0", "--domain", "-3,-1")
    assert code == 0 and out == "-1 -2 -3\n"


def test_extract_examples(capsys):
    from digiseg.order import POW2

    assert run(capsys, "extract", "waterline", "--point", "0,-2", "--domain", "-2,5")[1] == "0 1 2 3 4 5 -1 -2\n"
    assert run(capsys, "extract", "order:natural", "--point", "0,0", "--domain", "0,7")[1] == "0 1 2 3 4 5 6 7\n"
    out = run(capsys, "extract", "order:pow2", "--point", "0,0", "--domain", "0,15")[1]
    assert [int(t) for t in out.split()] == list(POW2.sorted_range(0, 15))


def test_extract_pow2(capsys):
    code, out, _ = run(capsys, "extract", "--system", "order:pow2", "--point", "3,-1", "--domain", "2,9")
    assert code == 0
    assert [int(t) for t in out.split()] == [7, 3, 5, 9, 6, 2, 4, 8]


def test_verify_exit_codes(capsys):
    code, out, err = run(capsys, "verify", "order:pow2", "--window", "3", "all")
    assert code == 0 and out == ""
    assert "axioms: 0 violation(s)" in err
    code, out, err = run(capsys, "verify", "waterline", "obs1", "--window", "3", "--max-report", "2")
    assert code == 1
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 2 and all(r["axiom"] == "OBS1" for r in rows)


def test_verify_bad_oracle(capsys):
    code, _, err = run(capsys, "verify", "extern:/nonexistent/oracle", "--window", "1")
    assert code == 2 and err


def test_bad_order_spec(capsys):
    code, _, _ = run(capsys, "sweep", "nonsense", "--exhaustive", "2")
    assert code == 2


def test_render_svg(capsys, tmp_path):
    path = tmp_path / "fan.svg"
    code, _, _ = run(capsys, "render", "order:pow2", "--fan", "0,0:6", "--out", str(path))
    assert code == 0
    text = path.read_text()
    root = ET.fromstring(text.split("\n", 2)[2])
    assert root.tag == SVG + "svg"
    assert root.get("width") == str(7 * 12)
    chords = root.findall(f"{SVG}g/{SVG}line")
    assert len(chords) >= 13
    again = tmp_path / "again.svg"
    run(capsys, "render", "order:pow2", "--fan", "0,0:6", "--out", str(again))
    assert again.read_bytes() == path.read_bytes()


def test_render_ppm(capsys, tmp_path):
    path = tmp_path / "seg.ppm"
    code, _, _ = run(
        capsys, "render", "--system", "order:natural", "--pairs", "0,0:5,3;-2,1:1,-2",
        "--format", "ppm", "--cell", "4", "--out", str(path),
    )
    assert code == 0
    data = path.read_bytes()
    header = b"P6\n32 24\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 32 * 24 * 3


def test_render_needs_pairs(capsys):
    assert run(capsys, "render", "order:pow2")[0] == 2


def test_sweep_outputs_are_deterministic(capsys, tmp_path):
    outs = []
    for i in range(2):
        csv, fig = tmp_path / f"s{i}.csv", tmp_path / f"s{i}.png"
        code, _, err = run(capsys, "sweep", "pow2", "--exhaustive", "8", "--out", str(csv), "--figure", str(fig))
        assert code == 0 and "violations=0" in err
        outs.append((csv.read_bytes(), fig.read_bytes()))
    assert outs[0] == outs[1]
    lines = outs[0][0].decode().splitlines()
    assert lines[0] == "px,py,qx,qy,L,hausdorff,bound,ratio"
    assert len(lines) == 16
    assert outs[0][1].startswith(b"\x89PNG")


def test_sweep_random(capsys):
    code, out, err = run(capsys, "sweep", "--order", "pow2", "--random", "50", "--max-l", "64", "--seed", "3")
    assert code == 0
    assert out == run(capsys, "sweep", "--order", "pow2", "--random", "50", "--max-l", "64", "--seed", "3")[1]


def test_sweep_natural_violates(capsys):
    code, out, _ = run(capsys, "sweep", "natural", "--exhaustive", "16")
    assert code == 1
    top = max(out.splitlines()[1:], key=lambda r: float(r.split(",")[-1]))
    assert top.startswith("0,0,16,16,")


def test_lines(capsys):
    code, out, _ = run(capsys, "lines", "--slope", "ratinc:0", "--diag", "-2,2")
    assert code == 0
    assert out.splitlines()[0] == "points -2,0 -1,0 0,0 0,1 1,1 2,1"
    assert "contains_own_segments true" in out
    code, out, _ = run(capsys, "lines", "--slope", "ratinc:-4", "--diag", "-10,10", "--through", "0,3", "--gap-neighbours")
    assert "parallels 3 ratinc:-4 ratexc:-4 ratinc:2" in out
    code, out, _ = run(capsys, "lines", "--slope", "ratinc:100", "--diag", "-10,10", "--through", "0,3")
    assert "parallels inconclusive" in out


def test_demo3d(capsys):
    code, out, _ = run(capsys, "demo3d", "--window", "3")
    assert code == 0
    assert "axioms on [0,3]^3: 0 violation(s)" in out
    assert "S3 fails for p=(-3, -3, -2) q=(-2, -1, -3) r=(-2, -2, -2)" in out


def test_intermixed_arguments():
    args = parse_args(["verify", "box", "--window", "6", "axioms"])
    assert (args.spec, args.window, args.which) == ("box", 6, "axioms")
    args = parse_args(["extract", "--domain", "-3,-1", "--point", "-1,2", "box"])
    assert args.domain == (-3, -1) and args.point == (-1, 2)
    args = parse_args(["render", "waterline", "--pairs", "-3,-3:4,2;0,-2:3,1", "--fan", "-2,-2:3"])
    assert args.pairs == [((-3, -3), (4, 2)), ((0, -2), (3, 1))] and args.fan == "-2,-2:3"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "digiseg", "extract", "waterline", "--point", "0,0", "--domain", "0,3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "0 1 2 3\n"


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for name in ("render", "verify", "sweep", "extract", "lines", "demo3d"):
        assert name in out
