import json
import xml.etree.ElementTree as ET

import pytest

from mirror_stokes.cli import main
from mirror_stokes.figures import figure_data
from mirror_stokes.geometry import fiber, parse_laurent
from mirror_stokes.pipeline import RunSettings, dumps, run_stokes_pipeline, without_timings

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stokes_command_writes_manifest(tmp_path, capsys):
    out = tmp_path / "run.json"
    code, stdout, _ = run(capsys, "stokes", "--f", "x + x^-3", "--alpha-phase", "pi/8", "--out", str(out))
    assert code == 0
    m = json.loads(out.read_text())
    assert m["schema"] == 1
    assert m["stokes"]["S_beta"] == [[1, -1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
    assert json.loads(stdout)["stokes"] == m["stokes"]


def test_replay_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert run(capsys, "stokes", "--f", "x + x^-1", "--out", str(first))[0] == 0
    assert run(capsys, "stokes", "--replay", str(first), "--out", str(second))[0] == 0
    a, b = (json.loads(p.read_text()) for p in (first, second))
    assert dumps(without_timings(a)) == dumps(without_timings(b))


def test_seed_env_override(monkeypatch):
    from mirror_stokes.pipeline import resolve_seed
    monkeypatch.setenv("MIRROR_STOKES_SEED", "7")
    assert resolve_seed(0) == 7
    monkeypatch.delenv("MIRROR_STOKES_SEED")
    assert resolve_seed(3) == 3


@pytest.mark.parametrize("argv, code", [
    (["stokes", "--f", "x"], 5),
    (["stokes", "--f", "x^-2"], 5),
    (["stokes", "--f", "x +"], 2),
    (["stokes", "--f", "x + x^-1", "--alpha-phase", "0"], 3),
    (["stokes", "--f", "x + x^-1", "--alpha-phase", "0.3"], 2),
    (["quantum", "--weights", "2", "4"], 5),
    (["braid-search", "--source", "[[1,1],[0,1]]", "--target", "[[1,3],[0,1]]", "--depth", "2"], 1),
    (["braid-search", "--source", "[[1,1]", "--target", "[[1]]"], 2),
    (["stokes", "--replay", "/nonexistent/manifest.json"], 2),
])
def test_exit_codes_without_tracebacks(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error:") and "Traceback" not in err


def test_module_commands(capsys):
    code, out, _ = run(capsys, "gauss-manin", "--f", "x + x^-3")
    assert code == 0 and json.loads(out)["M"][3][0] == "4*θ^-1"
    code, out, _ = run(capsys, "operator", "--f", "x + x^-3")
    assert json.loads(out)["text"] == "(t·d/dt)^4 + 4*(t·d/dt)^3 + 32/9*(t·d/dt)^2 - 256/27*t^-4"
    code, out, _ = run(capsys, "newton", "--f", "x + x^-3")
    assert json.loads(out)["slopes"] == ["1"]
    code, out, _ = run(capsys, "quantum", "--weights", "1", "3")
    assert json.loads(out)["mu"] == ["-1/2", "-1/6", "1/6", "1/2"]
    code, out, _ = run(capsys, "gram", "--weights", "1", "3")
    assert json.loads(out)["gram"][0] == [1, 1, 1, 2]
    code, out, _ = run(capsys, "braid-search", "--gram", "1", "3",
                       "--target", "[[1,-1,1,1],[0,1,0,1],[0,0,1,1],[0,0,0,1]]")
    assert json.loads(out)["word"] == ["b1"]
    code, out, _ = run(capsys, "gauge-compare", "--f", "x + x^-3")
    assert json.loads(out)["match"] is True
    code, out, _ = run(capsys, "gauge-compare", "--f", "x + x^-3", "--no-flip")
    assert json.loads(out)["match"] is False


def test_figures_are_well_formed(tmp_path, capsys):
    code, out, _ = run(capsys, "figures", "--f", "x + x^-3", "--out-dir", str(tmp_path))
    assert code == 0
    files = json.loads(out)["files"]
    svgs = [f for f in files if f.endswith(".svg")]
    assert len(svgs) == 3
    for name in svgs:
        root = ET.parse(name).getroot()
        assert root.tag == SVG + "svg"
        panels = root.findall(SVG + "svg")
        assert len(panels) == 2
        for p in panels:
            assert len(p.get("viewBox").split()) == 4
        colors = {el.get("stroke") for el in root.iter(SVG + "polyline")}
        assert {"green", "red", "purple", "orange"} <= colors
    sidecar = json.loads((tmp_path / "curves.json").read_text())
    assert set(sidecar) == {"schema", "preimages", "loops", "halflines"}


def test_figure_lifts_end_on_fibers():
    data = figure_data(RunSettings("x + x^-3"))
    f = parse_laurent("x + x^-3")
    lab = data["labeling"]
    _, _, lifted, _ = data["loops"]
    for c in lifted:
        # every loop lift returns to the fiber over e
        assert min(abs(c["points"][-1] - z) for z in lab.sheets.points) < 1e-6
        assert abs(c["points"][0] - lab.sheets.points[c["data"]["sheet"] - 1]) < 1e-12
    base, _, lifted, _ = data["halflines"]
    for c in lifted:
        near = base[c["data"]["sigma"] - 1]["points"][-1]
        fb = fiber(f, near)
        assert min(abs(c["points"][-1] - z) for z in fb.points) < 1e-6


def test_figures_for_double_cover():
    data = figure_data(RunSettings("x + x^-1"))
    base, marks, lifted, _ = data["loops"]
    assert len(base) == 2
    assert len([m for m in marks if m["kind"] == "sigma"]) == 2
    assert {c["data"]["sheet"] for c in lifted} == {1, 2}


def test_pipeline_manifest_for_double_cover(manifest_11):
    m = manifest_11
    assert m["monodromy"]["T"] == [[[0, 1], [1, 0]], [[0, 1], [1, 0]]]
    assert m["monodromy"]["b"] == [[[1], [1]], [[1], [1]]]
    assert m["stokes"]["S_beta"] == [[1, 2], [0, 1]]
    assert "diagonal" in m["labeling"]["sign_note"]
