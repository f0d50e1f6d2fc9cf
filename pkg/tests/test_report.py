import json
import xml.etree.ElementTree as ET

import pytest

from conftest import load, source
from geodiscover import cli
from geodiscover.engine import discover
from geodiscover.numeric import instantiate
from geodiscover.parser import parse
from geodiscover.report import NEUTRAL, PALETTE, class_colors, render_json, render_svg, render_text, report_dict

SVG = "{http://www.w3.org/2000/svg}"


def test_midline_text(runs):
    c, r, _ = runs.get("midline")
    assert render_text(r) == "Discover(D)\nParallel: DE, AB\nCongruent: BD, CD\n"
    assert "TRIVIAL Collinear: B, C, D" in render_text(r, show_trivial=True).splitlines()


def test_hexagon_text(runs):
    c, r, _ = runs.get("hexagon")
    lines = render_text(r).splitlines()
    assert sum(1 for x in lines if x.startswith("Parallel:")) == 5
    assert sum(1 for x in lines if x.startswith("Congruent:")) == 3
    assert sum(1 for x in lines if x.startswith("Concyclic:")) == 1


PLAIN = "point A = free(0, 0)\npoint B = free(4, 0)\npoint C = free(1.5, 3)\npoint D = midpoint(B, C)\ndiscover A\n"


def test_empty_findings_text():
    c = parse(PLAIN)
    r = discover(c, "A")
    assert "No non-trivial findings for A." in render_text(r)


def test_normalized_reports_say_so(runs):
    c, r, _ = runs.get("midline", normalize=True)
    assert "normalized" in render_text(r)
    assert report_dict(r)["normalized"] is True


@pytest.mark.parametrize("name", ["midline", "parallelogram", "hexagon", "euler"])
def test_text_and_json_agree(runs, name):
    c, r, _ = runs.get(name)
    doc = json.loads(render_json(r))
    assert doc["format"] == 1
    assert {"target", "theorems", "trivial", "pool_summary", "timings"} <= set(doc)
    text = render_text(r, show_trivial=True).splitlines()[1:]
    rebuilt = []
    for kind, entries in (("", doc["theorems"]), ("TRIVIAL ", doc["trivial"])):
        for e in entries:
            if e["kind"] in ("parallel", "congruent"):
                body = ", ".join("".join(m) for m in e["members"])
            else:
                body = ", ".join(e["members"])
            rebuilt.append(f"{kind}{e['kind'].capitalize()}: {body}")
    assert sorted(rebuilt) == sorted(x for x in text if not x.startswith("No non-trivial"))


def _strokes(svg_text):
    root = ET.fromstring(svg_text)
    groups = [g for g in root.iter(SVG + "g") if g.find(SVG + "title") is not None]
    return root, {g.find(SVG + "title").text: g.get("stroke") for g in groups}


def test_svg_midline_colours(runs):
    c, r, _ = runs.get("midline")
    root, strokes = _strokes(render_svg(c, instantiate(c), r))
    assert root.tag == SVG + "svg"
    assert strokes["Parallel: DE, AB"] != strokes["Congruent: BD, CD"]
    par = next(g for g in root.iter(SVG + "g") if g.findtext(SVG + "title") == "Parallel: DE, AB")
    assert len(par.findall(SVG + "line")) == 2


def test_svg_hexagon_colours_are_distinct(runs):
    c, r, _ = runs.get("hexagon")
    svg = render_svg(c, instantiate(c), r)
    root, strokes = _strokes(svg)
    classes = [t for t in strokes if t.startswith(("Parallel", "Congruent"))]
    assert len(classes) == 8
    assert len({strokes[t] for t in classes}) == 8
    used = {e.get("stroke") for e in root.iter() if e.get("stroke")} | {e.get("fill") for e in root.iter() if e.get("fill")}
    assert used <= set(PALETTE) | {NEUTRAL, "none"}


def test_svg_without_findings_is_black():
    c = parse(PLAIN)
    svg = render_svg(c, instantiate(c), discover(c, "A"))
    root = ET.fromstring(svg)
    assert {e.get("stroke") for e in root.iter() if e.get("stroke")} == {NEUTRAL}
    labels = [t.text for t in root.iter(SVG + "text")]
    assert labels == ["A", "B", "C", "D"]


def test_svg_viewbox_has_margin():
    c = load("midline")
    svg = render_svg(c, instantiate(c))
    x, y, w, h = map(float, ET.fromstring(svg).get("viewBox").split())
    # points span x in [0, 4] and y in [0, 3] (SVG y is flipped)
    assert (x, y, w, h) == pytest.approx((-0.4, -3.3, 4.8, 3.6))


def test_palette_size():
    assert len(PALETTE) >= 12 and len(set(PALETTE)) == len(PALETTE)


def test_palette_cycles_deterministically(runs):
    c, r, _ = runs.get("ninepoint")
    colours = [col for _, col in class_colors(r)]
    assert colours[: len(PALETTE)] == list(PALETTE[: len(colours)])


def test_outputs_are_byte_stable():
    c = load("hexagon")
    a, b = discover(c, "F"), discover(c, "F")
    assert render_text(a) == render_text(b)
    inst = instantiate(c)
    assert render_svg(c, inst, a) == render_svg(c, inst, b)
    da, db = report_dict(a), report_dict(b)
    da.pop("timings"), db.pop("timings")
    assert json.dumps(da) == json.dumps(db)


# -- command line -------------------------------------------------------------------


def fixture_path(tmp_path, name):
    p = tmp_path / f"{name}.gd"
    p.write_text(source(name))
    return str(p)


def test_cli_midline(tmp_path, capsys):
    svg = tmp_path / "out.svg"
    assert cli.run([fixture_path(tmp_path, "midline"), "--svg", str(svg)]) == 0
    out = capsys.readouterr().out
    assert "Parallel: DE, AB" in out and "Congruent: BD, CD" in out
    ET.fromstring(svg.read_text())


def test_cli_json(tmp_path, capsys):
    assert cli.run([fixture_path(tmp_path, "midline"), "--format", "json", "--show-trivial"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["target"] == "D" and len(doc["theorems"]) == 2 and len(doc["trivial"]) == 1


def test_cli_parse_error(tmp_path, capsys):
    p = tmp_path / "broken.gd"
    p.write_text("point A = free(0, 0)\npoint B = free(1, 0)\npoint C = free(2, 1)\npoint D = midpoint(B C)\n")
    assert cli.run([str(p)]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and ":4:22:" in err[0]


def test_cli_abort(tmp_path, capsys):
    assert cli.run([fixture_path(tmp_path, "euler"), "--timeout-ms", "1"]) == 3
    out = capsys.readouterr().out
    assert "Aborted" in out


def test_cli_abort_json_has_no_findings(tmp_path, capsys):
    assert cli.run([fixture_path(tmp_path, "euler"), "--timeout-ms", "1", "--format", "json"]) == 3
    doc = json.loads(capsys.readouterr().out)
    assert doc["aborted"] and doc["theorems"] == [] and doc["trivial"] == []


def test_cli_degenerate(tmp_path):
    p = tmp_path / "flat.gd"
    p.write_text(
        "point A = free(0, 0)\npoint B = free(1, 0)\npoint C = free(0, 1)\n"
        "point X = intersect(line(A, B), parallel_at(C, A, B))\ndiscover X\n"
    )
    assert cli.run([str(p)]) == 4


def test_cli_target_override(tmp_path, capsys):
    assert cli.run([fixture_path(tmp_path, "midline"), "--target", "E", "--target", "D"]) == 0
    out = capsys.readouterr().out
    assert out.index("Discover(E)") < out.index("Discover(D)")


def test_cli_unknown_flag(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.run([fixture_path(tmp_path, "midline"), "--colour"])
    assert e.value.code == 2


def test_cli_missing_file(tmp_path):
    assert cli.run([str(tmp_path / "nope.gd")]) == 2
