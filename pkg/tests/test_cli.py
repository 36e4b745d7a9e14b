import pytest

from betweenness.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_frame_interpret_iso(tmp_path, capsys):
    pts, rel = tmp_path / "f.pts", tmp_path / "t.rel"
    assert run(capsys, "frame", "--m", "3", "--n", "2", "--out", str(pts))[0] == 0
    assert "point f2_1" in pts.read_text()
    assert run(capsys, "interpret", "--structure", str(pts), "--kind", "finite", "--out", str(rel))[0] == 0
    code, out = run(capsys, "iso", "--a", str(rel), "--b", "builtin:torus:3x2")
    assert code == 0 and "isomorphic: true" in out.out
    code, out = run(capsys, "iso", "--a", str(rel), "--b", "builtin:torus:3x2", "--map", "search")
    assert code == 0 and "0_0 -> " in out.out
    code, out = run(capsys, "iso", "--a", str(rel), "--b", "builtin:torus:2x3")
    assert code == 1 and "false" in out.out


def test_reduce(tmp_path, capsys):
    tiles, summary = tmp_path / "ab.tiles", tmp_path / "s.txt"
    tiles.write_text("tile A 0 0 1 0\ntile B 1 0 0 0\n")
    code, out = run(capsys, "reduce", "--tiles", str(tiles), "--bound", "2", "--summary", str(summary))
    assert code == 0
    assert "1x2: logic=tilable solver=tilable agree" in out.out
    assert summary.read_text().startswith("agreement=true")


def test_tile_solve(tmp_path, capsys):
    tiles = tmp_path / "ab.tiles"
    tiles.write_text("tile A 0 0 1 0\ntile B 1 0 0 0\n")
    code, out = run(capsys, "tile", "solve", "--tiles", str(tiles), "--periodic", "--bound", "3")
    assert code == 0 and out.out.startswith("tilable: true (1x2)")
    code, out = run(capsys, "tile", "solve", "--tiles", str(tiles), "--torus", "1x1")
    assert code == 1 and "false" in out.out
    code, out = run(capsys, "tile", "solve", "--tiles", str(tiles), "--grid", "2x1")
    assert code == 0


def test_eval(capsys):
    code, out = run(capsys, "eval", "--structure", "builtin:torus:2x2", "--formula", "A x. E y. H(x,y)")
    assert code == 0 and out.out.strip() == "true"
    code, out = run(capsys, "eval", "--structure", "builtin:torus:2x2", "--formula", "X(x) & H(x,y)",
                    "--assign", "x=0_0", "--assign", "y=1_0", "--assign", "X=0_0,1_1")
    assert out.out.strip() == "true"
    code, out = run(capsys, "eval", "--structure", "builtin:torus:5x4", "--formula", "E2 X. A x. X(x)")
    assert code == 3 and "budget" in out.err
    code, out = run(capsys, "eval", "--structure", "builtin:torus:2x2", "--formula", "E x H(x,x)")
    assert code == 2 and "error" in out.err


@pytest.mark.parametrize("what", ["collinear", "parallel", "basis", "flat", "opentriangle", "finiteness",
                                  "omega", "frame-sentence"])
def test_gen(capsys, what):
    from betweenness.syntax import Vocabulary, parse_formula

    code, out = run(capsys, "gen", "--what", what, "--k", "2", "--n", "2")
    assert code == 0
    parse_formula(out.out.strip(), Vocabulary({"beta": 3}, {"P", "Q"}))


def test_gen_frame_formulas_and_wmso(capsys):
    code, out = run(capsys, "gen", "--what", "frame-formulas", "--kind", "infinite")
    assert code == 0 and out.out.count("\n") == 5
    code, out = run(capsys, "gen", "--what", "wmso2mso", "--n", "1", "--formula", "Ew X. E x. X(x)")
    assert code == 0 and out.out.startswith("E2 X.")
    code, out = run(capsys, "gen", "--what", "wmso2mso")
    assert code == 2
