import json
import subprocess
import sys

import pytest

from cyclictri import triangulation_from_json
from cyclictri.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    assert run(capsys, "validate", DATA / "c84_cyclic.json") == (0, "VALID\n", "")


def test_validate_intertwining(capsys):
    code, _, err = run(capsys, "validate", DATA / "bad_pair.json")
    assert code == 3
    assert "intertwining pair 1,3,5 ≀ 2,4,6" in err


def test_validate_cardinality(capsys):
    code, _, err = run(capsys, "validate", DATA / "pentagon_empty_bad.json")
    assert code == 3 and "cardinality" in err


def test_validate_malformed(capsys):
    code, _, err = run(capsys, "validate", DATA / "malformed.json")
    assert code == 2 and "malformed JSON" in err


def test_validate_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2


def test_validate_bad_token(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text('{"m": 8, "d": 2, "arcs": ["13?"]}')
    assert run(capsys, "validate", f)[0] == 2


def test_validate_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO((DATA / "mut_left.json").read_text()))
    assert run(capsys, "validate", "-")[0] == 0


def test_quiver_lines(capsys):
    code, out, _ = run(capsys, "quiver", DATA / "c84_cyclic.json")
    assert code == 0
    assert out.splitlines() == [
        "1,3,5 -> 1,3,6", "1,3,6 -> 1,3,7", "1,3,7 -> 1,4,7",
        "1,4,7 -> 1,5,7", "1,5,7 -> 3,5,7", "3,5,7 -> 1,3,5",
    ]


@pytest.mark.parametrize("name,arrows,colours", [("c84_cyclic.json", 6, 3), ("c106_one_short.json", 11, 4)])
def test_quiver_dot(capsys, name, arrows, colours):
    code, out, _ = run(capsys, "quiver", "--dot", DATA / name)
    assert code == 0 and out.startswith("digraph")
    edges = [line for line in out.splitlines() if " -> " in line]
    assert len(edges) == arrows
    assert len({line.split("color=")[1] for line in edges}) == colours
    assert run(capsys, "quiver", "--dot", DATA / name)[1] == out


def test_quiver_dot_same_path_same_colour(capsys):
    _, out, _ = run(capsys, "quiver", "--dot", DATA / "c84_cyclic.json")
    colour = {tuple(line.split('"')[1:4:2]): line.split("color=")[1] for line in out.splitlines() if " -> " in line}
    assert colour[("357", "135")] == colour[("135", "136")]
    assert colour[("136", "137")] == colour[("137", "147")]


def test_quiver_dot_single_arc(capsys):
    _, out, _ = run(capsys, "quiver", "--dot", DATA / "square.json")
    assert '"13";' in out and " -> " not in out


def test_mutable(capsys):
    code, out, _ = run(capsys, "mutable", DATA / "c106_one_short.json")
    assert code == 0 and out.split() == ["1,3,6,8", "1,4,7,9", "3,5,7,10"]


def test_mutable_paths(capsys):
    _, out, _ = run(capsys, "mutable", "--paths", DATA / "c84_cyclic.json")
    assert "path: 3,5,7 -> 1,3,5 -> 1,3,6" in out


def test_flip_c106(capsys, tmp_path):
    out_file = tmp_path / "flipped.json"
    code, out, _ = run(capsys, "flip", DATA / "c106_one_short.json", "--arc", "1,3,6,8", "-o", out_file)
    assert code == 0
    assert out == "1,3,6,8 -> 2,5,7,9\n"
    assert triangulation_from_json(out_file.read_text()) == triangulation_from_json(
        (DATA / "c106_all_short.json").read_text()
    )


def test_flip_round_trip_byte_identical(capsys, tmp_path):
    src = tmp_path / "a.json"
    run(capsys, "flip", DATA / "mut_left.json", "--arc", "146", "-o", tmp_path / "tmp.json")
    run(capsys, "flip", tmp_path / "tmp.json", "--arc", "3,5,7", "-o", src)
    run(capsys, "flip", src, "--arc", "146", "-o", tmp_path / "b.json")
    run(capsys, "flip", tmp_path / "b.json", "--arc", "357", "-o", tmp_path / "c.json")
    assert src.read_bytes() == (tmp_path / "c.json").read_bytes()
    assert run(capsys, "validate", src)[0] == 0


def test_flip_stdout_payload(capsys):
    code, out, _ = run(capsys, "flip", DATA / "mut_left.json", "--arc", "135")
    lines = out.splitlines()
    assert lines[0] == "1,3,5 -> 2,4,6"
    assert json.loads(lines[1])["arcs"][-1] == [2, 4, 6]


def test_flip_not_mutable(capsys):
    code, out, err = run(capsys, "flip", DATA / "c84_cyclic.json", "--arc", "1,3,5")
    assert code == 4
    assert out.strip() == "3,5,7 -> 1,3,5 -> 1,3,6"
    assert "not mutable" in err


@pytest.mark.parametrize("arc", ["2,4,6", "1,2", "zz"])
def test_flip_bad_arc(capsys, arc):
    assert run(capsys, "flip", DATA / "c84_cyclic.json", "--arc", arc)[0] == 2


def test_interior(capsys):
    assert run(capsys, "interior", DATA / "c84_cyclic.json")[1] == "1,3,5,7\n"
    assert run(capsys, "interior", DATA / "mut_left.json")[1] == ""


def test_cut(capsys):
    code, out, _ = run(capsys, "cut", DATA / "mut_left.json")
    assert code == 0 and out.split() == ["002->101", "011->110", "101->200"]
    code, out, _ = run(capsys, "cut", "--json", DATA / "mut_left.json")
    assert json.loads(out)["d"] == 2


def test_cut_cyclic(capsys):
    code, _, err = run(capsys, "cut", DATA / "c84_cyclic.json")
    assert code == 5 and "cyclic quiver" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--m", 6, "--d", 1)
    assert code == 0 and len(out.splitlines()) == 14
    assert run(capsys, "enumerate", "--m", 8, "--d", 2, "--interior-free", "--count")[1] == "32\n"


def test_enumerate_budget(capsys):
    code, _, err = run(capsys, "enumerate", "--m", 9, "--d", 2, "--budget", 10)
    assert code == 6 and "budget" not in err or code == 6


def test_flipgraph(capsys):
    code, out, _ = run(capsys, "flipgraph", "--m", 6, "--d", 1)
    assert code == 0 and "nodes: 14" in out and "edges: 21" in out
    assert run(capsys, "flipgraph", "--m", 6, "--d", 1, "--dot")[1].startswith("graph")
    assert len(json.loads(run(capsys, "flipgraph", "--m", 6, "--d", 1, "--json")[1])["nodes"]) == 14


def test_check_b(capsys):
    code, out, _ = run(capsys, "check", "--m", 8, "--d", 2, "--theorem", "B")
    assert code == 0 and out.splitlines()[-1] == "OK"


def test_check_cuts_polygon_fails(capsys):
    code, out, _ = run(capsys, "check", "--m", 6, "--d", 1, "--theorem", "cuts")
    assert code == 1 and out.splitlines()[-1] == "FAIL"


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["flip"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cyclictri.cli", "validate", str(DATA / "c106_one_short.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "VALID\n"
