from __future__ import annotations

import pytest

from branchdec.cli import format_decomposition, main, parse_decomposition
from branchdec.core import ValidationError, caterpillar
from branchdec.instances import format_graph, format_matrix, format_table
from branchdec.testkit import random_gf2_matrix, random_graph, random_table

C4_TEXT = "p graph 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"


@pytest.fixture
def c4_file(tmp_path):
    p = tmp_path / "c4.g"
    p.write_text(C4_TEXT)
    return str(p)


def test_search_c4(c4_file, tmp_path, capsys):
    out = tmp_path / "c4.dec"
    assert main(["decompose", "--kind", "carving", "--input", c4_file, "--search", "--output", str(out)]) == 0
    assert "width=2" in capsys.readouterr().out
    text = out.read_text()
    assert text.startswith("d branchdec 4 6\n") and text.endswith("w 2\n")


def test_refusal(c4_file, capsys):
    assert main(["decompose", "--kind", "carving", "--input", c4_file, "--k", "1"]) == 2
    assert "branch-width > 1" in capsys.readouterr().out


def test_bad_table(tmp_path, capsys):
    p = tmp_path / "bad.tbl"
    p.write_text("p table 3\n0 1 1 3 3 1 1 0\n")
    assert main(["decompose", "--kind", "table", "--input", str(p), "--search"]) == 3
    assert "submodularity" in capsys.readouterr().err


def test_stats_lines(c4_file, capsys):
    assert main(["decompose", "--kind", "carving", "--input", c4_file, "--k", "2", "--stats"]) == 0
    lines = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines() if "=" in line)
    assert int(lines["oracle_calls"]) > 0
    assert int(lines["peak_cache_size"]) >= int(lines["oracle_calls"])


def test_verify_caterpillar(c4_file, tmp_path, capsys):
    p = tmp_path / "cat.dec"
    p.write_text(format_decomposition(caterpillar([0, 1, 2, 3]), 4, 2))
    assert main(["verify", "--kind", "carving", "--input", c4_file, "--decomposition", str(p)]) == 0
    assert "width=2" in capsys.readouterr().out
    assert main(["verify", "--kind", "carving", "--input", c4_file, "--decomposition", str(p), "--k", "1"]) == 2


def test_verify_degree_two(c4_file, tmp_path, capsys):
    p = tmp_path / "bad.dec"
    p.write_text("d branchdec 4 7\nt 0 1\nt 1 2\nt 2 3\nt 2 4\nt 3 5\nt 3 6\n"
                 "l 0 0\nl 4 1\nl 5 2\nl 6 3\nw 2\n")
    assert main(["verify", "--kind", "carving", "--input", c4_file, "--decomposition", str(p)]) == 3
    assert "degree 2 at node 1" in capsys.readouterr().out


def test_verify_declared_width_mismatch(c4_file, tmp_path):
    p = tmp_path / "lie.dec"
    p.write_text(format_decomposition(caterpillar([0, 1, 2, 3]), 4, 1))
    assert main(["verify", "--kind", "carving", "--input", c4_file, "--decomposition", str(p)]) == 3


def test_missing_input(capsys):
    assert main(["decompose", "--kind", "carving", "--input", "/nonexistent/x.g", "--k", "1"]) == 3


def test_parse_rejects_garbage():
    with pytest.raises(ValidationError, match="line 2"):
        parse_decomposition("d branchdec 2 2\nq 1 2\n")
    with pytest.raises(ValidationError, match="header"):
        parse_decomposition("t 0 1\n")


def test_single_element_file():
    assert parse_decomposition(format_decomposition(None, 1, 0)) == (None, 1, 0)


@pytest.mark.parametrize("kind, text", [
    ("carving", format_graph(random_graph(1, 9))),
    ("branchwidth", format_graph(random_graph(2, 6))),
    ("rankwidth", format_graph(random_graph(3, 9))),
    ("matroid-gf2", format_matrix(random_gf2_matrix(4, 3, 9))),
    ("matroid-graphic", format_graph(random_graph(5, 6))),
    ("table", format_table(random_table(6, 7).values)),
])
def test_roundtrip_and_determinism(kind, text, tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    inst.write_text(text)
    outs = []
    for i in range(2):
        out = tmp_path / f"out{i}.dec"
        args = ["decompose", "--kind", kind, "--input", str(inst), "--search", "--seed", "5",
                "--base-threshold", "4", "--output", str(out)]
        assert main(args) == 0
        outs.append(out.read_bytes())
        assert main(["verify", "--kind", kind, "--input", str(inst), "--decomposition", str(out)]) == 0
    assert outs[0] == outs[1]
