"""Command-line behaviour: output, exit codes and the format header."""

import csv
import io

import pytest

from exactjoin.cli import main

SHAPES = {
    "tri1": "cpoly { x1 >= 0; x2 >= 0; x1 + x2 <= 2 }",
    "tri2": "cpoly { x1 <= 2; x2 >= 0; x1 - x2 >= 0 }",
    "bd3": "bds { 0 <= x1 <= 3; 0 <= x2 <= 2; x1 - x2 <= 2 }",
    "bd4": "bds { 3 <= x1 <= 6; 0 <= x2 <= 2 }",
    "ibd3": "int_bds { 0 <= x1 <= 3; 0 <= x2 <= 2; x1 - x2 <= 2 }",
    "ibd4": "int_bds { 3 <= x1 <= 6; 0 <= x2 <= 2 }",
    "b1": "box { x1 in [0, 1]; x2 in [0, 1] }",
    "b2": "box { x1 in [1, 2]; x2 in [0, 1] }",
    "line": "box { x1 in [0, 1] }",
    "open": "cpoly { x1 < 1 }",
    "bad": "cpoly { x1 <=> 1 }",
    "pow": "powerset { box { x1 in [0, 1] }; box { x1 in [1, 2] }; box { x1 in [5, 6] } }",
    "gen": "nncpoly_gen { point(0, 0); closure_point(1, 0); ray(0, 1) }",
}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in SHAPES.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text + "\n")
        paths[name] = str(p)
    return paths


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestExactJoin:
    def test_inexact_with_verified_certificate(self, files):
        code, text = run("exact-join", files["tri1"], files["tri2"])
        assert code == 1
        lines = text.splitlines()
        assert lines[0] == "format: v1"
        assert lines[1] == "inexact"
        assert "witness: constraint x1 + x2 <= 2 and generator point(0, 2) of operand 1" in text
        assert "certificate: point (1, 2)" in text
        assert "verified: yes" in text

    def test_exact(self, files):
        code, text = run("exact-join", files["b1"], files["b2"])
        assert code == 0 and text.splitlines()[1] == "exact"

    def test_integer_domain_changes_the_answer(self, files):
        assert run("exact-join", files["bd3"], files["bd4"])[0] == 1
        assert run("exact-join", files["ibd3"], files["ibd4"])[0] == 0
        assert run("exact-join", "--domain", "int_bds", files["bd3"], files["bd4"])[0] == 0


class TestExitCodes:
    def test_parse_error(self, files, capsys):
        assert run("exact-join", files["bad"], files["tri1"])[0] == 3
        assert "bad.txt" in capsys.readouterr().err

    def test_dimension_mismatch(self, files):
        assert run("exact-join", files["line"], files["b1"])[0] == 4

    def test_domain_form(self, files):
        assert run("exact-join", files["open"], files["tri1"])[0] == 5

    def test_missing_file(self, files, tmp_path):
        assert run("exact-join", str(tmp_path / "nope.txt"), files["tri1"])[0] == 2

    def test_unknown_format_version(self, files, monkeypatch):
        monkeypatch.setenv("EXACTJOIN_FORMAT_VERSION", "v9")
        assert run("exact-join", files["b1"], files["b2"])[0] == 2

    def test_numeric_format_version_is_accepted(self, files, monkeypatch):
        monkeypatch.setenv("EXACTJOIN_FORMAT_VERSION", "1")
        code, text = run("exact-join", files["b1"], files["b2"])
        assert code == 0 and text.startswith("format: v1")

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            run("exact-join")
        assert info.value.code == 2


class TestOracle:
    def test_complement_agrees(self, files):
        code, text = run("oracle", files["tri1"], files["tri2"])
        assert code == 1
        assert "oracle: inexact" in text and "agree: yes" in text

    def test_grid_finds_the_gap(self, files):
        code, text = run("oracle", "--mode", "grid", files["bd3"], files["bd4"])
        assert code == 1
        assert "counterexample: (5/2, 0)" in text

    def test_integer_grid(self, files):
        code, text = run("oracle", "--mode", "grid", files["ibd3"], files["ibd4"])
        assert code == 0 and "oracle: exact" in text and "agree: yes" in text

    def test_explicit_bbox_and_step(self, files):
        code, text = run("oracle", "--mode", "grid", "--step", "1/4", "--bbox", "0:6,0:2",
                         files["bd3"], files["bd4"])
        assert code == 1 and "agree: yes" in text


class TestMerge:
    def test_pairwise(self, files):
        code, text = run("merge", files["pow"])
        assert code == 0
        assert "stats: before=3 after=2" in text

    def test_full(self, files):
        code, text = run("merge", "--mode", "full", files["pow"])
        assert code == 0 and "after=2" in text


class TestConvert:
    def test_round_trip(self, files):
        code, text = run("convert", files["gen"])
        assert code == 0
        assert "round-trip: ok" in text
        assert "nncpoly" in text

    def test_constraints_to_generators(self, files):
        code, text = run("convert", files["tri1"])
        assert code == 0 and "cpoly_gen" in text and "round-trip: ok" in text


def test_fuzz_small(tmp_path):
    code, text = run("fuzz-conjecture", "--trials", "20", "--seed", "3", "--dump-dir", str(tmp_path))
    assert code == 0 and "trials=20" in text


def test_bench_csv():
    code, text = run("bench", "--domain", "box", "--sizes", "10,20", "--repeats", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text.split("\n", 1)[1])))
    assert [r["n"] for r in rows] == ["10", "20"]
    assert all(r["domain"] == "box" for r in rows)
