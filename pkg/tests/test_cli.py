"""Command line: round trips, exit statuses, report determinism."""

from __future__ import annotations

import json

import pytest

from choiceless_lab.cli import (
    EXIT_GUARD,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    dispatch,
)


def invoke(argv, capsys):
    code, report = dispatch(argv)
    capsys.readouterr()  # keep test output clean
    return code, report


def test_gen_and_solve_matching_roundtrip(tmp_path, capsys):
    path = tmp_path / "g.str"
    code, report = invoke(
        [
            "gen",
            "bipartite",
            "--na",
            "3",
            "--nb",
            "3",
            "--density",
            "0.9",
            "--seed",
            "7",
            "--file",
            str(path),
        ],
        capsys,
    )
    assert code == EXIT_OK
    assert path.exists()
    code, report = invoke(["solve", "matching", "--input", str(path)], capsys)
    assert code == EXIT_OK
    assert report["result"]["verdict"] in ("yes", "no")
    code, report = invoke(["solve", "matching", "--input", str(path), "--max-size"], capsys)
    assert code == EXIT_OK
    assert 0 <= report["result"]["max_matching"] <= 3


def test_solve_matching_gang_instance(tmp_path, capsys):
    text = (
        "atoms: a1 a2 a3 a4 b1 b2 b3 b4\n"
        "rel InA/1: (a1) (a2) (a3) (a4)\n"
        "rel InB/1: (b1) (b2) (b3) (b4)\n"
        "rel R/2: (a2,b1) (a2,b2) (a1,b3) (a1,b4) (a3,b3) (a3,b4) (a4,b3) (a4,b4)\n"
    )
    path = tmp_path / "gang.str"
    path.write_text(text)
    code, report = invoke(["solve", "matching", "--input", str(path)], capsys)
    assert code == EXIT_OK
    assert report["result"]["verdict"] == "no"
    code, report = invoke(["solve", "matching", "--input", str(path), "--max-size"], capsys)
    assert report["result"]["max_matching"] == 3


def test_gen_cfi_classify_roundtrip(tmp_path, capsys):
    for twist, expected in (("even", 0), ("odd", 1), ("v0,v1", 0)):
        path = tmp_path / f"cfi_{expected}_{twist[0]}.str"
        code, _ = invoke(
            ["gen", "cfi", "--m", "2", "--twist", twist, "--file", str(path)], capsys
        )
        assert code == EXIT_OK
        code, report = invoke(["solve", "cfi-classify", "--input", str(path)], capsys)
        assert code == EXIT_OK
        assert report["result"]["class"] == expected


def test_gen_cfi_padded_and_iso(tmp_path, capsys):
    a = tmp_path / "a.str"
    b = tmp_path / "b.str"
    invoke(["gen", "cfi", "--m", "2", "--twist", "odd", "--file", str(a)], capsys)
    invoke(["gen", "cfi", "--m", "2", "--twist", "v0,v1,v2", "--file", str(b)], capsys)
    code, report = invoke(["iso", "cfi", "--a", str(a), "--b", str(b)], capsys)
    assert code == EXIT_OK
    assert report["result"]["isomorphic"] is True
    padded = tmp_path / "p.str"
    code, report = invoke(
        ["gen", "cfi", "--m", "2", "--twist", "even", "--pad", "--file", str(padded)],
        capsys,
    )
    assert code == EXIT_OK
    assert report["result"]["padding"] == 16
    code, report = invoke(["solve", "cfi-classify", "--input", str(padded)], capsys)
    assert report["result"]["class"] == 0


def test_gen_multipede_validate_and_iso(tmp_path, capsys):
    a = tmp_path / "a.str"
    code, report = invoke(
        [
            "gen",
            "multipede",
            "--segments",
            "5",
            "--hyperedges",
            "6",
            "--seed",
            "3",
            "--shoe",
            "--file",
            str(a),
        ],
        capsys,
    )
    assert code == EXIT_OK
    code, report = invoke(["validate", "multipede", "--input", str(a)], capsys)
    assert code == EXIT_OK
    assert report["result"]["valid"] is True
    assert report["result"]["has_shoe"] is True
    code, report = invoke(["iso", "multipede3", "--a", str(a), "--b", str(a)], capsys)
    assert code == EXIT_OK
    assert report["result"]["isomorphic"] is True
    code, report = invoke(["iso", "multipede4", "--a", str(a), "--b", str(a)], capsys)
    assert code == EXIT_OK
    assert report["result"]["isomorphic"] is True


def test_validate_structure(tmp_path, capsys):
    path = tmp_path / "s.str"
    path.write_text("atoms: x y\nrel E/2: (x,y)\n")
    code, report = invoke(["validate", "structure", "--input", str(path)], capsys)
    assert code == EXIT_OK
    assert report["result"]["atoms"] == 2
    assert report["result"]["symbols"]["E"]["tuples"] == 1


def test_solve_det_field_methods(tmp_path, capsys):
    path = tmp_path / "m.mat"
    path.write_text("field 2\nrows r0 r1\nsquare\nr0 r1 1\nr1 r0 1\nr1 r1 1\n")
    code, report = invoke(["solve", "det", "--matrix", str(path)], capsys)
    assert code == EXIT_OK
    assert report["result"] == {"method": "power", "nonsingular": True}
    code, report = invoke(
        ["solve", "det", "--matrix", str(path), "--method", "gauss"], capsys
    )
    assert report["result"]["rank"] == 2
    assert report["result"]["nonsingular"] is True


def test_solve_det_integer_crt(tmp_path, capsys):
    path = tmp_path / "z.mat"
    path.write_text("ring Z\nrows i0 i1\nsquare\ni0 i0 2\ni1 i1 3\n")
    code, report = invoke(
        ["solve", "det", "--matrix", str(path), "--prime-divisors"], capsys
    )
    assert code == EXIT_OK
    assert report["result"]["nonsingular"] is True
    assert report["result"]["prime_divisors"][:2] == [2, 3]
    assert report["result"]["determinant_zero"] is False
    singular = tmp_path / "sing.mat"
    singular.write_text("ring Z\nrows i0 i1\nsquare\ni0 i0 2\ni0 i1 4\ni1 i0 1\ni1 i1 2\n")
    code, report = invoke(
        ["solve", "det", "--matrix", str(singular), "--prime-divisors"], capsys
    )
    assert report["result"]["nonsingular"] is False
    assert report["result"]["determinant_zero"] is True


def test_gen_matrix_and_experiment(tmp_path, capsys):
    path = tmp_path / "r.mat"
    code, _ = invoke(
        ["gen", "matrix", "--q", "2", "--n", "4", "--seed", "5", "--file", str(path)],
        capsys,
    )
    assert code == EXIT_OK
    code, report = invoke(["solve", "det", "--matrix", str(path)], capsys)
    assert code == EXIT_OK
    code, report = invoke(
        [
            "experiment",
            "det-frequency",
            "--q",
            "2",
            "--n",
            "10",
            "--trials",
            "400",
            "--seed",
            "1",
        ],
        capsys,
    )
    assert code == EXIT_OK
    assert 0.1 < report["result"]["fraction"] < 0.5


def test_bgs_run_cli(tmp_path, capsys):
    program = tmp_path / "flag.bgs"
    program.write_text(
        "#steps 3\n#active 10 2\n"
        "do in parallel\n"
        "  Output := 0 in { 0 : v in Atoms : Mark(v) };\n"
        "  Halt := true\n"
        "enddo\n"
    )
    structure = tmp_path / "in.str"
    structure.write_text("atoms: x y\nrel Mark/1: (y)\n")
    code, report = invoke(
        ["bgs", "run", "--program", str(program), "--input", str(structure)], capsys
    )
    assert code == EXIT_OK
    assert report["result"]["verdict"] == "accept"
    assert report["result"]["steps"] == 1


def test_exit_statuses(tmp_path, capsys):
    code, report = invoke(["solve", "nonsense"], capsys)
    assert code == EXIT_USAGE
    assert report["error"]["kind"] == "usage"

    bad = tmp_path / "bad.str"
    bad.write_text("nonsense line\n")
    code, report = invoke(["solve", "matching", "--input", str(bad)], capsys)
    assert code == EXIT_PARSE
    assert report["error"]["kind"] == "parse"

    code, report = invoke(["solve", "matching", "--input", str(tmp_path / "nope.str")], capsys)
    assert code == EXIT_PARSE

    big = tmp_path / "big.str"
    code, report = invoke(
        ["gen", "cfi", "--m", "7", "--twist", "even", "--pad", "--file", str(big)],
        capsys,
    )
    assert code == EXIT_GUARD
    assert report["error"]["kind"] == "guard"

    code, report = invoke(
        ["gen", "bipartite", "--na", "2", "--nb", "2", "--file", str(tmp_path / "x.str")],
        capsys,
    )
    assert code == EXIT_USAGE  # seed is mandatory


def test_report_determinism_modulo_timing(tmp_path, capsys):
    path = tmp_path / "g.str"
    invoke(
        ["gen", "bipartite", "--na", "2", "--nb", "2", "--seed", "1", "--file", str(path)],
        capsys,
    )
    _, r1 = invoke(["solve", "matching", "--input", str(path)], capsys)
    _, r2 = invoke(["solve", "matching", "--input", str(path)], capsys)
    r1.pop("timing_seconds")
    r2.pop("timing_seconds")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "g.str"
    invoke(
        ["gen", "bipartite", "--na", "2", "--nb", "2", "--seed", "1", "--file", str(path)],
        capsys,
    )
    out = tmp_path / "report.json"
    code, _ = invoke(
        ["--out", str(out), "solve", "matching", "--input", str(path)], capsys
    )
    assert code == EXIT_OK
    loaded = json.loads(out.read_text())
    assert loaded["result"]["verdict"] in ("yes", "no")


def test_generated_multipede_file_reparses_bytewise(tmp_path, capsys):
    a = tmp_path / "a.str"
    b = tmp_path / "b.str"
    args = ["gen", "multipede", "--segments", "4", "--hyperedges", "3", "--seed", "9"]
    invoke(args + ["--file", str(a)], capsys)
    invoke(args + ["--file", str(b)], capsys)
    assert a.read_text() == b.read_text()
