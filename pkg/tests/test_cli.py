import json
import subprocess
import sys

import pytest

from moufang.cli import main
from moufang.loopcore import is_moufang, load_tbl


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tables(tmp_path, capsys):
    paths = {}
    for name, argv in {
        "z6": ("gen", "group", "cyclic", 6),
        "d8": ("gen", "group", "dihedral", 8),
        "s6": ("gen", "group", "symmetric", 6),
    }.items():
        paths[name] = tmp_path / f"{name}.tbl"
        assert run(capsys, *argv, "-o", paths[name])[0] == 0
    for base in ("d8", "s6"):
        paths[f"m{base}"] = tmp_path / f"m{base}.tbl"
        assert run(capsys, "gen", "chein", paths[base], "-o", paths[f"m{base}"])[0] == 0
    return paths


def _flatten(doc, prefix=()):
    for k, v in doc.items():
        if isinstance(v, dict):
            yield from _flatten(v, prefix + (k,))
        elif not (isinstance(v, list) and v and isinstance(v[0], dict)):
            yield prefix + (k,), v


def _parse_text(text):
    out, stack = {}, []
    for line in text.splitlines():
        if line.lstrip().startswith("- "):
            continue
        depth = (len(line) - len(line.lstrip())) // 2
        key, _, value = line.strip().partition(":")
        stack = stack[:depth] + [key]
        if value.strip():
            out[tuple(stack)] = value.strip()
    return out


def _render(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, list):
        return "[" + ", ".join(map(_render, v)) + "]"
    return str(v)


def test_gen_group(tables):
    G = load_tbl(tables["d8"])
    assert G.n == 8


def test_gen_chein(tables):
    Q = load_tbl(tables["md8"])
    assert Q.n == 16 and is_moufang(Q)


def test_gen_chein_rejects_non_group(tmp_path, capsys, tables):
    code, _, err = run(capsys, "gen", "chein", tables["md8"])
    assert code == 2 and "NotAGroup" in err


def test_gen_extension(tmp_path, capsys):
    out = tmp_path / "e.tbl"
    code, _, _ = run(capsys, "gen", "extension", "--base", "cyclic:4", "--factor", "cyclic:2", "--seed", 3, "-o", out)
    assert code == 0 and load_tbl(out).n == 8
    code, _, err = run(capsys, "gen", "extension", "--base", "cyclic", "--factor", "cyclic:2")
    assert code == 2


def test_analyze_z6(capsys, tables):
    code, out, _ = run(capsys, "analyze", tables["z6"], "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["moufang"] and doc["classically_solvable"]["verdict"] and doc["congruence_solvable"]["verdict"]


def test_analyze_chein_s3(capsys, tables):
    code, out, _ = run(capsys, "analyze", tables["ms6"], "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["moufang"] is True and doc["three_divisible"] is False


def test_analyze_corrupt(tmp_path, capsys):
    bad = tmp_path / "bad.tbl"
    bad.write_text("3\n0 1 2\n1 1 0\n2 0 1\n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "NotLatinSquare" in err and "cell (1,1)" in err


def test_analyze_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.tbl"
    bad.write_text("2\n0 1\n1\n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "line 3" in err


def test_analyze_missing_file(tmp_path, capsys):
    assert run(capsys, "analyze", tmp_path / "none.tbl")[0] == 2


def test_analyze_cap(capsys, tables):
    code, _, err = run(capsys, "analyze", tables["md8"], "--max-group-order", 100)
    assert code == 3 and "100" in err


def test_text_and_json_agree(capsys, tables):
    _, js, _ = run(capsys, "analyze", tables["md8"], "--json")
    _, text, _ = run(capsys, "analyze", tables["md8"])
    flat = dict(_flatten(json.loads(js)))
    parsed = _parse_text(text)
    assert set(flat) == set(parsed)
    for key, value in flat.items():
        assert parsed[key] == _render(value), key


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm-5.7", "--corpus", "three-divisible", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["seed"] == 20240601


def test_verify_deterministic(capsys):
    argv = ("verify", "--suite", "thm-2.5", "--json", "--seed", 11)
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_verify_unknown(capsys):
    code, _, err = run(capsys, "verify", "--suite", "unknown-name")
    assert code == 2 and "UnknownSuite" in err


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "prop-2.4")
    assert code == 0 and "suite=prop-2.4" in out and "ok: true" in out


def test_console_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "moufang", "verify", "--suite", "prop-2.4", "--json"]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout and json.loads(a.stdout)["ok"]
