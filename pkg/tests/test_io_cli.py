"""Text formats and the command-line surface."""

from pathlib import Path

import pytest

from stonean_lab import fixtures
from stonean_lab.alg_io import (
    parse_algebra,
    parse_triple,
    serialize_algebra,
    serialize_triple,
)
from stonean_lab.cli import main
from stonean_lab.core import algebras_equal
from stonean_lab.errors import ParseError
from stonean_lab.triples import functor_T_object, triples_equal

FIXDIR = Path(__file__).resolve().parent.parent / "fixtures"


def test_algebra_roundtrip_all_fixtures():
    for alg in fixtures.all_fixtures().values():
        text = serialize_algebra(alg)
        assert algebras_equal(alg, parse_algebra(text))
        # serialization is bit-stable
        assert text == serialize_algebra(parse_algebra(text))


def test_shipped_fixture_files_match_definitions():
    for stem, alg in [
        ("g3", fixtures.g3()),
        ("l3", fixtures.l3()),
        ("b4", fixtures.b4()),
        ("h2", fixtures.h2()),
        ("trivial", fixtures.trivial()),
    ]:
        text = (FIXDIR / f"{stem}.alg").read_text()
        assert algebras_equal(parse_algebra(text), alg)


def test_comments_and_blank_lines():
    text = serialize_algebra(fixtures.g3())
    noisy = "# header comment\n\n" + text.replace("size 3", "size 3  # inline")
    assert algebras_equal(parse_algebra(noisy), fixtures.g3())


def test_parse_errors():
    good = serialize_algebra(fixtures.g3())
    with pytest.raises(ParseError):
        parse_algebra(good.replace("meet", "meat", 1))
    with pytest.raises(ParseError):
        parse_algebra(good + "stray\n")
    with pytest.raises(ParseError):
        parse_algebra("algebra x\nsize 2\nelements a\n")  # wrong name count
    with pytest.raises(ParseError):
        parse_algebra(good.replace("top 2", "top x", 1))
    with pytest.raises(ParseError):
        parse_algebra(good.replace("bottom 0", "bottom", 1))


def test_triple_roundtrip(g3):
    t = functor_T_object(g3)
    text = serialize_triple(t, "tg3")
    assert triples_equal(t, parse_triple(text))


def test_unbounded_file_has_no_bottom_line(h2):
    text = serialize_algebra(h2)
    assert "bottom" not in text
    assert not parse_algebra(text).bounded


# --- CLI ---------------------------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_validate(capsys):
    code, out, _ = run_cli(capsys, "validate", str(FIXDIR / "g3.alg"))
    assert code == 0 and out.strip() == "ok"


def test_cli_validate_bad_file(capsys):
    code, _, err = run_cli(capsys, "validate", "no-such-file.alg")
    assert code == 2 and "cannot read" in err


def test_cli_stonean(capsys):
    code, out, _ = run_cli(capsys, "stonean", "check", str(FIXDIR / "l3.alg"))
    assert code == 1 and out.strip() == "not stonean witness x=a"
    code, out, _ = run_cli(capsys, "stonean", "decompose", str(FIXDIR / "g3.alg"), "a")
    assert code == 0 and out.strip() == "b=top d=a"
    code, out, _ = run_cli(capsys, "stonean", "adjoin", str(FIXDIR / "h2.alg"))
    assert code == 0 and out.startswith("algebra S(H2)")


def test_cli_check_eq(capsys):
    code, out, _ = run_cli(capsys, "check-eq", str(FIXDIR / "l3.alg"), "-x v --x = T")
    assert code == 1 and out.strip() == "x=a"
    code, out, _ = run_cli(capsys, "check-eq", str(FIXDIR / "g3.alg"), "-x v --x = T")
    assert code == 0 and out.strip() == "satisfied"
    code, _, err = run_cli(capsys, "check-eq", str(FIXDIR / "g3.alg"), "x -> (")
    assert code == 2


def test_cli_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "roundtrip", str(FIXDIR / "g3.alg"))
    assert code == 0
    assert "sections size 3" in out
    code, out, _ = run_cli(capsys, "roundtrip", str(FIXDIR / "l3.alg"))
    assert code == 1 and "not stonean" in out


def test_cli_filters_quotient_crt(capsys):
    code, out, _ = run_cli(capsys, "filters", str(FIXDIR / "g3.alg"))
    assert code == 0
    assert out.splitlines() == ["G3 : 2", "G3 : 1 2", "G3 : 0 1 2"]

    code, out, _ = run_cli(capsys, "quotient", str(FIXDIR / "g3.alg"), "--filter", "1,2")
    assert code == 0 and "projection 0 1 1" in out

    code, out, _ = run_cli(
        capsys, "crt", str(FIXDIR / "b4.alg"),
        "--pair", "bot,bot:2,3", "--pair", "top,top:1,3",
    )
    assert code == 0 and out.strip() == "solution bot,top"

    code, out, _ = run_cli(
        capsys, "crt", str(FIXDIR / "b4.alg"),
        "--pair", "bot,bot:3", "--pair", "top,top:3",
    )
    assert code == 1 and "infeasible at pair (0, 1)" in out


def test_cli_triple_and_reconstruct(capsys, tmp_path):
    t = functor_T_object(fixtures.g3())
    path = tmp_path / "t.trp"
    path.write_text(serialize_triple(t))
    code, out, _ = run_cli(capsys, "triple", str(path))
    assert code == 0 and out.strip() == "ok"
    code, out, _ = run_cli(capsys, "reconstruct", str(path))
    assert code == 0
    assert "h 0 1" in out and "k 0 1" in out


def test_cli_iso(capsys):
    code, out, _ = run_cli(capsys, "iso", str(FIXDIR / "b4.alg"), str(FIXDIR / "b4.alg"))
    assert code == 0
    code, out, _ = run_cli(capsys, "iso", str(FIXDIR / "g3.alg"), str(FIXDIR / "b4.alg"))
    assert code == 1 and out.strip() == "not isomorphic"


def test_cli_enumerate_and_manifest(capsys, tmp_path):
    out_dir = tmp_path / "corpus"
    code, out, _ = run_cli(
        capsys, "enumerate", "-n", "4", "--stonean", "--out", str(out_dir)
    )
    assert code == 0
    assert out.splitlines() == ["size 2: 1", "size 3: 1", "size 4: 3", "total: 5"]
    manifest = (out_dir / "manifest.txt").read_text().splitlines()
    assert manifest == ["size 2: 1", "size 3: 1", "size 4: 3", "total: 5"]
    files = sorted(p.name for p in out_dir.glob("*.alg"))
    assert len(files) == 5
    # every written file parses and re-validates
    from stonean_lab.core import validate

    for p in sorted(out_dir.glob("*.alg")):
        assert validate(parse_algebra(p.read_text())).ok


def test_cli_output_is_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "enumerate", "-n", "4")
    code2, out2, _ = run_cli(capsys, "enumerate", "-n", "4")
    assert code1 == code2 == 0 and out1 == out2


def test_cli_free(capsys):
    code, out, _ = run_cli(capsys, "free", "--variety", "goedel", "-n", "1", "--oracle")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "assembled Free_goedel(1): size 6"
    assert "isomorphic: yes" in lines
    code, out, _ = run_cli(capsys, "free", "--variety", "product", "-n", "1")
    assert code == 1 and "infinite" in out
    code, out, _ = run_cli(capsys, "free", "--variety", "boolean", "-n", "2")
    assert code == 1 and "B2^(2^2)" in out


def test_cli_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2


def test_cli_malformed_file_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text(serialize_algebra(fixtures.g3()).replace("top 2", "top x"))
    code, _, err = run_cli(capsys, "validate", str(bad))
    assert code == 2 and "error:" in err


def test_entry_point_subprocess(tmp_path):
    # the installed module must work as a real process, not just in-process
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "stonean_lab.cli", "validate", str(FIXDIR / "g3.alg")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "ok"
    proc = subprocess.run(
        [sys.executable, "-m", "stonean_lab.cli", "check-eq", str(FIXDIR / "l3.alg"), "-x v --x = T"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and proc.stdout.strip() == "x=a"
