import io
import subprocess
import sys
from pathlib import Path

import pytest

from specseq import cli
from specseq.errors import NotWellDefined, ParseError
from specseq.spectral import LimitReport

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


def run_text(name, **kwargs):
    text = (SCENARIOS / name).read_text()
    out = io.StringIO()
    code = cli.run(text, out=out, **kwargs)
    return code, out.getvalue()


def test_simplicial_scenario_golden():
    code, got = run_text("simplicial_filtration.scn")
    assert code == 0
    expected = (SCENARIOS / "simplicial_filtration.expected").read_text()
    assert got == expected


def test_graded_scenario_golden():
    code, got = run_text("graded_cancellation.scn")
    assert code == 0
    expected = (SCENARIOS / "graded_cancellation.expected").read_text()
    assert got == expected


def test_output_is_deterministic_across_threads():
    base = run_text("graded_cancellation.scn")
    threaded = run_text("graded_cancellation.scn", threads=4)
    assert base == threaded
    again = run_text("graded_cancellation.scn", threads=4)
    assert again == threaded


def test_machine_page_round_trip():
    code, got = run_text("graded_cancellation.scn", machine=True)
    assert code == 0
    block = "\n".join(
        line
        for line in got.splitlines()
        if line.startswith("1 ") and line.split()[-1] not in ("ok", "FAIL")
    )
    parsed = cli.parse_machine_page(block)
    assert parsed[(1, 1, 1)] == (6, {3: 6})
    assert parsed[(1, 3, 0)] == (8, {3: 8})
    assert len(parsed) == 12


def test_machine_differential_uses_matrix_blocks():
    code, got = run_text("simplicial_filtration.scn", machine=True)
    assert code == 0
    assert "differential 2 2 -1 : 1 x 1" in got
    assert "1 1 QQ" in got


def test_parse_machine_page_rejects_garbage():
    with pytest.raises(ParseError):
        cli.parse_machine_page("1 2 3")
    with pytest.raises(ParseError):
        cli.parse_machine_page("1 2 3 4 5")
    with pytest.raises(ParseError):
        cli.parse_machine_page("1 2 3 2 0:1")


def test_check_flag_prints_marker():
    code, got = run_text("simplicial_filtration.scn", check=True)
    assert code == 0
    assert got.splitlines()[0] == "check ok"


def test_field_override():
    text = (SCENARIOS / "simplicial_filtration.scn").read_text()
    out = io.StringIO()
    code = cli.run(text, field_override="F7", out=out)
    assert code == 0
    # same entries over a small prime field
    assert "q=-1" in out.getvalue()


def test_scenario_parse_errors():
    with pytest.raises(ParseError):
        cli.parse_scenario("field QQ\nfield QQ\n")
    with pytest.raises(ParseError):
        cli.parse_scenario("unknown line\n")
    with pytest.raises(ParseError):
        cli.parse_scenario("build nonsense\nend-build\n")
    with pytest.raises(ParseError):
        cli.parse_scenario("build simplicial\n")  # never closed
    sc = "build simplicial\nend-build\nqueries\npage -1\nend-queries\n"
    with pytest.raises(ParseError):
        cli.parse_scenario(sc)
    sc = "build simplicial\nend-build\nqueries\ndifferential 0 1 1\nend-queries\n"
    with pytest.raises(ParseError):
        cli.parse_scenario(sc)
    sc = "build simplicial\nend-build\nqueries\nwat\nend-queries\n"
    with pytest.raises(ParseError):
        cli.parse_scenario(sc)


def test_missing_field_for_simplicial_is_a_parse_error():
    text = "build simplicial\nsimplicial a\nfacet a\nend-simplicial\nend-build\nqueries\npage 1\nend-queries\n"
    with pytest.raises(ParseError):
        cli.run(text, out=io.StringIO())


def test_field_mismatch_rejected():
    text = (
        "field F7\n"
        "build truncation\n"
        "complex QQ 0 0\n"
        "term 0 : a\n"
        "end-complex\n"
        "end-build\n"
        "queries\npage 1\nend-queries\n"
    )
    with pytest.raises(ParseError):
        cli.run(text, out=io.StringIO())


def test_truncation_build_runs():
    text = (
        "build truncation\n"
        "complex QQ 0 1\n"
        "term 0 : a b\n"
        "term 1 : e\n"
        "diff 1\n"
        "2 1 QQ\n"
        "0 0 -1\n"
        "1 0 1\n"
        "end\n"
        "end-complex\n"
        "end-build\n"
        "queries\npage 1\ninfinity\ncompare\nend-queries\n"
    )
    out = io.StringIO()
    assert cli.run(text, out=out) == 0
    assert "compare ok" in out.getvalue()


def test_build_error_exits_two():
    # facets must be faces of the listed vertex set
    text = (
        "field QQ\n"
        "build simplicial\n"
        "simplicial a\n"
        "facet a b\n"
        "end-simplicial\n"
        "end-build\n"
        "queries\npage 1\nend-queries\n"
    )
    with pytest.raises(ParseError):
        cli.run(text, out=io.StringIO())


def test_non_nested_simplicial_build_exits_two(capsys):
    # neither complex contains the other
    text = (
        "field QQ\n"
        "build simplicial\n"
        "simplicial a b\n"
        "facet a b\n"
        "end-simplicial\n"
        "simplicial a b\n"
        "facet a\n"
        "end-simplicial\n"
        "simplicial a b\n"
        "facet b\n"
        "end-simplicial\n"
        "end-build\n"
        "queries\npage 1\nend-queries\n"
    )
    code = cli.run(text, out=io.StringIO())
    assert code == 2


def test_comparison_failure_exits_one(monkeypatch):
    real = cli.SpectralSequence

    class Lying(real):
        def limit_comparison(self, strict=True):
            return LimitReport([(0, 0, 1, 2, False)])

    monkeypatch.setattr(cli, "SpectralSequence", Lying)
    code, got = run_text("simplicial_filtration.scn")
    assert code == 1
    assert "compare FAIL" in got


def test_not_well_defined_exits_one(monkeypatch):
    real = cli.SpectralSequence

    class Broken(real):
        def differential(self, r, p, q):
            raise NotWellDefined("forced")

    monkeypatch.setattr(cli, "SpectralSequence", Broken)
    code, _ = run_text("simplicial_filtration.scn")
    assert code == 1


def test_check_failure_exits_one(monkeypatch):
    class Unsound:
        def validate(self):
            raise ValueError("forced")

    monkeypatch.setattr(cli, "build_filtration", lambda sc, tok: Unsound())
    text = (SCENARIOS / "simplicial_filtration.scn").read_text()
    code = cli.run(text, check=True, out=io.StringIO())
    assert code == 1


def test_main_subprocess_paths():
    ok = subprocess.run(
        [sys.executable, "-m", "specseq.cli", str(SCENARIOS / "simplicial_filtration.scn")],
        capture_output=True,
    )
    assert ok.returncode == 0
    missing = subprocess.run(
        [sys.executable, "-m", "specseq.cli", "does_not_exist.scn"],
        capture_output=True,
    )
    assert missing.returncode == 2
    bad_threads = subprocess.run(
        [
            sys.executable,
            "-m",
            "specseq.cli",
            str(SCENARIOS / "simplicial_filtration.scn"),
            "--threads",
            "0",
        ],
        capture_output=True,
    )
    assert bad_threads.returncode == 2
