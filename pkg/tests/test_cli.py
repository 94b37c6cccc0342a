import json
import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from preproj.cli import main

RULES = Path(__file__).resolve().parents[1] / "src/preproj/data/c_algebra.rules"


@pytest.fixture
def run(specs):
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return invoke


def test_hilbert_b2(run, specs):
    result = run("hilbert", specs / "b2.quiver")
    assert result.exit_code == 0
    rows = [" ".join(line.split()) for line in result.stdout.splitlines()]
    # columns are padded to a common width
    assert rows == ["[ 1 + t^2 s t + t s ]", "[ t + t s 1 + s + t^2 + t^2 s ]"]


def test_hilbert_point(run, specs):
    result = run("hilbert", specs / "point.quiver")
    assert result.exit_code == 0 and result.stdout.strip() == "1"


@pytest.mark.parametrize("name,expected", [
    ("g2", "4 + 6t + 8t^2 + 6t^3 + 4t^4"),
    ("f4", "6 + 10t + 14t^2 + 18t^3 + 20t^4 + 20t^5 + 20t^6 + 18t^7 + 14t^8 + 10t^9 + 6t^10"),
])
def test_hilbert_at_s1(run, specs, name, expected):
    result = run("hilbert", specs / f"{name}.quiver", "--s-at-1")
    assert result.exit_code == 0 and result.stdout.strip() == expected


def test_hilbert_truncation_warns_on_stderr(run, specs):
    result = run("hilbert", specs / "jordan_s.quiver", "--cutoff", "3")
    assert result.exit_code == 0
    assert "truncated at path length 3" in result.stderr
    assert "truncated" not in result.stdout


def test_hilbert_json_is_byte_identical(run, specs, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run("hilbert", specs / "g2.quiver", "--json", first)
    run("hilbert", specs / "g2.quiver", "--json", second)
    assert first.read_bytes() == second.read_bytes()
    body = json.loads(first.read_text())
    assert body["total"] == 28


def test_hilbert_over_finite_field(run, specs):
    result = run("hilbert", specs / "g2.quiver", "--field", "gf:32003", "--s-at-1")
    assert result.exit_code == 0 and result.stdout.strip() == "4 + 6t + 8t^2 + 6t^3 + 4t^4"


@pytest.mark.parametrize("args", [
    ("hilbert", "{specs}/g2.quiver", "--field", "gf:15"),
    ("hilbert", "{specs}/g2.quiver", "--field", "reals"),
    ("hilbert", "{specs}/missing.quiver"),
    ("hilbert", "{specs}/g2.quiver", "--signs", "odd"),
    ("reproduce", "nonsense"),
    ("flatness", "{specs}/star5.quiver", "{specs}/b2.quiver"),
])
def test_usage_errors_exit_2(run, specs, args):
    result = run(*(a.format(specs=specs) for a in args))
    assert result.exit_code == 2


def test_bad_spec_file_reports_line(run, tmp_path):
    bad = tmp_path / "bad.quiver"
    bad.write_text("vertex 1 : k\narrow a : 1 -> 9\n")
    result = run("hilbert", bad)
    assert result.exit_code == 2
    assert "bad.quiver" in result.stderr


def test_flatness_flat_pair(run, specs):
    result = run("flatness", specs / "a3_folded.quiver", specs / "b2.quiver")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["flat"] is True


def test_flatness_per_degree(run, specs):
    result = run("flatness", specs / "star5.quiver", specs / "z4_to_k.quiver", "--cutoff", "8", "--per-degree")
    assert result.exit_code == 0 and json.loads(result.stdout)["mode"] == "degrees"


def test_flatness_failure_exits_1(run, specs):
    result = run("flatness", specs / "z4_to_k.quiver", specs / "z5_to_k.quiver", "--per-degree", "--cutoff", "4")
    assert result.exit_code == 1
    assert json.loads(result.stdout)["flat"] is False


def test_confluence_counts_24(run):
    result = run("confluence", RULES)
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    body = json.loads(lines[0])
    assert body["confluent"] is True and body["irreducible_total"] == 24
    assert body["irreducible_by_degree"] == {"0": 1, "1": 2, "2": 3, "3": 4, "4": 4, "5": 4, "6": 3, "7": 2, "8": 1}
    assert "b.a.a.b.a.a -> a.b.a.a.b.a - a.a.b.a.a.b" in lines[1:]


def test_confluence_low_bound_exits_1(run):
    result = run("confluence", RULES, "--bound", "4")
    assert result.exit_code == 1
    assert json.loads(result.stdout.splitlines()[0])["confluent"] is False


def test_confluence_bad_rule_file(run, tmp_path):
    bad = tmp_path / "bad.rules"
    bad.write_text("order vertex 1: b > a\nrule: a.b -> b.a\n")
    result = run("confluence", bad)
    assert result.exit_code == 2 and "line 2" in result.stderr


def test_moment_check(run, specs):
    result = run("moment-check", specs / "b2.quiver", "--dims", "1,2", "--seeds", "5")
    assert result.exit_code == 0
    body = json.loads(result.stdout)
    assert body["all_equal"] is True and body["seeds"] == [0, 1, 2, 3, 4]


def test_moment_check_named_dims(run, specs):
    result = run("moment-check", specs / "point.quiver", "--dims", "1=1", "--seeds", "3")
    assert result.exit_code == 0 and json.loads(result.stdout)["dims"] == {"1": 1}


def test_moment_check_bad_dims(run, specs):
    assert run("moment-check", specs / "b2.quiver", "--dims", "1").exit_code == 2
    assert run("moment-check", specs / "b2.quiver", "--dims", "x,y").exit_code == 2


def test_reproduce_dynkin(run):
    result = run("reproduce", "dynkin")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == f"dynkin: {len(lines) - 1}/{len(lines) - 1} passed"


def test_module_entry_point(specs):
    out = subprocess.run([sys.executable, "-m", "preproj", "hilbert", str(specs / "point.quiver")],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "1"


def test_version():
    result = CliRunner().invoke(main, ["--version"])
    assert result.exit_code == 0 and "version" in result.output
