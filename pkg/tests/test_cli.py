import json
import math

import pytest
from typer.testing import CliRunner

from app.cli import EXIT_USAGE, app

runner = CliRunner()


def invoke(*args, **kwargs):
    return runner.invoke(app, list(args), **kwargs)


def test_scan_m2_is_all_boundary():
    result = invoke("scan", "--m", "2", "--alpha-steps", "8")
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert len(rows) == 8
    assert {row["class"] for row in rows} == {"Boundary"}


def test_scan_m3_at_pi_is_loxodromic():
    result = invoke("scan", "--m", "3", "--alpha-steps", "4")
    assert result.exit_code == 0
    row = json.loads(result.stdout)[2]
    assert row["alpha"] == pytest.approx(math.pi)
    assert row["tau_re"] == pytest.approx(-5)
    assert row["tau_im"] == pytest.approx(0, abs=1e-12)
    assert row["class"] == "Loxodromic"


def test_scan_csv_header():
    result = invoke("scan", "--m", "5", "--alpha-steps", "16", "--format", "csv")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "alpha,tau_re,tau_im,f,class"
    assert len(lines) == 17


def test_scan_text_table():
    result = invoke("scan", "--m", "3", "--alpha-steps", "4", "--format", "text")
    assert result.exit_code == 0
    assert "Loxodromic" in result.stdout


def test_scan_output_is_deterministic():
    first = invoke("scan", "--m", "7", "--alpha-steps", "32")
    second = invoke("scan", "--m", "7", "--alpha-steps", "32")
    assert first.stdout == second.stdout


def test_windows():
    result = invoke("windows", "--m", "2")
    assert result.exit_code == 0
    assert json.loads(result.stdout) == []

    result = invoke("windows", "--m", "10")
    pairs = json.loads(result.stdout)
    assert len(pairs) == 2
    assert pairs[0][0] + pairs[1][1] == pytest.approx(2 * math.pi, abs=1e-5)


def test_windows_csv_without_windows_keeps_window_header():
    result = invoke("windows", "--m", "2", "--format", "csv")
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["lo,hi"]

    result = invoke("windows", "--m", "10", "--format", "csv")
    lines = result.stdout.splitlines()
    assert lines[0] == "lo,hi"
    assert len(lines) == 3


@pytest.mark.parametrize("m,alpha", [("3", "3.14159"), ("2", "1.0")])
def test_certify_not_applicable(m, alpha):
    result = invoke("certify", "--m", m, "--alpha", alpha)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["verdict"] == "NotApplicable"


def test_certify_inside_window(m10_alpha):
    result = invoke("certify", "--m", "10", "--alpha", repr(m10_alpha), "--n-max", "24")
    assert result.exit_code == 0
    certificate = json.loads(result.stdout)
    assert certificate["verdict"] == "NonDiscreteOrNonFaithful"
    assert certificate["class"] == "RegularElliptic"
    assert certificate["search"]["survivor_count"] == 0


def test_certify_with_rational_turns():
    result = invoke("certify", "--m", "3", "--alpha-turns", "1/2", "--format", "text")
    assert result.exit_code == 0
    assert "verdict: NotApplicable" in result.stdout


def test_certify_precision_from_environment():
    result = invoke("certify", "--m", "3", "--alpha", "1.0", env={"CHTG_PRECISION_BITS": "256"})
    assert result.exit_code == 0
    checks = json.loads(result.stdout)["checks"]
    assert checks[0]["precision_bits"] == 256


def test_search():
    result = invoke("search", "--m", "3", "--n-max", "12")
    assert result.exit_code == 0
    summary = json.loads(result.stdout)
    assert summary["survivor_count"] == 0
    assert sum(summary["rejections"].values()) + summary["survivor_count"] == summary["candidates_examined"]


def test_search_trivial_order():
    summary = json.loads(invoke("search", "--m", "4", "--n-max", "1").stdout)
    assert summary["candidates_examined"] == 1
    assert summary["rejections"]["not_regular_elliptic"] == 1


@pytest.mark.parametrize(
    "function,x,expected",
    [("phi", "12", "4"), ("moebius", "12", "0"), ("cyclopoly", "4", "x^2 + 1")],
)
def test_nt(function, x, expected):
    result = invoke("nt", function, x)
    assert result.exit_code == 0
    assert result.stdout.strip() == expected


def test_out_writes_file(tmp_path):
    target = tmp_path / "scan.csv"
    result = invoke("scan", "--m", "4", "--alpha-steps", "8", "--format", "csv", "--out", str(target))
    assert result.exit_code == 0
    assert result.stdout == ""
    assert target.read_text().startswith("alpha,tau_re,tau_im,f,class")


@pytest.mark.parametrize(
    "args",
    [
        ("scan",),
        ("scan", "--m", "1"),
        ("search", "--m", "3", "--n-max", "0"),
        ("certify", "--m", "3"),
        ("certify", "--m", "3", "--alpha", "1.0", "--precision-bits", "10"),
        ("certify", "--m", "3", "--alpha-turns", "one-half"),
        ("nt", "phi", "abc"),
        ("nt", "phi", "0"),
        ("scan", "--m", "3", "--format", "xml"),
    ],
)
def test_usage_errors(args):
    result = invoke(*args)
    assert result.exit_code == EXIT_USAGE
    assert "Traceback" not in result.output


def test_certify_exact_turns_inside_window():
    # 2 pi / 18 lies in the first m = 10 window
    result = invoke("certify", "--m", "10", "--alpha-turns", "1/18", "--n-max", "12")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["verdict"] == "NonDiscreteOrNonFaithful"
