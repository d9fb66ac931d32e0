import json

import pytest

from app.schemas import Command, NtFunction, NtResult, OutputFormat, ScanRow, SearchSummary, WindowModel
from app.services.classify import IsometryClass
from app.utils.reporting import CsvRenderer, JsonRenderer, TextRenderer, get_renderer

ROWS = [
    ScanRow(alpha=0.0, tau_re=-1.0, tau_im=0.0, f=0.0, isometry_class=IsometryClass.BOUNDARY),
    ScanRow(alpha=0.1, tau_re=-1.0 / 3, tau_im=0.25, f=-3.5, isometry_class=IsometryClass.REGULAR_ELLIPTIC),
]


def test_get_renderer():
    assert isinstance(get_renderer(OutputFormat.JSON), JsonRenderer)
    assert isinstance(get_renderer("csv"), CsvRenderer)
    assert isinstance(get_renderer("text"), TextRenderer)
    with pytest.raises(ValueError):
        get_renderer("xml")


def test_json_windows_are_pairs():
    text = JsonRenderer().render([WindowModel(lo=0.25, hi=0.5)], Command.WINDOWS)
    assert json.loads(text) == [[0.25, 0.5]]
    assert json.loads(JsonRenderer().render([], Command.WINDOWS)) == []
    assert json.loads(JsonRenderer().render([], Command.SCAN)) == []


def test_json_uses_class_alias():
    rows = json.loads(JsonRenderer().render(ROWS, Command.SCAN))
    assert rows[1]["class"] == "RegularElliptic"


def test_csv_scan_rows_keep_full_precision():
    lines = CsvRenderer().render(ROWS, Command.SCAN).splitlines()
    assert lines[0] == "alpha,tau_re,tau_im,f,class"
    assert lines[2].split(",")[1] == format(-1.0 / 3, ".17g")
    assert float(lines[2].split(",")[1]) == -1.0 / 3


def test_csv_windows_header_does_not_depend_on_rows():
    assert CsvRenderer().render([], Command.WINDOWS) == "lo,hi\n"
    assert CsvRenderer().render([], Command.SCAN) == "alpha,tau_re,tau_im,f,class\n"
    lines = CsvRenderer().render([WindowModel(lo=0.25, hi=0.5)], Command.WINDOWS).splitlines()
    assert lines == ["lo,hi", "0.25,0.5"]


def test_csv_search_summary():
    summary = SearchSummary(
        m=3, n_max=4, symmetry_reduced=True, candidates_examined=5,
        rejections={"phi_bound": 5}, case_families={}, inconclusive=0, survivor_count=0,
    )
    lines = CsvRenderer().render(summary, Command.SEARCH).splitlines()
    assert "rejected_phi_bound,5" in lines
    assert lines[-1] == "survivors,0"


def test_text_rendering():
    result = NtResult(function=NtFunction.PHI, argument=12, value=4)
    assert TextRenderer().render(result, Command.NT) == "4"
    table = TextRenderer().render(ROWS, Command.SCAN)
    assert "RegularElliptic" in table
    assert TextRenderer().render([], Command.SCAN) == "(none)"
    assert TextRenderer().render([], Command.WINDOWS) == "(none)"
