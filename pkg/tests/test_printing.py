import pandas as pd
import pytest

from etmaps.construct import biggs_map
from etmaps.flagmap import from_rotation_system
from etmaps.formulas import biggs_formulas
from etmaps.printing import _display_results
from etmaps.printing import _records_table
from etmaps.printing import _report_table
from etmaps.report import analyze


@pytest.fixture
def report():
    return analyze(from_rotation_system(biggs_map(5, 2)))


def test_report_table(report):
    table = _report_table(report)
    assert list(table.columns) == ["computed"]
    assert table.loc["V", "computed"] == 5
    assert table.loc["et_class", "computed"] == "2Pex"


def test_report_table_with_formulas(report):
    table = _report_table(report, biggs_formulas(5))
    assert list(table.columns) == ["computed", "formula"]
    assert all(table.loc[key, "computed"] == table.loc[key, "formula"] for key in table.index)


def test_records_table():
    rows = [{"name": "field", "passed": True}, {"name": "census", "passed": False}]
    table = _records_table(rows, index="name")
    assert list(table.index) == ["field", "census"]
    assert not table.loc["census", "passed"]
    assert _records_table([], index="name").empty


def test_display_results(capsys):
    _display_results("Checks", pd.DataFrame({"passed": [True]}, index=["field"]))
    out = capsys.readouterr().out
    assert out.startswith("Checks\n")
    assert "field" in out
