import json
import logging
from pathlib import Path
from tempfile import TemporaryDirectory

import pytest

from etmaps import cli
from etmaps.cli import run


def _run_json(capsys, argv):
    code = run(argv + ["--json"])
    assert code == 0
    return json.loads(capsys.readouterr().out)


# field -----------------------------------------------------------------------


def test_field_info_json(capsys):
    info = _run_json(capsys, ["field", "info", "--p", "3", "--e", "2"])
    assert info["n"] == 9
    assert info["phi"] == 4
    assert len(info["primitive_elements"]) == 4
    assert len(info["galois_orbits"]) == 2


def test_field_info_table(capsys):
    assert run(["field", "info", "--p", "7"]) == 0
    out = capsys.readouterr().out
    assert "GF(7)" in out
    assert "Primitive elements by Galois orbit" in out


def test_field_info_not_prime(capsys):
    assert run(["field", "info", "--p", "6"]) == 2
    assert capsys.readouterr().err.startswith("error:")


# map -------------------------------------------------------------------------


def test_map_biggs_json(capsys):
    document = _run_json(capsys, ["map", "biggs", "--n", "7", "--c", "3"])
    assert document["consistent"] is True
    assert document["report"]["V"] == 7
    assert document["report"]["genus_or_crosscaps"] == 1
    assert document["formulas"]["et_class"] == "2Pex"


@pytest.mark.parametrize(
    "argv, et_class",
    [
        (["map", "james", "--n", "7", "--c", "3", "--j", "3", "--petrie"], "5P"),
        (["map", "james", "--n", "7", "--c", "3", "--j", "3", "--dual"], "5"),
        (["map", "biggs", "--n", "5", "--c", "2", "--petrie", "--dual"], "2ex"),
        (["map", "k6", "--which", "{5,5}"], "1"),
        (["map", "k6", "--which", "{3,5}", "--petrie"], "1"),
    ],
)
def test_map_variants_are_consistent(capsys, argv, et_class):
    document = _run_json(capsys, argv)
    assert document["consistent"] is True
    assert document["report"]["et_class"] == et_class


def test_map_table(capsys):
    assert run(["map", "biggs", "--n", "5", "--c", "2"]) == 0
    out = capsys.readouterr().out
    assert "consistent: True" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["map", "biggs", "--n", "6", "--c", "2"],
        ["map", "biggs", "--n", "7", "--c", "2"],
        ["map", "james", "--n", "5", "--c", "2", "--j", "3"],
        ["map", "james", "--n", "7", "--c", "3", "--j", "1"],
        ["map", "analyze", "missing.flagmap"],
    ],
)
def test_map_invalid_inputs(capsys, argv):
    assert run(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_map_round_trip(capsys):
    with TemporaryDirectory() as temp_dir:
        path = str(Path(temp_dir) / "m7.flagmap")
        built = _run_json(capsys, ["map", "biggs", "--n", "7", "--c", "3", "--out", path])
        assert Path(path).read_text().startswith("flags 84\n")

        analyzed = _run_json(capsys, ["map", "analyze", path])
        assert analyzed["report"] == built["report"]

        classified = _run_json(capsys, ["map", "classify", path])
        assert classified["et_class"] == "2Pex"
        assert classified["aut_order"] == 42
        assert classified["arc_transitive"] is True
        assert classified["flags_transitive"] is False


# catalog ---------------------------------------------------------------------


def test_catalog_premaps(capsys):
    with TemporaryDirectory() as temp_dir:
        out = Path(temp_dir) / "premaps"
        document = _run_json(capsys, ["catalog", "premaps", "--out", str(out)])
        assert len(document["premaps"]) == 14
        assert document["premaps"][0]["label"] == "1"
        assert len(list(out.iterdir())) == 14
        assert (out / "premap-2star.flagmap").exists()


# census ----------------------------------------------------------------------


def test_census_text(capsys):
    assert run(["census", "--n", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "n=4 candidates=64 edge_transitive_classes=2"
    assert all(line.endswith(" 1") for line in lines[:-1])
    assert len(lines) == 3


def test_census_json_with_output(capsys):
    with TemporaryDirectory() as temp_dir:
        document = _run_json(capsys, ["census", "--n", "3", "--out", temp_dir, "--resume", temp_dir + "/ckpt"])
        assert document["candidates"] == 2
        assert len(document["classes"]) == 2
        assert sorted(p.name for p in Path(temp_dir).glob("class-*")) == ["class-0-1.flagmap", "class-1-1.flagmap"]


def test_census_json_stays_parseable_with_logging(capsys):
    assert run(["census", "--n", "4", "--json", "--verbose", "2"]) == 0
    captured = capsys.readouterr()
    document = json.loads(captured.out)
    assert document["summary"] == "n=4 candidates=64 edge_transitive_classes=2"
    assert "etmaps.census - census n=4" in captured.err
    logging.getLogger("etmaps").handlers = []


def test_census_boundary(capsys):
    document = _run_json(capsys, ["census", "--n", "3", "--boundary"])
    assert sorted(document["classes"]) == ["1", "2*", "2P"]


@pytest.mark.parametrize(
    "argv",
    [
        ["census", "--n", "7"],
        ["census", "--n", "4", "--boundary"],
        ["census", "--n", "5", "--unnormalized"],
    ],
)
def test_census_invalid_inputs(argv):
    assert run(argv) == 2


# usage -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["map"],
        ["census"],
        ["census", "--n", "4", "--shard", "3/2"],
        ["census", "--n", "four"],
        ["map", "k6", "--which", "{4,4}"],
        ["field", "info", "--p", "3", "--verbose", "5"],
    ],
)
def test_usage_errors(argv):
    assert run(argv) == 2


# verify ----------------------------------------------------------------------


def test_verify_small(capsys):
    document = _run_json(capsys, ["verify", "--max-n", "4"])
    assert document["passed"] is True
    names = [row["name"] for row in document["checks"]]
    assert names == [
        "field",
        "biggs",
        "biggs-petrie",
        "james",
        "james-petrie",
        "k6",
        "oracle-3",
        "oracle-4",
        "boundary",
        "omega",
        "oriented",
        "catalog",
    ]


def test_omega_pool_reaches_twenty_maps():
    pool = cli._omega_pool(9)
    assert len(pool) >= 20


@pytest.mark.slow
def test_verify_up_to_seven(capsys):
    document = _run_json(capsys, ["verify", "--max-n", "7", "--jobs", "2"])
    assert document["passed"] is True


def test_verify_reports_failures(monkeypatch):
    def broken(**_):
        raise ZeroDivisionError("boom")

    checks = [("ok", lambda **_: (True, "fine")), ("fails", lambda **_: (False, "nope")), ("raises", broken)]
    monkeypatch.setattr(cli, "_verify_checks", lambda max_n: checks)
    assert run(["verify", "--max-n", "3"]) == 1
