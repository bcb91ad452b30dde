import json

import pytest

from etmaps.classify import EtClass
from etmaps.construct import biggs_map
from etmaps.flagmap import FlagMap
from etmaps.flagmap import from_rotation_system
from etmaps.report import analyze


@pytest.fixture
def biggs_torus():
    return from_rotation_system(biggs_map(7, 3))


def test_analyze_biggs_torus(biggs_torus):
    report = analyze(biggs_torus)
    assert (report.V, report.E, report.F) == (7, 21, 14)
    assert report.chi == 0
    assert report.orientable
    assert not report.has_boundary
    assert report.genus_or_crosscaps == 1
    assert report.face_sizes == [3] * 14
    assert report.vertex_degrees == [6] * 7
    assert report.aut_order == 42
    assert report.et_class is EtClass.C2EX_PETRIE
    assert report.edge_transitive and report.arc_transitive
    assert not report.flags_transitive


def test_analyze_boundary_map():
    report = analyze(FlagMap([1, 0], [0, 1], [0, 1]))
    assert report.has_boundary
    assert not report.orientable
    assert report.genus_or_crosscaps is None
    assert report.face_sizes == []
    assert report.vertex_degrees == []
    assert report.petrie_lengths == []
    assert (report.V, report.E, report.F) == (2, 1, 1)
    assert report.aut_order == 2
    assert report.et_class is EtClass.C1


def test_report_is_immutable(biggs_torus):
    report = analyze(biggs_torus)
    with pytest.raises(AttributeError):
        report.V = 8


def test_to_dict_is_json_ready(biggs_torus):
    values = analyze(biggs_torus).to_dict()
    assert values["et_class"] == "2Pex"
    assert json.loads(json.dumps(values)) == values
