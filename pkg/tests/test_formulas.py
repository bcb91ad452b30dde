import pytest

from etmaps.construct import biggs_map
from etmaps.construct import biggs_parameters
from etmaps.construct import james_map
from etmaps.construct import james_parameters
from etmaps.construct import k6_regular_pair
from etmaps.flagmap import dual
from etmaps.flagmap import from_rotation_system
from etmaps.flagmap import petrie_dual
from etmaps.formulas import biggs_count
from etmaps.formulas import biggs_formulas
from etmaps.formulas import biggs_genus
from etmaps.formulas import biggs_petrie_chi
from etmaps.formulas import biggs_petrie_formulas
from etmaps.formulas import class_transitivity
from etmaps.formulas import compare
from etmaps.formulas import dual_formulas
from etmaps.formulas import james_count
from etmaps.formulas import james_formulas
from etmaps.formulas import james_genus
from etmaps.formulas import james_petrie_formulas
from etmaps.formulas import james_petrie_length
from etmaps.formulas import k6_formulas
from etmaps.report import MapReport
from etmaps.report import analyze


def _biggs(n):
    return from_rotation_system(biggs_map(n, biggs_parameters(n)[0]))


def _assert_consistent(formulas, m):
    consistent, mismatches = compare(formulas, analyze(m).to_dict())
    assert consistent, mismatches


# closed forms ----------------------------------------------------------------


@pytest.mark.parametrize("n, genus", [(3, 0), (4, 0), (5, 1), (7, 1), (8, 7), (9, 10), (11, 12), (13, 27)])
def test_biggs_genus(n, genus):
    assert biggs_genus(n) == genus


@pytest.mark.parametrize("n, chi", [(3, 1), (4, 1), (5, -3), (7, -11)])
def test_biggs_petrie_chi(n, chi):
    assert biggs_petrie_chi(n) == chi


@pytest.mark.parametrize("n, j, genus", [(7, 3, 3), (11, 3, 12), (11, 5, 15)])
def test_james_genus(n, j, genus):
    assert james_genus(n, j) == genus


def test_james_petrie_length():
    assert james_petrie_length(7, 3) == 6
    assert james_petrie_length(11, 3) == 10
    assert james_petrie_length(19, 3) == 18
    assert james_petrie_length(19, 7) == 6


@pytest.mark.parametrize("n, biggs, james", [(7, 2, 2), (11, 4, 8), (19, 6, 24), (23, 10, 50), (27, 4, 24)])
def test_counts(n, biggs, james):
    assert biggs_count(n) == biggs
    assert james_count(n) == james


def test_formula_keys_match_the_report():
    keys = set(MapReport.__dataclass_fields__)
    assert set(biggs_formulas(7)) == keys
    assert set(james_petrie_formulas(11, 3)) == keys
    assert set(k6_formulas("{5,5}")) == keys


def test_k6_formulas_reject_unknown_types():
    with pytest.raises(ValueError):
        k6_formulas("{4,5}")


def test_class_transitivity():
    assert class_transitivity("5*") == {
        "flags_transitive": False,
        "edge_transitive": True,
        "vertex_transitive": True,
        "arc_transitive": False,
        "face_transitive": False,
    }
    assert all(class_transitivity("1").values())


# closed forms against computed invariants ------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17])
def test_biggs_formulas_match(n):
    _assert_consistent(biggs_formulas(n), _biggs(n))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17])
def test_biggs_petrie_formulas_match(n):
    _assert_consistent(biggs_petrie_formulas(n), petrie_dual(_biggs(n)))


@pytest.mark.parametrize(
    "n", [7, 11, 19, pytest.param(23, marks=pytest.mark.slow), pytest.param(27, marks=pytest.mark.slow)]
)
def test_james_formulas_match(n):
    for c, j in james_parameters(n):
        m = from_rotation_system(james_map(n, c, j))
        _assert_consistent(james_formulas(n, j), m)
        _assert_consistent(james_petrie_formulas(n, j), petrie_dual(m))


def test_k6_formulas_match():
    first, second = k6_regular_pair()
    _assert_consistent(k6_formulas("{3,5}"), first)
    _assert_consistent(k6_formulas("{5,5}"), second)


def test_dual_formulas_match():
    m = _biggs(7)
    _assert_consistent(dual_formulas(biggs_formulas(7)), dual(m))
    james = from_rotation_system(james_map(7, 3, 3))
    values = dual_formulas(james_formulas(7, 3))
    assert values["et_class"] == "5"
    assert not values["vertex_transitive"]
    _assert_consistent(values, dual(james))


def test_compare_reports_mismatches():
    report = analyze(_biggs(5)).to_dict()
    consistent, mismatches = compare({"V": 5, "F": 6}, report)
    assert not consistent
    assert mismatches == {"F": (6, 5)}
