import json
import logging
from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np
import pytest

from etmaps import census
from etmaps.census import boundary_census
from etmaps.census import count_candidates
from etmaps.census import edge_transitive_census
from etmaps.census import enumerate_embeddings
from etmaps.census import run_census
from etmaps.census import verify_classification
from etmaps.classify import EtClass
from etmaps.classify import et_class
from etmaps.construct import constructed_embeddings
from etmaps.exceptions import TooLarge
from etmaps.exceptions import Unsupported
from etmaps.flagmap import FlagMap
from etmaps.flagmap import canonical_form
from etmaps.flagmap import has_boundary
from etmaps.flagmap import is_complete
from etmaps.flagmap import is_orientable
from etmaps.flagmap import validate


def _certificates(maps):
    return {canonical_form(m) for m in maps}


# candidates ------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, orientable_only, normalize, count",
    [
        (3, False, True, 2),
        (4, False, True, 64),
        (4, True, True, 8),
        (5, True, True, 1296),
        (5, False, True, 82944),
        (4, False, False, 1024),
        (4, True, False, 16),
    ],
)
def test_count_candidates(n, orientable_only, normalize, count):
    assert count_candidates(n, orientable_only, normalize) == count


@pytest.mark.parametrize("n, normalize", [(3, True), (4, True), (4, False)])
def test_enumerate_embeddings_yields_valid_complete_maps(n, normalize):
    maps = list(enumerate_embeddings(n, normalize=normalize))
    assert len(maps) == count_candidates(n, normalize=normalize)
    for m in maps:
        assert validate(m)
        assert not has_boundary(m)
        assert is_complete(m, n)


def test_orientable_enumeration():
    assert all(is_orientable(m) for m in enumerate_embeddings(4, orientable_only=True))


@pytest.mark.parametrize("n, normalize, error", [(7, True, TooLarge), (5, False, TooLarge), (2, True, Unsupported)])
def test_census_size_limits(n, normalize, error):
    with pytest.raises(error):
        count_candidates(n, normalize=normalize)
    with pytest.raises(error):
        run_census(n, normalize=normalize)


# uniform-edge filter ---------------------------------------------------------


def test_batches_follow_the_candidate_order():
    space = census._SearchSpace(4)
    rows = np.concatenate(list(space.batches(1, size=5)))
    expected = [r1 for _, r1 in space.candidates(1)][:: len(space.r0_tables)]
    assert np.array_equal(rows, np.array(expected))


def test_uniform_edge_filter_keeps_every_edge_transitive_candidate():
    space = census._SearchSpace(4)
    kept = total = 0
    for prefix in range(space.n_prefixes):
        for block in space.batches(prefix):
            for r0 in space.r0_tables:
                mask = space.uniform_edges(r0, block)
                total += len(block)
                kept += int(mask.sum())
                for row, passed in enumerate(mask):
                    m = FlagMap(r0, block[row], space.r2)
                    if et_class(m) is not EtClass.NOT_EDGE_TRANSITIVE:
                        assert passed
    assert total == count_candidates(4)
    assert 0 < kept < total


# census ----------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4])
def test_census_matches_constructions(n):
    result = run_census(n)
    assert result.candidates == count_candidates(n)
    assert len(result.classes) == 2
    assert set(result.classes) == _certificates(constructed_embeddings(n))
    assert result.summary() == f"n={n} candidates={count_candidates(n)} edge_transitive_classes=2"


def test_census_is_sorted_by_certificate():
    result = run_census(4)
    assert list(result.classes) == sorted(result.classes)
    for m, label in result.entries:
        assert canonical_form(m) in result.classes
        assert et_class(m) is label is EtClass.C1


def test_unnormalized_census_agrees():
    assert set(run_census(4, normalize=False).classes) == set(run_census(4).classes)


def test_orientable_census_on_five_vertices():
    entries = edge_transitive_census(5, orientable_only=True)
    assert len(entries) == 1
    ((m, label),) = entries
    assert label is EtClass.C2EX_PETRIE
    assert is_orientable(m)


@pytest.mark.slow
def test_full_census_on_five_vertices():
    result = run_census(5, n_jobs=2)
    assert result.candidates == 82944
    assert sorted(map(str, result.classes.values())) == ["2*ex", "2Pex"]


@pytest.mark.slow
def test_no_orientable_edge_transitive_k6():
    result = run_census(6, orientable_only=True, n_jobs=2)
    assert result.classes == {}


# shards and checkpoints ------------------------------------------------------


def test_shards_cover_the_census():
    whole = run_census(4)
    parts = [run_census(4, shard=(i, 2)) for i in range(2)]
    assert sum(part.candidates for part in parts) == whole.candidates
    assert set().union(*(part.classes for part in parts)) == set(whole.classes)


@pytest.mark.parametrize("shard", [(2, 2), (0, 0), (-1, 3)])
def test_bad_shard(shard):
    with pytest.raises(ValueError):
        run_census(3, shard=shard)


def test_worker_count_does_not_change_the_result():
    assert run_census(4, n_jobs=2).classes == run_census(4, n_jobs=1).classes


def test_resume_reads_finished_prefixes(monkeypatch):
    with TemporaryDirectory() as temp_dir:
        first = run_census(4, resume=temp_dir)
        files = sorted(p.name for p in Path(temp_dir).iterdir())
        assert files == ["prefix-0.json", "prefix-1.json"]
        data = json.loads((Path(temp_dir) / "prefix-0.json").read_text())
        assert data["n"] == 4
        assert len(data["certificates"]) == len(data["classes"])

        def fail(*args):
            raise AssertionError("prefix searched again")

        monkeypatch.setattr(census, "_search_prefix", fail)
        second = run_census(4, resume=temp_dir)
        assert second.classes == first.classes
        assert second.candidates == first.candidates


def test_resume_ignores_other_parameters(caplog):
    with TemporaryDirectory() as temp_dir:
        run_census(4, orientable_only=True, resume=temp_dir)
        with caplog.at_level(logging.WARNING, logger="etmaps.census"):
            result = run_census(4, resume=temp_dir)
        assert "ignoring checkpoint" in caplog.text
        assert len(result.classes) == 2


def test_resume_survives_a_corrupt_checkpoint(caplog):
    with TemporaryDirectory() as temp_dir:
        (Path(temp_dir) / "prefix-0.json").write_text("{not json")
        with caplog.at_level(logging.ERROR, logger="etmaps.census"):
            result = run_census(4, resume=temp_dir)
        assert "Failed to read checkpoint" in caplog.text
        assert len(result.classes) == 2


# maps with boundary ----------------------------------------------------------


@pytest.mark.parametrize("n, labels", [(2, ["1", "1", "2"]), (3, ["1", "2*", "2P"])])
def test_boundary_census(n, labels):
    maps = boundary_census(n)
    assert sorted(str(et_class(m)) for m in maps) == labels
    for m in maps:
        assert has_boundary(m)
        assert is_complete(m, n)


@pytest.mark.parametrize("n", [1, 4])
def test_boundary_census_range(n):
    with pytest.raises(Unsupported):
        boundary_census(n)


# verification ----------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4])
def test_verify_classification(n):
    report = verify_classification(n)
    assert report.matched
    assert not report.orientable_only
    assert report.census_classes == report.constructed_classes == 2
    assert report.to_dict()["matched"] is True


@pytest.mark.slow
def test_verify_classification_k6_orientable():
    report = verify_classification(6, n_jobs=2)
    assert report.orientable_only
    assert report.matched
    assert report.census_classes == 0
