import numpy as np
import pytest

from etmaps.classify import OMEGA_ROWS
from etmaps.classify import EtClass
from etmaps.classify import automorphisms
from etmaps.classify import basic_premap_catalog
from etmaps.classify import et_class
from etmaps.classify import is_automorphism
from etmaps.classify import is_two_transitive_on_vertices
from etmaps.classify import omega_image
from etmaps.classify import one_edge_maps
from etmaps.classify import quotient_premap
from etmaps.classify import transitivity
from etmaps.classify import vertex_permutations
from etmaps.flagmap import FlagMap
from etmaps.flagmap import OrientedMap
from etmaps.flagmap import counts
from etmaps.flagmap import dual
from etmaps.flagmap import from_rotation_system
from etmaps.flagmap import isomorphic
from etmaps.flagmap import petrie_dual

TETRAHEDRON = OrientedMap(((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)))
K5_ASCENDING = OrientedMap(tuple(tuple(v for v in range(5) if v != u) for u in range(5)))


@pytest.fixture
def tetrahedron():
    return from_rotation_system(TETRAHEDRON)


@pytest.fixture
def catalog():
    return basic_premap_catalog()


# automorphisms ---------------------------------------------------------------


def test_tetrahedron_is_regular(tetrahedron):
    aut = automorphisms(tetrahedron)
    assert aut.order == 24
    assert aut.flag_orbits()[0] == 1
    assert all(is_automorphism(tetrahedron, phi) for phi in aut.elements)
    assert et_class(tetrahedron, aut=aut) is EtClass.C1


def test_is_automorphism_rejects(tetrahedron):
    swap = np.arange(24)
    swap[[0, 2]] = [2, 0]
    assert not is_automorphism(tetrahedron, swap)
    assert not is_automorphism(tetrahedron, np.zeros(24, dtype=np.int64))
    assert not is_automorphism(tetrahedron, np.arange(12))
    assert is_automorphism(tetrahedron, np.arange(24))


def test_quotient_of_regular_map_has_one_flag(tetrahedron):
    q = quotient_premap(tetrahedron)
    assert q.n_flags == 1
    assert transitivity(tetrahedron, quotient=q) == transitivity(tetrahedron)
    t = transitivity(tetrahedron)
    assert t.flags and t.edges and t.vertices and t.arcs and t.faces


def test_vertex_action_of_tetrahedron(tetrahedron):
    perms = vertex_permutations(tetrahedron)
    assert len(perms) == 24
    assert len({tuple(p) for p in perms}) == 24
    assert is_two_transitive_on_vertices(tetrahedron)


def test_ascending_k5_is_not_edge_transitive():
    m = from_rotation_system(K5_ASCENDING)
    assert et_class(m) is EtClass.NOT_EDGE_TRANSITIVE
    assert not transitivity(m).edges


@pytest.mark.parametrize(
    "m",
    [
        from_rotation_system(TETRAHEDRON),
        petrie_dual(from_rotation_system(TETRAHEDRON)),
        from_rotation_system(OrientedMap(((1, 2), (0, 2), (0, 1)), {(0, 1): -1})),
        FlagMap([0], [0], [0]),
    ],
)
def test_regular_iff_class_one(m):
    aut = automorphisms(m)
    assert (aut.order == m.n_flags) == (et_class(m, aut=aut) is EtClass.C1)
    assert et_class(m) is EtClass.C1


def test_class_two_boundary_map():
    # an edge with one vertex of degree one and one boundary vertex
    m = FlagMap([2, 3, 0, 1], [1, 0, 2, 3], [1, 0, 3, 2])
    assert automorphisms(m).order == 2
    assert quotient_premap(m).n_flags == 2
    assert et_class(m) is EtClass.C2


# class labels ----------------------------------------------------------------


@pytest.mark.parametrize(
    "label, word, image",
    [
        ("2", "D", "2*"),
        ("2*", "D", "2"),
        ("2P", "D", "2P"),
        ("2*", "P", "2P"),
        ("2", "P", "2"),
        ("2Pex", "P", "2*ex"),
        ("5*", "P", "5P"),
        ("5*", "D", "5"),
        ("4", "DP", "4P"),
        ("3", "DPD", "3"),
        ("1", "P", "1"),
        ("NOT_EDGE_TRANSITIVE", "D", "NOT_EDGE_TRANSITIVE"),
    ],
)
def test_omega_image(label, word, image):
    assert omega_image(label, word) == EtClass(image)


def test_omega_image_rejects_unknown_letters():
    with pytest.raises(ValueError):
        omega_image("2", "Q")


def test_et_class_str():
    assert str(EtClass.C2EX_DUAL) == "2*ex"
    assert EtClass("5P") is EtClass.C5_PETRIE


# catalog ---------------------------------------------------------------------


def test_one_edge_maps_count():
    assert len(one_edge_maps()) == 14


def test_catalog_rows(catalog):
    assert [str(label) for label in catalog] == [label for row in OMEGA_ROWS for label in row]
    sizes = [entry.premap.n_flags for entry in catalog.values()]
    assert sizes.count(1) == 1
    assert sizes.count(2) == 6
    assert sizes.count(4) == 7


def test_catalog_entries_have_one_edge(catalog):
    for label, entry in catalog.items():
        assert counts(entry.premap)[1] == 1
        assert et_class(entry.premap, quotient=entry.premap) is label


def test_catalog_closed_premaps(catalog):
    closed = {str(label) for label, entry in catalog.items() if not entry.has_boundary}
    assert closed == {"2Pex", "5", "5*", "5P"}


def test_catalog_surfaces(catalog):
    assert catalog[EtClass.C5_PETRIE].surface == "projective plane"
    assert catalog[EtClass.C4_PETRIE].surface == "Möbius band"
    assert catalog[EtClass.C5].surface == "sphere"
    assert catalog[EtClass.C3].surface == "disc"


def test_catalog_free_edges(catalog):
    free = {str(label) for label, entry in catalog.items() if entry.free_edge}
    assert free == {"1", "2*", "2P", "2*ex", "2Pex"}


def test_catalog_is_closed_under_omega(catalog):
    for label, entry in catalog.items():
        assert isomorphic(dual(entry.premap), catalog[omega_image(label, "D")].premap) is not None
        assert isomorphic(petrie_dual(entry.premap), catalog[omega_image(label, "P")].premap) is not None
