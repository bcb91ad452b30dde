"""Automorphisms, transitivity and the fourteen edge-transitive classes.

An edge-transitive map M is classified by its quotient M / Aut M, a map with a
single edge and possibly with boundary. The fourteen possible quotients are
the basic premaps of :func:`basic_premap_catalog`; the classes fall into six
orbits under duality D and Petrie duality P::

    1 | 2 2* 2P | 2ex 2*ex 2Pex | 3 | 4 4* 4P | 5 5* 5P

Within a row D swaps X and X* and fixes XP, while P swaps X* and XP and
fixes X.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from etmaps.flagmap import FlagMap
from etmaps.flagmap import _extend
from etmaps.flagmap import _flag_signatures
from etmaps.flagmap import _orbits
from etmaps.flagmap import canonical_form
from etmaps.flagmap import counts
from etmaps.flagmap import has_boundary
from etmaps.flagmap import is_orientable
from etmaps.flagmap import validate

logger = logging.getLogger(__name__)


class EtClass(str, Enum):
    C1 = "1"
    C2 = "2"
    C2_DUAL = "2*"
    C2_PETRIE = "2P"
    C2EX = "2ex"
    C2EX_DUAL = "2*ex"
    C2EX_PETRIE = "2Pex"
    C3 = "3"
    C4 = "4"
    C4_DUAL = "4*"
    C4_PETRIE = "4P"
    C5 = "5"
    C5_DUAL = "5*"
    C5_PETRIE = "5P"
    NOT_EDGE_TRANSITIVE = "NOT_EDGE_TRANSITIVE"

    def __str__(self):
        return self.value


OMEGA_ROWS = (
    ("1",),
    ("2", "2*", "2P"),
    ("2ex", "2*ex", "2Pex"),
    ("3",),
    ("4", "4*", "4P"),
    ("5", "5*", "5P"),
)

# position of the trivially acting element among (r0, r2, r0 r2) -> column
_COLUMN = {0: "*", 1: "", 2: "P"}

_SURFACES = {
    "2Pex": "sphere",
    "5": "sphere",
    "5*": "sphere",
    "4P": "Möbius band",
    "5P": "projective plane",
}


def omega_image(label, word):
    """Class label of the image of a class-``label`` map under a D/P word.

    Parameters
    ----------
    label : EtClass or str
    word : str
        Letters ``D`` and ``P`` applied left to right.
    """
    label = EtClass(label)
    if label is EtClass.NOT_EDGE_TRANSITIVE:
        return label
    row = next(r for r in OMEGA_ROWS if label.value in r)
    position = row.index(label.value)
    for letter in word.replace("1", ""):
        if len(row) == 1:
            break
        match letter:
            case "D":
                swap = {0: 1, 1: 0, 2: 2}
            case "P":
                swap = {0: 0, 1: 2, 2: 1}
            case _:
                raise ValueError(f"unknown map operation {letter!r}")
        position = swap[position]
    return EtClass(row[position])


# automorphisms ---------------------------------------------------------------


@dataclass
class AutGroup:
    """The automorphism group as an explicit list of flag permutations."""

    elements: list

    @property
    def order(self):
        return len(self.elements)

    def flag_orbits(self):
        """Number of orbits on flags and the orbit label of each flag."""
        n = len(self.elements[0])
        return _orbits(n, self.elements)


def automorphisms(m):
    """All flag permutations commuting with r0, r1 and r2.

    Each automorphism of a connected map is determined by the image of one
    flag, so every candidate image of flag 0 is extended by forced
    propagation. Candidates are restricted to flags with the same local
    orbit-size signature.

    Returns
    -------
    AutGroup
    """
    gens = [r.tolist() for r in m.gens]
    sig = _flag_signatures(m)
    candidates = np.flatnonzero((sig == sig[0]).all(axis=1))
    elements = []
    for g in candidates:
        phi = _extend(gens, gens, 0, int(g), m.n_flags)
        if phi is not None:
            elements.append(np.array(phi, dtype=np.int64))
    logger.debug(f"|Aut| = {len(elements)} for a map with {m.n_flags} flags")
    return AutGroup(elements)


def is_automorphism(m, perm):
    """True iff perm is a flag permutation commuting with every r_i."""
    perm = np.asarray(perm)
    if perm.shape != (m.n_flags,) or not np.array_equal(np.sort(perm), np.arange(m.n_flags)):
        return False
    return all(np.array_equal(perm[r], r[perm]) for r in m.gens)


# quotients and transitivity --------------------------------------------------


def quotient_premap(m, aut=None):
    """The quotient map M / Aut M; flags fixed by the induced r_i are boundary flags."""
    aut = automorphisms(m) if aut is None else aut
    n_orbits, orbit_of = aut.flag_orbits()
    _, representative = np.unique(orbit_of, return_index=True)
    gens = [orbit_of[r[representative]] for r in m.gens]
    return FlagMap(*gens)


@dataclass(frozen=True)
class Transitivity:
    flags: bool
    edges: bool
    vertices: bool
    arcs: bool
    faces: bool


def _arc_orbit_count(q):
    """Orbits of r2 alone: the vertex-edge incidences."""
    fixed = int(np.sum(q.r2 == np.arange(q.n_flags)))
    return (q.n_flags + fixed) // 2


def transitivity(m, aut=None, quotient=None):
    """Transitivity of Aut M on flags, edges, vertices, arcs and faces."""
    q = quotient_premap(m, aut) if quotient is None else quotient
    v, e, f, _ = counts(q)
    return Transitivity(
        flags=q.n_flags == 1,
        edges=e == 1,
        vertices=v == 1,
        arcs=_arc_orbit_count(q) == 1,
        faces=f == 1,
    )


def vertex_permutations(m, aut=None):
    """The permutations of the vertex orbits induced by the automorphisms."""
    aut = automorphisms(m) if aut is None else aut
    _, vertex_of = m.orbits("vertices")
    _, representative = np.unique(vertex_of, return_index=True)
    return [vertex_of[phi[representative]] for phi in aut.elements]


def is_two_transitive_on_vertices(m, aut=None):
    """True iff Aut M is transitive on ordered pairs of distinct vertices."""
    perms = vertex_permutations(m, aut)
    n_vertices = len(perms[0])
    if n_vertices < 2:
        return False
    images = {(int(p[0]), int(p[1])) for p in perms}
    return len(images) == n_vertices * (n_vertices - 1)


# the basic premaps -----------------------------------------------------------


def _label_premap(q):
    """Decision table from a one-edge premap to its class label."""
    n = q.n_flags
    identity = np.arange(n)
    triple = (q.r0, q.r2, q.r0r2)
    r1_trivial = np.array_equal(q.r1, identity)
    if n == 1:
        return EtClass.C1
    if n == 2:
        idle = next(k for k, t in enumerate(triple) if np.array_equal(t, identity))
        column = _COLUMN[idle]
        return EtClass(f"2{column}" if r1_trivial else f"2{column}ex")
    if n == 4:
        if r1_trivial:
            return EtClass.C3
        moved = np.flatnonzero(q.r1 != identity)
        if len(moved) == 4:
            match = next(k for k, t in enumerate(triple) if np.array_equal(t, q.r1))
            return EtClass(f"5{_COLUMN[match]}")
        x = moved[0]
        match = next(k for k, t in enumerate(triple) if t[x] == q.r1[x])
        return EtClass(f"4{_COLUMN[match]}")
    raise ValueError(f"a one-edge premap has 1, 2 or 4 flags, got {n}")


def _involutions(k):
    """All involutions of 0..k-1 as tuples."""
    result = []

    def build(perm, free):
        if not free:
            result.append(tuple(perm))
            return
        a = free[0]
        rest = free[1:]
        perm[a] = a
        build(perm, rest)
        for b in rest:
            perm[a], perm[b] = b, a
            build(perm, [c for c in rest if c != b])
            perm[b] = b
        perm[a] = a

    build(list(range(k)), list(range(k)))
    return result


@dataclass(frozen=True)
class CatalogEntry:
    """A basic premap with the invariants its class is read from."""

    label: EtClass
    premap: FlagMap
    n_vertices: int
    has_boundary: bool
    free_edge: bool
    orientable: bool
    surface: str


def _free_edge(q):
    identity = np.arange(q.n_flags)
    return bool(np.any(q.r0 == identity) or np.any(q.r0r2 == identity))


def one_edge_maps(max_flags=4):
    """Every connected flag system with a single edge on at most max_flags flags,
    one per isomorphism class."""
    found = {}
    for k in range(1, max_flags + 1):
        involutions = _involutions(k)
        for r0, r1, r2 in itertools.product(involutions, repeat=3):
            if not validate((np.array(r0), np.array(r1), np.array(r2))):
                continue
            m = FlagMap(r0, r1, r2, check=False)
            if counts(m)[1] != 1:
                continue
            found.setdefault(canonical_form(m), m)
    return [found[cert] for cert in sorted(found)]


def basic_premap_catalog():
    """The fourteen basic premaps, ordered along the rows of the class table.

    Returns
    -------
    dict
        ``EtClass -> CatalogEntry``.
    """
    entries = {}
    for q in one_edge_maps():
        label = _label_premap(q)
        if label in entries:
            raise RuntimeError(f"two one-edge maps decode to class {label}")
        entries[label] = CatalogEntry(
            label=label,
            premap=q,
            n_vertices=counts(q)[0],
            has_boundary=has_boundary(q),
            free_edge=_free_edge(q),
            orientable=is_orientable(q),
            surface=_SURFACES.get(label.value, "disc"),
        )
    order = [EtClass(label) for row in OMEGA_ROWS for label in row]
    return {label: entries[label] for label in order if label in entries}


def et_class(m, aut=None, quotient=None):
    """The edge-transitivity class of m, read from its quotient premap."""
    q = quotient_premap(m, aut) if quotient is None else quotient
    if counts(q)[1] != 1:
        return EtClass.NOT_EDGE_TRANSITIVE
    return _label_premap(q)
