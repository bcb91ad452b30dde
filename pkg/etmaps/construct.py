"""Builders for the edge-transitive embeddings of complete graphs.

Biggs maps M_n(c) and James maps M_n(c, j) are Cayley maps for the additive
group of GF(n): vertex g is joined to g + x for every nonzero x, and the
rotation at g lists these neighbours in a fixed cyclic order of the nonzero
elements. Vertices are labelled by element index.
"""

import logging

import numpy as np

from etmaps.classify import automorphisms
from etmaps.exceptions import BadCongruence
from etmaps.exceptions import BadGeneratingSet
from etmaps.exceptions import BadJ
from etmaps.exceptions import NotFree
from etmaps.exceptions import NotPrimePower
from etmaps.exceptions import NotPrimitive
from etmaps.exceptions import ZeroElement
from etmaps.field import field_of_order
from etmaps.field import galois_orbits
from etmaps.field import is_primitive
from etmaps.field import prime_power
from etmaps.field import primitive_elements
from etmaps.flagmap import FlagMap
from etmaps.flagmap import OrientedMap
from etmaps.flagmap import _orbits
from etmaps.flagmap import canonical_form
from etmaps.flagmap import flag_index
from etmaps.flagmap import from_rotation_system
from etmaps.flagmap import oriented_certificate
from etmaps.flagmap import petrie_dual
from etmaps.formulas import james_count

logger = logging.getLogger(__name__)


# Cayley maps -----------------------------------------------------------------


def cayley_map(fs, ordering):
    """The Cayley map of GF(n) whose local rotation follows ordering.

    Parameters
    ----------
    fs : FieldSpec
    ordering : list of FieldElement or int
        A cyclic order of all n - 1 nonzero elements.

    Returns
    -------
    OrientedMap
        Vertex g has rotation ``g + x_0, g + x_1, ..., g + x_{n-2}``.

    Raises
    ------
    BadGeneratingSet
        If ordering is not a permutation of the nonzero elements.
    """
    try:
        steps = [fs.index(x) for x in ordering]
    except ValueError as e:
        raise BadGeneratingSet(str(e))
    if sorted(steps) != list(range(1, fs.n)):
        raise BadGeneratingSet(f"ordering must list each nonzero element of GF({fs.n}) once, got {steps}")
    rotation = tuple(tuple(fs._add(g, x) for x in steps) for g in range(fs.n))
    return OrientedMap(rotation)


def _primitive_index(fs, c):
    c = fs.index(c)
    try:
        primitive = is_primitive(fs, c)
    except ZeroElement:
        primitive = False
    if not primitive:
        raise NotPrimitive(f"{fs.element(c)} (index {c}) is not primitive in GF({fs.n})")
    return c


def biggs_ordering(fs, c):
    """The powers 1, c, c^2, ..., c^(n-2) as indices."""
    c = _primitive_index(fs, c)
    return [fs._pow(c, k) for k in range(fs.n - 1)]


def biggs_map(n, c):
    """The orientably regular Biggs map M_n(c).

    Raises
    ------
    NotPrimePower
        If n is not a prime power.
    NotPrimitive
        If c does not generate GF(n)*.
    """
    fs = field_of_order(n)
    return cayley_map(fs, biggs_ordering(fs, c))


def _check_james_order(n):
    p, e = prime_power(n)
    if n <= 3 or n % 4 != 3:
        raise BadCongruence(f"James maps need n > 3 with n = 3 mod 4, got {n}")
    return p, e


def james_ordering(fs, c, j):
    """The interleaved order 1, c^j, c^2, c^(j+2), ..., c^(n-3), c^(j+n-3)."""
    c = _primitive_index(fs, c)
    m = fs.n - 1
    j = int(j) % m
    if j % 2 == 0 or j == 1:
        raise BadJ(f"j must be odd and different from 1 mod {m}, got {j}")
    ordering = []
    for k in range(0, m, 2):
        ordering.append(fs._pow(c, k))
        ordering.append(fs._pow(c, j + k))
    return ordering


def james_map(n, c, j):
    """The James map M_n(c, j).

    Raises
    ------
    BadCongruence
        Unless n > 3 and n = 3 mod 4.
    BadJ
        If j is even or j = 1 mod n - 1 (j = 1 gives the Biggs map).
    """
    _check_james_order(n)
    fs = field_of_order(n)
    return cayley_map(fs, james_ordering(fs, c, j))


# censuses --------------------------------------------------------------------


def biggs_parameters(n):
    """Smallest primitive element (by index) in each Galois orbit."""
    fs = field_of_order(n)
    orbits = galois_orbits(fs, primitive_elements(fs))
    return sorted(min(fs.index(a) for a in orbit) for orbit in orbits)


def biggs_census(n):
    """One Biggs map per Galois orbit of primitive elements of GF(n)."""
    return [biggs_map(n, c) for c in biggs_parameters(n)]


def _james_j_classes(n):
    """Smallest j of each class {j, 2 - j} of odd j != 1 mod n - 1."""
    m = n - 1
    return sorted({min(j, (2 - j) % m) for j in range(3, m, 2)})


def james_parameters(n, check=True):
    """Representatives (c, j) of the oriented isomorphism classes of James maps.

    Representatives use the smallest c of each Galois orbit and the smallest j
    of each pair {j, 2 - j}. With ``check`` every admissible pair is built and
    the classes are recomputed from rotation certificates; a disagreement with
    the representatives raises RuntimeError.
    """
    _check_james_order(n)
    parameters = [(c, j) for c in biggs_parameters(n) for j in _james_j_classes(n)]
    if check:
        fs = field_of_order(n)
        certificate = {}
        for c in primitive_elements(fs):
            for j in range(3, n - 1, 2):
                om = cayley_map(fs, james_ordering(fs, c, j))
                certificate[(fs.index(c), j)] = oriented_certificate(om, start_vertices=[0])
        rep_certificates = [certificate[pair] for pair in parameters]
        if len(set(rep_certificates)) != len(parameters) or set(rep_certificates) != set(
            certificate.values()
        ):
            logger.error(f"James representatives for n={n} disagree with rotation certificates")
            raise RuntimeError(f"James census for n={n} is inconsistent with oriented isomorphism")
    expected = james_count(n)
    if len(parameters) != expected:
        raise RuntimeError(f"found {len(parameters)} James maps for n={n}, expected {expected}")
    return parameters


def james_census(n, check=True):
    """One James map per oriented isomorphism class."""
    return [james_map(n, c, j) for c, j in james_parameters(n, check=check)]


def biggs_petrie_census(n):
    return [petrie_dual(from_rotation_system(om)) for om in biggs_census(n)]


def james_petrie_census(n, check=True):
    return [petrie_dual(from_rotation_system(om)) for om in james_census(n, check=check)]


# affine automorphisms --------------------------------------------------------


def affine_automorphism(fs, om, a, b):
    """The flag permutation induced by v -> a v + b on a Cayley map of GF(n).

    The result is an automorphism of ``from_rotation_system(om)`` exactly when
    multiplication by ``a`` preserves the cyclic ordering; check it with
    :func:`etmaps.classify.is_automorphism`.
    """
    a = fs.index(a)
    b = fs.index(b)
    if a == 0:
        raise ZeroElement("the multiplier of an affine map must be nonzero")
    index = flag_index(om)
    perm = np.empty(len(index), dtype=np.int64)
    for (u, v, s), f in index.items():
        image = (fs._add(fs._mul(a, u), b), fs._add(fs._mul(a, v), b), s)
        perm[f] = index[image]
    return perm


# antipodal quotients ---------------------------------------------------------


def hexagon():
    """The hexagon on the sphere: a 6-cycle with two hexagonal faces."""
    return OrientedMap(tuple(((v - 1) % 6, (v + 1) % 6) for v in range(6)))


def cube():
    """The cube; vertex bits are coordinates and neighbours differ in one bit."""
    rotation = []
    for v in range(8):
        x, y, z = v ^ 1, v ^ 2, v ^ 4
        rotation.append((x, y, z) if bin(v).count("1") % 2 else (x, z, y))
    return OrientedMap(tuple(rotation))


def icosahedron():
    """The icosahedron: apex 0, upper ring 1-5, lower ring 6-10, apex 11.

    Upper vertex 1 + i sits at longitude 72 i and lower vertex 6 + i at
    72 i + 36; rotations are counterclockwise seen from outside.
    """
    rotation = [(1, 2, 3, 4, 5)]
    for i in range(5):
        rotation.append((0, 1 + (i - 1) % 5, 6 + (i - 1) % 5, 6 + i, 1 + (i + 1) % 5))
    for i in range(5):
        rotation.append((1 + i, 6 + (i - 1) % 5, 11, 6 + (i + 1) % 5, 1 + (i + 1) % 5))
    rotation.append((6, 10, 9, 8, 7))
    return OrientedMap(tuple(rotation))


def antipodal_automorphism(m, aut=None):
    """The central involution of Aut m that moves every vertex and every face."""
    aut = automorphisms(m) if aut is None else aut
    identity = np.arange(m.n_flags)
    _, vertex_of = m.orbits("vertices")
    _, face_of = m.orbits("faces")
    found = []
    for phi in aut.elements:
        if np.array_equal(phi, identity) or not np.array_equal(phi[phi], identity):
            continue
        if np.any(vertex_of[phi] == vertex_of) or np.any(face_of[phi] == face_of):
            continue
        if all(np.array_equal(phi[psi], psi[phi]) for psi in aut.elements):
            found.append(phi)
    if len(found) != 1:
        raise RuntimeError(f"expected one antipodal automorphism, found {len(found)}")
    return found[0]


def quotient_by_free_automorphisms(m, subgroup):
    """The quotient of m by a group of automorphisms acting freely on flags.

    Parameters
    ----------
    m : FlagMap
    subgroup : list of numpy.ndarray
        Automorphisms closed under composition; the identity may be omitted.

    Raises
    ------
    NotFree
        If a non-identity element fixes a flag.
    """
    identity = np.arange(m.n_flags)
    elements = [np.asarray(phi) for phi in subgroup if not np.array_equal(phi, identity)]
    for phi in elements:
        if np.any(phi == identity):
            raise NotFree("a non-identity automorphism fixes a flag")
    if not elements:
        return m
    _, orbit_of = _orbits(m.n_flags, elements)
    _, representative = np.unique(orbit_of, return_index=True)
    return FlagMap(*[orbit_of[r[representative]] for r in m.gens])


def antipodal_quotient(om):
    """The projective-plane quotient of a centrally symmetric spherical map."""
    m = from_rotation_system(om)
    return quotient_by_free_automorphisms(m, [antipodal_automorphism(m)])


def k6_regular_pair():
    """The regular embeddings {3,5}_5 and {5,5}_3 of K6."""
    first = antipodal_quotient(icosahedron())
    return first, petrie_dual(first)


# everything known for a given n ----------------------------------------------


def constructed_embeddings(n, orientable_only=False):
    """Every edge-transitive embedding of K_n built here, one per isomorphism class.

    Returns
    -------
    list of FlagMap
        Sorted by canonical form.
    """
    maps = []
    if n == 6:
        if not orientable_only:
            maps.extend(k6_regular_pair())
    else:
        try:
            prime_power(n)
        except NotPrimePower:
            return []
        biggs = [from_rotation_system(om) for om in biggs_census(n)]
        maps.extend(biggs)
        if not orientable_only:
            maps.extend(petrie_dual(m) for m in biggs)
        if n > 3 and n % 4 == 3:
            james = [from_rotation_system(om) for om in james_census(n)]
            maps.extend(james)
            if not orientable_only:
                maps.extend(petrie_dual(m) for m in james)
    unique = {}
    for m in maps:
        unique.setdefault(canonical_form(m), m)
    return [unique[cert] for cert in sorted(unique)]

