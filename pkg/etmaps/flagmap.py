"""Maps as flag systems.

A map is a finite set of flags ``0..N-1`` with three involutions ``r0, r1, r2``
stored as image arrays. Vertices, edges, faces and Petrie polygons are the
orbits of ``<r1, r2>``, ``<r0, r2>``, ``<r0, r1>`` and ``<r0 r2, r1>``. A flag
fixed by some ``r_i`` is a boundary flag.

Products are read left to right: ``r0 r2`` applies ``r0`` first, so as arrays
``(r0 r2)[f] == r2[r0[f]]``.
"""

import logging
from dataclasses import dataclass
from dataclasses import field

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from etmaps.exceptions import BoundaryNotSupported
from etmaps.exceptions import GenusUndefined
from etmaps.exceptions import InvalidFlagMap
from etmaps.exceptions import InvalidRotation
from etmaps.exceptions import NotOrientableRepresentation

logger = logging.getLogger(__name__)

ORBIT_KINDS = ("vertices", "edges", "faces", "petrie")


@dataclass(frozen=True)
class Validation:
    """Outcome of :func:`validate`; truthy iff the flag system is a map."""

    ok: bool
    violation: str = None

    def __bool__(self):
        return self.ok


class FlagMap:
    """A connected flag system with involutions r0, r1, r2.

    Parameters
    ----------
    r0, r1, r2 : array-like of int
        Images of the flags ``0..N-1`` under each involution.
    check : bool, default=True
        Whether to validate the arrays. Invalid arrays raise
        :class:`~etmaps.exceptions.InvalidFlagMap`.
    """

    def __init__(self, r0, r1, r2, check=True):
        arrays = []
        for r in (r0, r1, r2):
            a = np.array(r, dtype=np.int64)
            a.setflags(write=False)
            arrays.append(a)
        self.r0, self.r1, self.r2 = arrays
        self._cache = {}
        if check:
            result = validate(self)
            if not result:
                raise InvalidFlagMap(result.violation)

    @property
    def n_flags(self):
        return len(self.r0)

    @property
    def gens(self):
        return (self.r0, self.r1, self.r2)

    @property
    def r0r2(self):
        return self.r2[self.r0]

    def __eq__(self, other):
        if not isinstance(other, FlagMap):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.gens, other.gens))

    def __hash__(self):
        return hash(b"".join(r.tobytes() for r in self.gens))

    def __repr__(self):
        return f"FlagMap(n_flags={self.n_flags})"

    def orbits(self, kind):
        """Orbit labels for one of ``vertices``, ``edges``, ``faces`` or ``petrie``.

        Returns
        -------
        count : int
            Number of orbits.
        labels : numpy.ndarray
            Orbit index of every flag.
        """
        if kind not in self._cache:
            match kind:
                case "vertices":
                    gens = (self.r1, self.r2)
                case "edges":
                    gens = (self.r0, self.r2)
                case "faces":
                    gens = (self.r0, self.r1)
                case "petrie":
                    gens = (self.r0r2, self.r1)
                case "even":
                    gens = (self.r1[self.r0], self.r2[self.r1])
                case _:
                    raise ValueError(f"unknown orbit kind {kind!r}")
            self._cache[kind] = _orbits(self.n_flags, gens)
        return self._cache[kind]


def _orbits(n, gens):
    """Connected components of the Schreier graph of gens on n points."""
    rows = np.concatenate([np.arange(n)] * len(gens))
    cols = np.concatenate(gens)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    return int(count), labels


def validate(m):
    """Checks the flag-system axioms.

    Parameters
    ----------
    m : FlagMap or tuple of three arrays

    Returns
    -------
    Validation
        ``ok`` is True, or the first violation found.
    """
    gens = m.gens if isinstance(m, FlagMap) else tuple(np.asarray(r) for r in m)
    n = len(gens[0])
    if n == 0:
        return Validation(False, "no flags")
    for i, r in enumerate(gens):
        if r.shape != (n,):
            return Validation(False, f"r{i} has wrong length")
        if r.min() < 0 or r.max() >= n:
            return Validation(False, f"r{i} out of range")
    for i, r in enumerate(gens):
        if not np.array_equal(r[r], np.arange(n)):
            return Validation(False, f"r{i} not involution")
    r0r2 = gens[2][gens[0]]
    if not np.array_equal(r0r2[r0r2], np.arange(n)):
        return Validation(False, "(r0r2)^2 not identity")
    if _orbits(n, gens)[0] != 1:
        return Validation(False, "not connected")
    return Validation(True)


# invariants ------------------------------------------------------------------


def counts(m):
    """Numbers of vertices, edges, faces and Petrie polygons."""
    return tuple(m.orbits(kind)[0] for kind in ORBIT_KINDS)


def euler_characteristic(m):
    v, e, f, _ = counts(m)
    return v - e + f


def has_boundary(m):
    """True iff some r_i fixes a flag."""
    flags = np.arange(m.n_flags)
    return any(bool(np.any(r == flags)) for r in m.gens)


def is_orientable(m):
    """True iff the even words have two orbits and no r_i fixes a flag."""
    return not has_boundary(m) and bool(m.orbits("even")[0] == 2)


def genus_or_crosscaps(m):
    """Genus of an orientable map, crosscap number of a non-orientable one.

    Raises
    ------
    GenusUndefined
        For maps with boundary.
    """
    if has_boundary(m):
        raise GenusUndefined("genus is undefined for a map with boundary")
    chi = euler_characteristic(m)
    return (2 - chi) // 2 if is_orientable(m) else 2 - chi


def _half_orbit_sizes(m, kind):
    _, labels = m.orbits(kind)
    return sorted(int(s) // 2 for s in np.bincount(labels))


def multisets(m):
    """Sorted face sizes, vertex degrees and Petrie lengths of a closed map."""
    if has_boundary(m):
        raise BoundaryNotSupported("face sizes are only defined for closed maps")
    return (
        _half_orbit_sizes(m, "faces"),
        _half_orbit_sizes(m, "vertices"),
        _half_orbit_sizes(m, "petrie"),
    )


def map_type(m):
    """Distinct face sizes, vertex degrees and Petrie lengths of a closed map."""
    return tuple(sorted(set(s)) for s in multisets(m))


def type_symbol(m):
    """The symbol ``{p,q}_r`` when faces, degrees and Petrie lengths are uniform."""
    if has_boundary(m):
        return None
    faces, degrees, petrie = map_type(m)
    if len(faces) == len(degrees) == 1:
        symbol = f"{{{faces[0]},{degrees[0]}}}"
        if len(petrie) == 1:
            symbol += f"_{petrie[0]}"
        return symbol
    return None


# map operations --------------------------------------------------------------

OMEGA = {
    "1": (0, 1, 2),
    "D": (1, 0, 2),
    "P": (2, 1, 0),
    "DP": (2, 0, 1),
    "PD": (1, 2, 0),
    "DPD": (0, 2, 1),
}


def dual(m):
    return FlagMap(m.r2, m.r1, m.r0, check=False)


def petrie_dual(m):
    return FlagMap(m.r0r2, m.r1, m.r2, check=False)


def omega_apply(m, w):
    """Applies an element of the group generated by D and P.

    Parameters
    ----------
    m : FlagMap
    w : tuple of int or str
        Either a permutation ``(i, j, k)`` of ``(0, 1, 2)`` choosing the new
        ``(r0, r2, r0 r2)`` from the old triple, or a word over ``D`` and ``P``
        applied left to right (``"DP"`` is D then P).
    """
    if isinstance(w, str):
        result = m
        for letter in w.replace("1", ""):
            match letter:
                case "D":
                    result = dual(result)
                case "P":
                    result = petrie_dual(result)
                case _:
                    raise ValueError(f"unknown map operation {letter!r}")
        return result
    if sorted(w) != [0, 1, 2]:
        raise ValueError(f"{w} is not a permutation of (0, 1, 2)")
    triple = (m.r0, m.r2, m.r0r2)
    return FlagMap(triple[w[0]], m.r1, triple[w[1]], check=False)


def relabel(m, perm):
    """The map with flag f renamed perm[f]."""
    perm = np.asarray(perm, dtype=np.int64)
    gens = []
    for r in m.gens:
        new = np.empty_like(r)
        new[perm] = perm[r]
        gens.append(new)
    return FlagMap(*gens, check=False)


# underlying graph ------------------------------------------------------------


def underlying_graph(m):
    """Vertex orbits joined by edge orbits, as a networkx MultiGraph.

    An edge whose flags all lie in one vertex orbit becomes a self-loop with
    ``kind="free"`` when r0 fixes one of its flags and ``kind="loop"`` otherwise.
    """
    n_vertices, vertex_of = m.orbits("vertices")
    n_edges, edge_of = m.orbits("edges")
    flags = np.arange(m.n_flags)
    r0_fixed = m.r0 == flags
    g = nx.MultiGraph()
    g.add_nodes_from(range(n_vertices))
    for e in range(n_edges):
        members = flags[edge_of == e]
        ends = sorted({int(v) for v in vertex_of[members]})
        if len(ends) == 2:
            g.add_edge(ends[0], ends[1], key=e, kind="edge")
        else:
            kind = "free" if r0_fixed[members].any() else "loop"
            g.add_edge(ends[0], ends[0], key=e, kind=kind)
    return g


def is_complete(m, n):
    """True iff the underlying graph is the simple complete graph K_n."""
    g = underlying_graph(m)
    if g.number_of_nodes() != n or nx.number_of_selfloops(g) > 0:
        return False
    simple = nx.Graph(g)
    return g.number_of_edges() == simple.number_of_edges() == n * (n - 1) // 2


# isomorphism and canonical forms ---------------------------------------------


def _flag_signatures(m):
    """Per-flag isomorphism invariants: orbit sizes and fixed-point pattern."""
    columns = []
    for kind in ORBIT_KINDS:
        _, labels = m.orbits(kind)
        columns.append(np.bincount(labels)[labels])
    flags = np.arange(m.n_flags)
    fixed = sum((r == flags).astype(np.int64) << i for i, r in enumerate(m.gens))
    columns.append(fixed)
    return np.stack(columns, axis=1)


def _extend(gens_a, gens_b, start_a, start_b, n):
    """The unique flag bijection sending start_a to start_b and commuting with
    every generator, or None."""
    phi = [-1] * n
    used = [False] * n
    phi[start_a] = start_b
    used[start_b] = True
    stack = [start_a]
    while stack:
        f = stack.pop()
        g = phi[f]
        for ra, rb in zip(gens_a, gens_b):
            f2 = ra[f]
            g2 = rb[g]
            h = phi[f2]
            if h == -1:
                if used[g2]:
                    return None
                phi[f2] = g2
                used[g2] = True
                stack.append(f2)
            elif h != g2:
                return None
    return phi


def isomorphic(a, b):
    """A flag bijection commuting with r0, r1, r2, or None.

    Returns
    -------
    numpy.ndarray or None
        ``phi`` with ``phi[r_i[f]] == b.r_i[phi[f]]`` for all flags.
    """
    if a.n_flags != b.n_flags or counts(a) != counts(b):
        return None
    sig_a = _flag_signatures(a)
    sig_b = _flag_signatures(b)
    candidates = np.flatnonzero((sig_b == sig_a[0]).all(axis=1))
    gens_a = [r.tolist() for r in a.gens]
    gens_b = [r.tolist() for r in b.gens]
    for g in candidates:
        phi = _extend(gens_a, gens_b, 0, int(g), a.n_flags)
        if phi is not None:
            return np.array(phi, dtype=np.int64)
    return None


def _bfs_code(gens, start, n, best):
    """BFS relabeling code from start; None once it exceeds best."""
    label = [-1] * n
    label[start] = 0
    order = [start]
    code = []
    smaller = best is None
    head = 0
    while head < len(order):
        f = order[head]
        head += 1
        for r in gens:
            g = r[f]
            if label[g] == -1:
                label[g] = len(order)
                order.append(g)
            value = label[g]
            if not smaller:
                ref = best[len(code)]
                if value > ref:
                    return None
                if value < ref:
                    smaller = True
            code.append(value)
    return code


def _min_signature_flags(m):
    sig = _flag_signatures(m)
    keys = [tuple(row) for row in sig.tolist()]
    smallest = min(keys)
    return [f for f, key in enumerate(keys) if key == smallest]


def canonical_form(m):
    """A certificate equal for two maps iff they are isomorphic.

    The certificate is the lexicographically least BFS relabeling code over
    all start flags with the smallest local signature, prefixed by the flag
    count and packed as big-endian 32-bit words.
    """
    gens = [r.tolist() for r in m.gens]
    best = None
    for start in _min_signature_flags(m):
        code = _bfs_code(gens, start, m.n_flags, best)
        if code is not None:
            best = code
    return np.asarray([m.n_flags] + best, dtype=">u4").tobytes()


def from_certificate(cert):
    """The canonical representative encoded by a certificate."""
    words = np.frombuffer(cert, dtype=">u4").astype(np.int64)
    n = int(words[0])
    code = words[1:].reshape(n, 3)
    return FlagMap(code[:, 0], code[:, 1], code[:, 2])


# rotation systems ------------------------------------------------------------


@dataclass(frozen=True)
class OrientedMap:
    """A rotation system with an edge signature on a simple graph.

    Attributes
    ----------
    rotation : tuple of tuple of int
        ``rotation[u]`` lists the neighbours of ``u`` in cyclic order.
    signature : dict
        Maps an edge ``(u, v)`` with ``u < v`` to -1; missing edges are +1.
    """

    rotation: tuple
    signature: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rotation", tuple(tuple(int(v) for v in r) for r in self.rotation))
        negative = {}
        for (u, v), s in self.signature.items():
            if s not in (1, -1):
                raise InvalidRotation(f"signature of edge {(u, v)} must be +1 or -1, got {s}")
            if s == -1:
                negative[(min(u, v), max(u, v))] = -1
        object.__setattr__(self, "signature", negative)

    @property
    def n_vertices(self):
        return len(self.rotation)

    @property
    def edges(self):
        return sorted((u, v) for u, rot in enumerate(self.rotation) for v in rot if u < v)

    def sign(self, u, v):
        return self.signature.get((min(u, v), max(u, v)), 1)

    def graph(self):
        """The underlying simple graph."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    @property
    def all_positive(self):
        return not self.signature


def validate_rotation(om):
    """Raises InvalidRotation unless om is a rotation system on a simple connected graph."""
    n = om.n_vertices
    if n == 0:
        raise InvalidRotation("no vertices")
    for u, rot in enumerate(om.rotation):
        if not rot:
            raise InvalidRotation(f"vertex {u} has no neighbours")
        if len(set(rot)) != len(rot):
            raise InvalidRotation(f"rotation at {u} repeats a neighbour")
        for v in rot:
            if v == u or not 0 <= v < n:
                raise InvalidRotation(f"rotation at {u} contains invalid neighbour {v}")
            if u not in om.rotation[v]:
                raise InvalidRotation(f"edge {u}-{v} is missing at {v}")
    edges = set(om.edges)
    for edge in om.signature:
        if edge not in edges:
            raise InvalidRotation(f"signature given for non-edge {edge}")
    if not nx.is_connected(om.graph()):
        raise InvalidRotation("graph is not connected")


def flag_index(om):
    """The flag numbering used by :func:`from_rotation_system`.

    Flag ``(u, v, s)`` sits on arc ``(u, v)`` and side ``s``; arcs are numbered
    vertex by vertex in rotation order and side +1 precedes side -1.
    """
    index = {}
    k = 0
    for u, rot in enumerate(om.rotation):
        for v in rot:
            index[(u, v, 1)] = 2 * k
            index[(u, v, -1)] = 2 * k + 1
            k += 1
    return index


def from_rotation_system(om, check=True):
    """Builds the flag map of a signed rotation system.

    ``r0(u,v,s) = (v,u,-l(uv) s)``, ``r1(u,v,s) = (u, rho_u^s(v), -s)`` and
    ``r2(u,v,s) = (u,v,-s)``, where ``rho_u`` is the rotation at ``u`` and
    ``l`` the signature.

    Raises
    ------
    InvalidRotation
        If ``om`` is not a valid rotation system (only when ``check``).
    """
    if check:
        validate_rotation(om)
    index = flag_index(om)
    n = len(index)
    r0 = [0] * n
    r1 = [0] * n
    r2 = [0] * n
    for u, rot in enumerate(om.rotation):
        deg = len(rot)
        for pos, v in enumerate(rot):
            lam = om.sign(u, v)
            for s in (1, -1):
                f = index[(u, v, s)]
                r0[f] = index[(v, u, -lam * s)]
                r1[f] = index[(u, rot[(pos + s) % deg], -s)]
                r2[f] = index[(u, v, -s)]
    return FlagMap(r0, r1, r2, check=check)


def switch_vertex(om, v):
    """Negates the signatures at v and reverses its rotation (an isomorphic map)."""
    rotation = list(om.rotation)
    rotation[v] = tuple(reversed(rotation[v]))
    signature = dict(om.signature)
    for w in om.rotation[v]:
        edge = (min(v, w), max(v, w))
        signature[edge] = -om.sign(v, w)
    return OrientedMap(tuple(rotation), signature)


def _require_orientable(*maps):
    for om in maps:
        if not om.all_positive:
            raise NotOrientableRepresentation("oriented comparison needs all-positive signatures")


def mirror(om):
    """The mirror image: every rotation reversed."""
    _require_orientable(om)
    return OrientedMap(tuple(tuple(reversed(rot)) for rot in om.rotation))


def _arc_tables(om):
    """Arc numbering with successor-in-rotation and reverse-arc tables."""
    arcs = [(u, v) for u, rot in enumerate(om.rotation) for v in rot]
    arc_id = {arc: k for k, arc in enumerate(arcs)}
    succ = [0] * len(arcs)
    rev = [0] * len(arcs)
    for (u, v), k in arc_id.items():
        rot = om.rotation[u]
        succ[k] = arc_id[(u, rot[(rot.index(v) + 1) % len(rot)])]
        rev[k] = arc_id[(v, u)]
    return arcs, succ, rev


def oriented_isomorphic(a, b):
    """True iff some graph isomorphism carries the rotations of a onto those of b."""
    _require_orientable(a, b)
    if a.n_vertices != b.n_vertices:
        return False
    if sorted(map(len, a.rotation)) != sorted(map(len, b.rotation)):
        return False
    arcs_a, succ_a, rev_a = _arc_tables(a)
    arcs_b, succ_b, rev_b = _arc_tables(b)
    if len(arcs_a) != len(arcs_b):
        return False
    deg_a = len(a.rotation[arcs_a[0][0]])
    gens_a = (succ_a, rev_a)
    gens_b = (succ_b, rev_b)
    for k, (u, _) in enumerate(arcs_b):
        if len(b.rotation[u]) != deg_a:
            continue
        if _extend(gens_a, gens_b, 0, k, len(arcs_a)) is not None:
            return True
    return False


def oriented_certificate(om, start_vertices=None):
    """Rotation-preserving canonical code; equal iff oriented-isomorphic.

    Parameters
    ----------
    om : OrientedMap
    start_vertices : iterable of int, optional
        Restrict start arcs to these vertices. Restricting to a single vertex
        is sound only for maps whose orientation-preserving automorphisms are
        transitive on vertices, such as Cayley maps.
    """
    _require_orientable(om)
    arcs, succ, rev = _arc_tables(om)
    if start_vertices is None:
        start_vertices = range(om.n_vertices)
    start_vertices = set(start_vertices)
    best = None
    for k, (u, _) in enumerate(arcs):
        if u in start_vertices:
            code = _bfs_code((succ, rev), k, len(arcs), best)
            if code is not None:
                best = code
    return np.asarray([len(arcs)] + best, dtype=">u4").tobytes()
