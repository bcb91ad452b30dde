import logging
from dataclasses import asdict
from dataclasses import dataclass

from etmaps.classify import EtClass
from etmaps.classify import automorphisms
from etmaps.classify import et_class
from etmaps.classify import quotient_premap
from etmaps.classify import transitivity
from etmaps.flagmap import counts
from etmaps.flagmap import genus_or_crosscaps
from etmaps.flagmap import has_boundary
from etmaps.flagmap import is_orientable
from etmaps.flagmap import multisets

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapReport:
    """Invariants of a map computed from its flag orbits.

    ``genus_or_crosscaps`` is None and the multisets are empty for maps with
    boundary.
    """

    V: int
    E: int
    F: int
    petrie_count: int
    chi: int
    orientable: bool
    has_boundary: bool
    genus_or_crosscaps: int
    face_sizes: list
    vertex_degrees: list
    petrie_lengths: list
    aut_order: int
    flags_transitive: bool
    edge_transitive: bool
    vertex_transitive: bool
    arc_transitive: bool
    face_transitive: bool
    et_class: EtClass

    def to_dict(self):
        """Plain JSON-ready values under the field names."""
        values = asdict(self)
        values["et_class"] = str(self.et_class)
        return values


def analyze(m):
    """Computes the full :class:`MapReport` of a flag map.

    Parameters
    ----------
    m : FlagMap

    Returns
    -------
    MapReport
    """
    v, e, f, petrie = (int(x) for x in counts(m))
    boundary = has_boundary(m)
    if boundary:
        genus = None
        faces, degrees, lengths = [], [], []
    else:
        genus = int(genus_or_crosscaps(m))
        faces, degrees, lengths = multisets(m)
    aut = automorphisms(m)
    q = quotient_premap(m, aut)
    trans = transitivity(m, quotient=q)
    report = MapReport(
        V=v,
        E=e,
        F=f,
        petrie_count=petrie,
        chi=v - e + f,
        orientable=is_orientable(m),
        has_boundary=boundary,
        genus_or_crosscaps=genus,
        face_sizes=faces,
        vertex_degrees=degrees,
        petrie_lengths=lengths,
        aut_order=aut.order,
        flags_transitive=trans.flags,
        edge_transitive=trans.edges,
        vertex_transitive=trans.vertices,
        arc_transitive=trans.arcs,
        face_transitive=trans.faces,
        et_class=et_class(m, quotient=q),
    )
    logger.debug(f"analyzed map with {m.n_flags} flags: class {report.et_class}")
    return report
