"""Brute-force census of the embeddings of K_n.

Closed embeddings are enumerated as signed rotation systems. By default the
rotation at vertex 0 is fixed to ``(1, 2, ..., n-1)`` and every edge at vertex
0 is given signature +1; relabeling the other vertices and switching them
reaches every embedding from this normal form. The unnormalized search (all
rotations and all signatures) is kept for n <= 4 as a cross-check.

Search shards are the rotation choices of the first free vertex (vertex 1 in
the normalized search). Shards are independent and their results are merged
as a union of canonical certificates.
"""

import hashlib
import itertools
import json
import logging
from dataclasses import dataclass
from math import factorial
from pathlib import Path

from joblib import Parallel
from joblib import delayed
import numpy as np
from tqdm.autonotebook import tqdm

from etmaps.classify import EtClass
from etmaps.classify import _involutions
from etmaps.classify import et_class
from etmaps.construct import constructed_embeddings
from etmaps.exceptions import TooLarge
from etmaps.exceptions import Unsupported
from etmaps.flagmap import FlagMap
from etmaps.flagmap import _orbits
from etmaps.flagmap import canonical_form
from etmaps.flagmap import from_certificate
from etmaps.flagmap import has_boundary
from etmaps.flagmap import is_complete
from etmaps.flagmap import validate

logger = logging.getLogger(__name__)

MAX_N = 6
MAX_UNNORMALIZED_N = 4
BATCH_SIZE = 4096


def _check_size(n, normalize=True):
    if n > MAX_N:
        raise TooLarge(f"the census is limited to n <= {MAX_N}, got {n}")
    if n < 3:
        raise Unsupported(f"the closed census needs n >= 3, got {n}")
    if not normalize and n > MAX_UNNORMALIZED_N:
        raise TooLarge(f"the unnormalized census is limited to n <= {MAX_UNNORMALIZED_N}, got {n}")


def count_candidates(n, orientable_only=False, normalize=True):
    """Number of rotation systems the search visits.

    ``((n-2)!)^(n-1) * 2^(E-(n-1))`` in normal form, ``((n-2)!)^n * 2^E``
    without it; the signature factor is 1 when ``orientable_only``.
    """
    _check_size(n, normalize)
    n_edges = n * (n - 1) // 2
    rotations = factorial(n - 2)
    if normalize:
        signs = 1 if orientable_only else 2 ** (n_edges - (n - 1))
        return rotations ** (n - 1) * signs
    signs = 1 if orientable_only else 2**n_edges
    return rotations**n * signs


# search tables ---------------------------------------------------------------


def _arc(n, u, v):
    """Arcs are numbered vertex-major, so the flags of u are contiguous."""
    return u * (n - 1) + (v if v < u else v - 1)


def _rotation_options(n, u):
    """Cyclic orders of the neighbours of u, each written from the smallest."""
    others = [v for v in range(n) if v != u]
    return [(others[0],) + rest for rest in itertools.permutations(others[1:])]


def _r1_segment(n, u, rot):
    """Images under r1 of the flags at u, indexed from the first flag of u."""
    d = len(rot)
    base = 2 * u * (n - 1)
    segment = [0] * (2 * d)
    for pos, v in enumerate(rot):
        f = 2 * _arc(n, u, v) - base
        segment[f] = 2 * _arc(n, u, rot[(pos + 1) % d]) + 1
        segment[f + 1] = 2 * _arc(n, u, rot[(pos - 1) % d])
    return segment


def _r0_table(n, negative):
    r0 = [0] * (2 * n * (n - 1))
    for u, v in itertools.permutations(range(n), 2):
        a = 2 * _arc(n, u, v)
        b = 2 * _arc(n, v, u)
        if (min(u, v), max(u, v)) in negative:
            r0[a], r0[a + 1] = b, b + 1
        else:
            r0[a], r0[a + 1] = b + 1, b
    return r0


def _negative_edge_sets(n, orientable_only, normalize):
    if orientable_only:
        return [frozenset()]
    edges = [e for e in itertools.combinations(range(n), 2) if not (normalize and e[0] == 0)]
    return [
        frozenset(itertools.compress(edges, bits))
        for bits in itertools.product((0, 1), repeat=len(edges))
    ]


class _SearchSpace:
    """Precomputed r0 and r1 pieces of every candidate for one census."""

    def __init__(self, n, orientable_only=False, normalize=True):
        _check_size(n, normalize)
        self.n = n
        self.n_flags = 2 * n * (n - 1)
        self.r2 = [f ^ 1 for f in range(self.n_flags)]
        self.shard_vertex = 1 if normalize else 0
        self.segments = []
        for u in range(n):
            if normalize and u == 0:
                options = [tuple(range(1, n))]
            else:
                options = _rotation_options(n, u)
            self.segments.append([_r1_segment(n, u, rot) for rot in options])
        self._segment_arrays = [np.array(segments, dtype=np.intp) for segments in self.segments]
        self.r0_tables = [
            np.array(_r0_table(n, neg), dtype=np.intp) for neg in _negative_edge_sets(n, orientable_only, normalize)
        ]

        # flags 2a and 2a+1 sit on arc a; arcs of u are contiguous
        self.vertex_of = np.arange(self.n_flags) // (2 * (n - 1))
        self.edge_of = np.zeros(self.n_flags, dtype=np.intp)
        edge_flags = []
        for e, (u, v) in enumerate(itertools.combinations(range(n), 2)):
            a, b = _arc(n, u, v), _arc(n, v, u)
            flags = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1]
            self.edge_of[flags] = e
            edge_flags.append(flags)
        self.edge_flags = np.array(edge_flags, dtype=np.intp)

    @property
    def n_prefixes(self):
        return len(self.segments[self.shard_vertex])

    def candidates(self, prefix):
        """Yields ``(r0, r1)`` for every candidate in one shard."""
        choices = [
            [segments[prefix]] if u == self.shard_vertex else segments
            for u, segments in enumerate(self.segments)
        ]
        for parts in itertools.product(*choices):
            r1 = list(itertools.chain.from_iterable(parts))
            for r0 in self.r0_tables:
                yield r0, r1

    def batches(self, prefix, size=BATCH_SIZE):
        """Yields the r1 arrays of one shard as ``(rows, n_flags)`` blocks."""
        ranges = [
            [prefix] if u == self.shard_vertex else range(len(segments))
            for u, segments in enumerate(self.segments)
        ]
        rows = itertools.product(*ranges)
        while True:
            index = np.array(list(itertools.islice(rows, size)), dtype=np.intp)
            if len(index) == 0:
                return
            yield np.concatenate(
                [segments[index[:, u]] for u, segments in enumerate(self._segment_arrays)], axis=1
            )

    def uniform_edges(self, r0, r1_block):
        """Mask of the rows of r1_block whose edges all look alike.

        Each flag gets three numbers that every automorphism preserves: the
        length of its face, and the steps along that face until it comes back
        to the same edge and to the same vertex. An edge-transitive map gives
        every edge the same multiset of these over its four flags.
        """
        phi = r1_block[:, r0]
        start = np.broadcast_to(np.arange(self.n_flags), phi.shape)
        start_edge = self.edge_of[start]
        start_vertex = self.vertex_of[start]
        length = np.zeros(phi.shape, dtype=np.int64)
        edge_gap = np.zeros(phi.shape, dtype=np.int64)
        vertex_gap = np.zeros(phi.shape, dtype=np.int64)
        current = phi
        for k in range(1, self.n_flags + 1):
            length[(length == 0) & (current == start)] = k
            edge_gap[(edge_gap == 0) & (self.edge_of[current] == start_edge)] = k
            vertex_gap[(vertex_gap == 0) & (self.vertex_of[current] == start_vertex)] = k
            if length.all():
                break
            current = np.take_along_axis(phi, current, axis=1)
        width = self.n_flags + 1
        codes = (length * width + edge_gap) * width + vertex_gap
        per_edge = np.sort(codes[:, self.edge_flags], axis=2)
        return (per_edge == per_edge[:, :1, :]).all(axis=(1, 2))


def enumerate_embeddings(n, orientable_only=False, normalize=True):
    """Every candidate embedding of K_n as a flag map.

    Yields at least one map per isomorphism class of closed embeddings;
    the number yielded is :func:`count_candidates`.

    Raises
    ------
    TooLarge
        If n > 6, or n > 4 without normalization.
    Unsupported
        If n < 3.
    """
    space = _SearchSpace(n, orientable_only, normalize)
    for prefix in range(space.n_prefixes):
        for r0, r1 in space.candidates(prefix):
            yield FlagMap(r0, r1, space.r2, check=False)


def _search_prefix(n, orientable_only, normalize, prefix):
    """Searches one shard.

    Candidates are filtered in numpy blocks by
    :meth:`_SearchSpace.uniform_edges`; only the survivors are built as flag
    maps and classified.

    Returns
    -------
    prefix : int
    candidates : int
    found : dict
        Hex certificate -> class label of every edge-transitive class seen.
    """
    space = _SearchSpace(n, orientable_only, normalize)
    seen = {}
    candidates = 0
    survivors = 0
    for r1_block in space.batches(prefix):
        for r0 in space.r0_tables:
            candidates += len(r1_block)
            for row in np.flatnonzero(space.uniform_edges(r0, r1_block)):
                survivors += 1
                m = FlagMap(r0, r1_block[row], space.r2, check=False)
                cert = canonical_form(m).hex()
                if cert not in seen:
                    seen[cert] = et_class(m)
    found = {cert: label.value for cert, label in seen.items() if label is not EtClass.NOT_EDGE_TRANSITIVE}
    logger.debug(
        f"n={n} prefix {prefix}: {candidates} candidates, {survivors} with uniform edges, "
        f"{len(found)} edge-transitive classes"
    )
    return prefix, candidates, found


# checkpoints -----------------------------------------------------------------


def _hash_meta(meta):
    encoded = json.dumps(meta, sort_keys=True).encode("utf-8")
    return hashlib.sha1(encoded).hexdigest()[:12]


def _checkpoint_path(resume, prefix):
    return Path(resume) / f"prefix-{prefix}.json"


def _read_checkpoint(path, meta_hash):
    """``(candidates, found)`` from a matching checkpoint, else None."""
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        logger.exception(f"Failed to read checkpoint {path}")
        return None
    if data.get("meta_hash") != meta_hash:
        logger.warning(f"ignoring checkpoint {path} written for different census parameters")
        return None
    return data["candidates"], dict(zip(data["certificates"], data["classes"]))


def _write_checkpoint(path, meta, meta_hash, prefix, candidates, found):
    certificates = sorted(found)
    data = {
        **meta,
        "prefix": prefix,
        "candidates": candidates,
        "certificates": certificates,
        "classes": [found[c] for c in certificates],
        "meta_hash": meta_hash,
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True))
    logger.info(f"checkpoint written to {path}")


# census ----------------------------------------------------------------------


@dataclass
class CensusResult:
    """Merged outcome of a census run.

    Attributes
    ----------
    classes : dict
        Certificate bytes -> EtClass, in certificate order.
    """

    n: int
    orientable_only: bool
    candidates: int
    classes: dict

    @property
    def entries(self):
        """``(FlagMap, EtClass)`` per class, rebuilt from the certificates."""
        return [(from_certificate(cert), label) for cert, label in self.classes.items()]

    def summary(self):
        return f"n={self.n} candidates={self.candidates} edge_transitive_classes={len(self.classes)}"


def run_census(
    n,
    orientable_only=False,
    n_jobs=1,
    shard=None,
    resume=None,
    normalize=True,
    progress=False,
):
    """Searches all candidate embeddings of K_n for edge-transitive ones.

    Parameters
    ----------
    n : int
        Number of vertices, 3 <= n <= 6.
    orientable_only : bool
        Restrict to all-positive signatures.
    n_jobs : int
        Number of joblib workers.
    shard : tuple of int, optional
        ``(i, m)`` searches only the prefixes with index = i mod m.
    resume : str or Path, optional
        Directory of per-prefix checkpoints; finished prefixes are read back
        instead of searched, new ones are written as they finish.
    normalize : bool
        Use the normal form for rotations and signatures.
    progress : bool
        Show a progress bar over prefixes.

    Returns
    -------
    CensusResult
    """
    space = _SearchSpace(n, orientable_only, normalize)
    prefixes = list(range(space.n_prefixes))
    if shard is not None:
        i, m = shard
        if m < 1 or not 0 <= i < m:
            raise ValueError(f"shard must be (i, m) with 0 <= i < m, got {shard}")
        prefixes = [p for p in prefixes if p % m == i]

    meta = {"n": n, "orientable_only": orientable_only, "normalize": normalize}
    meta_hash = _hash_meta(meta)
    done = {}
    todo = []
    if resume is not None:
        Path(resume).mkdir(parents=True, exist_ok=True)
    for p in prefixes:
        cached = _read_checkpoint(_checkpoint_path(resume, p), meta_hash) if resume is not None else None
        if cached is None:
            todo.append(p)
        else:
            done[p] = cached
    logger.info(f"census n={n}: {len(done)} prefixes restored, {len(todo)} to search")

    results = Parallel(n_jobs=n_jobs, return_as="generator")(
        delayed(_search_prefix)(n, orientable_only, normalize, p) for p in todo
    )
    for prefix, candidates, found in tqdm(
        results, total=len(todo), desc=f"Census n={n}", disable=not progress
    ):
        done[prefix] = (candidates, found)
        if resume is not None:
            _write_checkpoint(_checkpoint_path(resume, prefix), meta, meta_hash, prefix, candidates, found)

    merged = {}
    total = 0
    for candidates, found in done.values():
        total += candidates
        merged.update(found)
    classes = {bytes.fromhex(c): EtClass(merged[c]) for c in merged}
    classes = {cert: classes[cert] for cert in sorted(classes)}
    result = CensusResult(n=n, orientable_only=orientable_only, candidates=total, classes=classes)
    logger.info(result.summary())
    return result


def edge_transitive_census(n, orientable_only=False, **kwargs):
    """The edge-transitive embeddings of K_n, one per isomorphism class.

    Returns
    -------
    list of (FlagMap, EtClass)
        Sorted by certificate; keyword arguments go to :func:`run_census`.
    """
    return run_census(n, orientable_only, **kwargs).entries


# maps with boundary ----------------------------------------------------------


def _edge_blocks(n_edges, size):
    """r0 and r2 on n_edges disjoint copies of one edge.

    Size 2 is an edge lying on the boundary (r2 idle); size 4 is an edge with
    both sides present. Edges where r0 or r0 r2 acts trivially have both ends
    at one vertex, so they cannot occur in K_n.
    """
    r0 = []
    r2 = []
    for e in range(n_edges):
        b = size * e
        if size == 2:
            r0 += [b + 1, b]
            r2 += [b, b + 1]
        else:
            r0 += [b + 2, b + 3, b, b + 1]
            r2 += [b + 1, b, b + 3, b + 2]
    return r0, r2


def _vertex_count(r1, r2):
    return _orbits(len(r1), (np.asarray(r1), np.asarray(r2)))[0]


def boundary_census(n):
    """Edge-transitive maps with boundary whose underlying graph is K_n.

    Every edge of an edge-transitive map carries the same local structure,
    so the search joins E identical edge blocks by every involution r1.

    Returns
    -------
    list of FlagMap
        One per isomorphism class, in certificate order.

    Raises
    ------
    Unsupported
        Unless n is 2 or 3.
    """
    if n not in (2, 3):
        raise Unsupported(f"the boundary census covers n = 2 and 3, got {n}")
    n_edges = n * (n - 1) // 2
    found = {}
    for size in (2, 4):
        r0, r2 = _edge_blocks(n_edges, size)
        n_flags = size * n_edges
        for r1 in _involutions(n_flags):
            if size == 4 and all(r1[f] != f for f in range(n_flags)):
                continue
            if _vertex_count(r1, r2) != n:
                continue
            if not validate((r0, r1, r2)):
                continue
            m = FlagMap(r0, r1, r2, check=False)
            if not has_boundary(m) or not is_complete(m, n):
                continue
            if et_class(m) is EtClass.NOT_EDGE_TRANSITIVE:
                continue
            found.setdefault(canonical_form(m), m)
    logger.info(f"boundary census n={n}: {len(found)} maps")
    return [found[cert] for cert in sorted(found)]


# verification ----------------------------------------------------------------


@dataclass
class VerificationReport:
    """Census classes set against the constructed families for one n.

    ``missing`` lists constructed classes absent from the census and
    ``unexpected`` census classes with no construction, as hex certificates.
    """

    n: int
    orientable_only: bool
    candidates: int
    census_classes: int
    constructed_classes: int
    missing: list
    unexpected: list

    @property
    def matched(self):
        return not self.missing and not self.unexpected

    def to_dict(self):
        return {
            "n": self.n,
            "orientable_only": self.orientable_only,
            "candidates": self.candidates,
            "census_classes": self.census_classes,
            "constructed_classes": self.constructed_classes,
            "missing": self.missing,
            "unexpected": self.unexpected,
            "matched": self.matched,
        }


def verify_classification(n, full=False, n_jobs=1, resume=None, progress=False):
    """Compares the census of K_n with the constructed edge-transitive maps.

    For n = 6 only orientable embeddings are searched unless ``full`` is set.
    Discrepancies are reported, never raised.

    Returns
    -------
    VerificationReport
    """
    orientable_only = n == MAX_N and not full
    census = run_census(n, orientable_only, n_jobs=n_jobs, resume=resume, progress=progress)
    constructed = {canonical_form(m) for m in constructed_embeddings(n, orientable_only=orientable_only)}
    found = set(census.classes)
    report = VerificationReport(
        n=n,
        orientable_only=orientable_only,
        candidates=census.candidates,
        census_classes=len(found),
        constructed_classes=len(constructed),
        missing=sorted(c.hex() for c in constructed - found),
        unexpected=sorted(c.hex() for c in found - constructed),
    )
    if report.matched:
        logger.info(f"n={n}: census matches the {len(constructed)} constructed classes")
    else:
        logger.warning(
            f"n={n}: {len(report.missing)} constructed classes missing, {len(report.unexpected)} unexpected"
        )
    return report
