"""Closed-form properties of the edge-transitive embeddings of K_n.

Every evaluator returns a dict keyed by :class:`etmaps.report.MapReport` field
names, so that :func:`compare` can set the closed forms against the values
recomputed from flag orbits.
"""

from fractions import Fraction
from math import gcd

from sympy.ntheory import totient

from etmaps.classify import basic_premap_catalog
from etmaps.classify import omega_image
from etmaps.classify import transitivity
from etmaps.field import prime_power

# n -> (face size, Petrie length, |Aut|) of the regular maps M_2, M_3, M_4
_SMALL_BIGGS = {2: (2, 2, 4), 3: (3, 6, 12), 4: (3, 4, 24)}


def _as_int(value, what):
    value = Fraction(value)
    if value.denominator != 1:
        raise ValueError(f"{what} evaluates to the non-integer {value}")
    return int(value)


def _common(n):
    return {"V": n, "E": n * (n - 1) // 2, "vertex_degrees": [n - 1] * n, "has_boundary": False}


def biggs_face_size(n):
    """m = (n-1)/2 when n = 3 mod 4, otherwise n - 1 (n >= 5)."""
    if n in _SMALL_BIGGS:
        return _SMALL_BIGGS[n][0]
    return (n - 1) // 2 if n % 4 == 3 else n - 1


def biggs_petrie_length(n):
    if n in _SMALL_BIGGS:
        return _SMALL_BIGGS[n][1]
    return 2 * prime_power(n)[0]


def biggs_genus(n):
    if n in _SMALL_BIGGS:
        return 0
    if n % 4 == 3:
        return _as_int(Fraction(n * n - 7 * n + 4, 4), "genus")
    return _as_int(Fraction((n - 1) * (n - 4), 4), "genus")


def biggs_formulas(n):
    """Type {m, n-1}_{2p}, genus and automorphism data of M_n(c)."""
    m = biggs_face_size(n)
    r = biggs_petrie_length(n)
    values = _common(n)
    n_arcs = n * (n - 1)
    values.update(
        F=n_arcs // m,
        face_sizes=[m] * (n_arcs // m),
        petrie_lengths=[r] * (n_arcs // r),
        petrie_count=n_arcs // r,
        orientable=True,
        genus_or_crosscaps=biggs_genus(n),
        chi=2 - 2 * biggs_genus(n),
        aut_order=_SMALL_BIGGS[n][2] if n in _SMALL_BIGGS else n_arcs,
        et_class="1" if n <= 4 else "2Pex",
        flags_transitive=n <= 4,
        edge_transitive=True,
        vertex_transitive=True,
        arc_transitive=True,
        face_transitive=True,
    )
    return values


def biggs_petrie_chi(n):
    """chi = n (1 - (n-1)/2 + (n-1)/2p) of P(M_n(c)), n >= 3."""
    r = biggs_petrie_length(n)
    return _as_int(n * (1 - Fraction(n - 1, 2) + Fraction(n - 1, r)), "chi")


def biggs_petrie_formulas(n):
    """Type {2p, n-1}_m and characteristic of the Petrie dual of M_n(c)."""
    if n == 2:
        return biggs_formulas(2)  # P(M_2) is M_2
    m = biggs_face_size(n)
    r = biggs_petrie_length(n)
    n_arcs = n * (n - 1)
    chi = biggs_petrie_chi(n)
    values = _common(n)
    values.update(
        F=n_arcs // r,
        face_sizes=[r] * (n_arcs // r),
        petrie_lengths=[m] * (n_arcs // m),
        petrie_count=n_arcs // m,
        orientable=False,
        genus_or_crosscaps=2 - chi,
        chi=chi,
        aut_order=_SMALL_BIGGS[n][2] if n in _SMALL_BIGGS else n_arcs,
        et_class="1" if n <= 4 else "2*ex",
        flags_transitive=n <= 4,
        edge_transitive=True,
        vertex_transitive=True,
        arc_transitive=True,
        face_transitive=True,
    )
    return values


def james_petrie_length(n, j):
    """l = 2(n-1)/gcd(n-1, 2(j-1))."""
    return 2 * (n - 1) // gcd(n - 1, 2 * (j - 1))


def james_face_orbits(n, j):
    """The two face orbits of M_n(c, j) as (number of faces, face size) pairs."""
    p, _ = prime_power(n)
    half_edges = n * (n - 1) // 2
    half = (n - 1) // 2
    if j % (n - 1) == half or (2 - j) % (n - 1) == half:
        counts = (n, n * (n - 1) // (2 * p))
    else:
        counts = (n * gcd(n - 1, j), n * gcd(n - 1, 2 - j))
    return [(count, half_edges // count) for count in counts]


def james_genus(n, j):
    p, _ = prime_power(n)
    half = (n - 1) // 2
    if j % (n - 1) == half or (2 - j) % (n - 1) == half:
        return _as_int(Fraction((n - 1) * (n * (p - 1) - 4 * p), 4 * p), "genus")
    g1 = gcd(n - 1, j)
    g2 = gcd(n - 1, 2 - j)
    return _as_int(Fraction(n, 4) * ((n - 3) - 2 * g1 - 2 * g2) + 1, "genus")


def james_formulas(n, j):
    """Face orbits, genus, Petrie polygons and automorphism data of M_n(c, j)."""
    orbits = james_face_orbits(n, j)
    ell = james_petrie_length(n, j)
    n_arcs = n * (n - 1)
    genus = james_genus(n, j)
    values = _common(n)
    values.update(
        F=sum(count for count, _ in orbits),
        face_sizes=sorted(size for count, size in orbits for _ in range(count)),
        petrie_lengths=[ell] * (n_arcs // ell),
        petrie_count=n_arcs // ell,
        orientable=True,
        genus_or_crosscaps=genus,
        chi=2 - 2 * genus,
        aut_order=n_arcs // 2,
        et_class="5*",
        flags_transitive=False,
        edge_transitive=True,
        vertex_transitive=True,
        arc_transitive=False,
        face_transitive=False,
    )
    return values


def james_petrie_chi(n, j):
    """chi = n (1 - (n-1)/2 + (n-1)/l) of P(M_n(c, j))."""
    ell = james_petrie_length(n, j)
    return _as_int(n * (1 - Fraction(n - 1, 2) + Fraction(n - 1, ell)), "chi")


def james_petrie_formulas(n, j):
    """Type {l, n-1} and characteristic of the Petrie dual of M_n(c, j)."""
    james = james_formulas(n, j)
    ell = james_petrie_length(n, j)
    chi = james_petrie_chi(n, j)
    values = _common(n)
    values.update(
        F=james["petrie_count"],
        face_sizes=[ell] * james["petrie_count"],
        petrie_lengths=james["face_sizes"],
        petrie_count=james["F"],
        orientable=False,
        genus_or_crosscaps=2 - chi,
        chi=chi,
        aut_order=james["aut_order"],
        et_class="5P",
        flags_transitive=False,
        edge_transitive=True,
        vertex_transitive=True,
        arc_transitive=False,
        face_transitive=True,
    )
    return values


def k6_formulas(which):
    """The regular pair on K6: ``which`` is ``"{3,5}"`` or ``"{5,5}"``."""
    match which:
        case "{3,5}":
            face, petrie, chi = 3, 5, 1
        case "{5,5}":
            face, petrie, chi = 5, 3, -3
        case _:
            raise ValueError(f"which must be '{{3,5}}' or '{{5,5}}', got {which!r}")
    values = _common(6)
    values.update(
        F=30 // face,
        face_sizes=[face] * (30 // face),
        petrie_lengths=[petrie] * (30 // petrie),
        petrie_count=30 // petrie,
        orientable=False,
        genus_or_crosscaps=2 - chi,
        chi=chi,
        aut_order=60,
        et_class="1",
        flags_transitive=True,
        edge_transitive=True,
        vertex_transitive=True,
        arc_transitive=True,
        face_transitive=True,
    )
    return values


def biggs_count(n):
    """phi(n-1)/e Biggs maps up to oriented isomorphism."""
    return int(totient(n - 1)) // prime_power(n)[1]


def james_count(n):
    """(n-3) phi(n-1)/4e James maps up to oriented isomorphism."""
    return (n - 3) * int(totient(n - 1)) // (4 * prime_power(n)[1])


def class_transitivity(label):
    """Transitivity flags shared by every map of one edge-transitive class."""
    q = basic_premap_catalog()[label].premap
    t = transitivity(q, quotient=q)
    return {
        "flags_transitive": t.flags,
        "edge_transitive": t.edges,
        "vertex_transitive": t.vertices,
        "arc_transitive": t.arcs,
        "face_transitive": t.faces,
    }


def dual_formulas(values):
    """Closed-form values of the dual, derived from those of the map."""
    label = omega_image(values["et_class"], "D")
    dual = dict(values)
    dual.update(
        V=values["F"],
        F=values["V"],
        face_sizes=sorted(values["vertex_degrees"]),
        vertex_degrees=sorted(values["face_sizes"]),
        et_class=label.value,
    )
    dual.update(class_transitivity(label))
    return dual


def compare(formulas, report):
    """Compares closed-form values with a computed report.

    Parameters
    ----------
    formulas : dict
    report : dict
        A :meth:`MapReport.to_dict` result.

    Returns
    -------
    consistent : bool
    mismatches : dict
        ``field -> (formula value, computed value)`` for every disagreement.
    """
    mismatches = {
        key: (value, report.get(key)) for key, value in formulas.items() if report.get(key) != value
    }
    return not mismatches, mismatches
