"""Command line interface: ``etmaps <command> ...``.

Exit codes are 0 on success, 2 on usage errors and invalid inputs, and 1
when ``verify`` finds a failed check.
"""

import argparse
import json
import sys
from pathlib import Path

from sympy.ntheory import totient

from etmaps.census import boundary_census
from etmaps.census import run_census
from etmaps.census import verify_classification
from etmaps.classify import EtClass
from etmaps.classify import automorphisms
from etmaps.classify import basic_premap_catalog
from etmaps.classify import et_class
from etmaps.classify import omega_image
from etmaps.classify import one_edge_maps
from etmaps.classify import quotient_premap
from etmaps.classify import transitivity
from etmaps.construct import biggs_census
from etmaps.construct import biggs_map
from etmaps.construct import constructed_embeddings
from etmaps.construct import james_map
from etmaps.construct import james_parameters
from etmaps.construct import k6_regular_pair
from etmaps.field import FieldElement
from etmaps.field import field_of_order
from etmaps.field import galois_orbits
from etmaps.field import make_field
from etmaps.field import primitive_elements
from etmaps.flagmap import dual
from etmaps.flagmap import from_rotation_system
from etmaps.flagmap import is_complete
from etmaps.flagmap import is_orientable
from etmaps.flagmap import isomorphic
from etmaps.flagmap import mirror
from etmaps.flagmap import omega_apply
from etmaps.flagmap import oriented_isomorphic
from etmaps.flagmap import petrie_dual
from etmaps.formulas import biggs_count
from etmaps.formulas import biggs_formulas
from etmaps.formulas import biggs_petrie_formulas
from etmaps.formulas import compare
from etmaps.formulas import dual_formulas
from etmaps.formulas import james_count
from etmaps.formulas import james_formulas
from etmaps.formulas import james_petrie_formulas
from etmaps.formulas import k6_formulas
from etmaps.logging_config import _configure_logging
from etmaps.printing import _display_results
from etmaps.printing import _records_table
from etmaps.printing import _report_table
from etmaps.report import analyze
from etmaps.save import MapSerialiser

K6_TYPES = ("{3,5}", "{5,5}")


def _print_json(document):
    print(json.dumps(document, indent=2, sort_keys=True))


def _shard(text):
    try:
        i, m = (int(part) for part in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like I/M, got {text!r}")
    if m < 1 or not 0 <= i < m:
        raise argparse.ArgumentTypeError(f"shard I/M needs 0 <= I < M, got {text!r}")
    return i, m


def _label_slug(label):
    return str(label).replace("*", "star")


# field -----------------------------------------------------------------------


def _field_info(args, logger):
    fs = make_field(args.p, args.e)
    primitive = [fs.index(a) for a in primitive_elements(fs)]
    orbits = [[fs.index(a) for a in orbit] for orbit in galois_orbits(fs, primitive)]
    info = {
        "n": fs.n,
        "p": fs.p,
        "e": fs.e,
        "modulus": str(FieldElement(fs.modulus)),
        "phi": int(totient(fs.n - 1)),
        "primitive_elements": primitive,
        "galois_orbits": orbits,
    }
    if args.json:
        _print_json(info)
        return 0
    rows = [
        {"index": i, "element": str(fs.element(i)), "orbit": k}
        for k, orbit in enumerate(orbits)
        for i in orbit
    ]
    print(f"GF({fs.n}) = Z_{fs.p}[x] / ({info['modulus']}), phi(n-1) = {info['phi']}")
    _display_results("Primitive elements by Galois orbit", _records_table(rows, index="index"))
    return 0


# map -------------------------------------------------------------------------


def _constructed_map(args):
    """The requested map and the closed-form values it should satisfy."""
    match args.map_command:
        case "biggs":
            m = from_rotation_system(biggs_map(args.n, args.c))
            formulas = biggs_petrie_formulas(args.n) if args.petrie else biggs_formulas(args.n)
        case "james":
            m = from_rotation_system(james_map(args.n, args.c, args.j))
            if args.petrie:
                formulas = james_petrie_formulas(args.n, args.j)
            else:
                formulas = james_formulas(args.n, args.j)
        case "k6":
            first, second = k6_regular_pair()
            m = first if args.which == K6_TYPES[0] else second
            other = K6_TYPES[1 - K6_TYPES.index(args.which)]
            formulas = k6_formulas(other if args.petrie else args.which)
    if args.petrie:
        m = petrie_dual(m)
    if args.dual:
        m = dual(m)
        formulas = dual_formulas(formulas)
    return m, formulas


def _map_construct(args, logger):
    m, formulas = _constructed_map(args)
    report = analyze(m)
    consistent, mismatches = compare(formulas, report.to_dict())
    for key, (expected, computed) in mismatches.items():
        logger.warning(f"{key}: formula gives {expected}, flags give {computed}")
    if args.out is not None:
        MapSerialiser(logger)._save_map(m, args.out)
    if args.json:
        _print_json({"report": report.to_dict(), "formulas": formulas, "consistent": consistent})
        return 0
    _display_results(f"Map with {m.n_flags} flags", _report_table(report, formulas))
    print(f"consistent: {consistent}")
    return 0


def _map_analyze(args, logger):
    m = MapSerialiser(logger)._load_map(args.file)
    report = analyze(m)
    if args.json:
        _print_json({"report": report.to_dict()})
        return 0
    _display_results(f"Map read from {args.file}", _report_table(report))
    return 0


def _map_classify(args, logger):
    m = MapSerialiser(logger)._load_map(args.file)
    aut = automorphisms(m)
    q = quotient_premap(m, aut)
    t = transitivity(m, quotient=q)
    result = {
        "et_class": str(et_class(m, quotient=q)),
        "aut_order": aut.order,
        "flags_transitive": t.flags,
        "edge_transitive": t.edges,
        "vertex_transitive": t.vertices,
        "arc_transitive": t.arcs,
        "face_transitive": t.faces,
    }
    if args.json:
        _print_json(result)
        return 0
    for key, value in result.items():
        print(f"{key}: {value}")
    return 0


# catalog ---------------------------------------------------------------------


def _catalog_premaps(args, logger):
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    catalog = basic_premap_catalog()
    rows = []
    serialiser = MapSerialiser(logger)
    for label, entry in catalog.items():
        rows.append(
            {
                "label": str(label),
                "flags": entry.premap.n_flags,
                "vertices": entry.n_vertices,
                "boundary": entry.has_boundary,
                "free_edge": entry.free_edge,
                "orientable": entry.orientable,
                "surface": entry.surface,
            }
        )
        if args.out is not None:
            serialiser._save_map(entry.premap, args.out, name=f"premap-{_label_slug(label)}.flagmap")
    if args.json:
        _print_json({"premaps": rows})
        return 0
    _display_results("Basic premaps of the edge-transitive classes", _records_table(rows, index="label"))
    return 0


# census ----------------------------------------------------------------------


def _census(args, logger):
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    serialiser = MapSerialiser(logger)
    if args.boundary:
        maps = boundary_census(args.n)
        labels = [et_class(m) for m in maps]
        if args.out is not None:
            for k, m in enumerate(maps):
                serialiser._save_map(m, args.out, name=f"boundary-{k}.flagmap")
        summary = f"n={args.n} boundary_classes={len(maps)}"
        if args.json:
            _print_json({"n": args.n, "classes": [str(label) for label in labels], "summary": summary})
            return 0
        for k, label in enumerate(labels):
            print(f"{k} {label}")
        print(summary)
        return 0

    result = run_census(
        args.n,
        orientable_only=args.orientable_only,
        n_jobs=args.jobs,
        shard=args.shard,
        resume=args.resume,
        normalize=not args.unnormalized,
        progress=args.progress,
    )
    if args.out is not None:
        for k, (m, label) in enumerate(result.entries):
            serialiser._save_map(m, args.out, name=f"class-{k}-{_label_slug(label)}.flagmap")
    if args.json:
        _print_json(
            {
                "n": result.n,
                "orientable_only": result.orientable_only,
                "candidates": result.candidates,
                "classes": [
                    {"certificate": cert.hex(), "et_class": str(label)}
                    for cert, label in result.classes.items()
                ],
                "summary": result.summary(),
            }
        )
        return 0
    for cert, label in result.classes.items():
        print(f"{cert.hex()} {label}")
    print(result.summary())
    return 0


# verify checks ---------------------------------------------------------------


def _prime_powers(low, high):
    found = []
    for n in range(low, high + 1):
        try:
            field_of_order(n)
        except ValueError:
            continue
        found.append(n)
    return found


def _james_orders(max_n):
    return [n for n in _prime_powers(7, max_n) if n % 4 == 3]


def _check_field(max_n, **_):
    for n in _prime_powers(2, max_n):
        fs = field_of_order(n)
        primitive = primitive_elements(fs)
        if len(primitive) != int(totient(n - 1)):
            return False, f"GF({n}) has {len(primitive)} primitive elements"
        for a in fs.elements()[1:]:
            if fs.mul(a, fs.inv(a)) != fs.one:
                return False, f"GF({n}): {a} times its inverse is not one"
        orbits = galois_orbits(fs, primitive)
        if sorted(fs.index(a) for orbit in orbits for a in orbit) != sorted(fs.index(a) for a in primitive):
            return False, f"GF({n}): Galois orbits do not partition the primitive elements"
    return True, f"fields up to order {max_n}"


def _check_family(pairs, formulas_of, graph_orders):
    """pairs is a list of (n, params, FlagMap)."""
    for n, params, m in pairs:
        if not is_complete(m, n):
            return False, f"n={n} {params}: underlying graph is not K_{n}"
        consistent, mismatches = compare(formulas_of(n, params), analyze(m).to_dict())
        if not consistent:
            return False, f"n={n} {params}: {mismatches}"
    return True, f"{len(pairs)} maps for n in {graph_orders}"


def _check_biggs(max_n, **_):
    orders = _prime_powers(2, max_n)
    pairs = []
    for n in orders:
        census = biggs_census(n)
        if len(census) != biggs_count(n):
            return False, f"n={n}: {len(census)} Biggs maps, expected {biggs_count(n)}"
        pairs += [(n, k, from_rotation_system(om)) for k, om in enumerate(census)]
    for n, _, m in pairs:
        if not is_orientable(m):
            return False, f"n={n}: Biggs map is not orientable"
    return _check_family(pairs, lambda n, _: biggs_formulas(n), orders)


def _check_biggs_petrie(max_n, **_):
    orders = _prime_powers(3, max_n)
    pairs = [
        (n, k, petrie_dual(from_rotation_system(om))) for n in orders for k, om in enumerate(biggs_census(n))
    ]
    return _check_family(pairs, lambda n, _: biggs_petrie_formulas(n), orders)


def _james_pairs(max_n, petrie):
    pairs = []
    orders = _james_orders(max_n)
    for n in orders:
        parameters = james_parameters(n)
        if len(parameters) != james_count(n):
            raise RuntimeError(f"n={n}: {len(parameters)} James maps, expected {james_count(n)}")
        for c, j in parameters:
            m = from_rotation_system(james_map(n, c, j))
            pairs.append((n, (c, j), petrie_dual(m) if petrie else m))
    return orders, pairs


def _check_james(max_n, **_):
    orders, pairs = _james_pairs(max_n, petrie=False)
    if not orders:
        return True, "no James orders in range"
    return _check_family(pairs, lambda n, cj: james_formulas(n, cj[1]), orders)


def _check_james_petrie(max_n, **_):
    orders, pairs = _james_pairs(max_n, petrie=True)
    if not orders:
        return True, "no James orders in range"
    return _check_family(pairs, lambda n, cj: james_petrie_formulas(n, cj[1]), orders)


def _check_k6(max_n, **_):
    if max_n < 6:
        return True, "n = 6 out of range"
    first, second = k6_regular_pair()
    if isomorphic(petrie_dual(first), second) is None:
        return False, "the K6 maps are not Petrie duals"
    return _check_family(
        [(6, which, m) for which, m in zip(K6_TYPES, (first, second))],
        lambda n, which: k6_formulas(which),
        [6],
    )


def _check_oracle(n, full=False, n_jobs=1, **_):
    report = verify_classification(n, full=full, n_jobs=n_jobs)
    detail = f"{report.census_classes} census classes, {report.constructed_classes} constructed"
    return report.matched, detail


def _check_boundary(max_n, **_):
    expected = {2: ["1", "1", "2"], 3: ["1", "2*", "2P"]}
    for n, labels in expected.items():
        found = sorted(str(et_class(m)) for m in boundary_census(n))
        if found != labels:
            return False, f"n={n}: classes {found}, expected {labels}"
    return True, "n = 2 and 3"


def _omega_pool(max_n):
    """Constructed embeddings of K_n for n <= min(max_n, 9) and their duals."""
    maps = [m for n in range(2, min(max_n, 9) + 1) for m in constructed_embeddings(n)]
    return maps + [dual(m) for m in maps]


def _check_omega(max_n, **_):
    pool = _omega_pool(max_n)
    if max_n >= 9 and len(pool) < 20:
        return False, f"only {len(pool)} maps to check"
    for m in pool:
        if dual(dual(m)) != m:
            return False, "D D is not the identity"
        if isomorphic(petrie_dual(petrie_dual(m)), m) is None:
            return False, "P P is not the identity"
        if isomorphic(omega_apply(m, "DPDPDP"), m) is None:
            return False, "(D P)^3 is not the identity"
        label = et_class(m)
        for word, image in (("D", dual(m)), ("P", petrie_dual(m))):
            if et_class(image) != omega_image(label, word):
                return False, f"{word} sends class {label} to {et_class(image)}"
    return True, f"{len(pool)} maps"


def _check_oriented(max_n, **_):
    checked = []
    if max_n >= 5:
        a, b = biggs_map(5, 2), biggs_map(5, 3)
        if oriented_isomorphic(a, b) or isomorphic(from_rotation_system(a), from_rotation_system(b)) is None:
            return False, "M_5(2) and M_5(3) should be flag-isomorphic but not oriented-isomorphic"
        checked.append("M_5")
    if max_n >= 7:
        if not oriented_isomorphic(mirror(james_map(7, 5, 5)), james_map(7, 3, 3)):
            return False, "mirror(M_7(5,5)) is not M_7(3,3)"
        checked.append("M_7")
    if max_n >= 9:
        fs = field_of_order(9)
        orbits = galois_orbits(fs, primitive_elements(fs))
        c = orbits[0][0]
        if not oriented_isomorphic(biggs_map(9, c), biggs_map(9, fs.pow(c, 3))):
            return False, "M_9(c) and M_9(c^3) are not oriented-isomorphic"
        if oriented_isomorphic(biggs_map(9, c), biggs_map(9, orbits[1][0])):
            return False, "M_9 maps from different Galois orbits are oriented-isomorphic"
        checked.append("M_9")
    return True, ", ".join(checked) or "nothing in range"


def _check_catalog(max_n, **_):
    catalog = basic_premap_catalog()
    if len(catalog) != 14 or len(one_edge_maps()) != 14:
        return False, f"{len(catalog)} premaps in the catalog"
    count = 0
    for n in range(2, max_n + 1):
        for m in constructed_embeddings(n):
            q = quotient_premap(m)
            label = et_class(m, quotient=q)
            if label is EtClass.NOT_EDGE_TRANSITIVE or isomorphic(q, catalog[label].premap) is None:
                return False, f"n={n}: quotient does not match catalog entry {label}"
            count += 1
    return True, f"14 premaps, {count} quotients"


def _verify_checks(max_n):
    checks = [
        ("field", _check_field),
        ("biggs", _check_biggs),
        ("biggs-petrie", _check_biggs_petrie),
        ("james", _check_james),
        ("james-petrie", _check_james_petrie),
        ("k6", _check_k6),
    ]
    for n in range(3, min(max_n, 6) + 1):
        checks.append((f"oracle-{n}", lambda n=n, **kwargs: _check_oracle(n, **kwargs)))
    checks += [
        ("boundary", _check_boundary),
        ("omega", _check_omega),
        ("oriented", _check_oriented),
        ("catalog", _check_catalog),
    ]
    return checks


def _verify(args, logger):
    rows = []
    for name, check in _verify_checks(args.max_n):
        try:
            passed, detail = check(max_n=args.max_n, full=args.full, n_jobs=args.jobs)
        except Exception as e:
            logger.exception(f"check {name} raised")
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info(f"{name}: {'passed' if passed else 'FAILED'} ({detail})")
        rows.append({"name": name, "passed": bool(passed), "detail": detail})
    passed = all(row["passed"] for row in rows)
    if args.json:
        _print_json({"max_n": args.max_n, "checks": rows, "passed": passed})
    else:
        _display_results(f"Verification up to n = {args.max_n}", _records_table(rows, index="name"))
    return 0 if passed else 1


# parser ----------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")
    common.add_argument("--verbose", type=int, choices=(0, 1, 2), default=0)
    common.add_argument("--log-file", default=None, help="also write the log to this file")

    parser = argparse.ArgumentParser(
        prog="etmaps", description="Edge-transitive embeddings of complete graphs."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    field_parser = commands.add_parser("field", help="finite field tables")
    field_commands = field_parser.add_subparsers(dest="field_command", required=True)
    info = field_commands.add_parser("info", parents=[common])
    info.add_argument("--p", type=int, required=True)
    info.add_argument("--e", type=int, default=1)
    info.set_defaults(func=_field_info)

    map_parser = commands.add_parser("map", help="build, analyze and classify maps")
    map_commands = map_parser.add_subparsers(dest="map_command", required=True)
    constructed = argparse.ArgumentParser(add_help=False)
    constructed.add_argument("--petrie", action="store_true", help="take the Petrie dual")
    constructed.add_argument("--dual", action="store_true", help="take the dual (after --petrie)")
    constructed.add_argument("--out", default=None, help="write the map in flagmap v1 format")
    biggs = map_commands.add_parser("biggs", parents=[common, constructed])
    biggs.add_argument("--n", type=int, required=True)
    biggs.add_argument("--c", type=int, required=True, help="primitive element, by index")
    biggs.set_defaults(func=_map_construct)
    james = map_commands.add_parser("james", parents=[common, constructed])
    james.add_argument("--n", type=int, required=True)
    james.add_argument("--c", type=int, required=True, help="primitive element, by index")
    james.add_argument("--j", type=int, required=True)
    james.set_defaults(func=_map_construct)
    k6 = map_commands.add_parser("k6", parents=[common, constructed])
    k6.add_argument("--which", choices=K6_TYPES, required=True)
    k6.set_defaults(func=_map_construct)
    analyze_parser = map_commands.add_parser("analyze", parents=[common])
    analyze_parser.add_argument("file")
    analyze_parser.set_defaults(func=_map_analyze)
    classify_parser = map_commands.add_parser("classify", parents=[common])
    classify_parser.add_argument("file")
    classify_parser.set_defaults(func=_map_classify)

    catalog_parser = commands.add_parser("catalog", help="the basic premaps")
    catalog_commands = catalog_parser.add_subparsers(dest="catalog_command", required=True)
    premaps = catalog_commands.add_parser("premaps", parents=[common])
    premaps.add_argument("--out", default=None, help="directory for the premap files")
    premaps.set_defaults(func=_catalog_premaps)

    census = commands.add_parser("census", parents=[common], help="brute-force census of K_n")
    census.add_argument("--n", type=int, required=True)
    census.add_argument("--orientable-only", action="store_true")
    census.add_argument("--boundary", action="store_true", help="maps with boundary (n = 2, 3)")
    census.add_argument("--jobs", type=int, default=1)
    census.add_argument("--shard", type=_shard, default=None, help="I/M")
    census.add_argument("--resume", default=None, help="checkpoint directory")
    census.add_argument("--unnormalized", action="store_true", help="search every rotation and signature")
    census.add_argument("--progress", action="store_true")
    census.add_argument("--out", default=None, help="directory for representative maps")
    census.set_defaults(func=_census)

    verify = commands.add_parser("verify", parents=[common], help="run the acceptance checks")
    verify.add_argument("--max-n", type=int, required=True)
    verify.add_argument("--full", action="store_true", help="include the full census for n = 6")
    verify.add_argument("--jobs", type=int, default=1)
    verify.set_defaults(func=_verify)
    return parser


def run(argv=None):
    """Runs one command and returns its exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    logger = _configure_logging(args.log_file or False, args.verbose)
    try:
        return args.func(args, logger)
    except (ValueError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
