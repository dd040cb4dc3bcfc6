"""
dgx subcommands

Every command takes the parsed workspace (when it reads a file), the
argparse namespace and the effective settings, and returns a Report.
"""
import argparse
import logging
from typing import Callable, Dict, List

import numpy as np

from config.config import Settings
from src.cli.reports import Report
from src.cli.workspace import Workspace
from src.core.complexes import Complex, DegreeWindow
from src.core.exactla import FieldSpec, kernel_basis
from src.core.simplicial import dold_kan_DK, dold_kan_N
from src.dgcat.h0 import H0Category, decompose_h0_objects, quiver_to_dot
from src.dgcat.path_category import PathDgCategory
from src.dgcat.quiver import lambda_simplex
from src.errors import WorkspaceError
from src.exact.axioms import extriangulated_spot_check, verify_axioms
from src.exact.defects import almost_split_conflations, defect
from src.exact.extensions import enumerate_conflations
from src.exact.lattice import substructure_lattice
from src.exact.operators import is_divisive
from src.exact.structures import greatest_structure
from src.h3t.squares import (
    is_homotopy_bicartesian,
    is_homotopy_cartesian,
    is_homotopy_cocartesian,
    is_homotopy_left_exact,
    is_homotopy_right_exact,
)
from src.h3t.three_term import ThreeTermH, transport

logger = logging.getLogger(__name__)

Command = Callable[[Workspace, argparse.Namespace, Settings], Report]


def _coeffs(field: FieldSpec, vec) -> List[str]:
    return [field.format(v) for v in vec]


def _conflation(x: ThreeTermH) -> Dict[str, object]:
    F = x.category.field
    return {
        "label": x.label,
        "f": _coeffs(F, x.f.vector),
        "j": _coeffs(F, x.j.vector),
        "h": _coeffs(F, x.h.vector),
    }


def _obj(ws: Workspace, cat: str, text: str):
    closure = ws.closure(cat)
    return () if text == "0" else closure.obj(*text.split("+"))


def cmd_h0(ws: Workspace, args, settings: Settings) -> Report:
    cat = ws.category(args.cat)
    hc = H0Category(cat)
    table = hc.dimension_table()
    data = {
        "objects": [cat.object_label(o) for o in cat.objects],
        "dimensions": table.values.tolist(),
    }
    dot = None
    if cat.field.is_finite:
        flags = decompose_h0_objects(cat, settings.idempotent_bound)
        data["indecomposable"] = {cat.object_label(o): v for o, v in flags.items()}
    if args.ar_quiver:
        g = hc.ar_quiver(settings.idempotent_bound)
        data["irreducible_maps"] = [[u, v] for u, v in g.edges()]
        dot = quiver_to_dot(g, args.cat)
    logger.info(f"H0 of {cat.name}:\n{table}")
    return Report(command="h0", ok=True, summary=f"H0({cat.name}): {len(cat.objects)} objects", data=data, dot=dot)


def cmd_check_square(ws: Workspace, args, settings: Settings) -> Report:
    sq = ws.square(args.square)
    check = {"cartesian": is_homotopy_cartesian, "cocartesian": is_homotopy_cocartesian, "bicartesian": is_homotopy_bicartesian}
    verdict = check[args.kind](sq)
    return Report(
        command="check-square",
        ok=verdict.holds,
        summary=f"{args.square} is {'' if verdict.holds else 'not '}homotopy {args.kind}",
        data={"complete": verdict.complete, "probes": verdict.probes},
        witnesses=[f"probe {p}: H^{n} not an isomorphism" for p, n in verdict.failures],
    )


def cmd_check_hses(ws: Workspace, args, settings: Settings) -> Report:
    x = ws.hcomplex(args.hcomplex)
    probes = None
    if args.ambient:
        x = transport(x, ws.closure(args.ambient))
        probes = x.category.objects
    left = is_homotopy_left_exact(x, probes)
    right = is_homotopy_right_exact(x, probes)
    verdict = left.combine(right)
    where = args.ambient or x.category.name
    return Report(
        command="check-hses",
        ok=verdict.holds,
        summary=f"{args.hcomplex} is {'' if verdict.holds else 'not '}homotopy short exact in {where}",
        data={"left_exact": left.holds, "right_exact": right.holds, "complete": verdict.complete},
        witnesses=[f"probe {p}: H^{n} not an isomorphism" for p, n in verdict.failures],
    )


def cmd_ext_group(ws: Workspace, args, settings: Settings) -> Report:
    structure = ws.structure_or_kind(args.cat, args.structure)
    c, a = _obj(ws, args.cat, args.source), _obj(ws, args.cat, args.target)
    group = enumerate_conflations(ws.space(args.cat), c, a, structure.contains)
    violations = group.group_law_violations()
    return Report(
        command="ext-group",
        ok=not violations,
        summary=f"E({args.source}, {args.target}) in {structure.label}: order {group.order}",
        data={
            "order": group.order,
            "sum_bound": group.sum_bound,
            "classes": [_conflation(x) for x in group.classes],
            "cayley_table": group.cayley_table().values.tolist(),
        },
        witnesses=violations,
    )


def cmd_verify_exact(ws: Workspace, args, settings: Settings) -> Report:
    structure = ws.structure_or_kind(args.cat, args.structure) if args.cat else ws.structure(args.structure)
    report = verify_axioms(structure, args.samples)
    results = [r.model_dump() for r in report.results]
    ok = report.passed
    if args.extriangulated:
        spot = extriangulated_spot_check(structure, args.samples)
        results += [r.model_dump() for r in spot.results]
        ok = ok and spot.passed
    failures = [f"{r['axiom']}: {r['counterexample']}" for r in results if not r["passed"]]
    return Report(
        command="verify-exact",
        ok=ok,
        summary=f"{structure.label} on {structure.category.name}: {'pass' if ok else 'fail'}",
        data={"pool_size": report.pool_size, "results": results},
        witnesses=failures,
    )


def cmd_greatest(ws: Workspace, args, settings: Settings) -> Report:
    space = ws.space(args.cat)
    divisive = is_divisive(space)
    greatest = greatest_structure(space, general=not divisive)
    other = ws.structure(args.compare) if args.compare else None
    members, larger = {}, []
    for name, decl in ws.hcomplexes.items():
        if decl.category != args.cat:
            continue
        x = ws.hcomplex(name)
        row = {"greatest": greatest.contains(x)}
        if other is not None:
            row[other.label] = other.contains(x)
            if row["greatest"] and not row[other.label]:
                larger.append(f"{name} lies in the greatest structure but not in {other.label}")
        members[name] = row
    data = {"divisive": divisive, "membership": members}
    if other is not None:
        data["strictly_larger"] = bool(larger)
    return Report(
        command="greatest",
        ok=True,
        summary=f"greatest structure on {args.cat} ({'P R' if divisive else 'P Q P R'})",
        data=data,
        witnesses=larger,
    )


def cmd_lattice(ws: Workspace, args, settings: Settings) -> Report:
    structure = ws.structure_or_kind(args.cat, args.structure)
    result = substructure_lattice(structure, labels=not args.no_labels, verify=args.verify)
    nodes = [
        {"classes": sorted(key), "labels": node.labels, "name": result.node_name(key)}
        for key, node in sorted(result.nodes.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    ]
    return Report(
        command="lattice",
        ok=result.ok,
        summary=f"lattice of {structure.label}: {result.graph.number_of_nodes()} nodes, {result.graph.number_of_edges()} edges",
        data={
            "almost_split": {f"d{i}": x.label for i, x in enumerate(result.almost_split)},
            "nodes": nodes,
            "edges": sorted([result.node_name(u), result.node_name(v)] for u, v in result.graph.edges),
        },
        witnesses=result.problems,
        dot=result.to_dot(args.cat) if result.ok else None,
    )


def cmd_almost_split(ws: Workspace, args, settings: Settings) -> Report:
    structure = ws.structure_or_kind(args.cat, args.structure)
    probes = structure.space.probes.objects
    found = almost_split_conflations(structure)
    cat = structure.category
    classes = []
    for x in found:
        row = _conflation(x)
        row["defect"] = defect(x, probes).dimension_vector(probes)
        classes.append(row)
    return Report(
        command="almost-split",
        ok=True,
        summary=f"{len(found)} almost split conflations in {structure.label}",
        data={"probes": [cat.object_label(p) for p in probes], "classes": classes},
    )


def cmd_lambda_simplex(ws, args, settings: Settings) -> Report:
    field = FieldSpec.prime(args.prime) if args.prime else FieldSpec.rationals()
    pres = lambda_simplex(args.n, field)
    window = DegreeWindow(min(settings.window_lo, -args.n - 1), max(settings.window_hi, 1))
    cat = PathDgCategory(pres, window, settings.len_bound)
    dims = cat.hom_complex("0", str(args.n)).cohomology_dims()
    nonzero = {n: d for n, d in dims.items() if d}
    ok = nonzero == {0: 1}
    return Report(
        command="lambda-simplex",
        ok=ok,
        summary=f"Lambda(Delta^{args.n}): {len(pres.arrows)} arrows, H*(Hom(0, {args.n})) = {nonzero}",
        data={"presentation": pres.to_text(), "cohomology": {str(n): d for n, d in dims.items()}},
    )


def random_connective_complex(field: FieldSpec, dims: List[int], rng: np.random.Generator) -> Complex:
    """Degrees 0, -1, ... with the given dimensions and random differentials with d^2 = 0"""
    diffs = {}
    for k in range(1, len(dims)):
        n = -k
        if k == 1:
            diffs[n] = field.random_array(rng, (dims[0], dims[1]))
            continue
        K = kernel_basis(field, diffs[n + 1])
        R = field.random_array(rng, (K.shape[1], dims[k]))
        diffs[n] = field.matmul(K, R) if K.shape[1] else field.zeros((dims[k - 1], dims[k]))
    return Complex.bounded(field, {-k: d for k, d in enumerate(dims)}, diffs)


def cmd_doldkan_check(ws, args, settings: Settings) -> Report:
    field = FieldSpec.prime(args.prime)
    rng = np.random.default_rng(settings.random_seed if args.seed is None else args.seed)
    dims = [int(d) for d in args.dims.split(",")]
    v = random_connective_complex(field, dims, rng)
    s = dold_kan_DK(v, args.level)
    s.check()
    n = dold_kan_N(s)
    depth = min(args.level, len(dims) - 1)
    bad = [f"dimension in degree {-k}" for k in range(depth + 1) if n.dim(-k) != v.dim(-k)]
    if not bad:
        bad = [f"differential from degree {-k}" for k in range(1, depth + 1) if not field.equal(n.d(-k), v.d(-k))]
    return Report(
        command="doldkan-check",
        ok=not bad,
        summary=f"N DK is {'' if not bad else 'not '}the identity through level {args.level}",
        data={"dims": dims, "simplicial_dims": [s.dims[k] for k in range(args.level + 1)]},
        witnesses=bad,
    )


COMMANDS: Dict[str, Command] = {
    "h0": cmd_h0,
    "check-square": cmd_check_square,
    "check-hses": cmd_check_hses,
    "ext-group": cmd_ext_group,
    "verify-exact": cmd_verify_exact,
    "greatest": cmd_greatest,
    "lattice": cmd_lattice,
    "almost-split": cmd_almost_split,
    "lambda-simplex": cmd_lambda_simplex,
    "doldkan-check": cmd_doldkan_check,
}

NEEDS_FILE = {name for name in COMMANDS if name not in ("lambda-simplex", "doldkan-check")}


def _file(sub: argparse.ArgumentParser, cat: bool = True):
    sub.add_argument("file", help=".dgx workspace file")
    if cat:
        sub.add_argument("--cat", required=True, help="category name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgx", description="Exact dg categories at desk scale")
    parser.add_argument("--window", help="degree window LO..HI (default -6..2)")
    parser.add_argument("--lenbound", type=int, help="path length bound (default 8)")
    parser.add_argument("--sum-bound", type=int, help="summand bound for middle objects (default 2)")
    parser.add_argument("--budget", type=int, help="coefficient enumeration cap")
    parser.add_argument("--out", choices=["text", "json", "dot"], help="report format")
    parser.add_argument("--log-level", help="logging level")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("h0", help="H0 Hom dimensions and indecomposables")
    _file(p)
    p.add_argument("--ar-quiver", action="store_true", help="irreducible maps (DOT with --out dot)")

    p = subs.add_parser("check-square", help="homotopy (co)cartesian test")
    _file(p, cat=False)
    p.add_argument("--square", required=True)
    p.add_argument("--kind", choices=["cartesian", "cocartesian", "bicartesian"], default="bicartesian")

    p = subs.add_parser("check-hses", help="homotopy short exactness of a 3-term h-complex")
    _file(p, cat=False)
    p.add_argument("--hcomplex", required=True)
    p.add_argument("--ambient", help="decide with the probes of this category")

    p = subs.add_parser("ext-group", help="enumerate E(C, A) with its group law")
    _file(p)
    p.add_argument("--from", dest="source", required=True, help="end object C")
    p.add_argument("--to", dest="target", required=True, help="start object A")
    p.add_argument("--structure", help="declared structure or all/split/greatest")

    p = subs.add_parser("verify-exact", help="exact structure axioms")
    p.add_argument("file")
    p.add_argument("--structure", required=True, help="declared structure, or all/split/greatest with --cat")
    p.add_argument("--cat")
    p.add_argument("--samples", type=int)
    p.add_argument("--extriangulated", action="store_true", help="also spot-check ET3, ET3^op and ET4")

    p = subs.add_parser("greatest", help="greatest exact structure")
    _file(p)
    p.add_argument("--compare", help="declared structure to compare against")

    p = subs.add_parser("lattice", help="lattice of exact substructures")
    _file(p)
    p.add_argument("--structure")
    p.add_argument("--verify", action="store_true", help="run the axiom checks on every node")
    p.add_argument("--no-labels", action="store_true")

    p = subs.add_parser("almost-split", help="almost split conflations")
    _file(p)
    p.add_argument("--structure")

    p = subs.add_parser("lambda-simplex", help="presentation of Lambda(Delta^n)")
    p.add_argument("n", type=int)
    p.add_argument("--prime", type=int, help="work over F_p instead of Q")

    p = subs.add_parser("doldkan-check", help="N DK = id on a random connective complex")
    p.add_argument("--dims", default="2,3,1", help="dimensions in degrees 0, -1, ...")
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--seed", type=int)
    return parser


def resolve_names(ws: Workspace, args: argparse.Namespace):
    """Unknown names are usage errors"""
    cat = getattr(args, "cat", None)
    if cat and cat not in ws.category_names():
        raise WorkspaceError(f"unknown category {cat}")
    for attr, pool in (("square", ws.squares), ("hcomplex", ws.hcomplexes), ("compare", ws.structures)):
        name = getattr(args, attr, None)
        if name and name not in pool:
            raise WorkspaceError(f"unknown {attr} {name}")
    ambient = getattr(args, "ambient", None)
    if ambient and ambient not in ws.category_names():
        raise WorkspaceError(f"unknown category {ambient}")
