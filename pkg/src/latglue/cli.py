"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or domain error,
3 a resource cap was exceeded.  Errors go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction
from typing import Any, Sequence

import jsonschema

from . import curvegraph as cg
from . import glue, verify
from .discform import discriminant_group
from .errors import DomainError, ResourceError, VerificationError
from .lattice import ADEType, Embedding, IntegerLattice, discriminant, orthogonal_complement
from .roots import DEFAULT_MAX_RANK, classify_gram, enumerate_roots, is_root_lattice

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

GRAM_SCHEMA = {
    "type": "object",
    "required": ["gram"],
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "gram": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "labels": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

SUBLATTICE_SCHEMA = {
    "type": "object",
    "required": ["basis"],
    "properties": {
        "basis": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
    "additionalProperties": False,
}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label"],
                "properties": {
                    "label": {"type": "string"},
                    "self": {"type": "integer"},
                    "bold": {"type": "boolean"},
                },
                "additionalProperties": False,
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "string"}, {"type": "integer"}],
                "items": False,
                "minItems": 2,
            },
        },
    },
    "additionalProperties": False,
}


class UsageError(Exception):
    pass


@dataclass
class Caps:
    max_disc_group: int = glue.DEFAULT_MAX_DISC_GROUP
    max_rank: int = DEFAULT_MAX_RANK
    max_graph: int = cg.DEFAULT_MAX_GRAPH

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise DomainError(f"{name} must be positive")


@dataclass
class RunConfig:
    subcommand: str
    input_paths: list[str] = field(default_factory=list)
    caps: Caps = field(default_factory=Caps)
    output_format: str = "json"
    seedless: bool = True
    options: dict = field(default_factory=dict)


# -----------------------------------------------------------------------------
# serialization

def to_plain(obj: Any) -> Any:
    """JSON-ready copy with fractions as ``"p/q"`` strings and tuples as lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, ADEType):
        return str(obj)
    if is_dataclass(obj):
        return {k: to_plain(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = [to_plain(x) for x in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "coords"):
        return [str(c) for c in obj.coords]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, indent=2)


def _load(path: str, schema: dict) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}") from exc
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"{path} does not match the schema: {exc.message}") from exc
    return data


def load_lattice(path: str) -> IntegerLattice:
    return IntegerLattice.from_json(_load(path, GRAM_SCHEMA))


def load_sublattice(ambient: IntegerLattice, path: str) -> Embedding:
    rows = _load(path, SUBLATTICE_SCHEMA)["basis"]
    if any(len(r) != ambient.rank for r in rows):
        raise DomainError("sublattice basis vectors must have the ambient rank")
    return Embedding(ambient, tuple(tuple(r) for r in rows))


def load_graph(path: str) -> cg.CurveGraph:
    return cg.CurveGraph.from_json(_load(path, GRAPH_SCHEMA))


def _types(ts) -> list[str]:
    return [str(t) for t in ts] if ts is not None else None


# -----------------------------------------------------------------------------
# subcommands

def cmd_discform(cfg: RunConfig) -> dict:
    lat = load_lattice(cfg.input_paths[0])
    g = discriminant_group(lat)
    gens = [tuple(int(i == k) for i in range(g.length)) for k in range(g.length)]
    out = {
        "invariant_factors": list(g.invariant_factors),
        "order": g.order,
        "generator_lifts": [v.coords for v in g.generator_lifts],
        "q": [g.q(x) for x in gens],
        "b": [[g.b(x, y) for y in gens] for x in gens],
    }
    if g.order <= cfg.caps.max_disc_group:
        out["q_table"] = [{"element": list(x), "q": q} for x, q in zip(g.elements(), g.q_values())]
    return out


def cmd_roots(cfg: RunConfig) -> dict:
    lat = load_lattice(cfg.input_paths[0])
    rs = enumerate_roots(lat, cfg.caps.max_rank)
    out = {"count": len(rs.roots), "types": _types(rs.components),
           "simple_roots": [list(r) for r in rs.simple_roots],
           "is_root_lattice": is_root_lattice(lat, rs)}
    if cfg.options.get("all"):
        out["roots"] = [list(r) for r in rs.roots]
    return out


def cmd_glue_overlattices(cfg: RunConfig) -> dict:
    lat = load_lattice(cfg.input_paths[0])
    results = glue.overlattices(lat, cfg.caps.max_disc_group)
    out = []
    for res in results:
        out.append({"index": res.index,
                    "subgroup_generators": [list(x) for x in res.subgroup.generators],
                    "glue_vectors": [v.coords for v in res.glue_lifts],
                    "gram": res.lattice.rows(),
                    "discriminant": discriminant(res.lattice)})
    return {"discriminant": discriminant(lat), "count": len(out), "overlattices": out}


def cmd_glue_saturate(cfg: RunConfig) -> dict:
    amb = load_lattice(cfg.input_paths[0])
    sub = load_sublattice(amb, cfg.input_paths[1])
    sat, index = glue.saturation(sub)
    return {"index": index, "quotient": list(glue.saturation_quotient(sub)),
            "primitive": index == 1, "saturation_basis": [list(r) for r in sat.basis_images]}


def cmd_glue_scan(cfg: RunConfig) -> dict:
    p, r_max = cfg.options["p"], cfg.options["rmax"]
    rep = glue.threshold_scan(p, r_max, cfg.caps.max_disc_group)
    if rep.first_overlattice is None:
        summary = f"no overlattice for r <= {r_max}"
    else:
        summary = f"first overlattice at r = {rep.first_overlattice}"
        summary += ("; no non-root overlattice" if rep.first_non_root is None
                    else f"; first non-root overlattice at r = {rep.first_non_root}")
    if rep.partial:
        summary += " (partial: some ranks exceed the cap)"
    return {"p": p, "r_max": r_max, "rows": rep.rows, "first_overlattice": rep.first_overlattice,
            "first_non_root": rep.first_non_root, "partial": rep.partial, "summary": summary}


def cmd_graph_analyze(cfg: RunConfig) -> dict:
    graph = load_graph(cfg.input_paths[0])
    configs = cg.find_elliptic_configurations(graph, cfg.caps.max_graph)
    out = {"configurations": [{"support": list(c.support), "multiplicities": list(c.multiplicities),
                               "kodaira_type": c.kodaira_type} for c in configs]}
    if configs:
        orth = cg.orthogonal_vertex_set(graph, configs)
        out["orthogonal_vertices"] = list(orth.vertices)
        gram = orth.spanned_lattice.gram
        out["orthogonal_types"] = _types(classify_gram(gram)) if gram else []
    else:
        out["orthogonal_vertices"] = None
        out["orthogonal_types"] = None
    return out


def cmd_complement(cfg: RunConfig) -> dict:
    amb = load_lattice(cfg.input_paths[0])
    sub = load_sublattice(amb, cfg.input_paths[1])
    comp = orthogonal_complement(amb, sub)
    lat = comp.lattice
    out = {"rank": lat.rank, "basis": [list(r) for r in comp.basis_images], "gram": lat.rows(),
           "discriminant": discriminant(lat) if not lat.is_degenerate else 0,
           "signature": list(lat.signature)}
    if lat.rank and lat.is_negative_definite:
        rs = enumerate_roots(lat, cfg.caps.max_rank)
        out["roots"] = len(rs.roots)
        out["root_types"] = _types(rs.components)
    return out


def cmd_verify_all(cfg: RunConfig) -> dict:
    results = verify.run_all()
    report = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
              "passed": all(r.passed for r in results)}
    report["summary"] = [f"{'PASS' if r.passed else 'FAIL'} {r.name}" for r in results]
    if not report["passed"]:
        raise _Failed(report)
    return report


class _Failed(Exception):
    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


COMMANDS = {
    "discform": cmd_discform,
    "roots": cmd_roots,
    "glue overlattices": cmd_glue_overlattices,
    "glue saturate": cmd_glue_saturate,
    "glue scan": cmd_glue_scan,
    "graph analyze": cmd_graph_analyze,
    "complement": cmd_complement,
    "verify-paper": cmd_verify_all,
}


# -----------------------------------------------------------------------------
# argument parsing and dispatch

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_options(parser: argparse.ArgumentParser, defaults: bool) -> None:
    def d(value):
        return value if defaults else argparse.SUPPRESS

    parser.add_argument("--format", choices=("json", "text"), default=d("json"), dest="output_format")
    parser.add_argument("--max-disc-group", type=int, default=d(None),
                        help="cap on |A_L| (default: $GLUE_MAX_DISC_GROUP or 10000)")
    parser.add_argument("--max-rank", type=int, default=d(DEFAULT_MAX_RANK))
    parser.add_argument("--max-graph", type=int, default=d(cg.DEFAULT_MAX_GRAPH))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="latglue", description=__doc__.splitlines()[0])
    _common_options(parser, True)
    common = _Parser(add_help=False)
    _common_options(common, False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("discform", parents=[common], help="discriminant group and forms")
    p.add_argument("gram")
    p = sub.add_parser("roots", parents=[common], help="roots and ADE type")
    p.add_argument("gram")
    p.add_argument("--all", action="store_true", help="list every root")
    g = sub.add_parser("glue", help="overlattices, saturation, threshold scans")
    gs = g.add_subparsers(dest="glue_command", required=True, parser_class=_Parser)
    p = gs.add_parser("overlattices", parents=[common])
    p.add_argument("gram")
    p = gs.add_parser("saturate", parents=[common])
    p.add_argument("ambient")
    p.add_argument("sub")
    p = gs.add_parser("scan", parents=[common])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rmax", type=int, required=True)
    gr = sub.add_parser("graph", help="curve graph analysis")
    grs = gr.add_subparsers(dest="graph_command", required=True, parser_class=_Parser)
    p = grs.add_parser("analyze", parents=[common])
    p.add_argument("graph")
    p = sub.add_parser("complement", parents=[common], help="orthogonal complement of a sublattice")
    p.add_argument("ambient")
    p.add_argument("sub")
    sub.add_parser("verify-paper", parents=[common], help="run every built-in verification")
    return parser


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    name = ns.command
    if name == "glue":
        name = f"glue {ns.glue_command}"
    elif name == "graph":
        name = f"graph {ns.graph_command}"
    paths = [getattr(ns, k) for k in ("gram", "ambient", "sub", "graph") if isinstance(getattr(ns, k, None), str)]
    cap = ns.max_disc_group if ns.max_disc_group is not None else glue.max_disc_group()
    options = {k: getattr(ns, k) for k in ("all", "p", "rmax") if hasattr(ns, k)}
    return RunConfig(name, paths, Caps(cap, ns.max_rank, ns.max_graph), ns.output_format, True, options)


def _text(result: Any) -> str:
    plain = to_plain(result)
    if isinstance(plain, dict) and "summary" in plain:
        s = plain["summary"]
        return "\n".join(s) if isinstance(s, list) else s
    lines = []
    for key in sorted(plain):
        lines.append(f"{key}: {json.dumps(plain[key], sort_keys=True)}")
    return "\n".join(lines)


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": kind, "message": message}
    payload.update(extra)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def dispatch(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        result = COMMANDS[cfg.subcommand](cfg)
    except _Failed as exc:
        print(dumps(exc.report) if cfg.output_format == "json" else _text(exc.report), file=out)
        _emit_error("verification", "one or more checks failed")
        return EXIT_VERIFY
    except VerificationError as exc:
        _emit_error("verification", str(exc))
        return EXIT_VERIFY
    except ResourceError as exc:
        _emit_error("resource", str(exc), required=exc.required, cap=exc.cap)
        return EXIT_RESOURCE
    except (UsageError, DomainError, ValueError) as exc:
        _emit_error("domain", str(exc))
        return EXIT_USAGE
    print(dumps(result) if cfg.output_format == "json" else _text(result), file=out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return EXIT_USAGE
    except DomainError as exc:
        _emit_error("domain", str(exc))
        return EXIT_USAGE
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
