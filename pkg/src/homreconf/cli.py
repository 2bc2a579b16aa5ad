"""Command-line interface.

Every command prints a result document: a ``format: 1`` line followed by
JSON.  Documents embed their inputs, so ``homreconf replay DOC`` can
re-validate every certificate without the original files.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
import warnings
from pathlib import Path
from typing import Callable, Mapping

from .dismantle import InvalidDismantling, _dominator_mask, parse_dismantling
from .errors import CapExceeded, InvalidCertificate, InvalidHomomorphism
from .families import small_connected_graphs
from .graph import INFINITE, Graph, GraphParseError, bipartite_classify, parse_graph, square_with_diagonal
from .homgraph import RECONFIG, WALK, EdgeMode, enumerate_extensions, hom_graph
from .nu import find_majority, is_nu, parse_majority
from .reconfig import ReconfigPath, Transition, Walk, delta_stats, reconfigure
from .spr import majority_spr_bound, spr_instance, spr_reconfigure

FORMAT_LINE = "format: 1"

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_CAP, EXIT_ENDPOINTS = 0, 1, 2, 3, 4


class MappingParseError(ValueError):
    pass


class DocumentError(ValueError):
    pass


def parse_mapping(text: str) -> dict[str, str]:
    """Lines ``g_vertex h_vertex``; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise MappingParseError(f"line {line_no}: expected 'g_vertex h_vertex'")
        if tokens[0] in out:
            raise MappingParseError(f"line {line_no}: {tokens[0]} mapped twice")
        out[tokens[0]] = tokens[1]
    return out


def _read(path: str) -> str:
    return Path(path).read_text()


def _names_to_pins(g: Graph, h: Graph, mapping: Mapping[str, str]) -> dict[int, int]:
    try:
        return {g.idx(u): h.idx(x) for u, x in mapping.items()}
    except KeyError as exc:
        raise MappingParseError(str(exc)) from None


def _names_to_hom(g: Graph, h: Graph, mapping: Mapping[str, str]) -> tuple[int, ...]:
    missing = [v for v in g.vertices if v not in mapping]
    if missing:
        raise InvalidHomomorphism(f"map is not total: missing {' '.join(missing)}")
    return tuple(_names_to_pins(g, h, mapping)[g.idx(v)] for v in g.vertices)


def _hom_names(g: Graph, h: Graph, m) -> dict[str, str]:
    return {g.vertices[i]: h.vertices[x] for i, x in enumerate(m)}


def _num(x):
    return None if x is INFINITE or x is None else x


def _path_doc(g: Graph, h: Graph, path: ReconfigPath) -> dict:
    return {
        "initial": _hom_names(g, h, path.initial),
        "transitions": [
            {"vertex": g.vertices[t.vertex], "from": h.vertices[t.old], "to": h.vertices[t.new]}
            for t in path.transitions
        ],
        "length": path.length,
    }


def _path_from_doc(g: Graph, h: Graph, doc: dict, pins) -> ReconfigPath:
    initial = _names_to_hom(g, h, doc["initial"])
    trans = tuple(
        Transition(g.idx(t["vertex"]), h.idx(t["from"]), h.idx(t["to"])) for t in doc["transitions"]
    )
    return ReconfigPath(initial, trans, dict(pins))


def _emit(doc: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(FORMAT_LINE + "\n")
    out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def load_document(text: str) -> dict:
    first, _, rest = text.partition("\n")
    if first.strip() != FORMAT_LINE:
        raise DocumentError("document must start with 'format: 1'")
    return json.loads(rest)


# check-nu


def cmd_check_nu(args) -> tuple[dict, int]:
    text = _read(args.graph)
    h = parse_graph(text)
    doc = {"command": "check-nu", "inputs": {"h": h.to_text()}, "certificates": {}}
    t0 = time.perf_counter()
    verdict = is_nu(h)
    seq = verdict.certificate
    doc["verdict"] = {"nu": verdict.nu}
    doc["certificates"]["dismantling"] = seq.format()
    if not verdict.nu:
        doc["verdict"]["stuck_retract"] = sorted(seq.base.vertices[i] for i in seq.survivors)
    if args.majority:
        table = find_majority(h, cap=args.cap)
        doc["verdict"]["majority"] = table is not None
        if table is not None:
            doc["certificates"]["majority"] = table.format()
    doc["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return doc, EXIT_OK


def _replay_check_nu(doc: dict) -> None:
    h = parse_graph(doc["inputs"]["h"])
    ds = square_with_diagonal(h)
    seq = parse_dismantling(doc["certificates"]["dismantling"], ds.component)
    if seq.target != ds.diagonal_component_indices:
        raise InvalidCertificate("dismantling target is not the diagonal")
    seq.validate()
    nu = doc["verdict"]["nu"]
    if nu and not seq.complete:
        raise InvalidCertificate("NU verdict with an incomplete dismantling")
    if not nu:
        alive = sum(1 << i for i in seq.survivors)
        if seq.complete or any(
            _dominator_mask(seq.base, v, alive) for v in seq.survivors - seq.target
        ):
            raise InvalidCertificate("stuck retract still has a dominated vertex")
    if "majority" in doc["certificates"]:
        parse_majority(doc["certificates"]["majority"], h).validate()
        if not nu:
            raise InvalidCertificate("majority table for a graph reported as not NU")


# reconfigure


def cmd_reconfigure(args) -> tuple[dict, int]:
    g = parse_graph(_read(args.g))
    h = parse_graph(_read(args.h))
    pins_names = parse_mapping(_read(args.pins))
    phi_names = parse_mapping(_read(args.phi))
    psi_names = parse_mapping(_read(args.psi))
    p = _names_to_pins(g, h, pins_names)
    phi = _names_to_hom(g, h, phi_names)
    psi = _names_to_hom(g, h, psi_names)
    doc = {
        "command": "reconfigure",
        "inputs": {
            "g": g.to_text(),
            "h": h.to_text(),
            "pins": pins_names,
            "phi": _hom_names(g, h, phi),
            "psi": _hom_names(g, h, psi),
        },
        "certificates": {},
    }
    t0 = time.perf_counter()
    res = reconfigure(g, h, p, phi, psi, oracle=args.oracle, oracle_cap=args.cap)
    doc["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    doc["status"] = res.status
    doc["reason"] = res.reason
    if res.delta is not None:
        doc["delta"] = {"total": res.delta.total, "odd_count": res.delta.odd_count}
    if res.status == "ok":
        doc["certificates"]["path"] = _path_doc(g, h, res.path)
        doc["bound"] = {
            "name": res.certificate.name,
            "value": res.certificate.value,
            "kind": res.certificate.kind,
        }
        doc["skip_applied"] = res.skip_applied
        doc["efficient_dismantling"] = res.efficient
        if args.walk and res.walk is not None:
            doc["certificates"]["walk"] = [_hom_names(g, h, m) for m in res.walk.steps]
    elif res.status == "disconnected" and res.oracle_distance is None:
        # witness: a vertex whose pair misses the diagonal component
        ds = square_with_diagonal(h)
        for v in range(g.n):
            if g.masks[v] and not ds.contains_pair(phi[v], psi[v]):
                doc["certificates"]["separating_vertex"] = g.vertices[v]
                break
    if args.oracle:
        doc["oracle_distance"] = _num(res.oracle_distance)
    return doc, EXIT_OK


def _bound_value(name: str, g: Graph, h: Graph, phi, psi):
    if name in ("trivial",):
        return 0
    if name == "2(n_H^2-n_H)*n_G":
        return 2 * (h.n * h.n - h.n) * g.n
    delta = delta_stats(phi, psi, h)
    t, o = delta.total, delta.odd_count
    return {
        "|psi-phi|-1": max(0, t - 1),
        "|psi-phi|+O-1": max(0, t + o - 1),
        "|psi-phi|+O": t + o,
    }.get(name)


def _replay_reconfigure(doc: dict) -> None:
    inp = doc["inputs"]
    g, h = parse_graph(inp["g"]), parse_graph(inp["h"])
    p = _names_to_pins(g, h, inp["pins"])
    phi, psi = _names_to_hom(g, h, inp["phi"]), _names_to_hom(g, h, inp["psi"])
    status = doc["status"]
    if status == "ok":
        path = _path_from_doc(g, h, doc["certificates"]["path"], p)
        path.validate(g, h)
        if path.initial != phi or path.final != psi:
            raise InvalidCertificate("path does not run from phi to psi")
        bound = doc["bound"]
        if bound["kind"] == "constructive bound":
            expect = _bound_value(bound["name"], g, h, phi, psi)
            if expect is None or expect != bound["value"] or path.length > expect:
                raise InvalidCertificate(f"bound {bound['name']} does not hold")
        if "walk" in doc["certificates"]:
            steps = tuple(_names_to_hom(g, h, m) for m in doc["certificates"]["walk"])
            walk = Walk(steps, p)
            walk.validate(g, h)
            if steps[0] != phi or steps[-1] != psi:
                raise InvalidCertificate("walk does not run from phi to psi")
    elif status == "disconnected" and "separating_vertex" in doc["certificates"]:
        v = g.idx(doc["certificates"]["separating_vertex"])
        if not g.masks[v] or square_with_diagonal(h).contains_pair(phi[v], psi[v]):
            raise InvalidCertificate("separating vertex does not separate")


# spr


def cmd_spr(args) -> tuple[dict, int]:
    h = parse_graph(_read(args.host))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = spr_instance(h, args.u, args.v)
    phi = inst.hom_from_path(args.phi.split())
    psi = inst.hom_from_path(args.psi.split())
    doc = {
        "command": "spr",
        "inputs": {"h": h.to_text(), "u": args.u, "v": args.v, "phi": inst.names(phi), "psi": inst.names(psi)},
        "warnings": [str(w.message) for w in caught],
        "certificates": {},
        "d": inst.d,
    }
    t0 = time.perf_counter()
    res = spr_reconfigure(inst, phi, psi, oracle_cap=args.cap)
    doc["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    doc["status"] = res.status
    doc["route"] = res.route
    doc["bounds"] = res.bounds
    if res.status == "ok":
        doc["certificates"]["path"] = [inst.names(m) for m in res.result.path.steps]
        c = res.result.certificate
        doc["bound"] = {"name": c.name, "value": c.value, "kind": c.kind}
    return doc, EXIT_OK


def _replay_spr(doc: dict) -> None:
    inp = doc["inputs"]
    h = parse_graph(inp["h"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        inst = spr_instance(h, inp["u"], inp["v"])
    if doc["status"] != "ok":
        return
    steps = [inst.hom_from_path(m) for m in doc["certificates"]["path"]]
    path = ReconfigPath.from_steps(steps, inst.pins)
    path.validate(inst.path_graph, inst.host)
    if list(inst.names(steps[0])) != inp["phi"] or list(inst.names(steps[-1])) != inp["psi"]:
        raise InvalidCertificate("path does not run from phi to psi")
    for name, value in doc["bounds"].items():
        if name == "d^2/2-1" and doc["route"] != "oracle" and path.length > value:
            raise InvalidCertificate("d^2/2-1 bound violated")


# homgraph


def cmd_homgraph(args) -> tuple[dict, int]:
    g = parse_graph(_read(args.g))
    h = parse_graph(_read(args.h))
    pins_names = parse_mapping(_read(args.pins)) if args.pins else {}
    p = _names_to_pins(g, h, pins_names)
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        hg = hom_graph(g, h, p, EdgeMode(args.mode), args.black_restricted, cap=args.cap)
    sizes = [len(hg.component_members(c)) for c in range(hg.component_count)]
    doc = {
        "command": "homgraph",
        "inputs": {
            "g": g.to_text(),
            "h": h.to_text(),
            "pins": pins_names,
            "mode": args.mode,
            "black_restricted": args.black_restricted,
        },
        "warnings": [str(w.message) for w in caught],
        "verdict": {
            "nodes": len(hg),
            "components": hg.component_count,
            "component_sizes": sizes,
            "diameters": [hg.diameter(c) for c in range(hg.component_count)],
        },
        "certificates": {},
    }
    if args.dot:
        Path(args.dot).write_text(hg.to_dot())
        doc["dot"] = args.dot
    doc["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return doc, EXIT_OK


def _replay_homgraph(doc: dict) -> None:
    inp = doc["inputs"]
    g, h = parse_graph(inp["g"]), parse_graph(inp["h"])
    p = _names_to_pins(g, h, inp["pins"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        hg = hom_graph(g, h, p, EdgeMode(inp["mode"]), inp["black_restricted"])
    v = doc["verdict"]
    if len(hg) != v["nodes"] or hg.component_count != v["components"]:
        raise InvalidCertificate("Hom-graph statistics do not reproduce")


# verify-bounds


def _row(host: str, check: str, instance: str, value, bound, relation: str, applies: bool = True) -> dict:
    ok = value <= bound if relation == "<=" else value >= bound
    return {
        "host": host,
        "check": check,
        "instance": instance,
        "value": value,
        "bound": bound,
        "relation": relation,
        "applies": applies,
        "ok": bool(ok),
    }


def _random_pins(g: Graph, h: Graph, rng: random.Random, cap: int) -> dict[int, int]:
    homs = enumerate_extensions(g, h, {}, cap=cap)
    if not homs:
        return {}
    base = rng.choice(homs)
    keep = [v for v in range(g.n) if rng.random() < 0.4]
    return {v: base[v] for v in keep}


def _campaign_host(name: str, h: Graph, args, rng: random.Random) -> tuple[list[dict], list[str]]:
    rows: list[dict] = []
    skipped: list[str] = []
    if not h.is_connected():
        skipped.append(f"{name}: disconnected host")
        return rows, skipped
    nu = bool(is_nu(h))
    majority = find_majority(h, cap=args.majority_cap) is not None if h.n <= args.majority_cap else False
    bipartite = bipartite_classify(h) is not None
    graphs = list(small_connected_graphs(args.max_g))
    graphs += [g.with_loops(range(g.n)) for g in graphs]
    sample = rng.sample(graphs, min(args.samples, len(graphs)))
    for g in sample:
        gname = "G[" + ";".join(f"{g.vertices[i]}-{g.vertices[j]}" for i, j in g.edges()) + "]"
        p = _random_pins(g, h, rng, args.cap)
        label = f"{gname} p={ {g.vertices[v]: h.vertices[x] for v, x in p.items()} }"
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                walk_graph = hom_graph(g, h, p, WALK, black_restricted=bipartite, cap=args.cap)
                rec_graph = hom_graph(g, h, p, RECONFIG, cap=args.cap)
        except CapExceeded:
            skipped.append(f"{name}: {label}")
            continue
        if not len(walk_graph):
            continue
        if nu:
            rows.append(_row(name, "connected (NU)", label, walk_graph.component_count, 1, "<="))
            diam = walk_graph.diameter()
            rows.append(_row(name, "walk diameter <= 2n_H^2", label, diam, 2 * h.n * h.n, "<="))
            if majority:
                rows.append(_row(name, "walk diameter <= 2n_H", label, diam, 2 * h.n, "<="))
        reflexive_g = g.is_reflexive()
        # the lower bounds assume every G-vertex lies on an edge
        lb_applies = all(g.masks)
        nodes = rec_graph.nodes
        for _ in range(args.pairs):
            i, j = rng.randrange(len(nodes)), rng.randrange(len(nodes))
            dist = rec_graph.distance(i, j)
            if dist is INFINITE:
                continue
            delta = delta_stats(nodes[i], nodes[j], h)
            pair = f"{label} {nodes[i]}->{nodes[j]}"
            rows.append(_row(name, "distance >= ceil(|psi-phi|/2)", pair, dist, math.ceil(delta.total / 2), ">=", lb_applies))
            if reflexive_g:
                rows.append(_row(name, "distance >= |psi-phi| (reflexive G)", pair, dist, delta.total, ">=", lb_applies))
    if h.is_irreflexive() and args.spr:
        looped = h.with_loops(range(h.n))
        applies = majority or (
            looped.n <= args.majority_cap and find_majority(looped, cap=args.majority_cap) is not None
        )
        for u in range(h.n):
            for v in range(u + 1, h.n):
                inst = spr_instance(h, u, v)
                if inst.d < 2:
                    continue
                try:
                    hg = hom_graph(inst.path_graph, h, inst.pins, RECONFIG, cap=args.cap)
                except CapExceeded:
                    skipped.append(f"{name}: spr {h.vertices[u]}-{h.vertices[v]}")
                    continue
                lab = f"spr {h.vertices[u]}-{h.vertices[v]} d={inst.d}"
                rows.append(_row(name, "spr connected", lab, hg.component_count, 1, "<=", applies))
                if hg.is_connected():
                    rows.append(_row(name, "spr diameter <= d^2/2-1", lab, hg.diameter(), majority_spr_bound(inst.d), "<=", applies))
    return rows, skipped


def cmd_verify_bounds(args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    files = sorted(Path(args.corpus).glob("*.graph"))
    t0 = time.perf_counter()
    rows: list[dict] = []
    skipped: list[str] = []
    hosts = {}
    for f in files:
        h = parse_graph(f.read_text())
        if h.n > args.max_h:
            skipped.append(f"{f.name}: {h.n} vertices exceeds --max-h")
            continue
        hosts[f.name] = h.to_text()
        r, s = _campaign_host(f.name, h, args, rng)
        rows += r
        skipped += s
    violations = [r for r in rows if r["applies"] and not r["ok"]]
    doc = {
        "command": "verify-bounds",
        "inputs": {"corpus": args.corpus, "seed": args.seed, "hosts": hosts},
        "rows": rows,
        "skipped": skipped,
        "verdict": {"checked": len(rows), "violations": len(violations)},
        "certificates": {},
        "timing": {"seconds": round(time.perf_counter() - t0, 6)},
    }
    if violations:
        return doc, EXIT_VIOLATION
    return doc, EXIT_CAP if skipped else EXIT_OK


def _replay_verify_bounds(doc: dict) -> None:
    for r in doc["rows"]:
        ok = r["value"] <= r["bound"] if r["relation"] == "<=" else r["value"] >= r["bound"]
        if ok != r["ok"]:
            raise InvalidCertificate(f"row {r['check']} on {r['instance']} misreports")
    bad = sum(1 for r in doc["rows"] if r["applies"] and not r["ok"])
    if bad != doc["verdict"]["violations"]:
        raise InvalidCertificate("violation count does not match rows")


# replay

_REPLAY: dict[str, Callable[[dict], None]] = {
    "check-nu": _replay_check_nu,
    "reconfigure": _replay_reconfigure,
    "spr": _replay_spr,
    "homgraph": _replay_homgraph,
    "verify-bounds": _replay_verify_bounds,
}


def replay_document(doc: dict) -> None:
    """Raise InvalidCertificate (or a parse error) unless ``doc`` re-validates."""
    try:
        handler = _REPLAY[doc["command"]]
    except KeyError:
        raise DocumentError(f"unknown command {doc.get('command')!r}") from None
    try:
        handler(doc)
    except (InvalidDismantling, InvalidHomomorphism) as exc:
        raise InvalidCertificate(str(exc)) from exc


def cmd_replay(args) -> tuple[dict, int]:
    doc = load_document(_read(args.document))
    out = {"command": "replay", "inputs": {"document": doc.get("command")}, "certificates": {}}
    try:
        replay_document(doc)
    except InvalidCertificate as exc:
        out["verdict"] = {"valid": False, "error": str(exc)}
        return out, EXIT_VIOLATION
    out["verdict"] = {"valid": True}
    return out, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homreconf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-nu", help="decide whether a graph is NU")
    p.add_argument("graph", help="graph file")
    p.add_argument("--majority", action="store_true", help="also search for a majority table")
    p.add_argument("--cap", type=int, default=8, help="vertex cap for the majority search")
    p.set_defaults(func=cmd_check_nu)

    p = sub.add_parser("reconfigure", help="reconfiguration path between two extensions")
    for name in ("g", "h", "pins", "phi", "psi"):
        p.add_argument(name, help=f"{name} file")
    p.add_argument("--oracle", action="store_true", help="also compute the exact distance by BFS")
    p.add_argument("--walk", action="store_true", help="include the unresolved walk")
    p.add_argument("--cap", type=int, default=10**6, help="oracle BFS cap")
    p.set_defaults(func=cmd_reconfigure)

    p = sub.add_parser("spr", help="shortest-path reconfiguration in an irreflexive host")
    p.add_argument("host", help="host graph file")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--phi", required=True, help="first shortest path, space-separated vertices")
    p.add_argument("--psi", required=True, help="second shortest path")
    p.add_argument("--cap", type=int, default=10**6, help="oracle BFS cap")
    p.set_defaults(func=cmd_spr)

    p = sub.add_parser("homgraph", help="Hom-graph statistics and DOT export")
    p.add_argument("g", help="G graph file")
    p.add_argument("h", help="H graph file")
    p.add_argument("--pins", default=None, help="partial colouring file")
    p.add_argument("--mode", choices=[m.value for m in EdgeMode], default="walk")
    p.add_argument("--black-restricted", action="store_true")
    p.add_argument("--cap", type=int, default=10**6, help="enumeration cap")
    p.add_argument("--dot", default=None, help="write DOT to this path")
    p.set_defaults(func=cmd_homgraph)

    p = sub.add_parser("verify-bounds", help="check length and diameter bounds on a corpus")
    p.add_argument("corpus", help="directory of *.graph files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=6, help="G graphs sampled per host")
    p.add_argument("--pairs", type=int, default=5, help="endpoint pairs sampled per instance")
    p.add_argument("--max-g", type=int, default=3, help="largest G sampled")
    p.add_argument("--max-h", type=int, default=16, help="skip larger hosts")
    p.add_argument("--majority-cap", type=int, default=8)
    p.add_argument("--no-spr", dest="spr", action="store_false", help="skip the SPR sweep")
    p.add_argument("--cap", type=int, default=10**5, help="enumeration cap per instance")
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("replay", help="re-validate the certificates in a result document")
    p.add_argument("document")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except (GraphParseError, MappingParseError, DocumentError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidHomomorphism, KeyError) as exc:
        print(f"error: invalid endpoints: {exc}", file=sys.stderr)
        return EXIT_ENDPOINTS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    doc["argv"] = list(sys.argv[1:] if argv is None else argv)
    doc["exit_code"] = code
    _emit(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
