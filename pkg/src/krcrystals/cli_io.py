"""Command line interface, graph serialization and the verification suite runner.

Element strings: integers for letters, ``-k`` for barred letters, ``0`` for the
type B zero letter, ``+``/``-`` strings for spin columns; each column lists its
entries bottom to top separated by ``,``; columns are joined by ``/``; tensor
factors by ``#``; the empty tableau is ``()``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import cartan as ct
from .crystal_core import DEFAULT_BUDGET, CrystalGraph, parse_element, serialize
from .demazure_macdonald import deg_table, macdonald_E_t0, macdonald_P_t0
from .energy import (composite, d_composite, intrinsic_energy, lemma_composite_failures,
                     lemma_single_failures, verify_E_equals_D, verify_generalized)
from .errors import BudgetExceeded, CrystalError, UnsupportedSpec, VerificationError
from .kr_crystals import KRSpec, classical_decomposition_check, is_perfect, kr

EXIT_OK, EXIT_VERIFY, EXIT_UNSUPPORTED, EXIT_BUDGET = 0, 2, 3, 4

# level-one B^{1,1} reference crystals, edges as (source, color, target)
LEVEL_ONE = {
    ("C1", 2): {
        "vertices": ["1", "2", "-2", "-1"],
        "edges": [("1", 1, "2"), ("2", 2, "-2"), ("-2", 1, "-1"), ("-1", 0, "1")],
    },
    ("B1", 2): {
        "vertices": ["1", "2", "0", "-2", "-1"],
        "edges": [("1", 1, "2"), ("2", 2, "0"), ("0", 2, "-2"), ("-2", 1, "-1"),
                  ("-1", 0, "2"), ("-2", 0, "1")],
    },
}


# ---------------------------------------------------------------- serialization

def graph_to_json(g, **extra):
    """Canonical JSON-ready dict: vertices in canonical order, edges sorted."""
    edges = sorted(g.edges(), key=lambda t: (g.position[t[0]], t[1]))
    edges = [(serialize(v), i, serialize(w)) for v, i, w in edges]
    out = {
        "name": g.name,
        "type": g.cartan.name() if g.cartan is not None else None,
        "index_set": list(g.index_set),
        "vertices": [serialize(v) for v in g.vertices],
        "edges": [{"source": a, "color": i, "target": b} for a, i, b in edges],
    }
    out.update(extra)
    return out


def graph_from_json(data):
    """Rebuild a ``CrystalGraph`` from ``graph_to_json`` output."""
    verts = [parse_element(v) for v in data["vertices"]]
    edges = {(parse_element(e["source"]), e["color"]): parse_element(e["target"]) for e in data["edges"]}
    cartan = None
    if data.get("type"):
        fam, n = ct.parse_type(data["type"])
        cartan = ct.make_spec(fam, n)
    return CrystalGraph(tuple(data["index_set"]), verts, edges, cartan, data.get("name", ""))


def graph_to_dot(g):
    lines = [f'digraph "{g.name}" {{']
    for v in g.vertices:
        lines.append(f'  "{serialize(v)}";')
    for v, i, w in g.edges():
        lines.append(f'  "{serialize(v)}" -> "{serialize(w)}" [label={i}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_tsv(g):
    rows = ["source\tcolor\ttarget"]
    rows += [f"{serialize(v)}\t{i}\t{serialize(w)}" for v, i, w in g.edges()]
    return "\n".join(rows) + "\n"


def compare_graphs(found, expected):
    """First vertex (as a string) where two graphs differ, or ``None``."""
    fv = {serialize(v) for v in found.vertices}
    ev = {serialize(v) for v in expected.vertices}
    for s in sorted(fv ^ ev):
        return s
    fe = {(serialize(v), i, serialize(w)) for v, i, w in found.edges()}
    ee = {(serialize(v), i, serialize(w)) for v, i, w in expected.edges()}
    diff = sorted(fe ^ ee)
    return diff[0][0] if diff else None


# ---------------------------------------------------------------- spec parsing

def parse_ints(text):
    if text is None:
        return []
    return [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]


def tensor_spec(type_name, r_text, s_text=None, level=None):
    """KR specs in written order from ``--type``, ``--r``, ``--s``, ``--level``."""
    fam, n = ct.parse_type(type_name)
    spec = ct.make_spec(fam, n)
    rs = parse_ints(r_text)
    if not rs:
        raise UnsupportedSpec("at least one node is required (--r)")
    ss = parse_ints(s_text)
    if not ss:
        if level is None:
            raise UnsupportedSpec("give --s or --level")
        ss = [level * ct.c_coefficient(spec, r) for r in rs]
    if len(ss) == 1 and len(rs) > 1:
        ss = ss * len(rs)
    if len(ss) != len(rs):
        raise UnsupportedSpec("--r and --s have different lengths")
    return [KRSpec(spec, r, s) for r, s in zip(rs, ss)]


# ---------------------------------------------------------------- suite

@dataclass
class SuiteConfig:
    instances: list = field(default_factory=list)   # (type, r-list, s-list, level)
    checks: tuple = ("level-one", "perfectness", "energy", "lemmas", "mixed", "decomposition")
    budget: int = DEFAULT_BUDGET
    max_rank: int = 3
    jobs: int = 1


DEFAULT_INSTANCES = [
    ("A2(1)", [1], [1], 1),
    ("A2(1)", [1, 1], [1, 1], 1),
    ("A2(1)", [1, 1, 1], [1, 1, 1], 1),
    ("A2(1)", [2, 1], [1, 1], 1),
    ("A2(1)", [1, 1], [2, 2], 2),
    ("B2(1)", [1, 1], [1, 1], 1),
    ("D4(1)", [1, 1], [1, 1], 1),
    ("A4(2)", [1, 1], [1, 1], 1),
]


def default_suite(max_rank=3, jobs=1):
    return SuiteConfig(instances=list(DEFAULT_INSTANCES), max_rank=max_rank, jobs=jobs)


def _result(name, ok, detail="", witness=None):
    return {"name": name, "ok": bool(ok), "detail": detail,
            "witness": None if witness is None else serialize(witness)}


def check_level_one():
    out = []
    for (fam, n), fix in LEVEL_ONE.items():
        g = kr(KRSpec(ct.make_spec(fam, n), 1, 1))
        want = graph_from_json({"index_set": list(range(n + 1)), "vertices": fix["vertices"],
                                "edges": [{"source": a, "color": i, "target": b}
                                          for a, i, b in fix["edges"]]})
        bad = compare_graphs(g, want)
        out.append({"name": f"level-one {g.cartan.name()}", "ok": bad is None, "detail": "",
                    "witness": bad})
    return out


def check_perfectness():
    out = []
    for fam, n, want in (("C1", 2, False), ("B1", 2, True), ("A1", 2, True)):
        g = kr(KRSpec(ct.make_spec(fam, n), 1, 1))
        rep = is_perfect(g, 1)
        out.append(_result(f"perfect {g.cartan.name()} B^(1,1) = {want}", rep.perfect == want,
                           rep.failed or ""))
    return out


def _instance_specs(inst):
    type_name, rs, ss, level = inst
    return tensor_spec(type_name, ",".join(map(str, rs)), ",".join(map(str, ss))), level


def check_energy_instance(inst, budget=DEFAULT_BUDGET):
    specs, level = _instance_specs(inst)
    comp = composite(specs, budget=budget)
    label = comp.name()
    rep = verify_E_equals_D(comp, level)
    out = [_result(f"E^int = D - D(u_B) and backward walk on {label}", rep.ok, rep.message, rep.witness)]
    deg = deg_table(comp, level)
    E = rep.tables.get("E") or intrinsic_energy(comp, level)
    bad = next((b for b in comp.graph.vertices if deg[b] != E[b]), None)
    out.append(_result(f"deg = E^int on {label}", bad is None, "", bad))
    return out


def check_lemmas(config):
    out = []
    for inst in config.instances:
        specs, level = _instance_specs(inst)
        comp = composite(specs, budget=config.budget)
        bad = lemma_composite_failures(comp, level)
        out.append(_result(f"composite lemma on {comp.name()}", not bad, "", bad[0] if bad else None))
        for k in set(specs):
            bad = lemma_single_failures(k)
            out.append(_result(f"single lemma on {k.name()}", not bad, "", bad[0] if bad else None))
    return out


def check_mixed(budget=DEFAULT_BUDGET):
    spec = ct.make_spec("A1", 2)
    comp = composite([KRSpec(spec, 1, 2), KRSpec(spec, 1, 1)], budget=budget)
    rep = verify_generalized(comp, 2)
    return [_result(f"mixed level 2 on {comp.name()}", rep.ok, rep.message, rep.witness)]


def decomposition_lattice(max_rank=4, max_s=2):
    out = []
    for fam in ct.FAMILIES:
        for n in range(ct.MIN_RANK[fam], max_rank + 1):
            spec = ct.make_spec(fam, n)
            for r in range(1, n + 1):
                for s in range(1, max_s + 1):
                    out.append(KRSpec(spec, r, s))
    return out


def check_decomposition(max_rank=3, budget=DEFAULT_BUDGET):
    out = []
    for k in decomposition_lattice(max_rank):
        ok, found, expected = classical_decomposition_check(k, kr(k, budget))
        out.append(_result(f"decomposition {k.name()}", ok,
                           "" if ok else f"found {found}, expected {expected}"))
    return out


def _run_energy(args):
    inst, budget = args
    return check_energy_instance(inst, budget)


def run_suite(config):
    results = []
    if "level-one" in config.checks:
        results += check_level_one()
    if "perfectness" in config.checks:
        results += check_perfectness()
    if "energy" in config.checks:
        work = [(inst, config.budget) for inst in config.instances]
        if config.jobs > 1:
            with ProcessPoolExecutor(config.jobs) as pool:
                chunks = list(pool.map(_run_energy, work))
        else:
            chunks = [_run_energy(w) for w in work]
        for c in chunks:
            results += c
    if "lemmas" in config.checks:
        results += check_lemmas(config)
    if "mixed" in config.checks:
        results += check_mixed(config.budget)
    if "decomposition" in config.checks:
        results += check_decomposition(config.max_rank, config.budget)
    return {"ok": all(r["ok"] for r in results), "checks": results}


# ---------------------------------------------------------------- commands

def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph_for(args):
    specs = tensor_spec(args.type, args.r, args.s, args.level)
    if len(specs) == 1:
        return kr(specs[0], args.budget), specs
    return composite(specs, budget=args.budget).graph, specs


def _format_graph(g, specs, fmt):
    if fmt == "dot":
        return graph_to_dot(g)
    if fmt == "tsv":
        return graph_to_tsv(g)
    data = graph_to_json(g, factors=[{"r": k.r, "s": k.s} for k in specs])
    return json.dumps(data, indent=1) + "\n"


def cmd_build(args):
    g, specs = _graph_for(args)
    _emit(_format_graph(g, specs, args.format or "json"), args.out)
    return EXIT_OK


def cmd_export_dot(args):
    g, specs = _graph_for(args)
    _emit(graph_to_dot(g), args.out)
    return EXIT_OK


def cmd_energy(args):
    specs = tensor_spec(args.type, args.r, args.s, args.level)
    comp = composite(specs, budget=args.budget)
    D = d_composite(comp)
    rows = []
    E = deg = None
    u = None
    if args.level is not None and comp.is_level(args.level):
        u = comp.ground_state(args.level)
        E = intrinsic_energy(comp, args.level)
        deg = deg_table(comp, args.level)
    for b in comp.graph.vertices:
        rows.append({"vertex": serialize(b), "D": D[b],
                     "E_int": None if E is None else E[b], "deg": None if deg is None else deg[b]})
    fmt = args.format or "tsv"
    if fmt == "json":
        data = {"type": comp.cartan.name(), "factors": [{"r": k.r, "s": k.s} for k in specs],
                "level": args.level, "rows": rows}
        if u is not None:
            data["u_B"] = serialize(u)
            data["D_u_B"] = D[u]
        text = json.dumps(data, indent=1) + "\n"
    elif fmt == "tsv":
        lines = ["vertex\tD\tE_int\tdeg"]
        for r in rows:
            lines.append("\t".join("" if r[k] is None else str(r[k]) for k in ("vertex", "D", "E_int", "deg")))
        if u is not None:
            lines.append(f"# u_B\t{serialize(u)}\tD(u_B)\t{D[u]}")
        text = "\n".join(lines) + "\n"
    else:
        raise UnsupportedSpec("energy tables are written as json or tsv")
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    if args.graph:
        with open(args.graph) as fh:
            data = json.load(fh)
        stored = graph_from_json(data)
        g, _ = _graph_for(args)
        bad = compare_graphs(stored, g)
        report = {"ok": bad is None, "checks": [{"name": f"fixture {args.graph}", "ok": bad is None,
                                                  "detail": "", "witness": bad}]}
    else:
        config = default_suite(args.max_rank, args.jobs)
        config.budget = args.budget
        if args.checks:
            config.checks = tuple(args.checks.split(","))
        report = run_suite(config)
    if (args.format or "json") == "json":
        text = json.dumps(report, indent=1) + "\n"
    else:
        text = "".join(f"{'PASS' if c['ok'] else 'FAIL'}\t{c['name']}\t{c['witness'] or ''}\t{c['detail']}\n"
                       for c in report["checks"])
    _emit(text, args.out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def cmd_macdonald(args):
    fam, n = ct.parse_type(args.type)
    lam = parse_ints(args.weight)
    if args.nonsymmetric:
        if fam != "A1":
            raise UnsupportedSpec("nonsymmetric polynomials are implemented in type A_n^(1)")
        poly = macdonald_E_t0(n, lam, budget=args.budget)
    else:
        poly = macdonald_P_t0(fam, n, lam, budget=args.budget)
    if (args.format or "json") == "json":
        data = {"type": args.type, "weight": lam, "nonsymmetric": bool(args.nonsymmetric),
                "polynomial": str(poly),
                "terms": [{"x": list(xs), "q": k, "coefficient": c}
                          for (xs, k), c in sorted(poly.to_dict().items())]}
        text = json.dumps(data, indent=1) + "\n"
    else:
        text = str(poly) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="krcrystals", description="Kirillov-Reshetikhin crystals and energy")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tensor=True):
        sp.add_argument("--type", required=tensor, help="affine type, e.g. A2(1), C3(1), A4(2), D3(2)")
        sp.add_argument("--r", help="comma separated nodes, written order")
        sp.add_argument("--s", help="comma separated widths (one value is broadcast)")
        sp.add_argument("--level", type=int)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "dot", "tsv"))

    for name, fn in (("build", cmd_build), ("energy", cmd_energy), ("export-dot", cmd_export_dot)):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("verify")
    common(sp, tensor=False)
    sp.add_argument("--graph", help="stored JSON graph to compare against --type/--r/--s")
    sp.add_argument("--checks", help="comma separated subset of the suite checks")
    sp.add_argument("--max-rank", type=int, default=3)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("macdonald")
    common(sp)
    sp.add_argument("--weight", required=True, help="gl weight in type A, epsilon vector in type D")
    sp.add_argument("--nonsymmetric", action="store_true")
    sp.set_defaults(func=cmd_macdonald)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnsupportedSpec as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except VerificationError as exc:
        w = exc.witness
        print(f"verification failed: {exc}" + (f" at {serialize(w)}" if w is not None else ""),
              file=sys.stderr)
        return EXIT_VERIFY
    except (CrystalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    return code


if __name__ == "__main__":
    sys.exit(main())
