"""Command line front end.

Commands read JSON documents (see formats), run the library, and print
a report.  Exit codes are a contract: 0 carries a positive verdict
(yes, equivalent, isomorphic, relations pass), 1 a negative one, 2 an
inconclusive or undetermined one; 64 flags a usage error and 65 an
unreadable or ill-formed input.  Identical inputs give identical
output; nothing here consults clocks or global state.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import formats
from .ampliation import ampliate
from .classify import (
    Distinct,
    Equivalent,
    SupernaturalNumber,
    Undetermined,
    classify_tree_refinement,
    reduce,
    spec_supernatural,
    trees_isomorphic,
)
from .correspondence import build_ckt_family, module_norm, verify_ckt
from .errors import FormatError, TreealgError
from .graphs import OutForest
from .tower import (
    Decision,
    ForestPresentation,
    GradeGrowthWitness,
    InconclusiveReport,
    LevelStructureWitness,
    NestRuleWitness,
    Verdict,
    decide_tensor,
)

USAGE_ERROR = 64
DATA_ERROR = 65


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: the command plus its knobs."""

    command: str
    inputs: tuple[str, ...]
    depth: int = 4
    ampliation_bound: int = 3
    cutoff: int = 4
    fmt: str | None = None
    seed: int = 0
    out: str | None = None
    multiplicity: int = 1
    steps: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treealg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt=("json", "text")) -> None:
        p.add_argument("--format", choices=fmt, default=None, dest="fmt")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized generation (current commands are deterministic)")

    p = sub.add_parser("check-tensor", help="decide whether a tower presents a tensor algebra")
    p.add_argument("tower", help="tower JSON file")
    p.add_argument("--depth", type=_positive, default=4)
    common(p)

    p = sub.add_parser("ampliate", help="ampliate an out-tree under a multiplicity")
    p.add_argument("graph", help="graph JSON file holding an out-tree")
    p.add_argument("-l", "--multiplicity", type=_positive, required=True)
    p.add_argument("--steps", type=_nonnegative, default=1,
                   help="how many times to apply the rule (0 echoes the input)")
    common(p, fmt=("json", "text", "dot"))

    p = sub.add_parser("classify", help="compare two tree-refinement specs")
    p.add_argument("first", help="spec JSON file")
    p.add_argument("second", help="spec JSON file")
    p.add_argument("--bound", type=_nonnegative, default=3, dest="ampliation_bound")
    common(p)

    p = sub.add_parser("reduce", help="contract chains of an out-tree into weights")
    p.add_argument("graph", help="graph JSON file holding an out-tree")
    common(p, fmt=("json", "text", "dot"))

    p = sub.add_parser("iso", help="test two out-trees for weighted isomorphism")
    p.add_argument("first", help="graph JSON file")
    p.add_argument("second", help="graph JSON file")
    common(p)

    p = sub.add_parser("supernatural", help="the supernatural number of a spec")
    p.add_argument("spec", help="spec JSON file")
    common(p)

    p = sub.add_parser("verify-ckt", help="check the relations of a truncated isometry family")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--cutoff", type=_positive, default=4)
    common(p)

    p = sub.add_parser("norm", help="the module norm of a correspondence vector")
    p.add_argument("vector", help="vector JSON file")
    common(p)

    p = sub.add_parser("emit-dot", help="render a graph file as DOT text")
    p.add_argument("graph", help="graph JSON file")
    common(p, fmt=("dot",))

    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    inputs = tuple(
        getattr(ns, name)
        for name in ("tower", "graph", "spec", "vector", "first", "second")
        if hasattr(ns, name)
    )
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        depth=getattr(ns, "depth", 4),
        ampliation_bound=getattr(ns, "ampliation_bound", 3),
        cutoff=getattr(ns, "cutoff", 4),
        fmt=ns.fmt,
        seed=ns.seed,
        out=ns.out,
        multiplicity=getattr(ns, "multiplicity", 1),
        steps=getattr(ns, "steps", 1),
    )


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, doc) -> None:
    _emit(cfg, json.dumps(doc, indent=2) + "\n")


def _emit_graph(cfg: RunConfig, g) -> None:
    if cfg.fmt == "dot":
        _emit(cfg, formats.graph_to_dot(g))
    elif cfg.fmt == "text":
        graph = g.graph if isinstance(g, OutForest) else g
        lines = [f"vertices: {', '.join(graph.vertices)}"]
        for s, t in sorted(graph.edges):
            lines.append(f"  {s} -> {t}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit_json(cfg, formats.graph_to_json(g))


def _decision_text(d: Decision) -> str:
    lines = [f"verdict: {d.verdict.value}", f"inspected depth: {d.inspected_depth}"]
    cert = d.certificate
    if isinstance(cert, ForestPresentation):
        lines.append("certificate: forest presentation of the edge spaces")
        for lv in cert.levels:
            lines.append(
                f"  level {lv.level}: forest on {len(lv.forest.vertices)} vertices"
                f" with {len(lv.forest.edges)} edges"
            )
    elif isinstance(cert, GradeGrowthWitness):
        ch = cert.chain
        lines.append(f"certificate: grade growth across level {cert.level}")
        lines.append(
            f"  chain from level {ch.chain.start_level} has grades "
            + ", ".join(str(g) for g in ch.grades)
        )
    elif isinstance(cert, NestRuleWitness):
        lines.append(f"certificate: nest rule ({cert.note})")
    elif isinstance(cert, LevelStructureWitness):
        lines.append(
            f"certificate: the level-{cert.level} relation is not a tree semigroupoid"
            + (" and the failure persists" if cert.persisted else "")
        )
    elif isinstance(cert, InconclusiveReport):
        lines.append(f"reason: {cert.reason}")
        if cert.unsettled:
            lines.append(f"unsettled chains: {len(cert.unsettled)}")
    return "\n".join(lines) + "\n"


_VERDICT_EXIT = {Verdict.YES: 0, Verdict.NO: 1, Verdict.INCONCLUSIVE: 2}


def cmd_check_tensor(cfg: RunConfig) -> int:
    tower = formats.tower_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    decision = decide_tensor(tower, depth=cfg.depth)
    if cfg.fmt == "json":
        _emit_json(cfg, formats.decision_to_json(decision))
    else:
        _emit(cfg, _decision_text(decision))
    return _VERDICT_EXIT[decision.verdict]


def cmd_ampliate(cfg: RunConfig) -> int:
    tree = formats.forest_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    for _ in range(cfg.steps):
        tree = ampliate(tree, cfg.multiplicity)
    _emit_graph(cfg, tree)
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    a = formats.spec_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    b = formats.spec_from_json(_load(cfg.inputs[1]), cfg.inputs[1])
    result = classify_tree_refinement(a, b, ampliation_bound=cfg.ampliation_bound)
    if cfg.fmt == "json":
        _emit_json(cfg, formats.classification_to_json(result))
    else:
        lines = [f"verdict: {result.verdict}"]
        if isinstance(result, Equivalent):
            first, second = result.ampliations
            lines.append(
                "ampliations: "
                f"[{', '.join(map(str, first))}] and [{', '.join(map(str, second))}]"
            )
            lines.append(
                "vertex bijection: "
                + ", ".join(f"{x} -> {y}" for x, y in result.bijection)
            )
        elif isinstance(result, Distinct):
            lines.append(f"reason: {result.reason}")
        elif isinstance(result, Undetermined):
            lines.append(f"search bound: {result.bound}")
        _emit(cfg, "\n".join(lines) + "\n")
    return {"equivalent": 0, "distinct": 1, "undetermined": 2}[result.verdict]


def cmd_reduce(cfg: RunConfig) -> int:
    tree = formats.forest_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    reduced = reduce(tree)
    _emit_graph(cfg, reduced.tree.graph.with_weights(reduced.weights))
    return 0


def cmd_iso(cfg: RunConfig) -> int:
    a = formats.forest_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    b = formats.forest_from_json(_load(cfg.inputs[1]), cfg.inputs[1])
    same = trees_isomorphic(a, b)
    if cfg.fmt == "json":
        _emit_json(cfg, {"isomorphic": same})
    else:
        _emit(cfg, f"isomorphic: {'true' if same else 'false'}\n")
    return 0 if same else 1


def _supernatural_text(sn: SupernaturalNumber) -> str:
    parts = [f"{p}^{e}" for p, e in sorted(sn.finite)]
    parts += [f"{p}^inf" for p in sorted(sn.infinite)]
    return " * ".join(parts) if parts else "1"


def cmd_supernatural(cfg: RunConfig) -> int:
    spec = formats.spec_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    sn = spec_supernatural(spec)
    if cfg.fmt == "json":
        _emit_json(
            cfg,
            {
                "finite": [[p, e] for p, e in sorted(sn.finite)],
                "infinite": sorted(sn.infinite),
            },
        )
    else:
        _emit(cfg, _supernatural_text(sn) + "\n")
    return 0


def cmd_verify_ckt(cfg: RunConfig) -> int:
    g = formats.graph_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    report = verify_ckt(build_ckt_family(g, cutoff=cfg.cutoff))
    if cfg.fmt == "json":
        _emit_json(cfg, formats.ckt_report_to_json(report))
    else:
        lines = []
        for name, check in report.checks.items():
            state = "exact" if check.exact else f"residual {check.residual}"
            suffix = f" ({check.note})" if check.note else ""
            lines.append(f"{name}: {state}{suffix}")
        lines.append(f"ok: {'true' if report.ok else 'false'}")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


def cmd_norm(cfg: RunConfig) -> int:
    x = formats.vector_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    value = module_norm(x)
    if cfg.fmt == "json":
        _emit_json(cfg, {"norm": value})
    else:
        _emit(cfg, f"{value!r}\n")
    return 0


def cmd_emit_dot(cfg: RunConfig) -> int:
    g = formats.graph_from_json(_load(cfg.inputs[0]), cfg.inputs[0])
    _emit(cfg, formats.graph_to_dot(g))
    return 0


_COMMANDS = {
    "check-tensor": cmd_check_tensor,
    "ampliate": cmd_ampliate,
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "iso": cmd_iso,
    "supernatural": cmd_supernatural,
    "verify-ckt": cmd_verify_ckt,
    "norm": cmd_norm,
    "emit-dot": cmd_emit_dot,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(ns)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (FormatError, TreealgError) as exc:
        print(f"treealg: error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"treealg: error: {exc}", file=sys.stderr)
        return DATA_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
