"""Command-line interface: ``msrtools <command> ...``.

Exit status is 0 on success, 1 when a solution is infeasible, a verification
or lemma check fails, or the exact search hits its time limit, and 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import io as fio
from .approx import run_approximation
from .canonical import canonicalize
from .exact import ExactConfig, ExactTimeout, solve_exact
from .generators import GENERATOR_KINDS, random_ddm, random_graph, random_instance, random_sat32
from .harness import LEMMA_KINDS, lemma_check
from .model import InputError, Instance, ObjectiveSpec, Solution, verify
from .reductions import (
    ReductionArtifact,
    embed_source_solution,
    extract_source_solution,
    reduce_ddm_msr,
    reduce_mis_msr3,
    reduce_mis_msr4,
    reduce_sat_msr2,
)
from .sources import CnfInstance, DdmInstance, Graph

REDUCTIONS = {
    "mis-msr4": (reduce_mis_msr4, Graph),
    "mis-msr3": (reduce_mis_msr3, Graph),
    "sat-msr2": (reduce_sat_msr2, CnfInstance),
    "ddm-msr": (reduce_ddm_msr, DdmInstance),
}


class _Fail(Exception):
    """Domain failure: exit status 1."""


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msrtools", description="Maximal strip recovery toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def objective_flags(sp):
        sp.add_argument("--objective", choices=("length", "adjacency"), default="length")
        sp.add_argument("--variant", choices=("msr", "cmsr"), default="msr")
        sp.add_argument("--delta", type=int, default=None, help="gap bound (overrides the file)")

    sp = sub.add_parser("solve", parents=[common], help="exact optimum")
    sp.add_argument("instance")
    objective_flags(sp)
    sp.add_argument("--time-limit", type=float, default=None)

    sp = sub.add_parser("approx", parents=[common], help="2d-approximation")
    sp.add_argument("instance")
    objective_flags(sp)
    sp.add_argument("--max-candidate-len", type=int, default=3)

    sp = sub.add_parser("verify", parents=[common], help="check a claimed solution")
    sp.add_argument("instance")
    sp.add_argument("solution")
    sp.add_argument("--delta", type=int, default=None)

    sp = sub.add_parser("reduce", parents=[common], help="build a gadget instance")
    sp.add_argument("kind", choices=sorted(REDUCTIONS))
    sp.add_argument("source")

    sp = sub.add_parser("embed", parents=[common], help="MSR solution from a source solution")
    sp.add_argument("kind", choices=sorted(REDUCTIONS))
    sp.add_argument("source")
    sp.add_argument(
        "witness", nargs="*", help="vertex ids, hyper-edge ids, or one T/F letter per variable"
    )

    sp = sub.add_parser("extract", parents=[common], help="source solution from an MSR solution")
    sp.add_argument("kind", choices=sorted(REDUCTIONS))
    sp.add_argument("source")
    sp.add_argument("solution")
    sp.add_argument("--variant", choices=("msr", "cmsr"), default="msr")

    sp = sub.add_parser("canonicalize", parents=[common], help="canonical form of a gadget solution")
    sp.add_argument("kind", choices=sorted(REDUCTIONS))
    sp.add_argument("source")
    sp.add_argument("solution")

    sp = sub.add_parser("gen", parents=[common], help="seeded random source or instance")
    sp.add_argument("kind", choices=GENERATOR_KINDS)
    sp.add_argument("params", nargs="*", help="key=value, e.g. n=8 maxdeg=3 d=3 sizes=2,2,2 m=5")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("lemma-check", parents=[common], help="reduction identities on random instances")
    sp.add_argument("kind", choices=LEMMA_KINDS)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--size", type=int, default=None, help="largest source size drawn")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--time-limit", type=float, default=300.0, help="per exact solve, seconds")
    return p


# ------------------------------------------------------------- helpers


def _load_instance(path: str, delta: int | None = None) -> Instance:
    text = fio.read_text(path)
    if text.lstrip().startswith("{"):
        inst = fio.instance_from_json(fio.load_json(text))
    else:
        inst = fio.parse_instance(text)
    return inst.with_delta(delta) if delta is not None else inst


def _load_solution(path: str) -> Solution:
    text = fio.read_text(path)
    if text.lstrip().startswith("{"):
        return fio.solution_from_json(fio.load_json(text))
    return fio.parse_solution(text)


def _load_source(path: str) -> fio.SourceSpec:
    text = fio.read_text(path)
    if text.lstrip().startswith("{"):
        return fio.source_from_json(fio.load_json(text))
    return fio.parse_source(text)


def _artifact(kind: str, path: str) -> ReductionArtifact:
    build, expected = REDUCTIONS[kind]
    spec = _load_source(path)
    if not isinstance(spec.source, expected):
        raise InputError(f"{kind} needs a {expected.__name__} source, got {type(spec.source).__name__}")
    if expected is Graph and spec.forests is not None:
        return build(spec.source, spec.forests)
    return build(spec.source)


def _emit_solution(out, args, solution: Solution, extra: dict | None = None) -> None:
    extra = extra or {}
    if args.format == "json":
        doc = fio.solution_to_json(solution)
        doc.update(extra)
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        for key, value in extra.items():
            out.write(f"# {key}={value}\n")
        out.write(fio.format_solution(solution))


def _objective(args) -> ObjectiveSpec:
    return ObjectiveSpec(args.objective, args.variant)


def _params(items: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"parameter {item!r} is not key=value")
        out[{"Δ": "maxdeg", "delta": "maxdeg"}.get(key, key)] = value
    return out


def _int_param(params: dict, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise InputError(f"missing parameter {key}=")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise InputError(f"parameter {key} must be an integer") from None


# ------------------------------------------------------------ commands


def _solve(args, out) -> None:
    inst = _load_instance(args.instance, args.delta)
    objective = _objective(args)
    try:
        sol = solve_exact(inst, objective, ExactConfig(time_limit=args.time_limit))
    except ExactTimeout as e:
        if e.incumbent is not None:
            _emit_solution(out, args, e.incumbent, {"status": "timeout"})
        raise _Fail(str(e)) from None
    _emit_solution(out, args, sol, {"status": "optimal", "objective": sol.value(objective)})


def _approx(args, out) -> None:
    inst = _load_instance(args.instance, args.delta)
    if args.max_candidate_len < 2:
        raise InputError("--max-candidate-len must be at least 2")
    objective = _objective(args)
    res = run_approximation(inst, objective, args.max_candidate_len)
    extra = {
        "lp_value": round(res.lp_value, 9),
        "candidates": len(res.candidates),
        "objective": res.solution.value(objective),
    }
    _emit_solution(out, args, res.solution, extra)


def _verify(args, out) -> None:
    inst = _load_instance(args.instance, args.delta)
    claimed = _load_solution(args.solution)
    report = verify(inst, claimed)
    if args.format == "json":
        json.dump({"ok": report.ok, "checks": report.checks, "messages": report.messages}, out, indent=2)
        out.write("\n")
    else:
        for name, passed in report.checks.items():
            out.write(f"{'ok  ' if passed else 'FAIL'} {name}\n")
        for msg in report.messages:
            out.write(f"# {msg}\n")
    if not report.ok:
        raise _Fail("verification failed")


def _reduce(args, out) -> None:
    art = _artifact(args.kind, args.source)
    if args.format == "json":
        doc = {
            "kind": art.kind,
            "instance": fio.instance_to_json(art.instance),
            "legend": {str(k): r.label for k, r in sorted(art.legend.items())},
            "map_names": list(art.map_names),
            "labelled_maps": art.map_labels(),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
        return
    out.write(f"# {art.kind}\n")
    for name, labels in zip(art.map_names, art.map_labels()):
        out.write(f"# {name}: {' '.join(labels)}\n")
    out.write(fio.format_instance(art.instance))


def _witness(art: ReductionArtifact, tokens: Sequence[str]):
    if art.kind == "sat_msr2":
        letters = "".join(tokens).upper()
        if any(c not in "TF" for c in letters):
            raise InputError("assignment must be written with T and F")
        return tuple(c == "T" for c in letters)
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise InputError("witness ids must be integers") from None


def _embed(args, out) -> None:
    art = _artifact(args.kind, args.source)
    sol = embed_source_solution(art, _witness(art, args.witness))
    _emit_solution(out, args, sol)


def _extract(args, out) -> None:
    art = _artifact(args.kind, args.source)
    res = extract_source_solution(art, _load_solution(args.solution), args.variant)
    witness = list(res.witness)
    if art.kind == "sat_msr2":
        witness = "".join("T" if v else "F" for v in res.witness)
    doc = {
        "witness": witness,
        "value": res.value,
        "input_length": res.input_length,
        "bound": res.bound,
        "bound_holds": res.bound_holds,
    }
    if args.format == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        for key, value in doc.items():
            if isinstance(value, list):
                value = " ".join(map(str, value))
            out.write(f"{key} {value}\n")
    if not res.bound_holds:
        raise _Fail("extraction bound violated")


def _canonicalize(args, out) -> None:
    art = _artifact(args.kind, args.source)
    sol, report = canonicalize(art, _load_solution(args.solution))
    extra = {
        "input_length": report.input_length,
        "output_length": report.output_length,
        "operations": len(report.operations_applied),
    }
    if args.format == "json":
        extra["conditions"] = report.conditions_satisfied
        extra["operation_log"] = [
            {"kind": o.kind, "markers": list(o.markers), "length_after": o.length_after}
            for o in report.operations_applied
        ]
    else:
        extra.update({k: v for k, v in report.conditions_satisfied.items()})
    _emit_solution(out, args, sol, extra)


def _gen(args, out) -> None:
    params = _params(args.params)
    seed = args.seed
    if args.kind == "random-permutation-instance":
        delta = _int_param(params, "delta_gap", -1)
        inst = random_instance(
            _int_param(params, "d", 2),
            _int_param(params, "n"),
            seed,
            signed=params.get("signed", "1") not in ("0", "false", "no"),
            delta=None if delta < 0 else delta,
        )
        if args.format == "json":
            json.dump(fio.instance_to_json(inst), out, indent=2)
            out.write("\n")
        else:
            out.write(fio.format_instance(inst))
        return
    if args.kind == "graph-maxdeg":
        density = float(params.get("density", 0.7))
        source = random_graph(_int_param(params, "n"), _int_param(params, "maxdeg", 3), seed, density)
    elif args.kind == "sat32":
        source = random_sat32(_int_param(params, "n"), seed)
    else:
        try:
            sizes = tuple(int(s) for s in params.get("sizes", "").split(",") if s)
        except ValueError:
            raise InputError("sizes must be a comma-separated list of integers") from None
        if not sizes:
            sizes = (_int_param(params, "k", 3),) * _int_param(params, "d", 3)
        source = random_ddm(sizes, _int_param(params, "m"), seed)
    if args.format == "json":
        json.dump(fio.source_to_json(source), out, indent=2)
        out.write("\n")
    else:
        out.write(fio.format_source(source))


def _lemma(args, out) -> None:
    report = lemma_check(args.kind, args.trials, args.seed, args.size, args.time_limit)
    if args.format == "json":
        doc = {
            "kind": report.kind,
            "passed": report.passed,
            "failed": report.failed,
            "note": report.note,
            "trials": [
                {"index": t.index, "lhs": t.lhs, "rhs": t.rhs, "ok": t.ok, "source": t.source}
                for t in report.trials
            ],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(f"{report.kind}: {report.passed} passed, {report.failed} failed\n")
        if report.note:
            out.write(f"# {report.note}\n")
        for t in report.counterexamples():
            out.write(f"# counterexample (trial {t.index}): {t.lhs} != {t.rhs}\n{t.source}")
    if not report.ok:
        raise _Fail(f"{report.failed} trials violated the identity")


COMMANDS = {
    "solve": _solve,
    "approx": _approx,
    "verify": _verify,
    "reduce": _reduce,
    "embed": _embed,
    "extract": _extract,
    "canonicalize": _canonicalize,
    "gen": _gen,
    "lemma-check": _lemma,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        COMMANDS[args.command](args, out)
    except _Fail as e:
        err.write(f"msrtools: {e}\n")
        return 1
    except InputError as e:
        err.write(f"msrtools: error: {e}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
