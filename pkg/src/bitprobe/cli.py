"""Command-line front end.

Exit status: 0 success, 1 semantic failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from bitprobe.analysis import (
    AnalysisReport,
    TheoremViolation,
    face_decomposition,
    lower_bound_check,
    parse_face_order,
    verify_decomposition,
)
from bitprobe.counters import probe_stats, reference_dat
from bitprobe.dat import BitString, DATError, DecisionAssignmentTree, check_write_discipline, execute
from bitprobe.permutation import NotBijective, Permutation, from_dat
from bitprobe.search import SearchLimitExceeded, SearchSpec, search

OK, FAILURE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _load_dat(path: str) -> DecisionAssignmentTree:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return DecisionAssignmentTree.loads(text)
    except DATError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_perm(path: str) -> Permutation:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read permutation {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("image")
    if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
        raise InputError(f"{path}: expected a JSON list of integers or {{\"image\": [...]}}")
    try:
        return Permutation(tuple(data))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(lines: list[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _perm_lines(name: str, perm: Permutation, inversions: int) -> list[str]:
    return [
        f"{name}: {perm.one_line()}",
        f"{name} cycles: {perm.cycle_notation()}",
        f"{name} parity: {'odd' if inversions & 1 else 'even'} ({inversions} inversions)",
    ]


def _perm_json(perm: Permutation, inversions: int) -> dict:
    return {
        "image": list(perm.image),
        "cycles": perm.cycle_notation(),
        "inversions": inversions,
        "parity": "odd" if inversions & 1 else "even",
    }


def _report_json(report: AnalysisReport) -> dict:
    d = report.decomposition
    return {
        "bits": d.width,
        "depth": d.depth,
        "faces": [
            {"label": lab, "source": src.vertices(), "image": img.vertices()}
            for lab, src, img in zip(d.labels, d.source_faces, d.image_faces)
        ],
        "inc": _perm_json(report.inc, report.inc_inversions),
        "before": _perm_json(report.before, report.before_inversions),
        "after": _perm_json(report.after, report.after_inversions),
        "composition_law": report.consistent,
    }


def cmd_verify(args) -> int:
    dat = _load_dat(args.file)
    out: dict = {"bits": dat.width, "max_depth": dat.max_depth}
    lines = [f"bits: {dat.width}", f"max depth: {dat.max_depth}"]
    status = OK
    violations = check_write_discipline(dat)
    out["write_discipline"] = [str(v) for v in violations]
    if violations:
        status = FAILURE
        lines.append("write discipline: FAIL")
        lines.extend(f"  {v}" for v in violations)
    else:
        lines.append("write discipline: ok")
    try:
        inc = from_dat(dat)
    except NotBijective as exc:
        width = dat.width
        out["bijective"] = False
        out["collision"] = [format(v, f"0{width}b") for v in (exc.x, exc.y, exc.output)]
        lines.append(f"bijective: no ({exc})")
        lines.append("result: FAIL")
        out["result"] = "fail"
        if args.json:
            _emit_json(out)
        else:
            _emit(lines)
        return FAILURE
    out["bijective"] = True
    lines.append("bijective: yes")
    try:
        report = verify_decomposition(dat)
        lines.extend(_perm_lines("inc", inc, report.inc_inversions))
        lines.append(f"full cycle: {'yes' if inc.is_full_cycle() else 'no'}")
        lines.append(f"before parity: {report.before_parity} ({report.before_inversions} inversions)")
        lines.append(f"after parity: {report.after_parity} ({report.after_inversions} inversions)")
        lines.append(f"decomposition: Inc(Before(k)) = After(k) for all {inc.size} points")
        verdict = lower_bound_check(dat)
        lines.append(
            f"lower bound: {verdict.status} (depth {verdict.depth}, threshold {verdict.threshold})"
        )
        out.update(
            full_cycle=inc.is_full_cycle(),
            analysis=_report_json(report),
            lower_bound={"status": verdict.status, "depth": verdict.depth, "threshold": verdict.threshold},
        )
    except TheoremViolation as exc:
        status = FAILURE
        lines.append(f"theorem violation: {exc}")
        out["theorem_violation"] = str(exc)
    lines.append("result: ok" if status == OK else "result: FAIL")
    out["result"] = "ok" if status == OK else "fail"
    if args.json:
        _emit_json(out)
    else:
        _emit(lines)
    return status


def cmd_analyze(args) -> int:
    dat = _load_dat(args.file)
    try:
        inc = from_dat(dat)
    except NotBijective as exc:
        print(f"not bijective: {exc}", file=sys.stderr)
        return FAILURE
    order = None
    if args.face_order:
        count = len(face_decomposition(dat).source_faces)
        try:
            order = parse_face_order(args.face_order, count)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    try:
        report = verify_decomposition(dat, order)
        verdict = lower_bound_check(dat)
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return FAILURE
    if args.json:
        out = _report_json(report)
        out["full_cycle"] = inc.is_full_cycle()
        out["verdict"] = verdict.status
        _emit_json(out)
        return OK
    d = report.decomposition
    width = d.width
    fmt = lambda f: " ".join(format(v, f"0{width}b") for v in f.vertices())  # noqa: E731
    lines = [f"bits: {width}", f"depth: {d.depth}", f"face size: {d.face_size}", "faces:"]
    for lab, src, img in zip(d.labels, d.source_faces, d.image_faces):
        lines.append(f"  {lab}: {src.pattern()} [{fmt(src)}] -> {img.pattern()} [{fmt(img)}]")
    lines += _perm_lines("inc", report.inc, report.inc_inversions)
    lines += _perm_lines("before", report.before, report.before_inversions)
    lines += _perm_lines("after", report.after, report.after_inversions)
    lines.append(
        f"composition law: {report.inc_parity} = {report.after_parity} xor {report.before_parity}"
    )
    lines.append(f"full cycle: {'yes' if inc.is_full_cycle() else 'no'}")
    lines.append(f"evidence: {verdict.evidence()}")
    lines.append(f"verdict: {verdict.status}")
    _emit(lines)
    return OK


def cmd_gen(args) -> int:
    try:
        dat = reference_dat(args.counter, args.bits)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(dat.dumps() + "\n")
    return OK


def cmd_stats(args) -> int:
    dat = _load_dat(args.file)
    stats = probe_stats(dat).to_dict()
    if args.json:
        _emit_json(stats)
    else:
        _emit([f"{k}: {v}" for k, v in stats.items()])
    return OK


def cmd_search(args) -> int:
    target = _load_perm(args.target) if args.target else None
    try:
        spec = SearchSpec(
            args.bits,
            args.depth,
            require_full_cycle=args.full_cycle,
            max_writes=args.max_writes,
            target_permutation=target,
            use_theorem_pruning=not args.no_theorem_pruning,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        result = search(spec, limit=args.limit, workers=args.workers, max_nodes=args.max_nodes)
    except SearchLimitExceeded as exc:
        print(f"search aborted: {exc}", file=sys.stderr)
        return FAILURE
    summary = result.summary()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, dat in enumerate(result.dats):
            (out / f"dat_{i:04d}.json").write_text(dat.dumps() + "\n")
    if args.json:
        _emit_json({"summary": summary, "dats": [d.to_dict() for d in result.dats]})
        return OK
    lines = [] if args.out else [d.dumps() for d in result.dats]
    lines += [f"{k}: {v}" for k, v in summary.items() if k != "pruned"]
    lines += [f"pruned {k}: {v}" for k, v in summary["pruned"].items()]
    _emit(lines)
    return OK


def cmd_probe(args) -> int:
    dat = _load_dat(args.file)
    try:
        run = execute(dat, BitString.parse(args.code))
    except DATError as exc:
        raise InputError(str(exc)) from exc
    if args.json:
        _emit_json(
            {
                "input": args.code,
                "output": str(run.output),
                "probes": [[c, b] for c, b in run.probes],
                "bits_read": run.probes_read,
                "bits_written": run.bits_written,
            }
        )
        return OK
    _emit(
        [
            f"input: {args.code}",
            f"output: {run.output}",
            "probes: " + " ".join(f"{c}={b}" for c, b in run.probes),
            f"bits read: {run.probes_read}",
            f"bits written: {run.bits_written}",
        ]
    )
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bitprobe", description="Increment trees in the bit-probe model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="check a DAT file for bijectivity and parity identities")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="print the face decomposition and Before/After permutations")
    p.add_argument("file")
    p.add_argument("--face-order", help="comma-separated face labels (a,b,... or 0,1,...)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="emit a reference counter as DAT JSON")
    p.add_argument("--counter", choices=["binary", "gray", "bgps4"], required=True)
    p.add_argument("--bits", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="exact read/write statistics")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("search", help="exhaustive search for counters")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--full-cycle", action="store_true")
    p.add_argument("--max-writes", type=int)
    p.add_argument("--target", help="JSON file holding the permutation image list")
    p.add_argument("--no-theorem-pruning", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--out", help="directory for found DAT files")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("probe", help="run a DAT on one code and trace it")
    p.add_argument("file")
    p.add_argument("code")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
