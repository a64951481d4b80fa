"""Command-line front end.

Exit codes: 0 the property holds, 1 it definitively fails, 2 the analysis
could not complete (parse error, size cap, failed witness replay).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .cayley import DEFAULT_MAX_SIZE
from .clifford import analyze, replay_witness
from .errors import CliffmatError, ParseError, SizeCapExceeded, SweepTooLarge
from .exactfield import FieldSpec, Mat
from .fuzz import draw_case, minimize, mutate, round_trip
from .limit import LimitMat, limit_analyze, limit_block_split, limit_rank
from .structure import check_corollaries, check_maximality, decompose, verify_subdirect

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


# input documents


def _parse_field(obj: Any) -> FieldSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("$.field", 'expected {"kind": "prime", "p": <int>} or {"kind": "rational"}')
    try:
        if obj["kind"] == "prime":
            return FieldSpec.prime(obj.get("p"))
        if obj["kind"] == "rational":
            return FieldSpec.rational()
    except ValueError as exc:
        raise ParseError("$.field", str(exc)) from exc
    raise ParseError("$.field.kind", f"unknown field kind {obj['kind']!r}")


def _parse_grid(grid: Any, n: int, fld: FieldSpec, where: str) -> tuple:
    if not isinstance(grid, list) or len(grid) != n:
        raise ParseError(where, f"expected {n} rows")
    rows = []
    for i, row in enumerate(grid):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}[{i}]", f"expected {n} entries")
        vals = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise ParseError(f"{where}[{i}][{j}]", "entries must be strings like \"2\" or \"-3/4\"")
            try:
                vals.append(fld.normalize(x))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"{where}[{i}][{j}]", str(exc)) from exc
        rows.append(tuple(vals))
    return tuple(rows)


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise ParseError("$", "expected a JSON object")
    return doc


def parse_document(text: str) -> tuple[FieldSpec, list[Mat], dict]:
    doc = _load_json(text)
    fld = _parse_field(doc.get("field"))
    n = doc.get("order")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("$.order", "expected a positive integer")
    grids = doc.get("generators")
    if not isinstance(grids, list) or not grids:
        raise ParseError("$.generators", "expected a nonempty list of matrices")
    gens = [Mat._raw(fld, _parse_grid(g, n, fld, f"$.generators[{k}]")) for k, g in enumerate(grids)]
    return fld, gens, doc.get("options", {}) or {}


def _parse_limit_mat(obj: Any, fld: FieldSpec, where: str) -> LimitMat:
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object with level, tail, entries")
    tail = obj.get("tail")
    if tail not in ("zero", "one"):
        raise ParseError(f"{where}.tail", f"tail must be \"zero\" or \"one\", got {tail!r}")
    level = obj.get("level")
    if not isinstance(level, int) or isinstance(level, bool) or level < 0:
        raise ParseError(f"{where}.level", "expected a nonnegative integer")
    rows = _parse_grid(obj.get("entries", []), level, fld, f"{where}.entries")
    return LimitMat(rows, 1 if tail == "one" else 0, fld)


def parse_limit_document(text: str) -> tuple[FieldSpec, list[LimitMat], LimitMat | None, dict]:
    doc = _load_json(text)
    fld = _parse_field(doc.get("field"))
    items = doc.get("generators")
    if not isinstance(items, list) or not items:
        raise ParseError("$.generators", "expected a nonempty list")
    gens = [_parse_limit_mat(g, fld, f"$.generators[{k}]") for k, g in enumerate(items)]
    idem = doc.get("idempotent")
    e = _parse_limit_mat(idem, fld, "$.idempotent") if idem is not None else None
    return fld, gens, e, doc.get("options", {}) or {}


def document(fld: FieldSpec, gens: list[Mat], options: dict | None = None) -> dict:
    doc = {"field": fld.to_json(), "order": gens[0].n, "generators": [g.grid() for g in gens]}
    if options:
        doc["options"] = options
    return doc


# reports


def _header(command: str, raw: bytes | None) -> dict:
    head = {"tool": "cliffmat", "version": __version__, "command": command}
    if raw is not None:
        head["input_digest"] = "sha256:" + hashlib.sha256(raw).hexdigest()
    return head


def _verdict_json(verdict, table) -> dict:
    out = dict(verdict.flags())
    out["witnesses"] = [w.to_json(table) for w in verdict.witnesses.values()]
    return out


def _replay(verdict, table, max_size) -> list[dict]:
    results = []
    for w in verdict.witnesses.values():
        words = [table.words[i] for i in w.elements]
        mats = [table.elements[i] for i in w.elements]
        ok = replay_witness(table.gens, w.kind, words, mats, max_size)
        results.append({"kind": w.kind, "confirmed": ok})
    return results


def _analysis_section(table, green, verdict, max_size, replay, elapsed) -> dict:
    enum = {
        "elements": table.size,
        "generators": len(table.gens),
        "idempotents": len(table.idempotents),
        "contains_zero": table.contains_zero,
    }
    if elapsed is not None:
        enum["wall_time_s"] = round(elapsed, 6)
    out = {"enumeration": enum, "green": green.counts(), "verdict": _verdict_json(verdict, table)}
    if replay:
        out["replay"] = _replay(verdict, table, max_size)
    return out


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _max_size(args, options) -> int:
    if args.max_size is not None:
        return args.max_size
    return int(options.get("max_size", DEFAULT_MAX_SIZE))


def _run_finite(args, command: str) -> tuple[dict, int]:
    raw = _read_input(args.input)
    report = _header(command, raw)
    try:
        fld, gens, options = parse_document(raw.decode("utf-8"))
    except ParseError as exc:
        report["error"] = {"type": "ParseError", "position": exc.position, "message": exc.message}
        return report, EXIT_ERROR
    max_size = _max_size(args, options)
    report["field"] = fld.to_json()
    report["order"] = gens[0].n
    started = time.perf_counter()
    try:
        table, green, verdict = analyze(gens, max_size)
    except SizeCapExceeded as exc:
        report["error"] = {"type": "SizeCapExceeded", "max_size": exc.max_size, "message": str(exc)}
        return report, EXIT_ERROR
    elapsed = time.perf_counter() - started if args.timings else None
    report.update(_analysis_section(table, green, verdict, max_size, args.replay_witnesses, elapsed))
    if args.replay_witnesses and not all(r["confirmed"] for r in report["replay"]):
        return report, EXIT_ERROR
    if not verdict.is_clifford:
        if command == "decompose":
            report["error"] = {"type": "NotClifford", "message": "refusing to decompose a non-Clifford semigroup"}
        return report, EXIT_FAIL
    d = None
    if command == "decompose":
        try:
            d = decompose(table, verdict, max_size)
            cert = verify_subdirect(table, d)
        except CliffmatError as exc:
            report["error"] = {"type": type(exc).__name__, "message": str(exc)}
            return report, EXIT_ERROR
        report["decomposition"] = d.to_json()
        report["decomposition"]["certificate"] = cert
    report["corollaries"] = check_corollaries(table, verdict, d, green)
    if report["corollaries"]["violations"]:
        return report, EXIT_FAIL
    return report, EXIT_OK


def cmd_analyze(args) -> tuple[dict, int]:
    return _run_finite(args, "analyze")


def cmd_decompose(args) -> tuple[dict, int]:
    return _run_finite(args, "decompose")


def cmd_maximality(args) -> tuple[dict, int]:
    report = _header("maximality", None)
    try:
        fld = FieldSpec.prime(args.p)
        result = check_maximality(args.n, fld, args.max_size or DEFAULT_MAX_SIZE, args.method)
    except (SweepTooLarge, ValueError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return report, EXIT_ERROR
    report["maximality"] = result
    return report, EXIT_OK if result["passed"] else EXIT_FAIL


def cmd_fuzz(args) -> tuple[dict, int]:
    report = _header("fuzz", None)
    rng = random.Random(args.seed)
    max_size = args.max_size or DEFAULT_MAX_SIZE
    instances = []
    failures = 0
    for i in range(args.count):
        case = draw_case(rng, args.max_block, small=args.mutant)
        gens = mutate(case) if args.mutant else case.generators
        ok, info, _ = round_trip(gens, max_size)
        if args.mutant:
            # a mutant counts as detected when the analyzer rejects it outright
            passed = info.get("is_clifford") is False
        else:
            passed = ok
        entry = {"index": i, **case.describe(), **info, "passed": passed}
        if not passed:
            failures += 1
            if args.repro_dir:
                if args.mutant:
                    def still_fails(g):
                        return round_trip(g, max_size)[1].get("is_clifford") is not False
                else:
                    def still_fails(g):
                        return not round_trip(g, max_size)[0]
                small = minimize(gens, still_fails)
                out = Path(args.repro_dir) / f"repro_{args.seed}_{i}.json"
                out.parent.mkdir(parents=True, exist_ok=True)
                out.write_text(json.dumps(document(case.field, small), indent=2) + "\n")
                entry["reproducer"] = str(out)
        instances.append(entry)
    report["fuzz"] = {
        "seed": args.seed,
        "count": args.count,
        "mutant": args.mutant,
        "passed": args.count - failures,
        "failed": failures,
        "instances": instances,
    }
    if args.mutant:
        report["fuzz"]["detection_rate"] = (args.count - failures) / args.count if args.count else 1.0
    return report, EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_limit(args) -> tuple[dict, int]:
    raw = _read_input(args.input)
    report = _header("limit", raw)
    try:
        fld, gens, e, options = parse_limit_document(raw.decode("utf-8"))
    except ParseError as exc:
        report["error"] = {"type": "ParseError", "position": exc.position, "message": exc.message}
        return report, EXIT_ERROR
    max_size = _max_size(args, options)
    report["field"] = fld.to_json()
    report["generators"] = [{**g.to_json(), "rank": limit_rank(g).to_json()} for g in gens]
    try:
        res = limit_analyze(gens, max_size)
    except SizeCapExceeded as exc:
        report["error"] = {"type": "SizeCapExceeded", "max_size": exc.max_size, "message": str(exc)}
        return report, EXIT_ERROR
    report["reduction_level"] = res.level
    report["tail_factor"] = {
        "regime": res.regime,
        "tails_present": sorted({("zero", "one")[t] for t in res.tails}),
    }
    report.update(_analysis_section(res.table, res.green, res.verdict, max_size, args.replay_witnesses, None))
    if args.replay_witnesses and not all(r["confirmed"] for r in report["replay"]):
        return report, EXIT_ERROR
    if res.decomposition is not None:
        report["decomposition"] = res.decomposition.to_json()
    if e is None:
        e = next((x for x in res.limit_elements
                  if x.tail == 0 and x * x == x and limit_rank(x).rank), None)
    if e is not None:
        try:
            split = limit_block_split(gens, e)
            report["split"] = {
                "idempotent": e.to_json(),
                "rank": split.rank,
                "level": split.level,
                "conjugator": split.conjugator.to_json(),
                "verified": True,
            }
        except CliffmatError as exc:
            report["split"] = {"idempotent": e.to_json(), "verified": False,
                               "error": {"type": type(exc).__name__, "message": str(exc)}}
        except ValueError as exc:
            report["split"] = {"idempotent": e.to_json(), "verified": False,
                               "error": {"type": "ValueError", "message": str(exc)}}
    return report, EXIT_OK if res.verdict.is_clifford else EXIT_FAIL


# output


def _text(report: dict) -> str:
    lines = [f"{report['tool']} {report['version']} {report['command']}"]
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
    if "enumeration" in report:
        lines.append(f"elements: {report['enumeration']['elements']}")
        lines.append("green classes: " + ", ".join(f"{k}={v}" for k, v in report["green"].items()))
        v = report["verdict"]
        lines.append(f"clifford: {v['is_clifford']}")
        for w in v["witnesses"]:
            lines.append(f"  witness {w['kind']}: words {w['words']} matrices {w['matrices']}")
    if "decomposition" in report:
        d = report["decomposition"]
        lines.append(f"block sizes: {d['block_sizes']} + zero block {d['zero_block']}")
        for c in d["components"]:
            lines.append(f"  {c['kind']} of order {c['order']} with {c['element_count']} elements")
        if "certificate" in d:
            lines.append(f"certificate: {'pass' if d['certificate']['passed'] else 'FAIL'}")
    if "corollaries" in report:
        viol = report["corollaries"]["violations"]
        lines.append("corollaries: " + (f"THEOREM VIOLATION {viol}" if viol else "all applicable checks pass"))
    if "maximality" in report:
        m = report["maximality"]
        lines.append(f"maximality: {m['broken']}/{m['excluded']} extensions break Clifford-ness ({m['method']})")
    if "fuzz" in report:
        fz = report["fuzz"]
        lines.append(f"fuzz: {fz['passed']}/{fz['count']} passed")
    if "split" in report:
        lines.append(f"limit split verified: {report['split']['verified']}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(report)
    return json.dumps(report, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cliffmat", description="Clifford matrix semigroup analyzer")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--replay-witnesses", action="store_true")
    common.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identical reports)")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func in (("analyze", cmd_analyze), ("decompose", cmd_decompose), ("limit", cmd_limit)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="input document path, or - for stdin")
        p.set_defaults(func=func)

    p = sub.add_parser("maximality", parents=[common])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--method", choices=("auto", "enumerate", "witness"), default="auto")
    p.set_defaults(func=cmd_maximality)

    p = sub.add_parser("fuzz", parents=[common])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-block", type=int, default=3)
    p.add_argument("--mutant", action="store_true", help="inject a non-commuting idempotent pair")
    p.add_argument("--repro-dir", default=None)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except (OSError, CliffmatError) as exc:
        report, code = _header(args.command, None), EXIT_ERROR
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    text = render(report, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
