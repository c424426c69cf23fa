"""Command-line front end.

Exit codes: 0 success, 1 verification failure (or a definite negative
answer), 2 rejected input or precondition, 3 timeout or vertex cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import ham_lab, middle_levels, path_composer
from .certificate import Certificate, CertificateFormatError, HamPath, parse_certificate
from .flip_graph import CapExceeded, flip_graph, format_vertex, parse_vertex
from .partition_core import PartitionError, Regime, as_partition, classify, format_partition, num_vertices

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_REJECT = 2
EXIT_LIMIT = 3

PROPERTIES = ("H", "L", "L1", "L12", "E", "C", "P")


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


# ---------------------------------------------------------------- helpers


def _partition(text: str):
    try:
        return as_partition(text)
    except (PartitionError, ValueError) as exc:
        raise CliError(EXIT_REJECT, "bad-partition", str(exc)) from exc


def _vertex(a, text: str):
    try:
        x = parse_vertex(text)
    except ValueError as exc:
        raise CliError(EXIT_REJECT, "bad-vertex", str(exc)) from exc
    if sorted(x) != sorted(s for s, c in enumerate(a.parts, start=1) for _ in range(c)):
        raise CliError(EXIT_REJECT, "bad-vertex", f"{text} is not a vertex of G({format_partition(a)})")
    return x


def _check_cap(a, cap: int | None) -> None:
    if cap is not None and num_vertices(a) > cap:
        raise CliError(EXIT_LIMIT, "cap", f"G({format_partition(a)}) has {num_vertices(a)} vertices, cap is {cap}")


def _emit_certificate(args, a, path: HamPath, expect: str, view: str = "full") -> int:
    """Verify, then print in the requested format."""
    report = ham_lab.verify(a, path, expect)
    if not report.ok:
        raise CliError(EXIT_VERIFY, "verify", f"certificate failed verification: {report.reason}")
    cert = path.to_certificate(view)
    fmt = args.format or "txt"
    if fmt == "json":
        sys.stdout.write(cert.to_json())
    elif fmt == "flips":
        sys.stdout.write(cert.to_flips())
    elif fmt == "txt":
        sys.stdout.write(cert.to_text())
    else:
        raise CliError(EXIT_REJECT, "usage", f"format {fmt!r} does not apply to certificates")
    return EXIT_OK


def _print_json(data) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True, ensure_ascii=False) + "\n")


def _progress(args) -> Callable[[str], None]:
    def say(line: str) -> None:
        if args.format != "json":
            print(line, flush=True)

    return say


# --------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    a = _partition(args.partition)
    try:
        verdict = classify(a)
    except PartitionError as exc:
        raise CliError(EXIT_REJECT, "bad-partition", str(exc)) from exc
    text = verdict.describe()
    if args.format == "json":
        _print_json({
            "partition": list(a.parts),
            "delta": verdict.delta,
            "regime": verdict.regime.value,
            "vertices": num_vertices(a),
            "hamilton_cycle": verdict.hamilton_cycle_possible,
            "hamilton_path": verdict.hamilton_path_possible,
            "route": path_composer.route(a),
            "message": text,
        })
    else:
        print(f"G({format_partition(a)}): {num_vertices(a)} vertices, {text}")
    return EXIT_REJECT if verdict.regime is Regime.NEGATIVE else EXIT_OK


def cmd_solve(args) -> int:
    a = _partition(args.partition)
    _check_cap(a, args.cap)
    if args.cycle or (args.from_ is None and args.to is None):
        res = ham_lab.search_ham_cycle(a, timeout=args.timeout, cap=args.cap)
        expect = "cycle"
    else:
        if args.from_ is None or args.to is None:
            raise CliError(EXIT_REJECT, "usage", "give both --from and --to")
        x, y = _vertex(a, args.from_), _vertex(a, args.to)
        if x == y:
            raise CliError(EXIT_REJECT, "usage", "endpoints must be distinct")
        res = ham_lab.search_ham_path(a, x, y, timeout=args.timeout, cap=args.cap)
        expect = "path"
    if res.status is ham_lab.SearchStatus.TIMEOUT:
        raise CliError(EXIT_LIMIT, "timeout", f"search in G({format_partition(a)}) timed out")
    if res.path is None:
        what = "path with these endpoints" if expect == "path" else "cycle"
        raise CliError(EXIT_VERIFY, "none", f"G({format_partition(a)}) has no Hamilton {what}")
    return _emit_certificate(args, a, res.path, expect)


def cmd_check(args) -> int:
    a = _partition(args.partition)
    _check_cap(a, args.cap)
    rep = ham_lab.check_property(a, args.property, reduce=not args.all_pairs, timeout=args.timeout,
                                 cap=args.cap, stop_at_failure=not args.all_failures, threads=args.threads)
    if args.format == "json":
        data = {
            "partition": list(a.parts),
            "property": rep.prop.value,
            "holds": rep.holds,
            "applicable": rep.applicable,
            "pairs_checked": rep.pairs_checked,
            "timeouts": rep.timeouts,
            "counterexample": None if rep.counterexample is None else [format_vertex(v) for v in rep.counterexample],
        }
        _print_json(data)
    else:
        print(rep.summary())
    if rep.holds is None:
        return EXIT_LIMIT
    return EXIT_OK if rep.holds else EXIT_VERIFY


def cmd_table1(args) -> int:
    rows = ham_lab.table1_report(args.max_n, timeout=args.timeout, threads=args.threads)
    if args.format == "json":
        _print_json([{k: v for k, v in r.as_dict().items() if k != "seconds"} for r in rows])
        return EXIT_OK
    print(f"{'a':<14}{'n':>3}{'Δ':>4}{'vertices':>10}  verdict")
    for r in rows:
        print(f"{format_partition(r.a):<14}{r.a.n:>3}{r.delta:>4}{r.vertices:>10}  {r.verdict}")
    return EXIT_OK


def cmd_gen(args) -> int:
    a = _partition(args.partition)
    _check_cap(a, args.cap)
    composer = path_composer.Composer(timeout=args.timeout, allow_conditional=args.allow_conditional)
    if args.cycle:
        if args.from_ or args.to:
            raise CliError(EXIT_REJECT, "usage", "--cycle takes no endpoints")
        path = path_composer.gray_code(a, mode="cycle", composer=composer,
                                       allow_conditional=args.allow_conditional)
        return _emit_certificate(args, a, path, "cycle")
    if (args.from_ is None) != (args.to is None):
        raise CliError(EXIT_REJECT, "usage", "give both --from and --to")
    x = y = None
    if args.from_ is not None:
        x, y = _vertex(a, args.from_), _vertex(a, args.to)
        if x == y:
            raise CliError(EXIT_REJECT, "usage", "endpoints must be distinct")
    path = path_composer.gray_code(a, x, y, composer=composer, allow_conditional=args.allow_conditional)
    if x is not None and (path.start != x or path.end != y):
        raise CliError(EXIT_VERIFY, "verify", "path endpoints differ from the request")
    return _emit_certificate(args, a, path, "path")


def cmd_warmup(args) -> int:
    reports = path_composer.warmup(args.max_a1, timeout=args.timeout, progress=_progress(args))
    if args.format == "json":
        _print_json([{"partition": list(r.a.parts), "property": r.prop.value, "holds": r.holds,
                      "pairs_checked": r.pairs_checked} for r in reports])
    if any(r.holds is None for r in reports):
        return EXIT_LIMIT
    return EXIT_OK


def _middle_parts(args) -> tuple[int, ...]:
    if args.a is None:
        return (args.n,)
    parts = _partition(args.a).parts
    if sum(parts) != args.n:
        raise CliError(EXIT_REJECT, "bad-partition", f"--a must sum to n={args.n}")
    return parts


def _short_vertex(text: str, n: int) -> tuple[int, ...]:
    try:
        x = parse_vertex(text)
    except ValueError as exc:
        raise CliError(EXIT_REJECT, "bad-vertex", str(exc)) from exc
    if len(x) != 2 * n - 1 or set(x) - {0, 1} or sum(x) not in (n - 1, n):
        raise CliError(EXIT_REJECT, "bad-vertex", f"{text} is not a middle-levels vertex for n={n}")
    return x


def distance_pair(n: int, d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A fixed pair of G_n(n) at odd Hamming distance d."""
    if d % 2 == 0 or not 1 <= d <= 2 * n - 1:
        raise CliError(EXIT_REJECT, "precondition", f"distance must be odd and between 1 and {2 * n - 1}")
    x = [0] * n + [1] * (n - 1)
    y = list(x)
    for j in range((d + 1) // 2):
        y[j] = 1
    for j in range((d - 1) // 2):
        y[n + j] = 0
    return tuple(x), tuple(y)


def cmd_middle(args) -> int:
    n = args.n
    if n < 2:
        raise CliError(EXIT_REJECT, "precondition", "n must be at least 2")
    parts = _middle_parts(args)
    if args.cycle_mprime:
        if parts != (n,) and parts != (n - 1, 1):
            raise CliError(EXIT_REJECT, "precondition", "--cycle-mprime works in G_n(n-1,1)")
        path = middle_levels.cycle_M_prime(n)
        return _emit_certificate(args, path.a, path, "cycle", view="short")
    if args.distance is not None or args.from_ is not None:
        if parts != (n,):
            raise CliError(EXIT_REJECT, "precondition", "laceable paths are built in G_n(n)")
        if args.from_ is not None:
            if args.to is None:
                raise CliError(EXIT_REJECT, "usage", "give both --from and --to")
            x, y = _short_vertex(args.from_, n), _short_vertex(args.to, n)
            if sum(x) == sum(y):
                raise CliError(EXIT_REJECT, "precondition", "endpoints must lie on different levels")
        else:
            x, y = distance_pair(n, args.distance)
        path = middle_levels.laceable_path(n, x, y)
        return _emit_certificate(args, path.a, path, "path", view="short")
    factor = middle_levels.build_factor(n, parts, cap=args.cap)
    _print_json(factor.summary())
    return EXIT_OK


def cmd_factor(args) -> int:
    parts = _middle_parts(args)
    laws = middle_levels.check_factor_laws(args.n, parts, cap=args.cap)
    if args.format == "json":
        _print_json(laws.as_dict())
    else:
        d = laws.as_dict()
        print(f"G_{args.n}({format_partition(parts)}): {d['vertices']} vertices, "
              f"{d['cycles']} cycles, {d['plane_classes']} labeled plane trees")
        for key in ("g_after_f_is_identity", "tree_rotates", "shift_increments"):
            print(f"  {key}: {'yes' if d[key] else 'no'}")
        if laws.failure:
            print(f"  failure: {laws.failure}")
    return EXIT_OK if laws.ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(EXIT_REJECT, "io", str(exc)) from exc
    try:
        cert = parse_certificate(text)
    except (CertificateFormatError, PartitionError, ValueError) as exc:
        raise CliError(EXIT_VERIFY, "verify", f"unreadable certificate: {exc}") from exc
    report = ham_lab.verify(cert.a, cert, args.expect)
    summary = {
        "partition": list(cert.a.parts),
        "kind": cert.kind,
        "vertices": num_vertices(cert.a),
        "ok": report.ok,
        "reason": report.reason,
    }
    if args.format == "json":
        _print_json(summary)
    elif report.ok:
        print(f"ok: Hamilton {cert.kind} in G({format_partition(cert.a)}), {summary['vertices']} vertices")
    if not report.ok:
        raise CliError(EXIT_VERIFY, "verify", f"verification failed: {report.reason}")
    return EXIT_OK


def cmd_export(args) -> int:
    a = _partition(args.partition)
    _check_cap(a, args.cap)
    g = flip_graph(a, cap=args.cap)
    fmt = args.format or "dot"
    if fmt == "dot":
        sys.stdout.write(g.to_dot())
    elif fmt == "json":
        _print_json({
            "partition": list(a.parts),
            "vertices": [format_vertex(g.vertex(i)) for i in range(g.size)],
            "edges": [[int(v), int(w)] for v, w in g.edges()],
        })
    else:
        for i in range(g.size):
            print(format_vertex(g.vertex(i)))
    return EXIT_OK


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CliError(EXIT_REJECT, "usage", f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("txt", "json", "flips", "dot"), default=None,
                        help="output format")
    common.add_argument("--cache", metavar="DIR", default=None,
                        help="certificate cache directory (default: $STARGRAY_CACHE)")
    common.add_argument("--timeout", type=float, default=600.0, metavar="SECONDS",
                        help="time limit per exhaustive search")
    common.add_argument("--cap", type=int, default=None, metavar="VERTICES", help="refuse larger graphs")
    common.add_argument("--threads", type=int, default=1, metavar="N", help="parallel search workers")
    common.add_argument("--json", action="store_true", help="machine-readable errors on stderr")

    p = _Parser(prog="stargray", description="Star transposition Gray codes for multiset permutations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="Delta regime and cycle/path verdict")
    s.add_argument("partition")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", parents=[common], help="exhaustive search for a Hamilton path or cycle")
    s.add_argument("partition")
    s.add_argument("--from", dest="from_", metavar="V")
    s.add_argument("--to", metavar="V")
    s.add_argument("--cycle", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", parents=[common], help="decide a Hamiltonicity property by search")
    s.add_argument("partition")
    s.add_argument("property", choices=PROPERTIES)
    s.add_argument("--all-pairs", action="store_true", help="skip symmetry reduction")
    s.add_argument("--all-failures", action="store_true", help="keep going after a failing pair")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("table1", parents=[common], help="property verdicts for the small base-case partitions")
    s.add_argument("--max-n", type=int, default=8)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("gen", parents=[common], help="constructive Hamilton path or cycle")
    s.add_argument("partition")
    s.add_argument("--from", dest="from_", metavar="V")
    s.add_argument("--to", metavar="V")
    s.add_argument("--cycle", action="store_true")
    s.add_argument("--allow-conditional", action="store_true",
                   help="permit a_1 > 4, relying on unproven Delta-zero base cases found by search")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("warmup", parents=[common], help="fill the cache with the Delta-zero base cases")
    s.add_argument("max_a1", type=int)
    s.set_defaults(func=cmd_warmup)

    s = sub.add_parser("middle", parents=[common], help="middle-levels constructions in G_n(a)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", default=None, metavar="PARTS")
    group = s.add_mutually_exclusive_group()
    group.add_argument("--distance", type=int, metavar="D", help="Hamilton path in G_n(n) between a fixed pair at distance D")
    group.add_argument("--cycle-mprime", action="store_true", help="Hamilton cycle in G_n(n-1,1)")
    group.add_argument("--from", dest="from_", metavar="X", help="start bitstring of length 2n-1")
    s.add_argument("--to", metavar="Y", help="end bitstring of length 2n-1")
    s.set_defaults(func=cmd_middle)

    s = sub.add_parser("factor", parents=[common], help="check the cycle factor laws of G_n(a)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", default=None, metavar="PARTS")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("verify", parents=[common], help="check a certificate file ('-' for stdin)")
    s.add_argument("file")
    s.add_argument("--expect", choices=ham_lab.EXPECTATIONS, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", parents=[common], help="write the flip graph as DOT, JSON or a vertex list")
    s.add_argument("partition")
    s.set_defaults(func=cmd_export)
    return p


def _fail(args_json: bool, code: int, kind: str, message: str) -> int:
    if args_json:
        sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}, ensure_ascii=False) + "\n")
    else:
        sys.stderr.write(f"stargray: {message}\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        return _fail(want_json, exc.code, exc.kind, str(exc))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_REJECT
    if args.cache:
        ham_lab.set_cache(ham_lab.CertificateCache(args.cache))
    if args.threads < 1:
        return _fail(args.json, EXIT_REJECT, "usage", "--threads must be positive")
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(args.json, exc.code, exc.kind, str(exc))
    except (CapExceeded, path_composer.CompositionTimeout, ham_lab.SearchTimeout) as exc:
        return _fail(args.json, EXIT_LIMIT, "limit", str(exc))
    except (path_composer.UnsupportedInstance, PartitionError) as exc:
        return _fail(args.json, EXIT_REJECT, "precondition", str(exc))
    except (path_composer.CompositionError, middle_levels.MiddleLevelsError, AssertionError) as exc:
        return _fail(args.json, EXIT_VERIFY, "construction", str(exc))
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
