"""``minorlab`` command line.

Exit codes: 0 success, 1 usage or input error, 2 a verification failed
or no verified result could be produced.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._rational import parse_fraction
from .expansion import (
    DEFAULT_EXACT_CAP,
    DEFAULT_PROBE_CAP,
    ExpanderCertificate,
    ExpansionProfile,
    ProfileKind,
    check_expander_exact,
    find_violation_heuristic,
)
from .extraction import ExtractionTrace, PipelineConfig, extract_expander, verify_extraction_trace
from .generators import GenSpec, GraphModel, gen
from .graph import parse_edgelist, read_edgelist, write_edgelist
from .model import MinorModel
from .oracle import brute_force_minor, check_minor_model
from .minors import SearchFailed, find_small_minor
from .sweep import SweepConfig, experiment_sweep, powers_of_two

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_graph(path: str):
    if path == "-":
        return parse_edgelist(sys.stdin.read())
    return read_edgelist(path)


def _profile(args, n: int) -> ExpansionProfile:
    kind = ProfileKind(args.profile)
    if kind is ProfileKind.DELTA:
        return ExpansionProfile.delta_expander(args.delta)
    return ExpansionProfile.delta_n_expander(args.delta, args.ambient_n or n)


def _cfg(args) -> PipelineConfig:
    return PipelineConfig(exact_cap=args.exact_cap, probe_cap=args.probe_cap, rng_seed=args.seed)


# -- subcommands -------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = GenSpec(GraphModel(args.model), args.n, args.param, args.seed, args.c)
    g = gen(spec)
    if args.format == "json":
        _emit(_dump({"spec": spec.to_dict(), "n": g.n, "edges": [list(e) for e in g.edges()]}), args.out)
    else:
        _emit(write_edgelist(g), args.out)
    return EXIT_OK


def cmd_extract(args) -> int:
    g = _load_graph(args.input)
    h, trace = extract_expander(g, _profile(args, g.n), _cfg(args))
    if args.trace:
        if args.trace.endswith(".bin"):
            Path(args.trace).write_bytes(trace.to_bytes())
        else:
            Path(args.trace).write_text(trace.to_json(indent=2) + "\n")
    if args.format == "json":
        _emit(trace.to_json(indent=2) + "\n", args.out)
    else:
        _emit(write_edgelist(h), args.out)
    if not verify_extraction_trace(g, trace):
        print("trace verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load_graph(args.input)
    if args.model:
        data = json.loads(Path(args.model).read_text())
        model = MinorModel.from_dict(data.get("model", data))
        reason = check_minor_model(g, model)
        _emit(_dump({"valid": reason is None, "reason": reason, "order": model.order}), args.out)
        return EXIT_OK if reason is None else EXIT_VERIFY
    if args.trace:
        raw = Path(args.trace).read_bytes()
        trace = ExtractionTrace.from_bytes(raw) if args.trace.endswith(".bin") else ExtractionTrace.from_json(raw.decode())
        ok = verify_extraction_trace(g, trace)
        _emit(_dump({"valid": ok}), args.out)
        return EXIT_OK if ok else EXIT_VERIFY
    profile = _profile(args, g.n)
    if g.n <= args.exact_cap:
        res = check_expander_exact(g, profile, args.exact_cap)
    else:
        res = find_violation_heuristic(g, profile, args.probe_cap, args.seed)
    if isinstance(res, ExpanderCertificate):
        _emit(_dump(res.to_dict()), args.out)
    else:
        _emit(_dump(res.to_dict(profile)), args.out)
    return EXIT_OK


def cmd_find_minor(args) -> int:
    g = _load_graph(args.input)
    try:
        res = find_small_minor(g, args.t, args.epsilon, args.ct, _cfg(args))
    except SearchFailed as exc:
        _emit(_dump({"found": False, "reason": exc.reason, "state": exc.state}), args.out)
        return EXIT_VERIFY
    _emit(_dump(res.to_dict()), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load_graph(args.input)
    model = brute_force_minor(g, args.t, args.brute_cap)
    _emit("none\n" if model is None else model.to_json(indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.sizes:
        ns = [int(x) for x in args.sizes.split(",")]
    else:
        ns = powers_of_two(args.min_exp, args.max_exp)
    param = args.param if args.param == "auto" else parse_fraction(args.param)
    cfg = SweepConfig(
        ns=tuple(ns), model=GraphModel(args.model), param=param, c=args.c, t=args.t,
        epsilon=args.epsilon, c_of_t=args.ct, trials=args.trials, seed=args.seed,
        condition_density=not args.no_condition, timings=args.timings,
    )
    report = experiment_sweep(cfg)
    if args.format == "json":
        _emit(_dump({"rows": report.rows, "aggregates": report.aggregates}), args.out)
    else:
        _emit(report.to_csv(), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minorlab", description="Dense expander extraction and small clique minors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json",), default="json"):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write here instead of stdout")

    def expansion_opts(sp):
        sp.add_argument("--profile", choices=[k.value for k in ProfileKind], default="delta")
        sp.add_argument("--delta", type=parse_fraction, default=parse_fraction("1/256"))
        sp.add_argument("--ambient-n", type=int, help="ambient n for delta_n (default: graph order)")
        sp.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
        sp.add_argument("--probe-cap", type=int, default=DEFAULT_PROBE_CAP)

    sp = sub.add_parser("gen", help="generate a random graph")
    sp.add_argument("--model", choices=[m.value for m in GraphModel], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--param", type=parse_fraction, required=True)
    sp.add_argument("--c", type=parse_fraction, default=parse_fraction(3), help="G(n, c/n) base for HighGirth")
    common(sp, ("el", "json"), "el")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("extract", help="extract a dense expander")
    sp.add_argument("--input", required=True)
    sp.add_argument("--trace", help="trace file (.bin for the binary log)")
    expansion_opts(sp)
    common(sp, ("el", "json"), "el")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("check", help="check expansion, or verify a model or trace")
    sp.add_argument("--input", required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--model", help="minor model JSON to verify")
    group.add_argument("--trace", help="extraction trace to replay")
    expansion_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("find-minor", help="find a small K_t minor")
    sp.add_argument("--input", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--epsilon", type=parse_fraction, required=True)
    sp.add_argument("--ct", type=parse_fraction, help="c(t); defaults exist for t = 3, 4, 5")
    sp.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    sp.add_argument("--probe-cap", type=int, default=DEFAULT_PROBE_CAP)
    common(sp)
    sp.set_defaults(func=cmd_find_minor)

    sp = sub.add_parser("oracle", help="exhaustive K_t minor test")
    sp.add_argument("--input", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--brute-cap", type=int, default=12)
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sweep", help="size sweep to CSV")
    sp.add_argument("--model", choices=[m.value for m in GraphModel], default="Gnp")
    sp.add_argument("--sizes", help="comma-separated n values")
    sp.add_argument("--min-exp", type=int, default=8)
    sp.add_argument("--max-exp", type=int, default=10)
    sp.add_argument("--param", default="8", help="model parameter, or 'auto' girth for HighGirth")
    sp.add_argument("--c", type=parse_fraction, default=parse_fraction(3))
    sp.add_argument("--t", type=int, default=4)
    sp.add_argument("--epsilon", type=parse_fraction, default=parse_fraction(1))
    sp.add_argument("--ct", type=parse_fraction, default=parse_fraction(2))
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--no-condition", action="store_true", help="keep graphs below the density threshold")
    sp.add_argument("--timings", action="store_true", help="fill the elapsed_ms column")
    common(sp, ("csv", "json"), "csv")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"minorlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
