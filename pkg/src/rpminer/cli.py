"""Command-line interface: ``rpminer run | evaluate | generate``.

Exit codes: 0 on success, 1 for input errors (missing or malformed files,
bad arguments), 2 when the pipeline fails internally.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import simgen
from .estimator import PipelineError, run_pipeline
from .log_model import ContextSchema, LogFormatError, read_log, write_log
from .output import evaluate, write_outputs
from .validation import CRITERIA

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2

MODELS = {
    "cpn1": simgen.cpn1_model,
    "multi": simgen.multi_variant_model,
    "automatability": simgen.automatability_model,
}


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text}")
    return value


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not internal ones
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rpminer", description="Discover automatable routines in UI logs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the discovery pipeline on a UI log")
    run.add_argument("--log", required=True, help="UI log in CSV format")
    run.add_argument("--schema", help="JSON file mapping UI types to context parameters")
    run.add_argument("--min-support", type=_fraction, default=0.1)
    run.add_argument("--min-coverage", type=_fraction, default=0.05)
    run.add_argument("--criterion", choices=CRITERIA, default="cohesion")
    run.add_argument("--emit-dot", action="store_true", help="also write the CFG and dominator tree as DOT")
    run.add_argument("--seed-eval", metavar="TRUTH", help="ground-truth CSV to evaluate the run against")
    run.add_argument("--out", required=True, help="output directory")

    ev = sub.add_parser("evaluate", help="score written specifications against ground truth")
    ev.add_argument("--specs", required=True, help="directory written by 'run'")
    ev.add_argument("--truth", required=True, help="ground-truth CSV")
    ev.add_argument("--log", help="the UI log (defaults to the one named in report.json)")
    ev.add_argument("--out", help="write the metrics JSON here instead of stdout")

    gen = sub.add_parser("generate", help="generate a synthetic UI log with ground truth")
    gen.add_argument("--model", choices=sorted(MODELS), default="cpn1")
    gen.add_argument("--instances", type=int, default=100)
    gen.add_argument("--noise", type=_fraction, default=0.0, help="chance of a noise burst between instances")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True, help="CSV path for the log")
    gen.add_argument("--truth", help="CSV path for the ground truth (default: <out>.truth.csv)")
    return parser


def _cmd_run(args) -> int:
    log_path = Path(args.log)
    if not log_path.is_file():
        raise FileNotFoundError(f"no such log file: {log_path}")
    schema = ContextSchema.from_file(args.schema) if args.schema else None
    events = read_log(log_path)
    result = run_pipeline(events, schema, args.min_support, args.min_coverage, args.criterion)
    report = write_outputs(result, args.out, str(log_path.resolve()), schema, args.emit_dot)
    if args.seed_eval:
        metrics = evaluate(args.out, args.seed_eval, log_path)
        Path(args.out, "evaluation.json").write_text(json.dumps(metrics, indent=2) + "\n", encoding="utf-8")
        report["evaluation"] = metrics
    print(json.dumps({k: v for k, v in report.items() if k != "schema"}, indent=2))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    metrics = evaluate(args.specs, args.truth, args.log)
    text = json.dumps(metrics, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.instances < 0:
        raise ValueError("--instances must be non-negative")
    factory = MODELS[args.model]
    kwargs = {} if args.seed is None else {"seed": args.seed}
    if args.model != "automatability":
        kwargs["noise_rate"] = args.noise
    elif args.noise:
        raise ValueError("the automatability model does not take noise")
    log, truth = simgen.generate(factory(**kwargs), args.instances)
    out = Path(args.out)
    write_log(log, out)
    truth_path = Path(args.truth) if args.truth else out.with_suffix(".truth.csv")
    simgen.write_truth(truth, truth_path)
    print(f"wrote {len(log)} events to {out} and ground truth to {truth_path}")
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "evaluate": _cmd_evaluate, "generate": _cmd_generate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except PipelineError as exc:
        print(f"rpminer: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, LogFormatError, ValueError, json.JSONDecodeError) as exc:
        print(f"rpminer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
