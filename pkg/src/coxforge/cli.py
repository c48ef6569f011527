"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 step budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import coxconstruct as cc
from . import serialize
from .groebner import Budget, BudgetExceeded, default_budget
from .presentations import PresentationError
from .verify import SCHEMA, negative_controls, presentation_for, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

BATTERY = (
    cc.PowerP1(2), cc.PowerP1(3), cc.PowerP1(4),
    cc.ProductSquare((1,)), cc.ProductSquare((2,)), cc.ProductSquare((1, 1)), cc.ProductSquare((2, 1)),
)


class UsageError(Exception):
    pass


def _spec_from_args(args):
    if getattr(args, "battery", False):
        return None
    if args.p1_power is not None and args.product_square is not None:
        raise UsageError("give only one of --p1-power and --product-square")
    if args.p1_power is not None:
        if args.p1_power < 2:
            raise UsageError("n must be ≥ 2")
        return cc.PowerP1(args.p1_power)
    if args.product_square is not None:
        try:
            n_list = tuple(int(x) for x in args.product_square.split(","))
        except ValueError:
            raise UsageError("--product-square expects comma-separated integers, e.g. 2,1") from None
        if any(n < 1 for n in n_list):
            raise UsageError("every n_r must be ≥ 1")
        return cc.ProductSquare(n_list)
    raise UsageError("a spec is required: --p1-power N or --product-square N1,N2,...")


def _budget(args) -> int:
    if args.step_budget is not None:
        if args.step_budget < 1:
            raise UsageError("--step-budget must be ≥ 1")
        return args.step_budget
    try:
        return default_budget()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, output) -> None:
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {output}: {exc}") from None
    else:
        sys.stdout.write(text)


def cmd_present(args) -> int:
    spec = _spec_from_args(args)
    P = presentation_for(spec)
    doc = serialize.presentation_to_dict(P, spec)
    _emit(serialize.render(P, args.format, doc), args.output)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    spec = _spec_from_args(args)
    state = cc.pipeline_I2(spec, Budget(_budget(args)))
    P = serialize.pipeline_presentation(state)
    doc = serialize.pipeline_to_dict(state)
    _emit(serialize.render(P, args.format, doc), args.output)
    return EXIT_OK


def cmd_export(args) -> int:
    if not args.output:
        raise UsageError("export needs --output PATH")
    if args.what == "pipeline":
        return cmd_pipeline(args)
    return cmd_present(args)


def _summarize(report) -> None:
    for c in report.checks:
        print(f"[{c.status.upper()}] {report.spec} {c.name}: {c.detail}", file=sys.stderr)


def cmd_verify(args) -> int:
    budget = _budget(args)
    specs = list(BATTERY) if args.battery else [_spec_from_args(args)]
    timings = not args.no_timings
    docs, all_ok, budget_hit = [], True, False
    for spec in specs:
        report = run_verification(spec, budget)
        _summarize(report)
        doc = report.to_dict(timings)
        if args.negative_controls:
            rows = negative_controls(spec, budget)
            doc["negative_controls"] = rows
            if not all(r["detected"] for r in rows):
                all_ok = False
                doc["overall"] = "fail"
        docs.append(doc)
        all_ok = all_ok and report.passed
        budget_hit = budget_hit or report.budget_exceeded
    if args.battery:
        payload = {"schema": SCHEMA, "reports": docs, "overall": "pass" if all_ok else "fail"}
    else:
        payload = docs[0]
    _emit(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", args.output)
    if budget_hit:
        return EXIT_BUDGET
    return EXIT_OK if all_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxforge",
        description="Cox rings of diagonal blow-ups: presentations, transfer pipeline, verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec(p, battery=False):
        p.add_argument("--p1-power", type=int, metavar="N", help="Y = (P^1)^N blown up along the diagonal")
        p.add_argument("--product-square", metavar="N1,N2,...",
                       help="X' x X' with X' = P^N1 x P^N2 x ... blown up along the diagonal")
        if battery:
            p.add_argument("--battery", action="store_true", help="run the default battery of specs")
        p.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")
        p.add_argument("--step-budget", type=int, metavar="N",
                       help="reduction-step budget per Gröbner computation "
                            "(default: $COXFORGE_STEP_BUDGET or 10^7)")

    p = sub.add_parser("present", help="emit the stated presentation")
    add_spec(p)
    p.add_argument("--format", choices=serialize.FORMATS, default="json")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("pipeline", help="recompute the Cox ring via the ideal transfer")
    add_spec(p)
    p.add_argument("--format", choices=serialize.FORMATS, default="json")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", help="check the pipeline against the presentation")
    add_spec(p, battery=True)
    p.add_argument("--no-timings", action="store_true", help="write elapsed_ms as 0 for byte-stable reports")
    p.add_argument("--negative-controls", action="store_true", help="also run the seeded corruptions")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write a presentation or pipeline result to a file")
    add_spec(p)
    p.add_argument("--format", choices=serialize.FORMATS, default="json")
    p.add_argument("--what", choices=("presentation", "pipeline"), default="presentation")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, cc.SpecError, PresentationError) as exc:
        print(f"coxforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"coxforge: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
