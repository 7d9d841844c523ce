"""Command-line interface.

Subcommands mirror the analysis stages: `weights` emits the spatial
weight matrix as CSV, `corr`, `fit`, `decompose`, `check` and `advise`
print one block of the full report, and `report` runs everything and,
given an output directory, writes the JSON/text reports, delimited
tables, and diagnostic figures side by side.

Exit codes: 0 success, 1 input error (bad files, bad flags), 2
numerical failure (a singular system with no fallback).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InputError, NumericalError
from .io import read_attributes, parse_distances, write_weights_csv
from .regression import VARIANTS
from .report import AnalysisConfig, render_json, render_text, run_pipeline, write_report_files
from .weights import inverse_distance_contiguity, normalize_global


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    data = common.add_argument_group("data")
    data.add_argument("--attrs", required=True, help="attribute CSV with header id,x,y")
    data.add_argument("--dist", required=True, help="distance CSV (square or long form)")
    data.add_argument(
        "--dist-format", choices=("square", "long"), default="square",
        help="distance file layout (default: square)",
    )
    data.add_argument(
        "--log", action="store_true",
        help="natural-log transform x and y before standardization",
    )
    run = common.add_argument_group("analysis")
    run.add_argument("--alpha", type=float, default=0.05, help="significance level (default: 0.05)")
    run.add_argument("--seed", type=int, default=0, help="permutation seed (default: 0)")
    run.add_argument(
        "--permutations", type=int, default=999,
        help="permutation count for the cross-check p-values; 0 disables (default: 999)",
    )
    run.add_argument(
        "--workers", type=int, default=1,
        help="worker threads for permutation testing; output is identical for any count",
    )
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    out.add_argument("--out", default=None, help="output file (directory for `report`)")
    return common


def _config(args, model: str | None = None) -> AnalysisConfig:
    return AnalysisConfig(
        attrs_path=args.attrs,
        dist_path=args.dist,
        dist_format=args.dist_format,
        log_transform=args.log,
        alpha=args.alpha,
        model=model,
        seed=args.seed,
        permutations=args.permutations,
        output=args.fmt,
        workers=args.workers,
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _render_slice(args, keys: tuple[str, ...], model: str | None = None) -> dict:
    result = run_pipeline(_config(args, model))
    sliced = {k: result.report[k] for k in keys}
    render = render_json if args.fmt == "json" else render_text
    _emit(render(sliced), args.out)
    return sliced


def cmd_weights(args) -> int:
    attrs = read_attributes(args.attrs)
    dist = parse_distances(args.dist, args.dist_format, attrs.ids)
    w = normalize_global(inverse_distance_contiguity(dist))
    if args.out is None:
        write_weights_csv(w, attrs.ids, sys.stdout)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_weights_csv(w, attrs.ids, fh)
    return 0


def cmd_corr(args) -> int:
    _render_slice(args, ("meta", "correlation_table"))
    return 0


def cmd_fit(args) -> int:
    _render_slice(args, ("meta", "fits", "diagnostics"), model=args.model)
    return 0


def cmd_decompose(args) -> int:
    sliced = _render_slice(args, ("meta", "decomposition", "decomposition_empirical"))
    if sliced["decomposition"]["singular"]:
        print("decompose: singular system, coefficients undefined", file=sys.stderr)
        return 2
    return 0


def cmd_check(args) -> int:
    _render_slice(args, ("meta", "identity_checks"))
    return 0


def cmd_advise(args) -> int:
    _render_slice(args, ("meta", "collinearity", "advice"))
    return 0


def cmd_report(args) -> int:
    result = run_pipeline(_config(args, model=args.model))
    if args.out is None:
        render = render_json if args.fmt == "json" else render_text
        sys.stdout.write(render(result.report))
        return 0
    written = write_report_files(result, args.out, include_figures=not args.no_figures)
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spacereg",
        description="Spatial correlation statistics, regression, and coefficient decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    sub.add_parser("weights", parents=[common],
                   help="emit the spatial weight matrix as CSV").set_defaults(func=cmd_weights)
    sub.add_parser("corr", parents=[common],
                   help="correlation indexes with significance").set_defaults(func=cmd_corr)
    p_fit = sub.add_parser("fit", parents=[common], help="fit model variants by OLS")
    p_fit.add_argument("--model", choices=VARIANTS, default=None,
                       help="fit only this variant (plus the simple baseline)")
    p_fit.set_defaults(func=cmd_fit)
    sub.add_parser("decompose", parents=[common],
                   help="closed-form coefficient decomposition").set_defaults(func=cmd_decompose)
    sub.add_parser("check", parents=[common],
                   help="coefficient identity checks").set_defaults(func=cmd_check)
    sub.add_parser("advise", parents=[common],
                   help="model recommendation from the evidence").set_defaults(func=cmd_advise)
    p_rep = sub.add_parser("report", parents=[common],
                           help="full pipeline; with --out DIR also files and figures")
    p_rep.add_argument("--model", choices=VARIANTS, default=None,
                       help="restrict fits to this variant (plus the simple baseline)")
    p_rep.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering in the output directory")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"spacereg: input error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"spacereg: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
