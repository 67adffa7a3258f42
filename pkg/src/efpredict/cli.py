"""Command-line interface.

Subcommands: ``generate`` draws a synthetic cohort, ``run`` executes the
full pipeline, ``rfe`` runs the elimination study alone, ``verify-paper``
checks the metrics engine against the embedded published tables, and
``emit-figures`` turns a report into figure data tables.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 training error, 4 verification failure.
"""

import argparse
import os
import sys

from . import __version__
from .cohort import CohortConfig, default_config, generate_cohort
from .dataset import load_dataset, save_dataset
from .errors import (
    ConfigError,
    DataError,
    EfPredictError,
    TrainingError,
    VerificationError,
)
from .pipeline import (
    FIGURES,
    PipelineConfig,
    RunReport,
    emit_figures,
    run_pipeline,
)
from .preprocess import impute_missing, upsample_balance
from .reference_tables import verify_paper_tables
from .rfe import run_rfe
from .rng import derive_seed
from .schema import BUILTIN_SCHEMAS, get_schema
from .serialize import read_json, write_json_atomic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_TRAINING = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_code_on_error(message))

    def exit_code_on_error(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _int_list(text):
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from exc


def _str_list(text):
    return [part.strip() for part in text.split(",") if part.strip() != ""]


def build_parser():
    parser = _Parser(
        prog="efpredict",
        description=(
            "Ordinal ejection-fraction classification pipeline: synthetic "
            "cohorts, preprocessing, five classifiers, cross-validation, "
            "feature elimination, and published-table verification."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    generate = commands.add_parser(
        "generate", help="draw a synthetic cohort and write it with its truth"
    )
    generate.add_argument("--config", help="cohort config JSON file")
    generate.add_argument(
        "--schema", choices=sorted(BUILTIN_SCHEMAS), default="step1"
    )
    generate.add_argument("--n", type=int, default=None, help="patient count")
    generate.add_argument("--seed", type=int, default=None)
    generate.add_argument(
        "--missing-rate", type=float, default=None,
        help="share of feature cells blanked at random",
    )
    generate.add_argument("--out", default="cohort", help="output directory")

    run = commands.add_parser(
        "run", help="execute the full pipeline and write the run report"
    )
    run.add_argument("--config", help="pipeline config JSON file")
    run.add_argument("--dataset", help="dataset file (overrides config)")
    run.add_argument("--schema", help="schema name or file (overrides config)")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--k", type=int, default=None, help="fold count")
    run.add_argument(
        "--models", type=_str_list, default=None,
        help="comma-separated model names",
    )
    run.add_argument(
        "--rfe-sizes", type=_int_list, default=None,
        help="comma-separated descending subset sizes",
    )
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument("--n-jobs", type=int, default=None)

    rfe = commands.add_parser(
        "rfe", help="run the feature-elimination study alone"
    )
    rfe.add_argument("--dataset", required=True)
    rfe.add_argument("--schema", default="step1")
    rfe.add_argument("--sizes", type=_int_list, required=True)
    rfe.add_argument("--k", type=int, default=10)
    rfe.add_argument("--seed", type=int, default=0)
    rfe.add_argument("--n-trees", type=int, default=200)
    rfe.add_argument("--out", default="rfe_out")

    verify = commands.add_parser(
        "verify-paper",
        help="recompute the published metric tables and diff every cell",
    )
    verify.add_argument("--tolerance-pp", type=float, default=1.0)

    figures = commands.add_parser(
        "emit-figures", help="write figure data tables from a run report"
    )
    figures.add_argument("--report", required=True)
    figures.add_argument("--out", required=True)
    figures.add_argument(
        "--figures", type=_str_list, default=None,
        help=f"subset of {', '.join(FIGURES)}",
    )
    return parser


def _cmd_generate(args):
    overrides = {}
    if args.n is not None:
        overrides["n_patients"] = args.n
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.missing_rate is not None:
        overrides["missing_rate"] = args.missing_rate
    if args.config:
        config = CohortConfig.load(args.config)
        if overrides:
            config = CohortConfig.from_dict({**config.to_dict(), **overrides})
    else:
        overrides.setdefault("n_patients", 300)
        overrides.setdefault("seed", 0)
        config = default_config(schema_name=args.schema, **overrides)
    dataset, truth = generate_cohort(config)
    os.makedirs(args.out, exist_ok=True)
    data_path = os.path.join(args.out, "cohort.csv")
    truth_path = os.path.join(args.out, "cohort_truth.json")
    config_path = os.path.join(args.out, "cohort_config.json")
    save_dataset(dataset, data_path)
    truth.save(truth_path)
    write_json_atomic(config_path, config.to_dict())
    counts = truth.class_counts
    print(f"cohort: {dataset.n_rows} patients, schema {config.schema_name}")
    print(f"class counts: {list(counts)}")
    print(f"wrote {data_path}, {truth_path}, {config_path}")
    return EXIT_OK


def _cmd_run(args):
    settings = read_json(args.config) if args.config else {}
    if not isinstance(settings, dict):
        raise ConfigError("pipeline config must be a JSON object")
    flags = {
        "dataset_path": args.dataset,
        "schema": args.schema,
        "seed": args.seed,
        "k": args.k,
        "models": args.models,
        "rfe_sizes": args.rfe_sizes,
        "out_dir": args.out,
        "n_jobs": args.n_jobs,
    }
    for key, value in flags.items():
        if value is not None:
            settings[key] = value
    config = PipelineConfig.from_dict(settings)
    report = run_pipeline(config)
    os.makedirs(config.out_dir, exist_ok=True)
    report_path = os.path.join(config.out_dir, "report.json")
    report.save(report_path)
    for line in report.summary_lines():
        print(line)
    print(f"report: {report_path}")
    return EXIT_OK


def _cmd_rfe(args):
    schema = get_schema(args.schema)
    dataset = load_dataset(args.dataset, schema)
    imputed, _ = impute_missing(dataset)
    balanced = upsample_balance(imputed, derive_seed(args.seed, "balance"))
    result = run_rfe(
        balanced,
        args.sizes,
        k=args.k,
        seed=derive_seed(args.seed, "rfe"),
        forest_params={"n_trees": args.n_trees},
    )
    os.makedirs(args.out, exist_ok=True)
    curve_path = os.path.join(args.out, "rmse_curve.csv")
    result_path = os.path.join(args.out, "rfe.json")
    result.save_curve(curve_path)
    write_json_atomic(result_path, result.to_dict())
    for size, value in result.curve:
        print(f"size {size:3d}: cv rmse {value:.6f}")
    print(
        f"selected {result.selected_size} features: "
        f"{list(result.selected_features)}"
    )
    print(f"wrote {curve_path}, {result_path}")
    return EXIT_OK


def _cmd_verify(args):
    report = verify_paper_tables(tolerance_pp=args.tolerance_pp)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_emit_figures(args):
    report = RunReport.load(args.report)
    os.makedirs(args.out, exist_ok=True)
    written = emit_figures(report, args.out, figures=args.figures)
    for path in written:
        print(f"wrote {path}")
    if not written:
        print("no figure data available in this report")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "rfe": _cmd_rfe,
    "verify-paper": _cmd_verify,
    "emit-figures": _cmd_emit_figures,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        _print_error(exc)
        return EXIT_USAGE
    except DataError as exc:
        _print_error(exc)
        return EXIT_DATA
    except TrainingError as exc:
        _print_error(exc)
        return EXIT_TRAINING
    except VerificationError as exc:
        _print_error(exc)
        return EXIT_VERIFY
    except OSError as exc:
        _print_error(exc)
        return EXIT_DATA
    except EfPredictError as exc:
        _print_error(exc)
        return EXIT_USAGE


def _print_error(exc):
    stage = getattr(exc, "stage", None)
    where = f" [stage {stage}]" if stage else ""
    print(f"efpredict: error{where}: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
