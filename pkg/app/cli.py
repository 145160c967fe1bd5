"""
Command-line interface: ``python -m app <command> ...``.

Exit codes: 0 success, 1 usage, IO or analysis error, 2 a verification
verdict failed (an expectation, a capillary verdict or the index accounting).
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import TypeAdapter

from app.core.config import settings
from app.core.errors import AnalysisError
from app.schema.capillary import CapillaryReport, Verdict
from app.schema.trace import CurvatureTrace, Family, TraceConfig
from app.services.analysis import TOLERANCES, AnalysisService
from app.services.catalog import CatalogService
from app.services.report import ReportService

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_VERDICT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _params(pairs: Sequence[str]) -> dict:
    params = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {pair!r}")
        try:
            params[key] = float(value)
        except ValueError:
            params[key] = value
    return params


def _starts(text: str) -> list[tuple[float, float]]:
    try:
        return [tuple(float(x) for x in item.split(",", 1)) for item in text.split(";") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"starts must look like 'u,v;u,v', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    common.add_argument("--grid", type=int, help=f"samples per axis (default {settings.GRID})")
    common.add_argument("--fd-step", type=float, help="force finite differences with this step")
    for name in TOLERANCES:
        common.add_argument(f"--tol-{name}", type=float, metavar="TOL", dest=f"tol_{name.replace('-', '_')}")
    common.add_argument("-o", "--output", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="spacelike-cmc", description="Spacelike CMC surfaces in Lorentz-Minkowski space.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    catalog = commands.add_parser("catalog", help="list or build catalog surfaces", parents=[common])
    catalog.add_argument("action", choices=("list", "build"))
    catalog.add_argument("name", nargs="?")
    catalog.add_argument("--param", action="append", metavar="KEY=VALUE", help="builder parameter override")

    for name, text in (
        ("analyze", "run every check and evaluate the expected values"),
        ("umbilics", "locate umbilic points"),
        ("index", "rotation indices and Poincare-Hopf accounting"),
        ("capillary", "contact angles along the supported edges"),
    ):
        sub = commands.add_parser(name, help=text, parents=[common])
        sub.add_argument("spec", help="surface spec file or catalog name")
        if name == "analyze":
            sub.add_argument("--timings", action="store_true", help="include stage timings in the report")

    trace = commands.add_parser("trace", help="integrate lines of curvature", parents=[common])
    trace.add_argument("spec", help="surface spec file or catalog name")
    trace.add_argument("--family", choices=("First", "Second", "both"), default="both")
    trace.add_argument("--starts", type=_starts, help="start points 'u,v;u,v;...'")
    trace.add_argument("--count", type=int, default=10, help="number of default starts per family")
    trace.add_argument("--step", type=float)
    trace.add_argument("--max-steps", type=int)
    trace.add_argument("--svg", help="export the traces as SVG")
    trace.add_argument("--csv", help="export the traces as CSV")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else settings.LOG_LEVEL
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _surface(args):
    spec = AnalysisService.resolve(args.spec)
    tolerances = {name: getattr(args, f"tol_{name.replace('-', '_')}") for name in TOLERANCES}
    return AnalysisService.prepare(spec, grid=args.grid, fd_step=args.fd_step, tolerances=tolerances)


def _catalog(args) -> int:
    if args.action == "list":
        _emit("\n".join(CatalogService.names()), args.output)
        return EXIT_OK
    if not args.name:
        raise argparse.ArgumentTypeError("catalog build needs a surface name")
    entry = CatalogService.build(args.name, **_params(args.param))
    _emit(CatalogService.summary(entry).model_dump_json(indent=2), args.output)
    return EXIT_OK


def _analyze(args) -> int:
    entry, config = _surface(args)
    report = AnalysisService.analyze(entry, config)
    if args.output:
        ReportService.write_report(report, args.output, args.format, timings=args.timings)
    else:
        _emit(ReportService.to_json(report, timings=args.timings), None)
    return EXIT_OK if report.passed else EXIT_VERDICT


def _umbilics(args) -> int:
    entry, config = _surface(args)
    _emit(AnalysisService.umbilics(entry, config).model_dump_json(indent=2), args.output)
    return EXIT_OK


def _index(args) -> int:
    entry, config = _surface(args)
    report = AnalysisService.index(entry, config)
    if args.output:
        ReportService.write_report(report, args.output, args.format)
    else:
        _emit(ReportService.to_json(report), None)
    if report.everywhere_umbilic or report.consistent:
        return EXIT_OK
    return EXIT_VERDICT


def _capillary(args) -> int:
    entry, config = _surface(args)
    reports = AnalysisService.capillary(entry, config)
    _emit(TypeAdapter(list[CapillaryReport]).dump_json(reports, indent=2).decode(), args.output)
    return EXIT_OK if all(r.verdict == Verdict.CAPILLARY for r in reports) else EXIT_VERDICT


def _trace(args) -> int:
    entry, config = _surface(args)
    families = [Family.FIRST, Family.SECOND] if args.family == "both" else [Family(args.family)]
    trace_config = TraceConfig(
        step=args.step or config.TRACE_STEP,
        max_steps=args.max_steps or config.TRACE_MAX_STEPS,
        umbilic_stop_tol=config.UMBILIC_STOP_TOL,
    )
    traces = AnalysisService.trace(entry, families, args.starts, trace_config, count=args.count)
    if args.svg:
        ReportService.export_traces(traces, args.svg, "svg")
    if args.csv:
        ReportService.export_traces(traces, args.csv, "csv")
    _emit(TypeAdapter(list[CurvatureTrace]).dump_json(traces, indent=2).decode(), args.output)
    return EXIT_OK


COMMANDS = {
    "catalog": _catalog,
    "analyze": _analyze,
    "umbilics": _umbilics,
    "index": _index,
    "capillary": _capillary,
    "trace": _trace,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
    except (AnalysisError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(cli_main())
