"""Command-line driver: `ozc build` and `ozc check`.

Exit codes: 0 success, 1 diagnostics containing errors, 2 usage or I/O
failure. Human-readable diagnostics go to stderr; with
--json-diagnostics they go to stdout as one JSON object per line.
"""

from __future__ import annotations

import argparse
import importlib.util
import sys
from pathlib import Path

from .codegen import EmitOptions, transpile
from .diagnostics import Diagnostic, has_errors

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ozc", description="Object-Z dialect to Python compiler")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="compile .oz sources to Python modules")
    build.add_argument("inputs", nargs="+", metavar="INPUT", help="input .oz files")
    build.add_argument("-o", "--out", required=True, metavar="DIR", help="output directory")
    build.add_argument("--emit-runtime", action="store_true", help="copy the runtime module next to the output")
    build.add_argument("--json-diagnostics", action="store_true", help="print diagnostics as JSON lines on stdout")
    build.add_argument("--no-frame-checks", action="store_true", help="omit frame postconditions on non-delta variables")

    check = sub.add_parser("check", help="run all diagnostics without writing files")
    check.add_argument("inputs", nargs="+", metavar="INPUT", help="input .oz files")
    check.add_argument("--json-diagnostics", action="store_true", help="print diagnostics as JSON lines on stdout")
    check.add_argument("--no-frame-checks", action="store_true", help="accepted for parity with build; no effect on checking")
    return parser


def _report(diags: list[Diagnostic], as_json: bool) -> None:
    for diag in diags:
        if as_json:
            print(diag.to_json())
        else:
            print(diag.render(), file=sys.stderr)


def _process_inputs(
    inputs: list[str], options: EmitOptions
) -> tuple[int, list[tuple[Path, list[Diagnostic], str | None]]]:
    """Compile every input independently; one failing file does not stop the rest."""
    worst = EXIT_OK
    results: list[tuple[Path, list[Diagnostic], str | None]] = []
    for raw in inputs:
        path = Path(raw)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"ozc: cannot read '{path}': {exc.strerror or exc}", file=sys.stderr)
            worst = max(worst, EXIT_USAGE)
            continue
        diags, source = transpile(text, path.name, options)
        if has_errors(diags):
            worst = max(worst, EXIT_DIAGNOSTICS)
        results.append((path, diags, source))
    return worst, results


def _locate_runtime() -> Path | None:
    spec = importlib.util.find_spec("ozruntime")
    if spec is None or spec.origin is None:
        return None
    return Path(spec.origin)


def run_build(args: argparse.Namespace) -> int:
    options = EmitOptions(frame_checks=not args.no_frame_checks)
    status, results = _process_inputs(args.inputs, options)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"ozc: cannot create output directory '{out_dir}': {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE
    for path, diags, source in results:
        _report(diags, args.json_diagnostics)
        if source is None:
            continue
        target = out_dir / (path.stem + ".py")
        target.write_text(source, encoding="utf-8")
    if args.emit_runtime:
        runtime = _locate_runtime()
        if runtime is None:
            print("ozc: --emit-runtime: no 'ozruntime' module is installed", file=sys.stderr)
            return EXIT_USAGE
        (out_dir / "ozruntime.py").write_bytes(runtime.read_bytes())
    return status


def run_check(args: argparse.Namespace) -> int:
    options = EmitOptions(frame_checks=not args.no_frame_checks)
    status, results = _process_inputs(args.inputs, options)
    for _, diags, _ in results:
        _report(diags, args.json_diagnostics)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = _build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; normalize other SystemExit codes.
        return int(exc.code or 0)
    if args.command == "build":
        return run_build(args)
    return run_check(args)


if __name__ == "__main__":
    sys.exit(main())
