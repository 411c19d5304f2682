"""Command-line entry point: eval, synth, bench, analyze, serve.

Exit codes: 0 success, 1 valid run with a negative result (target unsolved),
2 usage or input error. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys

from . import analysis as analysis_mod
from . import bench as bench_mod
from . import corpus as corpus_mod
from . import grid, lang, synth
from .grid import Canvas

DATA_DIR_ENV = "PATTERNBUILDER_DATA_DIR"

_INPUT_ERRORS = (
    grid.GridError,
    lang.LangError,
    synth.SynthError,
    corpus_mod.CorpusError,
    analysis_mod.AnalysisError,
    OSError,
    ValueError,
)


def _load_primitives(args) -> dict[str, Canvas] | None:
    if getattr(args, "geometry", None):
        return corpus_mod.load_geometry(args.geometry)
    return None


def _base_library(args) -> synth.Library:
    return synth.Library.initial(_load_primitives(args))


def _library_with_file(args) -> synth.Library:
    lib = _base_library(args)
    if getattr(args, "library", None):
        with open(args.library, "r", encoding="utf-8") as fh:
            blocks = corpus_mod.parse_blocks(fh.read(), source=args.library)
        for name, canvas in blocks:
            lib = lib.add(name, canvas, "built-in")
    return lib


def cmd_eval(args) -> int:
    lib = _library_with_file(args)
    expr = lang.parse(args.program)
    canvas = lang.evaluate(expr, lib)
    m = lang.measures(expr)
    sys.stdout.write(canvas.to_text())
    print(f"node_count={m.node_count} leaf_count={m.leaf_count} depth={m.depth}")
    return 0


def cmd_synth(args) -> int:
    with open(args.target, "r", encoding="utf-8") as fh:
        target = Canvas.from_text(fh.read())
    config = synth.SearchConfig(args.variant, max_nodes=args.max_nodes, max_size=args.max_size)
    result = synth.solve(target, _base_library(args), config)
    print(f"solved: {'true' if result.solved else 'false'}")
    if result.solved:
        print(f"program: {lang.print_expr(result.program)}")
        print(f"program_length: {result.program_length}")
    print(f"nodes_expanded: {result.stats.nodes_expanded}")
    print(f"distinct_canvases: {result.stats.distinct_canvases}")
    print(f"strata_completed: {result.stats.strata_completed}")
    return 0 if result.solved else 1


def _load_corpus(args) -> corpus_mod.PatternCorpus:
    if getattr(args, "corpus", None):
        return corpus_mod.load_corpus(args.corpus)
    return corpus_mod.default_corpus()


def cmd_bench(args) -> int:
    cor = _load_corpus(args)
    variants = [v for v in (s.strip() for s in args.variants.split(",")) if v]
    configs = [
        synth.SearchConfig(v, max_nodes=args.max_nodes, max_size=args.max_size)
        for v in variants
    ]
    report = bench_mod.run_bench(cor, configs, lib=_base_library(args))
    csv_path = args.out if args.out.endswith(".csv") else args.out + ".csv"
    sidecar = bench_mod.write_report(report, csv_path)
    print(csv_path)
    print(sidecar)
    if not args.no_figures:
        from . import figures

        prefix = csv_path[: -len(".csv")]
        for path in figures.bench_figures(report, prefix):
            print(path)
    return 0


def cmd_analyze(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.logs, "*.jsonl")))
    if not paths:
        raise analysis_mod.AnalysisError(f"no .jsonl session logs under {args.logs}")
    logs = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            logs.append(fh.read())
    report_rows = bench_mod.read_report_csv(args.report)
    rows = analysis_mod.analyze_sessions(logs, report_rows, model_variant=args.model_variant)
    csv_path = args.out if args.out.endswith(".csv") else args.out + ".csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(analysis_mod.analysis_to_csv(rows))
    print(csv_path)
    for name, stats in analysis_mod.analysis_correlations(rows).items():
        if "error" in stats:
            print(f"{name}: undefined ({stats['error']})", file=sys.stderr)
        elif "slope" in stats:
            print(f"{name}: r={stats['r']:.4f} slope={stats['slope']:.4f} intercept={stats['intercept']:.4f}")
        else:
            print(f"{name}: r={stats['r']:.4f}")
    if not args.no_figures:
        from . import figures

        for path in figures.analysis_figures(rows, csv_path[: -len(".csv")]):
            print(path)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    from .session import SessionEngine

    cor = _load_corpus(args)
    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV) or "sessions"
    engine = SessionEngine(corpus=cor, data_dir=data_dir, primitives=_load_primitives(args))
    app = create_app(engine, static_dir=args.ui)

    @app.on_event("shutdown")
    def _flush() -> None:
        engine.close()

    print(f"serving corpus {cor.source_path} ({len(cor)} patterns) on {args.host}:{args.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patternbuilder")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a program and print its canvas")
    p.add_argument("program")
    p.add_argument("--library", help="block file of named canvases usable as helpers")
    p.add_argument("--geometry", help="replacement primitive geometry block file")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("synth", help="synthesize a program for a target canvas file")
    p.add_argument("target", help="path to a 10-line canvas file")
    p.add_argument("--variant", default="Short")
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--max-size", type=int, default=15)
    p.add_argument("--geometry")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("bench", help="run the benchmark over a corpus")
    p.add_argument("--corpus", help="corpus file (default: shipped 14-pattern corpus)")
    p.add_argument("--variants", default="Baseline,Short,Library,ShortLibrary")
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--max-size", type=int, default=15)
    p.add_argument("--out", required=True, help="output CSV path or prefix")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--geometry")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("analyze", help="aggregate session logs against a bench report")
    p.add_argument("--logs", required=True, help="directory of session .jsonl logs")
    p.add_argument("--report", required=True, help="bench report CSV")
    p.add_argument("--out", required=True, help="output CSV path or prefix")
    p.add_argument("--model-variant", default="ShortLibrary")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("serve", help="run the task service")
    p.add_argument("--corpus")
    p.add_argument("--data-dir", help=f"session log directory (or ${DATA_DIR_ENV})")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--geometry")
    p.add_argument("--ui", help="static directory to serve at / (the web client build)")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
