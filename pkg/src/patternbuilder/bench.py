"""Four-variant benchmark runner and its CSV + JSON sidecar report format."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from . import lang, synth
from .corpus import PatternCorpus
from .synth import Library, SearchConfig

CSV_COLUMNS = (
    "pattern_id",
    "variant",
    "solved",
    "program",
    "program_length",
    "nodes_expanded",
    "library_size_before",
    "wall_time_ms",
)


@dataclass(frozen=True)
class BenchRow:
    pattern_id: str
    variant: str
    solved: bool
    program: str
    program_length: int | None
    nodes_expanded: int
    library_size_before: int
    wall_time_ms: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    configs: tuple[SearchConfig, ...]
    corpus_digest: str
    corpus_source: str
    pattern_ids: tuple[str, ...]

    def rows_for(self, variant: str) -> list[BenchRow]:
        variant = synth.normalize_variant(variant)
        return [row for row in self.rows if row.variant == variant]

    def solved_ids(self, variant: str) -> set[str]:
        return {row.pattern_id for row in self.rows_for(variant) if row.solved}


def run_bench(corpus: PatternCorpus, configs: list[SearchConfig], lib: Library | None = None) -> BenchReport:
    """Run solve_sequence over the corpus for every config, one row per pattern."""
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    seen = set()
    for config in configs:
        if config.variant in seen:
            raise ValueError(f"duplicate variant in configs: {config.variant}")
        seen.add(config.variant)
    base = lib if lib is not None else Library.initial()
    targets = corpus.canvases()
    ids = corpus.ids()
    rows: list[BenchRow] = []
    for config in configs:
        results = synth.solve_sequence(targets, config, lib=base)
        lib_size = len(base)
        for pid, result in zip(ids, results):
            rows.append(
                BenchRow(
                    pattern_id=pid,
                    variant=config.variant,
                    solved=result.solved,
                    program=lang.print_expr(result.program) if result.solved else "",
                    program_length=result.program_length,
                    nodes_expanded=result.stats.nodes_expanded,
                    library_size_before=lib_size,
                    wall_time_ms=result.stats.wall_time * 1000.0,
                )
            )
            if config.library_learning and result.solved:
                lib_size += 1
    return BenchReport(
        rows=tuple(rows),
        configs=tuple(configs),
        corpus_digest=corpus.digest(),
        corpus_source=corpus.source_path,
        pattern_ids=tuple(ids),
    )


def report_to_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(
            [
                row.pattern_id,
                row.variant,
                "true" if row.solved else "false",
                row.program,
                row.program_length if row.program_length is not None else "",
                row.nodes_expanded,
                row.library_size_before,
                f"{row.wall_time_ms:.3f}",
            ]
        )
    return buf.getvalue()


def report_sidecar(report: BenchReport) -> dict:
    return {
        "corpus": {
            "source": report.corpus_source,
            "digest": report.corpus_digest,
            "patterns": list(report.pattern_ids),
        },
        "configs": {
            config.variant: {"max_nodes": config.max_nodes, "max_size": config.max_size}
            for config in report.configs
        },
        "columns": list(CSV_COLUMNS),
    }


def write_report(report: BenchReport, csv_path: str) -> str:
    """Write the CSV and its JSON sidecar (same basename); returns the sidecar path."""
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(report_to_csv(report))
    sidecar_path = csv_path.rsplit(".", 1)[0] + ".json" if "." in csv_path else csv_path + ".json"
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(report_sidecar(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar_path


def read_report_csv(path: str) -> list[dict]:
    """Read a bench CSV back into dicts with typed fields."""
    out: list[dict] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected bench CSV columns: {reader.fieldnames}")
        for rec in reader:
            out.append(
                {
                    "pattern_id": rec["pattern_id"],
                    "variant": rec["variant"],
                    "solved": rec["solved"] == "true",
                    "program": rec["program"],
                    "program_length": int(rec["program_length"]) if rec["program_length"] else None,
                    "nodes_expanded": int(rec["nodes_expanded"]),
                    "library_size_before": int(rec["library_size_before"]),
                    "wall_time_ms": float(rec["wall_time_ms"]),
                }
            )
    return out
