"""Behavioral metrics from session event logs, joined with model metrics.

Consumes the line-delimited event logs written by the session engine and a
bench report; produces one row per pattern with mean steps, solution time,
helper-creation counts, and helper-use rates, plus the model's nodes
expanded and program length for correlation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from . import lang
from .session import SessionEvent
from .stats import DegenerateVarianceError, StatsError, pearson, regress_loglinear

ANALYSIS_COLUMNS = (
    "pattern_id",
    "n_sessions",
    "mean_steps",
    "mean_time_s",
    "mean_helper_use_rate",
    "mean_helpers_created",
    "nodes_expanded",
    "program_length",
)


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class BehavioralRecord:
    session_id: str
    pattern_id: str
    trial_index: int
    steps: int
    solution_time: float
    accuracy: bool
    helpers_created: int
    helper_use_rate: float


def parse_log_text(text: str) -> list[SessionEvent]:
    return [
        SessionEvent.from_line(line, lineno)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]


def _step_uses_helper(program: str) -> bool:
    return lang.references_helper(lang.parse(program))


def records_from_events(events: list[SessionEvent]) -> list[BehavioralRecord]:
    """Extract one record per completed trial from one session's events."""
    records: list[BehavioralRecord] = []
    session_id = events[0].session_id if events else ""
    trial_id: str | None = None
    trial_index = 0
    trial_start = 0.0
    step_programs: list[str] = []
    helpers_created = 0
    for event in events:
        if event.kind == "trial_started":
            trial_id = event.payload.get("trial")
            trial_index = int(event.payload.get("index", 0))
            trial_start = event.ts
            step_programs = []
            helpers_created = 0
        elif event.kind == "step_added":
            step_programs.append(str(event.payload.get("program", "")))
        elif event.kind == "helper_saved":
            helpers_created += 1
        elif event.kind == "submitted":
            if trial_id is None:
                raise AnalysisError("submitted event outside a trial")
            steps = len(step_programs)
            helper_steps = sum(1 for p in step_programs if _step_uses_helper(p))
            records.append(
                BehavioralRecord(
                    session_id=session_id,
                    pattern_id=str(trial_id),
                    trial_index=trial_index,
                    steps=steps,
                    solution_time=event.ts - trial_start,
                    accuracy=bool(event.payload.get("accuracy")),
                    helpers_created=helpers_created,
                    helper_use_rate=helper_steps / steps if steps else 0.0,
                )
            )
            trial_id = None
    return records


@dataclass(frozen=True)
class AnalysisRow:
    pattern_id: str
    n_sessions: int
    mean_steps: float
    mean_time_s: float
    mean_helper_use_rate: float
    mean_helpers_created: float
    nodes_expanded: int | None
    program_length: int | None


def analyze_sessions(logs: list[str], report_rows: list[dict], model_variant: str = "ShortLibrary") -> list[AnalysisRow]:
    """Aggregate behavioral records per pattern and join with model metrics.

    ``logs`` are raw event-log texts (one per session); ``report_rows`` come
    from a bench report (read_report_csv dicts or equivalent).
    """
    records: list[BehavioralRecord] = []
    for text in logs:
        records.extend(records_from_events(parse_log_text(text)))

    by_pattern: dict[str, list[BehavioralRecord]] = {}
    for rec in records:
        by_pattern.setdefault(rec.pattern_id, []).append(rec)

    model = {
        row["pattern_id"]: row
        for row in report_rows
        if row["variant"] == model_variant
    }

    # Pattern order follows the report; unknown patterns go last, sorted.
    ordered = [pid for pid in dict.fromkeys(r["pattern_id"] for r in report_rows) if pid in by_pattern]
    ordered += sorted(pid for pid in by_pattern if pid not in set(ordered))

    rows: list[AnalysisRow] = []
    for pid in ordered:
        group = sorted(by_pattern[pid], key=lambda r: (r.session_id, r.trial_index))
        n = len(group)
        mrow = model.get(pid)
        rows.append(
            AnalysisRow(
                pattern_id=pid,
                n_sessions=n,
                mean_steps=sum(r.steps for r in group) / n,
                mean_time_s=sum(r.solution_time for r in group) / n,
                mean_helper_use_rate=sum(r.helper_use_rate for r in group) / n,
                mean_helpers_created=sum(r.helpers_created for r in group) / n,
                nodes_expanded=mrow["nodes_expanded"] if mrow else None,
                program_length=mrow["program_length"] if mrow else None,
            )
        )
    return rows


def analysis_to_csv(rows: list[AnalysisRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ANALYSIS_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.pattern_id,
                row.n_sessions,
                repr(row.mean_steps),
                repr(row.mean_time_s),
                repr(row.mean_helper_use_rate),
                repr(row.mean_helpers_created),
                row.nodes_expanded if row.nodes_expanded is not None else "",
                row.program_length if row.program_length is not None else "",
            ]
        )
    return buf.getvalue()


def analysis_correlations(rows: list[AnalysisRow]) -> dict:
    """Model-vs-behavior correlations over patterns with model metrics present."""
    usable = [r for r in rows if r.nodes_expanded is not None]
    out: dict = {}
    nodes = [float(r.nodes_expanded) for r in usable]
    try:
        slope, intercept, r = regress_loglinear(nodes, [r.mean_time_s for r in usable])
        out["time_vs_log_nodes"] = {"slope": slope, "intercept": intercept, "r": r}
    except (StatsError, DegenerateVarianceError) as exc:
        out["time_vs_log_nodes"] = {"error": str(exc)}
    try:
        slope, intercept, r = regress_loglinear(nodes, [r.mean_steps for r in usable])
        out["steps_vs_log_nodes"] = {"slope": slope, "intercept": intercept, "r": r}
    except (StatsError, DegenerateVarianceError) as exc:
        out["steps_vs_log_nodes"] = {"error": str(exc)}
    lengths = [float(r.program_length) for r in usable if r.program_length is not None]
    rates = [r.mean_helper_use_rate for r in usable if r.program_length is not None]
    try:
        out["helper_use_vs_length"] = {"r": pearson(lengths, rates)}
    except (StatsError, DegenerateVarianceError) as exc:
        out["helper_use_vs_length"] = {"error": str(exc)}
    return out
