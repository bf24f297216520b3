"""Deterministic report rendering (tsv, json, md) and re-parsing.

Ratio cells render as ``count/denominator (pp.pp%)``. Percentages keep two
decimals; the residual beyond the second decimal rounds the last digit up
from 0.008, otherwise it is dropped. A zero denominator renders as
``0/0 (—)``. All output is byte-deterministic for equal inputs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Sequence

from .drift import (
    APPROACHES,
    Counterpart,
    DriftRecord,
    StatsReport,
    Tally,
)
from .errors import DataError
from .indexer import Hit, IndexingResult
from .textprep import STRATA

FORMATS = ("tsv", "json", "md")

HISTORICAL = "historical"
CONTEMPORARY = "contemporary"

_ROUND_UP_FROM = 8  # third-decimal digit that bumps the second decimal


def format_percent(count: int, total: int) -> str:
    if total == 0:
        return "—"
    thousandths = (100_000 * count) // total
    hundredths, residue = divmod(thousandths, 10)
    if residue >= _ROUND_UP_FROM:
        hundredths += 1
    return f"{hundredths // 100}.{hundredths % 100:02d}%"


def ratio_cell(count: int, total: int) -> str:
    return f"{count}/{total} ({format_percent(count, total)})"


def format_score(score: Fraction) -> str:
    return str(score)  # exact rational: "4", "7/2"


def parse_score(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# statistics report
# ---------------------------------------------------------------------------

_OVERVIEW_ROWS = (
    ("documents", "Total Documents"),
    ("total_hits", "Total Historical Indexing Terms"),
    ("exclusive", "Terms Exclusive To Historical Output"),
    ("drift_total", "Terms Demonstrating Temporal Drift"),
    ("drift_post_exclusion", "Terms Demonstrating Temporal Drift (After Exclusions)"),
    ("present_in_new", "Exclusive Terms Still Present In Contemporary Vocabulary"),
    ("facet_exclusions", "Terms Present Only In Full Contemporary Vocabulary"),
    ("data_errors", "Terms Excluded As Data Errors"),
)

_RATIO_METRICS = {"exclusive", "drift_total", "drift_post_exclusion"}


def _metric_cell(tally: Tally, metric: str) -> tuple[int, int | None]:
    """(count, denominator) for a metric; denominator None = plain count."""
    if metric == "drift_post_exclusion":
        return tally.drift_total, tally.total_hits - tally.data_errors - tally.facet_exclusions
    value = getattr(tally, metric)
    if metric in _RATIO_METRICS:
        return value, tally.total_hits
    return value, None


def _render_metric(tally: Tally, metric: str) -> str:
    count, denom = _metric_cell(tally, metric)
    if denom is None:
        return str(count)
    return ratio_cell(count, denom)


_APPROACH_ROWS = (
    ("documents", "Number Of Documents"),
    ("total_hits", "Total Historical Indexing Terms"),
    ("exclusive", "Terms Exclusive To Historical Output"),
    ("drift_total", "Terms Demonstrating Temporal Drift"),
)

_CELL_ROWS = (
    ("documents", "Number Of Documents"),
    ("total_hits", "Total Historical Indexing Terms"),
    ("exclusive", "Terms Exclusive To Historical Output"),
    ("drift_authorized", "Authorized Terms Demonstrating Drift"),
    ("drift_variant", "Variant Terms Demonstrating Drift"),
    ("drift_total", "Total Terms Demonstrating Drift"),
)

_STRATUM_ROWS = (
    ("documents", "Number Of Documents"),
    ("total_hits", "Total Historical Indexing Terms"),
    ("exclusive", "Terms Exclusive To Historical Output"),
    ("drift_total", "Terms Demonstrating Temporal Drift"),
)

_FACET_NOTE = (
    "No full contemporary vocabulary was provided; facet exclusions cannot be detected."
)


def _cell_columns(report: StatsReport) -> list[tuple[str, Tally]]:
    columns = []
    for approach in APPROACHES:
        for stratum in STRATA:
            columns.append((f"{stratum} / {approach}", report.by_cell[(approach, stratum)]))
    return columns


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("| " + " | ".join("---" for _ in header) + " |")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def render_stats_md(report: StatsReport) -> str:
    lines = ["# Temporal Drift Statistics", ""]
    lines.append(f"Historical vocabulary: {report.old_version_tag}")
    lines.append(f"Contemporary vocabulary: {report.new_version_tag}")
    if not report.facet_filter_available:
        lines.append("")
        lines.append(f"Note: {_FACET_NOTE}")
    lines += ["", "## Overview", ""]
    lines += _md_table(
        ("Metric", "Value"),
        [(label, _render_metric(report.overall, metric)) for metric, label in _OVERVIEW_ROWS],
    )

    lines += ["", "## By Indexing Approach", ""]
    header = ("Metric", "Full Text", "NER", "Both")
    rows = []
    for metric, label in _APPROACH_ROWS:
        row = [label]
        for approach in APPROACHES:
            row.append(_render_metric(report.by_approach[approach], metric))
        row.append(_render_metric(report.overall, metric))
        rows.append(row)
    lines += _md_table(header, rows)

    lines += ["", "## By Entry Length", ""]
    header = ("Metric", "Short", "Medium", "Long", "All")
    rows = []
    for metric, label in _STRATUM_ROWS:
        row = [label]
        for stratum in STRATA:
            row.append(_render_metric(report.by_stratum[stratum], metric))
        row.append(_render_metric(report.overall, metric))
        rows.append(row)
    lines += _md_table(header, rows)

    lines += ["", "## Authorized And Variant Drift", ""]
    total_drift = report.overall.drift_total
    lines += _md_table(
        ("Metric", "Value"),
        [
            ("Authorized Term Results", ratio_cell(report.overall.drift_authorized, total_drift)),
            ("Variant Term Results", ratio_cell(report.overall.drift_variant, total_drift)),
        ],
    )

    lines += ["", "## Full Results By Sample", ""]
    columns = _cell_columns(report)
    header = ["Metric"] + [name for name, _ in columns] + ["Total"]
    rows = []
    for metric, label in _CELL_ROWS:
        row = [label]
        for _name, tally in columns:
            row.append(_render_metric(tally, metric))
        row.append(_render_metric(report.overall, metric))
        rows.append(row)
    lines += _md_table(header, rows)
    lines.append("")
    return "\n".join(lines)


def _stats_rows(report: StatsReport) -> list[tuple[str, str, str, str, str, str]]:
    """(section, slice, metric, count, denominator, cell) rows, fixed order."""
    rows: list[tuple[str, str, str, str, str, str]] = []

    def emit(section: str, slice_name: str, tally: Tally, metric: str) -> None:
        count, denom = _metric_cell(tally, metric)
        rows.append(
            (
                section,
                slice_name,
                metric,
                str(count),
                "" if denom is None else str(denom),
                _render_metric(tally, metric),
            )
        )

    for metric, _label in _OVERVIEW_ROWS:
        emit("overview", "all", report.overall, metric)
    for approach in APPROACHES:
        for metric, _label in _APPROACH_ROWS:
            emit("approach", approach, report.by_approach[approach], metric)
    for stratum in STRATA:
        for metric, _label in _STRATUM_ROWS:
            emit("stratum", stratum, report.by_stratum[stratum], metric)
    total_drift = report.overall.drift_total
    rows.append(
        (
            "drift_split",
            "all",
            "drift_authorized",
            str(report.overall.drift_authorized),
            str(total_drift),
            ratio_cell(report.overall.drift_authorized, total_drift),
        )
    )
    rows.append(
        (
            "drift_split",
            "all",
            "drift_variant",
            str(report.overall.drift_variant),
            str(total_drift),
            ratio_cell(report.overall.drift_variant, total_drift),
        )
    )
    for approach in APPROACHES:
        for stratum in STRATA:
            for metric, _label in _CELL_ROWS:
                emit(
                    "cell",
                    f"{approach}/{stratum}",
                    report.by_cell[(approach, stratum)],
                    metric,
                )
    return rows


def render_stats_tsv(report: StatsReport) -> str:
    lines = ["section\tslice\tmetric\tcount\tdenominator\tcell"]
    lines += ["\t".join(row) for row in _stats_rows(report)]
    if not report.facet_filter_available:
        lines.append("\t".join(("note", "all", "facet_filter", "", "", _FACET_NOTE)))
    return "\n".join(lines) + "\n"


def _tally_json(tally: Tally) -> dict:
    return {
        "documents": tally.documents,
        "total_hits": tally.total_hits,
        "exclusive": tally.exclusive,
        "present_in_new": tally.present_in_new,
        "facet_exclusions": tally.facet_exclusions,
        "data_errors": tally.data_errors,
        "drift_total": tally.drift_total,
        "drift_authorized": tally.drift_authorized,
        "drift_variant": tally.drift_variant,
        "exclusive_cell": ratio_cell(tally.exclusive, tally.total_hits),
        "drift_cell": ratio_cell(tally.drift_total, tally.total_hits),
    }


def render_stats_json(report: StatsReport) -> str:
    payload = {
        "historical_vocabulary": report.old_version_tag,
        "contemporary_vocabulary": report.new_version_tag,
        "facet_filter_available": report.facet_filter_available,
        "overall": _tally_json(report.overall),
        "drift_split": {
            "authorized": ratio_cell(report.overall.drift_authorized, report.overall.drift_total),
            "variant": ratio_cell(report.overall.drift_variant, report.overall.drift_total),
        },
        "drift_post_exclusion_cell": _render_metric(report.overall, "drift_post_exclusion"),
        "by_approach": {a: _tally_json(t) for a, t in sorted(report.by_approach.items())},
        "by_stratum": {s: _tally_json(t) for s, t in sorted(report.by_stratum.items())},
        "by_cell": {
            f"{a}/{s}": _tally_json(t) for (a, s), t in sorted(report.by_cell.items())
        },
    }
    if not report.facet_filter_available:
        payload["notes"] = [_FACET_NOTE]
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def render_stats_report(report: StatsReport, fmt: str) -> str:
    if fmt == "md":
        return render_stats_md(report)
    if fmt == "tsv":
        return render_stats_tsv(report)
    if fmt == "json":
        return render_stats_json(report)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# drift report
# ---------------------------------------------------------------------------

_DRIFT_COLUMNS = (
    "doc_id",
    "approach",
    "stratum",
    "term",
    "label_kind",
    "authorized_form",
    "concept_id",
    "classification",
    "counterpart_id",
    "counterpart_label",
    "counterpart_status",
    "counterpart_distance",
)


def _drift_row(record: DriftRecord) -> tuple[str, ...]:
    cp = record.counterpart
    return (
        record.doc_id,
        record.approach,
        record.stratum,
        record.term,
        record.label_kind,
        record.authorized_form,
        record.concept_id,
        record.classification,
        cp.concept_id if cp else "",
        cp.label if cp else "",
        cp.status if cp else "",
        str(cp.distance) if cp else "",
    )


def render_drift_report(records: Sequence[DriftRecord], fmt: str) -> str:
    if fmt == "tsv":
        lines = ["\t".join(_DRIFT_COLUMNS)]
        lines += ["\t".join(_drift_row(r)) for r in records]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [dict(zip(_DRIFT_COLUMNS, _drift_row(r))) for r in records]
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    if fmt == "md":
        header = (
            "Term",
            "Kind",
            "Authorized Form",
            "Document",
            "Approach",
            "Stratum",
            "Classification",
            "Counterpart",
            "Status",
            "Distance",
        )
        rows = []
        for record in records:
            cp = record.counterpart
            rows.append(
                (
                    record.term,
                    record.label_kind,
                    record.authorized_form,
                    record.doc_id,
                    record.approach,
                    record.stratum,
                    record.classification,
                    cp.label if cp else "",
                    cp.status if cp else "",
                    str(cp.distance) if cp else "",
                )
            )
        return "\n".join(["# Drift Records", ""] + _md_table(header, rows)) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_drift_report(text: str, fmt: str) -> list[DriftRecord]:
    rows: list[dict[str, str]]
    if fmt == "tsv":
        lines = text.splitlines()
        if not lines or tuple(lines[0].split("\t")) != _DRIFT_COLUMNS:
            raise DataError("drift file: unexpected header")
        rows = [dict(zip(_DRIFT_COLUMNS, line.split("\t"))) for line in lines[1:] if line]
    elif fmt == "json":
        rows = json.loads(text)
    else:
        raise DataError(f"cannot parse drift report format {fmt!r}")
    records = []
    for row in rows:
        counterpart = None
        if row["counterpart_status"]:
            counterpart = Counterpart(
                row["counterpart_id"],
                row["counterpart_label"],
                row["counterpart_status"],
                int(row["counterpart_distance"]),
            )
        records.append(
            DriftRecord(
                row["doc_id"],
                row["approach"],
                row["stratum"],
                row["term"],
                row["label_kind"],
                row["authorized_form"],
                row["concept_id"],
                row["classification"],
                counterpart,
            )
        )
    return records


# ---------------------------------------------------------------------------
# hits report
# ---------------------------------------------------------------------------

_HITS_COLUMNS = (
    "role",
    "vocabulary",
    "approach",
    "doc_id",
    "stratum",
    "rank",
    "concept_id",
    "pref_label",
    "matched_label",
    "label_kind",
    "match_kind",
    "score",
)


def hits_rows(
    results: Sequence[IndexingResult],
    role: str,
    doc_strata: Mapping[str, str],
) -> list[tuple[str, ...]]:
    rows = []
    for result in results:
        if not result.hits:
            # rank 0 placeholder keeps empty results in the file so that a
            # re-parsed hits report still covers every (document, approach)
            rows.append(
                (
                    role,
                    result.version_tag,
                    result.approach,
                    result.doc_id,
                    doc_strata[result.doc_id],
                    "0",
                    "", "", "", "", "", "",
                )
            )
            continue
        for rank, hit in enumerate(result.hits, start=1):
            rows.append(
                (
                    role,
                    result.version_tag,
                    result.approach,
                    result.doc_id,
                    doc_strata[result.doc_id],
                    str(rank),
                    hit.concept_id,
                    hit.pref_label,
                    hit.matched_label,
                    hit.label_kind,
                    hit.match_kind,
                    format_score(hit.score),
                )
            )
    return rows


def render_hits_report(
    old_results: Sequence[IndexingResult],
    new_results: Sequence[IndexingResult],
    doc_strata: Mapping[str, str],
    fmt: str,
) -> str:
    rows = hits_rows(old_results, HISTORICAL, doc_strata)
    rows += hits_rows(new_results, CONTEMPORARY, doc_strata)
    if fmt == "tsv":
        lines = ["\t".join(_HITS_COLUMNS)]
        lines += ["\t".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [dict(zip(_HITS_COLUMNS, row)) for row in rows]
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    if fmt == "md":
        return "\n".join(["# Indexing Results", ""] + _md_table(_HITS_COLUMNS, rows)) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_hits_report(
    text: str, fmt: str
) -> tuple[list[IndexingResult], list[IndexingResult], dict[str, str]]:
    """Rebuild (historical results, contemporary results, doc strata)."""
    if fmt == "tsv":
        lines = text.splitlines()
        if not lines or tuple(lines[0].split("\t")) != _HITS_COLUMNS:
            raise DataError("hits file: unexpected header")
        rows = [dict(zip(_HITS_COLUMNS, line.split("\t"))) for line in lines[1:] if line]
    elif fmt == "json":
        rows = json.loads(text)
    else:
        raise DataError(f"cannot parse hits report format {fmt!r}")

    doc_strata: dict[str, str] = {}
    grouped: dict[tuple[str, str, str, str], list[Hit]] = {}
    order: list[tuple[str, str, str, str]] = []
    for row in rows:
        key = (row["role"], row["vocabulary"], row["approach"], row["doc_id"])
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        if row["rank"] != "0":
            grouped[key].append(
                Hit(
                    row["concept_id"],
                    row["pref_label"],
                    row["matched_label"],
                    row["label_kind"],
                    row["match_kind"],
                    parse_score(row["score"]),
                )
            )
        doc_strata[row["doc_id"]] = row["stratum"]

    old_results: list[IndexingResult] = []
    new_results: list[IndexingResult] = []
    for role, vocab_tag, approach, doc_id in order:
        result = IndexingResult(
            doc_id, vocab_tag, approach, tuple(grouped[(role, vocab_tag, approach, doc_id)])
        )
        (old_results if role == HISTORICAL else new_results).append(result)
    return old_results, new_results, doc_strata
