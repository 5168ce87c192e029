"""Report emission in CSV, JSON and Markdown.

Output is a pure function of the report: fixed column order, rows sorted by
team id, no timestamps, ``.`` as decimal separator. CSV and Markdown print
percentages, cosine and MOS with two decimals and t-DCF with five; JSON keeps
full precision.
"""
import csv
import io
import json
import math
import os
from dataclasses import asdict

from .campaign import CampaignReport, SystemMetrics, metric_columns
from .errors import IoFailure
from .stats import format_p

FORMATS = ("csv", "json", "markdown")

HEADINGS = {
    "asv_eer_pct": "ASV EER (%)",
    "pfa_tar_pct": "ASV Pfa (%)",
    "pmiss_src_pct": "ASV Pmiss (%)",
    "cosine": "Cosine",
    "cm_eer_pct": "CM EER (%)",
    "asr_wer_pct": "ASR WER (%)",
    "min_tdcf_norm": "min t-DCF",
}


def heading(column):
    if column.startswith("mosnet_"):
        return f"MOSNet ({column[len('mosnet_'):]})"
    return HEADINGS.get(column, column)


def fmt_metric(column, value):
    if value is None:
        return ""
    digits = 5 if column == "min_tdcf_norm" else 2
    return _fmt(value, digits)


def _fmt(value, digits):
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{digits}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def metrics_csv(rows, columns=None, with_language=False):
    columns = columns or metric_columns(rows)
    header = ["team_id"] + (["language"] if with_language else []) + list(columns)
    out = []
    for r in rows:
        cells = [r.team_id] + ([r.language or ""] if with_language else [])
        out.append(cells + [fmt_metric(c, r.value(c)) for c in columns])
    return _csv_text(header, out)


def read_metrics_csv(path_or_text, task_id=""):
    """Inverse of :func:`metrics_csv` (language column optional)."""
    if os.path.exists(str(path_or_text)):
        with open(path_or_text, encoding="utf-8", newline="") as fh:
            text = fh.read()
    else:
        text = path_or_text
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        row = SystemMetrics(rec.pop("team_id"), task_id, language=rec.pop("language", None) or None)
        for col, cell in rec.items():
            if cell != "":
                row.set(col, float(cell))
        rows.append(row)
    return rows, [c for c in reader.fieldnames if c not in ("team_id", "language")]


def _correlation_records(report):
    out = []
    for c in report.correlations:
        out.append([
            c.group, c.task_id, c.rating, c.language or "", c.metric,
            _fmt(c.r, 2), _fmt(c.p, 3), format_p(c.p) if c.p is not None else "",
            str(c.n), "1" if c.best else "0", c.error,
        ])
    return out


def _regression_records(report):
    out = []
    for row in report.regressions:
        res = row.result
        if res is None:
            out.append([row.group, row.task_id, row.rating] + [""] * 8 + [str(len(row.teams)), row.error])
            continue
        terms = [("intercept", res.intercept, res.intercept_p_value)] if res.intercept is not None else []
        terms += list(zip(row.predictors, res.coefficients, res.coef_p_values))
        for name, coef, p in terms:
            out.append([
                row.group, row.task_id, row.rating, name, _fmt(float(coef), 3), _fmt(float(p), 3),
                format_p(float(p), "exact"), _fmt(res.r_squared, 2), _fmt(res.adjusted_r_squared, 2),
                _fmt(res.f_statistic, 3), format_p(res.significance_f, "exact"), str(res.n), "",
            ])
    return out


CORRELATION_HEADER = ["group", "task_id", "rating", "language", "metric", "r", "p", "p_display", "n", "best", "error"]
REGRESSION_HEADER = [
    "group", "task_id", "rating", "term", "coefficient", "p", "p_display",
    "r_squared", "adjusted_r_squared", "f_statistic", "significance_f", "n", "error",
]
DIAGNOSTIC_HEADER = ["task_id", "team_id", "metric", "cause", "detail"]


def render_csv(report):
    files = {}
    for task_id, rows in report.tasks.items():
        files[f"metrics_{task_id}.csv"] = metrics_csv(rows)
    for task_id, rows in report.language_rows.items():
        files[f"metrics_{task_id}_by_language.csv"] = metrics_csv(rows, with_language=True)
    hl = [[t, c, team] for t, cols in report.highlights.items() for c, teams in cols.items() for team in teams]
    files["highlights.csv"] = _csv_text(["task_id", "metric", "team_id"], hl)
    files["correlations.csv"] = _csv_text(CORRELATION_HEADER, _correlation_records(report))
    files["regressions.csv"] = _csv_text(REGRESSION_HEADER, _regression_records(report))
    files["diagnostics.csv"] = _csv_text(
        DIAGNOSTIC_HEADER, [[d.task_id, d.team_id, d.metric, d.cause, d.detail] for d in report.diagnostics]
    )
    files["provenance.json"] = json.dumps(report.provenance, indent=2, sort_keys=True) + "\n"
    return files


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _row_dict(r):
    d = {"team_id": r.team_id, "task_id": r.task_id}
    if r.language:
        d["language"] = r.language
    for c in metric_columns([r]):
        d[c] = r.value(c)
    return d


def report_to_dict(report):
    regs = []
    for row in report.regressions:
        entry = {"group": row.group, "task_id": row.task_id, "rating": row.rating,
                 "predictors": row.predictors, "teams": row.teams, "error": row.error}
        res = row.result
        if res is not None:
            entry.update(
                intercept=res.intercept, intercept_p_value=res.intercept_p_value,
                coefficients=res.coefficients, coef_p_values=res.coef_p_values, std_errors=res.std_errors,
                r_squared=res.r_squared, adjusted_r_squared=res.adjusted_r_squared,
                f_statistic=res.f_statistic, significance_f=res.significance_f, n=res.n, df_resid=res.df_resid,
            )
        regs.append(entry)
    doc = {
        "tasks": {t: [_row_dict(r) for r in rows] for t, rows in report.tasks.items()},
        "language_rows": {t: [_row_dict(r) for r in rows] for t, rows in report.language_rows.items()},
        "highlights": report.highlights,
        "highlight_k": report.highlight_k,
        "correlations": [
            {"group": c.group, "task_id": c.task_id, "rating": c.rating, "language": c.language,
             "metric": c.metric, "r": c.r, "p": c.p, "n": c.n, "best": c.best, "error": c.error}
            for c in report.correlations
        ],
        "regressions": regs,
        "diagnostics": [asdict(d) for d in report.diagnostics],
        "provenance": report.provenance,
    }
    return _jsonable(doc)


def render_json(report):
    return {"report.json": json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"}


def _md_table(header, rows):
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def markdown_metric_table(rows, highlights=None, with_language=False):
    columns = metric_columns(rows)
    highlights = highlights or {}
    header = ["Team ID"] + (["Language"] if with_language else []) + [heading(c) for c in columns]
    body = []
    for r in rows:
        cells = [r.team_id] + ([r.language or ""] if with_language else [])
        for c in columns:
            text = fmt_metric(c, r.value(c))
            if text and r.team_id in highlights.get(c, ()):
                text = f"**{text}**"
            cells.append(text)
        body.append(cells)
    return _md_table(header, body)


def render_markdown(report):
    out = ["# Objective evaluation report\n"]
    for task_id, rows in report.tasks.items():
        out.append(f"\n## {task_id}\n\nBold cells: top-{report.highlight_k} systems per metric (ties included).\n\n")
        out.append(markdown_metric_table(rows, report.highlights.get(task_id)))
    for task_id, rows in report.language_rows.items():
        out.append(f"\n## {task_id} by target language\n\n")
        out.append(markdown_metric_table(rows, with_language=True))
    if report.correlations:
        out.append("\n## Pearson correlation with subjective ratings\n\nBold: largest |r| per row.\n")
        keys = []
        for c in report.correlations:
            k = (c.group, c.task_id, c.language, c.rating)
            if k not in keys:
                keys.append(k)
        metrics = []
        for c in report.correlations:
            if c.metric not in metrics:
                metrics.append(c.metric)
        body = []
        for k in keys:
            cells = {c.metric: c for c in report.correlations if (c.group, c.task_id, c.language, c.rating) == k}
            label = f"{k[0]} {k[1]} {k[3]}" + (f" ({k[2]})" if k[2] else "")
            row = [label]
            for m in metrics:
                c = cells.get(m)
                if c is None or c.r is None:
                    row.append(c.error if c else "")
                    continue
                r = _fmt(c.r, 2)
                row.append(f"{'**' + r + '**' if c.best else r} ({format_p(c.p)})")
            body.append(row)
        out.append("\n" + _md_table(["Subjective score"] + [heading(m) for m in metrics], body))
    if report.regressions:
        out.append("\n## Multiple linear regression\n\n")
        body = []
        preds = report.regressions[0].predictors
        for row in report.regressions:
            res = row.result
            label = f"{row.group} {row.task_id} {row.rating}"
            if res is None:
                body.append([label] + [row.error] + [""] * (len(preds) + 3))
                continue
            cells = [f"{_fmt(res.intercept, 3)} ({format_p(res.intercept_p_value, 'exact')})"]
            cells += [f"{_fmt(float(b), 3)} ({format_p(float(p), 'exact')})"
                      for b, p in zip(res.coefficients, res.coef_p_values)]
            cells += [_fmt(res.r_squared, 2), _fmt(res.adjusted_r_squared, 2), format_p(res.significance_f, "exact")]
            body.append([label] + cells)
        header = (["Subjective score", "Intercept"] + [heading(p) for p in preds]
                  + ["Multiple R-squared", "Adjusted R-squared", "Significance F"])
        out.append(_md_table(header, body))
    out.append("\n## Diagnostics\n\n")
    diag_rows = [[d.task_id, d.team_id, d.metric, d.cause, d.detail.replace("|", "/")] for d in report.diagnostics]
    out.append(_md_table(["Task", "Team", "Metric", "Cause", "Detail"], diag_rows))
    return {"report.md": "".join(out)}


RENDERERS = {"csv": render_csv, "json": render_json, "markdown": render_markdown, "md": render_markdown}


def emit_report(report: CampaignReport, fmt, out_dir):
    """Write the report files for ``fmt`` into ``out_dir``; returns their paths."""
    if fmt not in RENDERERS:
        raise ValueError(f"unknown format {fmt!r}; choose from csv, json, markdown")
    files = RENDERERS[fmt](report)
    paths = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        for name in sorted(files):
            path = os.path.join(out_dir, name)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(files[name])
            paths.append(path)
    except OSError as exc:
        raise IoFailure(f"cannot write report to {out_dir}: {exc}") from exc
    return paths
