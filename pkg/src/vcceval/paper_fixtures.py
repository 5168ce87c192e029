"""Published VCC 2020 objective-evaluation tables shipped as data, and the
checks that can be run on published numbers alone (top-5 highlighting).

The tables live in ``vcceval/data`` in the same CSV layout the report emitter
writes; the red-cell (top-5) sets are in ``vcc2020_highlights.json``.
"""
import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List

from .campaign import SystemMetrics, direction_of, rank_and_highlight
from .report import read_metrics_csv

TASKS = ("task1", "task2")
EXPECTED_ROWS = {"task1": 31, "task2": 28}


@dataclass
class PublishedTable:
    task_id: str
    rows: List[SystemMetrics]
    columns: List[str]
    text: str

    def column(self, name) -> Dict[str, float]:
        return {r.team_id: r.value(name) for r in self.rows if r.value(name) is not None}


@dataclass(frozen=True)
class ColumnCheck:
    column: str
    status: str  # "pass", "fail" or "unmarked" (no cells highlighted in print)
    published: tuple
    computed: tuple

    @property
    def ok(self):
        return self.status != "fail"


def _data(name):
    return resources.files("vcceval").joinpath("data", name).read_text(encoding="utf-8")


def load_published_table(task_id) -> PublishedTable:
    if task_id not in TASKS:
        raise KeyError(task_id)
    text = _data(f"vcc2020_{task_id}.csv")
    rows, columns = read_metrics_csv(text, task_id)
    if len(rows) != EXPECTED_ROWS[task_id]:
        raise AssertionError(f"{task_id}: expected {EXPECTED_ROWS[task_id]} rows, found {len(rows)}")
    return PublishedTable(task_id, rows, columns, text)


def published_highlights(task_id) -> Dict[str, List[str]]:
    return json.loads(_data("vcc2020_highlights.json"))[task_id]


def verify_highlights(table: PublishedTable, k=5, directions=None) -> Dict[str, ColumnCheck]:
    """Recompute the top-k set of every column and compare with the printed marks.

    Columns printed without any highlighted cell are reported as ``unmarked``.
    """
    marks = published_highlights(table.task_id)
    out = {}
    for col in table.columns:
        computed = tuple(sorted(rank_and_highlight(table.column(col), direction_of(col, directions), k)))
        published = tuple(marks.get(col, ()))
        if not published:
            status = "unmarked"
        else:
            status = "pass" if computed == published else "fail"
        out[col] = ColumnCheck(col, status, published, computed)
    return out
