"""Campaign orchestration: per-team objective metrics for every task, top-k
highlighting, correlation / regression tables against subjective ratings and
per-language breakdowns.

Speaker convention: the target speaker of a converted utterance is the part
of its ``utt_id`` before the first ``_`` (``TEF1_T10_E30001`` -> ``TEF1``).
Genuine target trials use their ``model_id``. The convention drives both the
per-speaker reference averaging for cosine scores and the language split.
"""
import hashlib
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .detection import asv_assessment, cm_eer
from .embedding import average_embeddings, cosine_similarity, lda_project
from .errors import EmptySet, EmptyTable, EvalError, FileMissing, NoTeams, OutOfRange, UnknownLanguageCode
from .score_io import (
    LANGUAGES,
    METRIC_INPUTS,
    parse_embeddings,
    parse_matrix,
    parse_mos_predictions,
    parse_transcripts,
    parse_trial_scores,
    scores_of,
)
from .stats import ols_regress, pearson
from .tandem import CostModel, asv_operating_point, min_tdcf, tandem_constants
from .wer import wer

HIGHER_BETTER = "higher_better"
LOWER_BETTER = "lower_better"

BASE_COLUMNS = ("asv_eer_pct", "pfa_tar_pct", "pmiss_src_pct", "cosine", "cm_eer_pct")
TAIL_COLUMNS = ("asr_wer_pct", "min_tdcf_norm")
CORRELATION_BASE = ("asv_eer_pct", "pfa_tar_pct", "cosine", "cm_eer_pct")
DEFAULT_REGRESSION_PREDICTORS = ("mosnet_asvspoof19", "asr_wer_pct", "asv_eer_pct", "cm_eer_pct")

DEFAULT_DIRECTIONS = {
    "asv_eer_pct": HIGHER_BETTER,
    "pfa_tar_pct": HIGHER_BETTER,
    "pmiss_src_pct": LOWER_BETTER,
    "cosine": HIGHER_BETTER,
    "cm_eer_pct": HIGHER_BETTER,
    "asr_wer_pct": LOWER_BETTER,
    "min_tdcf_norm": HIGHER_BETTER,
}


def direction_of(column, overrides=None):
    if overrides and column in overrides:
        return overrides[column]
    if column.startswith("mosnet_"):
        return HIGHER_BETTER
    return DEFAULT_DIRECTIONS[column]


def speaker_of(utt_id):
    return utt_id.split("_", 1)[0]


@dataclass
class SystemMetrics:
    team_id: str
    task_id: str
    asv_eer_pct: Optional[float] = None
    pfa_tar_pct: Optional[float] = None
    pmiss_src_pct: Optional[float] = None
    cosine: Optional[float] = None
    cm_eer_pct: Optional[float] = None
    mosnet_scores: Dict[str, float] = field(default_factory=dict)
    asr_wer_pct: Optional[float] = None
    min_tdcf_norm: Optional[float] = None
    language: Optional[str] = None

    def value(self, column) -> Optional[float]:
        if column.startswith("mosnet_"):
            return self.mosnet_scores.get(column[len("mosnet_"):])
        return getattr(self, column)

    def set(self, column, value):
        if column.startswith("mosnet_"):
            self.mosnet_scores[column[len("mosnet_"):]] = value
        else:
            setattr(self, column, value)

    def populated(self):
        return {c: v for c in metric_columns([self]) if (v := self.value(c)) is not None}


def metric_columns(rows) -> List[str]:
    tags = sorted({t for r in rows for t in r.mosnet_scores})
    return list(BASE_COLUMNS) + [f"mosnet_{t}" for t in tags] + list(TAIL_COLUMNS)


@dataclass(frozen=True)
class Diagnostic:
    task_id: str
    team_id: str
    metric: str
    cause: str
    detail: str = ""


@dataclass
class CorrelationCell:
    rating: str
    metric: str
    r: Optional[float]
    p: Optional[float]
    n: int
    best: bool = False
    error: str = ""
    group: str = ""
    task_id: str = ""
    language: Optional[str] = None


@dataclass
class RegressionRow:
    group: str
    task_id: str
    rating: str
    predictors: List[str]
    result: object = None
    error: str = ""
    teams: List[str] = field(default_factory=list)


@dataclass
class CampaignReport:
    tasks: Dict[str, List[SystemMetrics]] = field(default_factory=dict)
    language_rows: Dict[str, List[SystemMetrics]] = field(default_factory=dict)
    highlights: Dict[str, Dict[str, List[str]]] = field(default_factory=dict)
    correlations: List[CorrelationCell] = field(default_factory=list)
    regressions: List[RegressionRow] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    highlight_k: int = 5
    directions: Dict[str, str] = field(default_factory=dict)


# --- ranking ---------------------------------------------------------------

def rank_and_highlight(values, direction=HIGHER_BETTER, k=5):
    """Teams whose value ties or beats the k-th best one.

    Ties at the boundary are all kept, so the result can be larger than ``k``.
    """
    if not values:
        raise EmptyTable("nothing to rank")
    if direction not in (HIGHER_BETTER, LOWER_BETTER):
        raise ValueError(f"unknown direction {direction!r}")
    ordered = sorted(values.values(), reverse=direction == HIGHER_BETTER)
    cut = ordered[min(k, len(ordered)) - 1]
    if direction == HIGHER_BETTER:
        return {t for t, v in values.items() if v >= cut}
    return {t for t, v in values.items() if v <= cut}


# --- correlation / regression tables --------------------------------------

def correlation_table(objective, subjective):
    """Pearson r of every (rating, metric) pair over the teams both share.

    ``objective`` maps metric -> {team: value}; ``subjective`` maps rating ->
    {team: value}. Within each rating the metric with the largest |r| is
    flagged ``best``. Cells with fewer than three shared teams carry an error
    string instead of a result.
    """
    cells = []
    for rating in subjective:
        row = []
        for metric in objective:
            teams = sorted(set(objective[metric]) & set(subjective[rating]))
            x = [objective[metric][t] for t in teams]
            y = [subjective[rating][t] for t in teams]
            try:
                res = pearson(x, y)
                row.append(CorrelationCell(rating, metric, res.r, res.p_two_sided, res.n))
            except EvalError as exc:
                row.append(CorrelationCell(rating, metric, None, None, len(teams), error=type(exc).__name__))
        scored = [c for c in row if c.r is not None]
        if scored:
            top = max(abs(c.r) for c in scored)
            for c in scored:
                c.best = abs(c.r) == top
        cells.extend(row)
    return cells


def _objective_map(rows, columns):
    out = {}
    for col in columns:
        vals = {r.team_id: r.value(col) for r in rows if r.value(col) is not None}
        out[col] = vals
    return out


def language_breakdown(metrics, subjective, columns=None):
    """Correlation cells recomputed per target-language subset.

    ``metrics`` are SystemMetrics rows annotated with ``language``;
    ``subjective`` maps rating -> language -> {team: value}.
    """
    known = set(LANGUAGES.values())
    for r in metrics:
        if r.language not in known:
            raise UnknownLanguageCode(r.language)
    for per_lang in subjective.values():
        for lang in per_lang:
            if lang not in known:
                raise UnknownLanguageCode(lang)
    columns = columns or correlation_columns(metrics)
    cells = []
    for lang in sorted({r.language for r in metrics}):
        subset = [r for r in metrics if r.language == lang]
        subj = {rating: per_lang[lang] for rating, per_lang in subjective.items() if lang in per_lang}
        for cell in correlation_table(_objective_map(subset, columns), subj):
            cell.language = lang
            cells.append(cell)
    return cells


def correlation_columns(rows):
    tags = sorted({t for r in rows for t in r.mosnet_scores})
    return list(CORRELATION_BASE) + [f"mosnet_{t}" for t in tags] + ["asr_wer_pct"]


def regression_table(rows, targets, predictors=DEFAULT_REGRESSION_PREDICTORS):
    """One OLS fit per rating; ``targets`` maps rating -> {team: value}."""
    out = {}
    for rating, values in targets.items():
        teams = sorted(
            r.team_id for r in rows
            if r.team_id in values and all(r.value(p) is not None for p in predictors)
        )
        by_team = {r.team_id: r for r in rows}
        X = np.array([[by_team[t].value(p) for p in predictors] for t in teams], dtype=np.float64)
        y = np.array([values[t] for t in teams], dtype=np.float64)
        try:
            out[rating] = (ols_regress(X.reshape(len(teams), len(predictors)), y), "", teams)
        except EvalError as exc:
            out[rating] = (None, type(exc).__name__, teams)
    return out


# --- metric computation ----------------------------------------------------

class _Loader:
    """Parses each input file once and remembers failures."""

    def __init__(self, normalize_transcripts=True):
        self.cache = {}
        self.normalize = normalize_transcripts
        self.digests = {}

    def load(self, kind, path):
        key = (kind, path)
        if key not in self.cache:
            try:
                if not os.path.isfile(path):
                    raise FileMissing(f"no such file: {path}")
                with open(path, "rb") as fh:
                    self.digests[path] = hashlib.sha256(fh.read()).hexdigest()
                if kind == "trials":
                    value = parse_trial_scores(path, default_label="target")
                elif kind == "embeddings":
                    value = parse_embeddings(path)
                elif kind == "matrix":
                    value = parse_matrix(path)
                elif kind == "transcripts":
                    value = parse_transcripts(path, normalize=self.normalize)
                elif kind == "mos":
                    value = parse_mos_predictions(path)
                else:  # pragma: no cover
                    raise ValueError(kind)
                self.cache[key] = (value, None)
            except (EvalError, OSError, UnicodeDecodeError) as exc:
                self.cache[key] = (None, exc)
        value, exc = self.cache[key]
        if exc is not None:
            raise exc
        return value


def _keep(speakers, key):
    return speakers is None or key in speakers


def _trial_scores(trials, speakers, by_model, labels=None):
    picked = [t for t in trials if _keep(speakers, t.model_id if by_model else speaker_of(t.utt_id))]
    if labels is not None:
        picked = [t for t in picked if t.label in labels]
    return scores_of(picked)


def _system_cosine_by_speaker(converted, reference, matrix):
    """Mean cosine of each converted embedding against its speaker's averaged reference."""
    if matrix is not None:
        converted = [lda_project(e, matrix) for e in converted]
        reference = [lda_project(e, matrix) for e in reference]
    groups = {}
    for e in reference:
        groups.setdefault(speaker_of(e.utt_id), []).append(e)
    refs = {}
    sims = []
    for e in converted:
        spk = speaker_of(e.utt_id)
        if spk not in groups:
            raise EmptySet(f"no reference embeddings for speaker {spk!r}")
        if spk not in refs:
            refs[spk] = average_embeddings(groups[spk])
        sims.append(cosine_similarity(e, refs[spk]))
    if not sims:
        raise EmptySet("no converted embeddings")
    return float(np.mean(sims))


def compute_team_metrics(roles, loader, cost_model, task_id, team_id, speakers=None, language=None):
    """Evaluate every metric whose inputs are present.

    Returns ``(SystemMetrics, diagnostics)``. ``speakers`` restricts converted
    material to those target speakers (language breakdown); natural
    calibration data and bona fide CM trials are always used in full.
    """
    row = SystemMetrics(team_id, task_id, language=language)
    diags = []

    def attempt(metric, fn):
        try:
            fn()
        except (EvalError, OSError) as exc:
            diags.append(Diagnostic(task_id, team_id if language is None else f"{team_id}/{language}",
                                    metric, type(exc).__name__, str(exc)))

    def trials(role):
        return loader.load("trials", roles[role])

    def do_asv():
        natural = trials("natural")
        m = asv_assessment(
            scores_of(natural, "target"),
            scores_of(natural, "nontarget"),
            _trial_scores(trials("asv_converted_target"), speakers, by_model=False),
            _trial_scores(trials("genuine"), speakers, by_model=True),
            _trial_scores(trials("asv_converted_source"), speakers, by_model=False),
        )
        row.asv_eer_pct, row.pfa_tar_pct, row.pmiss_src_pct = m.as_tuple()

    def do_cm():
        row.cm_eer_pct = 100.0 * cm_eer(
            scores_of(trials("cm_bona")), _trial_scores(trials("cm_spoof"), speakers, by_model=False)
        ).eer

    def do_cosine():
        conv = [e for e in loader.load("embeddings", roles["embeddings"]) if _keep(speakers, speaker_of(e.utt_id))]
        ref = loader.load("embeddings", roles["reference_embeddings"])
        matrix = loader.load("matrix", roles["lda_matrix"]) if "lda_matrix" in roles else None
        row.cosine = _system_cosine_by_speaker(conv, ref, matrix)

    def do_wer():
        pairs = [p for p in loader.load("transcripts", roles["transcripts"]) if _keep(speakers, speaker_of(p.utt_id))]
        row.asr_wer_pct = wer(pairs)

    def do_mos(tag, path):
        preds = loader.load("mos", path)
        vals = [v for u, v in preds.items() if _keep(speakers, speaker_of(u))]
        if not vals:
            raise EmptySet("no MOS predictions")
        mean = float(np.mean(vals))
        if not 1.0 <= mean <= 5.0:
            raise OutOfRange(f"mean predicted MOS {mean} outside [1, 5]")
        row.mosnet_scores[tag] = mean

    def do_tdcf():
        natural = trials("natural")
        op = asv_operating_point(
            scores_of(natural, "target"),
            scores_of(natural, "nontarget"),
            _trial_scores(trials("asv_converted_target"), speakers, by_model=False),
        )
        res = min_tdcf(
            scores_of(trials("cm_bona")),
            _trial_scores(trials("cm_spoof"), speakers, by_model=False),
            tandem_constants(op, cost_model),
        )
        row.min_tdcf_norm = res.min_tdcf_norm

    enabled = [m for m, need in METRIC_INPUTS.items() if all(r in roles for r in need)]
    runners = {"asv": do_asv, "cm": do_cm, "cosine": do_cosine, "wer": do_wer, "tdcf": do_tdcf}
    for metric in ("asv", "cm", "cosine", "wer", "tdcf"):
        if metric in enabled:
            attempt(metric, runners[metric])
    for tag, path in roles.get("mos", {}).items():
        attempt(f"mosnet_{tag}", lambda tag=tag, path=path: do_mos(tag, path))
    if not enabled and not roles.get("mos"):
        diags.append(Diagnostic(task_id, team_id, "*", "NoInputs", "no metric has a complete input set"))
    return row, diags


def _team_speakers(roles, loader):
    """Target speakers appearing in a team's converted material."""
    speakers = set()
    for role in ("asv_converted_target", "asv_converted_source", "cm_spoof"):
        if role in roles:
            try:
                speakers |= {speaker_of(t.utt_id) for t in loader.load("trials", roles[role])}
            except (EvalError, OSError):
                pass
    if "embeddings" in roles:
        try:
            speakers |= {speaker_of(e.utt_id) for e in loader.load("embeddings", roles["embeddings"])}
        except (EvalError, OSError):
            pass
    return speakers


def evaluate_campaign(manifest) -> CampaignReport:
    if not manifest.team_ids:
        raise NoTeams("manifest lists no teams")
    cost_model = CostModel.from_dict(manifest.cost_model) if manifest.cost_model else CostModel()
    loader = _Loader(manifest.normalize_transcripts)
    report = CampaignReport(highlight_k=manifest.highlight_k, directions=dict(manifest.directions))

    for task in manifest.tasks:
        rows, lang_rows = [], []
        for team in sorted(task.inputs):
            roles = task.inputs[team]
            row, diags = compute_team_metrics(roles, loader, cost_model, task.task_id, team)
            rows.append(row)
            report.diagnostics.extend(diags)
            if manifest.language_of_target:
                by_lang = {}
                for spk in sorted(_team_speakers(roles, loader)):
                    lang = manifest.language_of(team, spk)
                    if lang is not None:
                        by_lang.setdefault(lang, set()).add(spk)
                for lang in sorted(by_lang):
                    lrow, ldiags = compute_team_metrics(
                        roles, loader, cost_model, task.task_id, team, speakers=by_lang[lang], language=lang
                    )
                    lang_rows.append(lrow)
                    report.diagnostics.extend(ldiags)
        report.tasks[task.task_id] = rows
        if lang_rows:
            report.language_rows[task.task_id] = lang_rows
        report.highlights[task.task_id] = _highlights(rows, manifest.highlight_k, manifest.directions)

    _subjective_analyses(report, manifest)
    report.provenance = {
        "tool": "vcceval",
        "version": __version__,
        "cost_model": cost_model.to_dict(),
        "inputs": {
            os.path.relpath(p, manifest.base_dir).replace(os.sep, "/"): d
            for p, d in sorted(loader.digests.items())
        },
    }
    report.diagnostics.sort(key=lambda d: (d.task_id, d.team_id, d.metric))
    return report


def _highlights(rows, k, directions):
    out = {}
    for col in metric_columns(rows):
        values = {r.team_id: r.value(col) for r in rows if r.value(col) is not None}
        if values:
            out[col] = sorted(rank_and_highlight(values, direction_of(col, directions), k))
    return out


def _subjective_analyses(report, manifest):
    predictors = tuple(manifest.regression_predictors or DEFAULT_REGRESSION_PREDICTORS)
    for group, per_task in sorted((manifest.subjective_scores or {}).items()):
        for task_id, ratings in sorted(per_task.items()):
            rows = report.tasks.get(task_id, [])
            cols = correlation_columns(rows)
            for cell in correlation_table(_objective_map(rows, cols), dict(sorted(ratings.items()))):
                cell.group, cell.task_id = group, task_id
                report.correlations.append(cell)
                _note_cell(report, cell)
            fits = regression_table(rows, dict(sorted(ratings.items())), predictors)
            for rating, (res, err, teams) in fits.items():
                report.regressions.append(RegressionRow(group, task_id, rating, list(predictors), res, err, teams))
                if err:
                    report.diagnostics.append(
                        Diagnostic(task_id, "*", f"regression:{group}:{rating}", err, f"{len(teams)} complete teams")
                    )
    for group, per_task in sorted((manifest.subjective_scores_by_language or {}).items()):
        for task_id, ratings in sorted(per_task.items()):
            rows = report.language_rows.get(task_id, [])
            if not rows:
                report.diagnostics.append(Diagnostic(task_id, "*", f"language:{group}", "NoLanguageRows"))
                continue
            for cell in language_breakdown(rows, dict(sorted(ratings.items()))):
                cell.group, cell.task_id = group, task_id
                report.correlations.append(cell)
                _note_cell(report, cell)


def _note_cell(report, cell):
    if cell.error:
        where = f"correlation:{cell.group}:{cell.rating}:{cell.metric}"
        if cell.language:
            where += f":{cell.language}"
        report.diagnostics.append(Diagnostic(cell.task_id, "*", where, cell.error, f"{cell.n} shared teams"))
