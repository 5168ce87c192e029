"""Readers and writers for score files, embeddings, transcripts, MOS predictions
and the campaign manifest.

All text formats are UTF-8, whitespace separated (``|`` for transcripts), and
ignore blank lines and lines starting with ``#``. Parse errors carry a 1-based
line number.
"""
import json
import math
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateTrial,
    EmptyInput,
    EmptyReference,
    MalformedLine,
    MalformedRecord,
    MissingField,
    NonFiniteComponent,
    NonFiniteScore,
    PathNotDeclared,
    UnknownLanguageCode,
    UnknownTeam,
)

LABELS = ("target", "nontarget", "spoof", "converted")
LANGUAGES = {"F": "Finnish", "G": "German", "M": "Mandarin"}

_PUNCT = re.compile(r'[.,;:!?"()]')


@dataclass(frozen=True)
class Trial:
    model_id: str
    utt_id: str
    label: str
    score: float
    score_text: str = field(default="", compare=False, repr=False)


@dataclass(frozen=True)
class Embedding:
    utt_id: str
    vector: np.ndarray = field(compare=False)
    text: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    @property
    def dim(self):
        return self.vector.shape[0]


@dataclass(frozen=True)
class TranscriptPair:
    utt_id: str
    reference: Tuple[str, ...]
    hypothesis: Tuple[str, ...]


def _records(path):
    """Yield (line_number, stripped_line) for every non-comment, non-blank line."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _finite(text):
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def parse_trial_scores(path, default_label=None) -> List[Trial]:
    """Read ``model_id utt_id label score`` lines (or ``model_id utt_id score``
    when ``default_label`` is given)."""
    if default_label is not None and default_label not in LABELS:
        raise ValueError(f"unknown label {default_label!r}")
    trials = []
    seen = set()
    for lineno, line in _records(path):
        parts = line.split()
        if len(parts) == 4:
            model_id, utt_id, label, score_text = parts
        elif len(parts) == 3 and default_label is not None:
            model_id, utt_id, score_text = parts
            label = default_label
        else:
            raise MalformedLine(f"expected 4 fields, got {len(parts)}", lineno)
        if label not in LABELS:
            raise MalformedLine(f"unknown label {label!r}", lineno)
        score = _finite(score_text)
        if score is None:
            raise NonFiniteScore(f"score {score_text!r} is not a finite number", lineno)
        key = (model_id, utt_id)
        if key in seen:
            raise DuplicateTrial(model_id, utt_id, lineno)
        seen.add(key)
        trials.append(Trial(model_id, utt_id, label, score, score_text))
    if not trials:
        raise EmptyInput(f"{path}: no trial records")
    return trials


def serialize_trials(trials) -> str:
    return "".join(
        f"{t.model_id} {t.utt_id} {t.label} {t.score_text or repr(t.score)}\n" for t in trials
    )


def scores_of(trials, labels=None) -> np.ndarray:
    if labels is not None:
        labels = {labels} if isinstance(labels, str) else set(labels)
        trials = [t for t in trials if t.label in labels]
    return np.fromiter((t.score for t in trials), dtype=np.float64)


def parse_embeddings(path) -> List[Embedding]:
    """Read ``utt_id v1 ... vd`` lines; every record must share one ``d``."""
    out = []
    dim = None
    for lineno, line in _records(path):
        parts = line.split()
        utt_id, comps = parts[0], parts[1:]
        if not comps:
            raise MalformedLine("embedding has no components", lineno)
        if dim is None:
            dim = len(comps)
        elif len(comps) != dim:
            raise DimensionMismatch(f"expected {dim} components, got {len(comps)}", lineno)
        values = [_finite(c) for c in comps]
        if any(v is None for v in values):
            raise NonFiniteComponent("non-finite embedding component", lineno)
        out.append(Embedding(utt_id, np.array(values, dtype=np.float64), tuple(comps)))
    if not out:
        raise EmptyInput(f"{path}: no embedding records")
    return out


def serialize_embeddings(embeddings) -> str:
    lines = []
    for e in embeddings:
        comps = e.text or tuple(repr(float(v)) for v in e.vector)
        lines.append(" ".join((e.utt_id,) + tuple(comps)) + "\n")
    return "".join(lines)


def parse_matrix(path) -> np.ndarray:
    """Projection matrix: one row per line, whitespace-separated reals."""
    rows = []
    for lineno, line in _records(path):
        values = [_finite(c) for c in line.split()]
        if any(v is None for v in values):
            raise NonFiniteComponent("non-finite matrix entry", lineno)
        if rows and len(values) != len(rows[0]):
            raise DimensionMismatch(f"expected {len(rows[0])} columns, got {len(values)}", lineno)
        rows.append(values)
    if not rows:
        raise EmptyInput(f"{path}: empty matrix")
    return np.array(rows, dtype=np.float64)


def normalize_text(text, normalize=True) -> Tuple[str, ...]:
    if normalize:
        text = _PUNCT.sub(" ", text.lower())
    return tuple(text.split())


def parse_transcripts(path, normalize=True) -> List[TranscriptPair]:
    """Read ``utt_id | reference | hypothesis`` records."""
    out = []
    for lineno, line in _records(path):
        fields = line.split("|")
        if len(fields) != 3:
            raise MalformedRecord(f"expected 3 '|'-separated fields, got {len(fields)}", lineno)
        utt_id = fields[0].strip()
        if not utt_id or len(utt_id.split()) != 1:
            raise MalformedRecord("bad utterance id", lineno)
        ref = normalize_text(fields[1], normalize)
        if not ref:
            raise EmptyReference(utt_id)
        out.append(TranscriptPair(utt_id, ref, normalize_text(fields[2], normalize)))
    if not out:
        raise EmptyInput(f"{path}: no transcript records")
    return out


def serialize_transcripts(pairs) -> str:
    return "".join(f"{p.utt_id} | {' '.join(p.reference)} | {' '.join(p.hypothesis)}\n" for p in pairs)


def parse_mos_predictions(path) -> Dict[str, float]:
    """Read ``utt_id predicted_mos`` lines into an ordered dict."""
    out = {}
    for lineno, line in _records(path):
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(f"expected 2 fields, got {len(parts)}", lineno)
        value = _finite(parts[1])
        if value is None:
            raise NonFiniteScore(f"prediction {parts[1]!r} is not a finite number", lineno)
        if parts[0] in out:
            raise MalformedLine(f"duplicate utterance {parts[0]!r}", lineno)
        out[parts[0]] = value
    if not out:
        raise EmptyInput(f"{path}: no MOS predictions")
    return out


# --- manifest --------------------------------------------------------------

# role key -> kind of file; "mos" maps model tags to file keys
FILE_ROLES = {
    "natural": "trials",
    "genuine": "trials",
    "asv_converted_target": "trials",
    "asv_converted_source": "trials",
    "cm_bona": "trials",
    "cm_spoof": "trials",
    "embeddings": "embeddings",
    "reference_embeddings": "embeddings",
    "lda_matrix": "matrix",
    "transcripts": "transcripts",
}

METRIC_INPUTS = {
    "asv": ("natural", "genuine", "asv_converted_target", "asv_converted_source"),
    "cm": ("cm_bona", "cm_spoof"),
    "cosine": ("embeddings", "reference_embeddings"),
    "wer": ("transcripts",),
    "tdcf": ("natural", "asv_converted_target", "cm_bona", "cm_spoof"),
}


def language_name(code) -> str:
    if code in LANGUAGES:
        return LANGUAGES[code]
    if code in LANGUAGES.values():
        return code
    raise UnknownLanguageCode(code)


@dataclass
class TaskSpec:
    task_id: str
    # team -> role -> resolved path ("mos" -> {tag: path})
    inputs: Dict[str, Dict[str, object]]

    def enabled_metrics(self, team_id) -> List[str]:
        roles = self.inputs.get(team_id, {})
        enabled = [m for m, need in METRIC_INPUTS.items() if all(r in roles for r in need)]
        if roles.get("mos"):
            enabled.append("mos")
        return enabled


@dataclass
class EvaluationManifest:
    team_ids: List[str]
    tasks: List[TaskSpec]
    base_dir: str = "."
    files: Dict[str, str] = field(default_factory=dict)
    cost_model: Optional[dict] = None
    # team ("*" for all) -> speaker -> language name
    language_of_target: Optional[Dict[str, Dict[str, str]]] = None
    # group -> task -> rating -> team -> value
    subjective_scores: Optional[dict] = None
    # group -> task -> rating -> language -> team -> value
    subjective_scores_by_language: Optional[dict] = None
    directions: Dict[str, str] = field(default_factory=dict)
    regression_predictors: Optional[List[str]] = None
    highlight_k: int = 5
    normalize_transcripts: bool = True

    def task(self, task_id) -> TaskSpec:
        for t in self.tasks:
            if t.task_id == task_id:
                return t
        raise KeyError(task_id)

    def language_of(self, team_id, speaker) -> Optional[str]:
        if not self.language_of_target:
            return None
        for key in (team_id, "*"):
            lang = self.language_of_target.get(key, {}).get(speaker)
            if lang is not None:
                return lang
        return None


def _require(doc, key, where="manifest"):
    if key not in doc:
        raise MissingField(f"{where}.{key}" if where != "manifest" else key)
    return doc[key]


def _resolve_roles(spec, files, base_dir, where):
    roles = {}
    for role, ref in spec.items():
        if role == "mos":
            if not isinstance(ref, dict):
                raise MissingField(f"{where}.mos (expected tag -> file key map)")
            roles["mos"] = {tag: _resolve(files, key, base_dir) for tag, key in sorted(ref.items())}
        elif role in FILE_ROLES:
            roles[role] = _resolve(files, ref, base_dir)
        else:
            raise MissingField(f"{where}.{role} (unknown input role)")
    return roles


def _resolve(files, key, base_dir):
    if key not in files:
        raise PathNotDeclared(key)
    path = files[key]
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


def _check_teams(block, team_ids, where):
    for team in block:
        if team not in team_ids:
            raise UnknownTeam(team, where)


def manifest_from_dict(doc, base_dir=".") -> EvaluationManifest:
    team_ids = list(_require(doc, "team_ids"))
    if len(set(team_ids)) != len(team_ids):
        raise MalformedRecord("team ids are not unique")
    files = dict(doc.get("files", {}))
    tasks = []
    for i, tdoc in enumerate(_require(doc, "tasks")):
        where = f"tasks[{i}]"
        task_id = _require(tdoc, "task_id", where)
        shared = tdoc.get("shared", {})
        teams = tdoc.get("teams", {})
        _check_teams(teams, team_ids, f"{where}.teams")
        inputs = {}
        for team in team_ids:
            if team not in teams:
                continue
            merged = dict(shared)
            merged.update(teams[team])
            inputs[team] = _resolve_roles(merged, files, base_dir, f"{where}.teams.{team}")
        tasks.append(TaskSpec(task_id, inputs))
    task_ids = [t.task_id for t in tasks]

    lang = doc.get("language_of_target")
    if lang is not None:
        # accept a flat speaker map or a team -> speaker map
        if lang and all(isinstance(v, str) for v in lang.values()):
            lang = {"*": lang}
        _check_teams([k for k in lang if k != "*"], team_ids, "language_of_target")
        lang = {team: {spk: language_name(code) for spk, code in m.items()} for team, m in lang.items()}

    subj = doc.get("subjective_scores")
    if subj is not None:
        for group, per_task in subj.items():
            for task_id, per_rating in per_task.items():
                if task_id not in task_ids:
                    raise MissingField(f"subjective_scores.{group}.{task_id} (no such task)")
                for rating, values in per_rating.items():
                    _check_teams(values, team_ids, f"subjective_scores.{group}.{task_id}.{rating}")

    subj_lang = doc.get("subjective_scores_by_language")
    if subj_lang is not None:
        normalized = {}
        for group, per_task in subj_lang.items():
            for task_id, per_rating in per_task.items():
                for rating, per_lang in per_rating.items():
                    for code, values in per_lang.items():
                        _check_teams(values, team_ids, f"subjective_scores_by_language.{group}.{task_id}.{rating}")
                        (normalized.setdefault(group, {}).setdefault(task_id, {})
                         .setdefault(rating, {})[language_name(code)]) = dict(values)
        subj_lang = normalized

    return EvaluationManifest(
        team_ids=team_ids,
        tasks=tasks,
        base_dir=base_dir,
        files=files,
        cost_model=doc.get("cost_model"),
        language_of_target=lang,
        subjective_scores=subj,
        subjective_scores_by_language=subj_lang,
        directions=dict(doc.get("directions", {})),
        regression_predictors=doc.get("regression_predictors"),
        highlight_k=int(doc.get("highlight_k", 5)),
        normalize_transcripts=bool(doc.get("normalize_transcripts", True)),
    )


def load_manifest(path) -> EvaluationManifest:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return manifest_from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))
