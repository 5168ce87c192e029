import json
import os
import shutil

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vcceval.campaign import (
    HIGHER_BETTER,
    LOWER_BETTER,
    SystemMetrics,
    correlation_table,
    evaluate_campaign,
    language_breakdown,
    rank_and_highlight,
    regression_table,
)
from vcceval.errors import EmptyTable, NoTeams, UnknownLanguageCode
from vcceval.oracle import FixtureSpec, brute_pearson, generate_fixture
from vcceval.score_io import LANGUAGES, load_manifest, manifest_from_dict

CODES = {v: k for k, v in LANGUAGES.items()}


# --- ranking ---------------------------------------------------------------

def test_rank_boundary_tie():
    values = {f"T{i}": v for i, v in enumerate([5, 4, 3, 2, 1, 1])}
    assert rank_and_highlight(values, LOWER_BETTER) == set(values) - {"T0"}
    assert len(rank_and_highlight(values, HIGHER_BETTER)) == 6


def test_rank_small_and_empty():
    assert rank_and_highlight({"A": 1.0, "B": 2.0}) == {"A", "B"}
    with pytest.raises(EmptyTable):
        rank_and_highlight({})


@given(st.dictionaries(st.from_regex(r"T[0-9]{2}", fullmatch=True), st.integers(0, 6), min_size=1),
       st.integers(1, 8), st.sampled_from([HIGHER_BETTER, LOWER_BETTER]))
def test_rank_size_and_tie_closure(values, k, direction):
    top = rank_and_highlight(values, direction, k)
    assert len(top) >= min(k, len(values))
    sign = 1 if direction == HIGHER_BETTER else -1
    worst_kept = min(sign * values[t] for t in top)
    # every team at least as good as a kept team is kept too
    assert {t for t, v in values.items() if sign * v >= worst_kept} == top


# --- correlation / regression tables --------------------------------------

def test_correlation_identity_flagged():
    obj = {"a": {"T1": 1.0, "T2": 2.0, "T3": 4.0, "T4": 3.0}, "b": {"T1": 3.0, "T2": 1.0, "T3": 2.0, "T4": 2.5}}
    cells = correlation_table(obj, {"MOS": dict(obj["a"])})
    best = [c for c in cells if c.best]
    assert [c.metric for c in best] == ["a"] and best[0].r == 1.0


def test_correlation_too_few_shared_teams():
    cells = correlation_table({"a": {"T1": 1.0, "T2": 2.0, "T3": 3.0}}, {"SIM": {"T2": 1.0, "T3": 5.0, "T9": 2.0}})
    assert cells[0].r is None and cells[0].error == "TooFewSamples" and cells[0].n == 2


def test_correlation_independent_signal_is_weak():
    rng = np.random.default_rng(11)
    teams = [f"T{i:02d}" for i in range(200)]
    obj = {m: dict(zip(teams, rng.normal(size=200))) for m in ("a", "b", "c")}
    cells = correlation_table(obj, {"MOS": dict(zip(teams, rng.normal(size=200)))})
    assert all(abs(c.r) < 0.25 for c in cells)


@given(st.integers(0, 2**32 - 1), st.randoms())
def test_correlation_team_order_invariant(seed, rnd):
    rng = np.random.default_rng(seed)
    teams = [f"T{i:02d}" for i in range(8)]
    obj = {"a": dict(zip(teams, rng.normal(size=8))), "b": dict(zip(teams, rng.normal(size=8)))}
    subj = {"MOS": dict(zip(teams, rng.normal(size=8)))}
    order = teams[:]
    rnd.shuffle(order)
    obj2 = {m: {t: v[t] for t in order} for m, v in obj.items()}
    subj2 = {"MOS": {t: subj["MOS"][t] for t in order}}
    a = [(c.metric, c.r, c.p, c.best) for c in correlation_table(obj, subj)]
    assert a == [(c.metric, c.r, c.p, c.best) for c in correlation_table(obj2, subj2)]
    for metric, r, _, _ in a:
        want = brute_pearson([obj[metric][t] for t in teams], [subj["MOS"][t] for t in teams])
        assert r == pytest.approx(want, abs=1e-12)


def _row(team, lang=None, **vals):
    r = SystemMetrics(team, "task2", language=lang)
    for k, v in vals.items():
        r.set(k, v)
    return r


def test_language_breakdown_single_language_equals_full():
    rng = np.random.default_rng(2)
    rows = [_row(f"T{i}", "German", asv_eer_pct=float(a), cm_eer_pct=float(b))
            for i, (a, b) in enumerate(rng.normal(size=(6, 2)))]
    subj = {f"T{i}": float(v) for i, v in enumerate(rng.normal(size=6))}
    full = correlation_table({"asv_eer_pct": {r.team_id: r.asv_eer_pct for r in rows},
                              "cm_eer_pct": {r.team_id: r.cm_eer_pct for r in rows}}, {"MOS": subj})
    split = language_breakdown(rows, {"MOS": {"German": subj}}, columns=["asv_eer_pct", "cm_eer_pct"])
    assert [(c.metric, c.r, c.p) for c in full] == [(c.metric, c.r, c.p) for c in split]
    assert all(c.language == "German" for c in split)


def test_language_breakdown_unknown_code():
    with pytest.raises(UnknownLanguageCode):
        language_breakdown([_row("T1", "X", asv_eer_pct=1.0)], {})
    with pytest.raises(UnknownLanguageCode):
        language_breakdown([_row("T1", "German", asv_eer_pct=1.0)], {"MOS": {"X": {"T1": 1.0}}})


def test_regression_recovers_construction():
    rng = np.random.default_rng(5)
    rows = [_row(f"T{i:02d}", asv_eer_pct=float(a), asr_wer_pct=float(w))
            for i, (a, w) in enumerate(zip(rng.uniform(0, 60, 20), rng.uniform(2, 40, 20)))]
    target = {r.team_id: 1.7 + 0.024 * r.asv_eer_pct - 0.021 * r.asr_wer_pct for r in rows}
    res, err, teams = regression_table(rows, {"MOS": target}, ("asv_eer_pct", "asr_wer_pct"))["MOS"]
    assert err == "" and len(teams) == 20
    assert res.intercept == pytest.approx(1.7, abs=1e-9)
    np.testing.assert_allclose(res.coefficients, [0.024, -0.021], atol=1e-9)
    assert res.r_squared == pytest.approx(1.0, abs=1e-12)


def test_regression_collinear_reported():
    rows = [_row(f"T{i}", asv_eer_pct=float(i), pfa_tar_pct=2.0 * i) for i in range(8)]
    res, err, _ = regression_table(rows, {"MOS": {f"T{i}": float(i * i) for i in range(8)}},
                                   ("asv_eer_pct", "pfa_tar_pct"))["MOS"]
    assert res is None and err == "RankDeficient"


# --- end to end ------------------------------------------------------------

@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixture")
    manifest, expected = generate_fixture(FixtureSpec(teams=6, utterances=10, seed=4), str(out))
    return str(out), manifest, expected


def _compare(report, expected):
    checked = 0
    for task, rows in report.tasks.items():
        for r in rows:
            for col, want in expected["tasks"][task][r.team_id].items():
                got = r.value(col)
                assert (got is None) == (want is None), (task, r.team_id, col)
                if want is not None:
                    assert abs(got - want) <= 1e-9, (task, r.team_id, col, got, want)
                    checked += 1
    for task, rows in report.language_rows.items():
        for r in rows:
            for col, want in expected["language_rows"][task][r.team_id][CODES[r.language]].items():
                got = r.value(col)
                assert (got is None) == (want is None), (task, r.team_id, r.language, col)
                if want is not None:
                    assert abs(got - want) <= 1e-9
                    checked += 1
    return checked


def test_fixture_campaign_matches_oracle(fixture_dir):
    _, manifest, expected = fixture_dir
    report = evaluate_campaign(load_manifest(manifest))
    assert _compare(report, expected) > 0
    assert report.correlations and report.regressions
    assert set(report.highlights) == {"task1", "task2"}
    for task, cols in report.highlights.items():
        rows = {r.team_id: r for r in report.tasks[task]}
        for col, teams in cols.items():
            assert all(rows[t].value(col) is not None for t in teams)


def test_per_language_correlations_match_subset_oracle(fixture_dir):
    _, manifest, _ = fixture_dir
    m = load_manifest(manifest)
    report = evaluate_campaign(m)
    cells = [c for c in report.correlations if c.language and c.r is not None]
    assert cells
    for c in cells[:20]:
        subset = [r for r in report.language_rows[c.task_id] if r.language == c.language]
        subj = m.subjective_scores_by_language[c.group][c.task_id][c.rating][c.language]
        teams = sorted(r.team_id for r in subset if r.value(c.metric) is not None and r.team_id in subj)
        by = {r.team_id: r for r in subset}
        assert c.r == pytest.approx(brute_pearson([by[t].value(c.metric) for t in teams],
                                                  [subj[t] for t in teams]), abs=1e-12)


def test_provenance(fixture_dir):
    out, manifest, _ = fixture_dir
    report = evaluate_campaign(load_manifest(manifest))
    prov = report.provenance
    assert prov["tool"] == "vcceval" and prov["cost_model"]["c_fa"] == 10.0
    assert "task1_natural.txt" in prov["inputs"] and len(prov["inputs"]["task1_natural.txt"]) == 64


def test_missing_file_is_a_diagnostic(fixture_dir, tmp_path):
    out, manifest, _ = fixture_dir
    work = tmp_path / "copy"
    shutil.copytree(out, work)
    os.remove(work / "task1_T02_cm_spoof.txt")
    report = evaluate_campaign(load_manifest(str(work / "manifest.json")))
    bad = [d for d in report.diagnostics if d.task_id == "task1" and d.team_id == "T02"]
    assert {d.metric for d in bad} == {"cm", "tdcf"}
    assert all(d.cause == "FileMissing" for d in bad)
    row = next(r for r in report.tasks["task1"] if r.team_id == "T02")
    assert row.cm_eer_pct is None and row.min_tdcf_norm is None and row.asv_eer_pct is not None


def test_asv_only_manifest(fixture_dir):
    out, _, _ = fixture_dir
    doc = {
        "team_ids": ["T01"],
        "files": {k: f"{k}.txt" for k in ("task1_natural", "task1_genuine", "task1_T01_asv_tgt", "task1_T01_asv_src")},
        "tasks": [{"task_id": "task1", "shared": {"natural": "task1_natural", "genuine": "task1_genuine"},
                   "teams": {"T01": {"asv_converted_target": "task1_T01_asv_tgt",
                                     "asv_converted_source": "task1_T01_asv_src"}}}],
    }
    report = evaluate_campaign(manifest_from_dict(doc, out))
    (row,) = report.tasks["task1"]
    assert list(row.populated()) == ["asv_eer_pct", "pfa_tar_pct", "pmiss_src_pct"]
    assert row.cosine is None and row.mosnet_scores == {} and not report.diagnostics


def test_too_few_teams_in_subjective_block(fixture_dir):
    out, manifest, _ = fixture_dir
    with open(manifest) as fh:
        doc = json.load(fh)
    doc["subjective_scores"] = {"ENG": {"task1": {"MOS": {"T01": 3.0, "T02": 4.0}}}}
    doc.pop("subjective_scores_by_language")
    report = evaluate_campaign(manifest_from_dict(doc, out))
    causes = {d.cause for d in report.diagnostics if d.team_id == "*"}
    assert "TooFewSamples" in causes


def test_no_teams():
    with pytest.raises(NoTeams):
        evaluate_campaign(manifest_from_dict({"team_ids": [], "tasks": []}))
