import filecmp
import json
import math
import os

import numpy as np
import pytest

from vcceval.errors import EmptyClass, InputTooLong, InvalidParams, InvalidSpec
from vcceval.oracle import (
    FixtureSpec,
    brute_align,
    brute_align_grid,
    brute_eer,
    brute_eer_threshold,
    brute_system_cosine,
    generate_fixture,
    quadrature_tail,
)


def test_brute_eer_trivial():
    assert brute_eer([2, 3], [0, 1]) == 0.0
    assert brute_eer([0, 1, 2], [0, 1, 2]) == 0.5
    assert brute_eer([1, 3, 5], [0, 2, 4]) == pytest.approx(1 / 3)
    assert brute_eer_threshold([2, 3], [0, 1])[1] == 1.5
    with pytest.raises(EmptyClass):
        brute_eer([], [1])


def test_brute_align_examples():
    assert brute_align(list("abcd"), list("axc")) == (1, 1, 0, 4)
    assert brute_align(["a"], list("xyz")) == (1, 0, 2, 1)
    with pytest.raises(InputTooLong):
        brute_align(list("a" * 9), ["a"])


def test_grid_agrees_with_scalar_enumeration():
    refs, hyps, subs, dels, ins = brute_align_grid(3, 2, alphabet=2)
    for a, ref in enumerate(refs):
        for b, hyp in enumerate(hyps):
            assert (subs[a, b], dels[a, b], ins[a, b], 3) == brute_align(ref.tolist(), hyp.tolist())


def test_quadrature_checks():
    assert quadrature_tail("student_t", (1,), 1.0) == pytest.approx(0.25, abs=1e-11)
    assert quadrature_tail("f_dist", (2, 10), 0.0) == pytest.approx(1.0, abs=1e-11)
    with pytest.raises(InvalidParams):
        quadrature_tail("student_t", (0,), 1.0)
    with pytest.raises(InvalidParams):
        quadrature_tail("chi2", (3,), 1.0)


def test_brute_system_cosine_projection():
    m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    assert brute_system_cosine([("A", [1, 0, 5])], {"A": [[3, 0, -2]]}, m) == 1.0


def test_fixture_spec_validation():
    with pytest.raises(InvalidSpec):
        FixtureSpec(teams=0).validate()
    with pytest.raises(InvalidSpec):
        FixtureSpec(projection_dim=99).validate()
    with pytest.raises(InvalidSpec):
        FixtureSpec.from_dict({"bogus": 1})
    with pytest.raises(InvalidSpec):
        FixtureSpec.from_dict({"dists": {"cm_bona": [0, -1]}})
    assert FixtureSpec.from_dict({"teams": 3, "tasks": ["t"]}).tasks == ("t",)


def test_fixture_is_deterministic(tmp_path):
    spec = FixtureSpec(teams=3, utterances=5, seed=17)
    generate_fixture(spec, str(tmp_path / "a"))
    generate_fixture(spec, str(tmp_path / "b"))
    cmp = filecmp.dircmp(tmp_path / "a", tmp_path / "b")
    assert not cmp.left_only and not cmp.right_only
    names = sorted(os.listdir(tmp_path / "a"))
    assert filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)[0] == names


def test_fixture_seed_changes_output(tmp_path):
    generate_fixture(FixtureSpec(teams=2, utterances=4, seed=1), str(tmp_path / "a"))
    generate_fixture(FixtureSpec(teams=2, utterances=4, seed=2), str(tmp_path / "b"))
    assert (tmp_path / "a" / "task1_natural.txt").read_text() != (tmp_path / "b" / "task1_natural.txt").read_text()


def test_separated_cm_classes_give_zero_eer(tmp_path):
    spec = FixtureSpec(teams=2, utterances=6, dists={"cm_bona": (10.0, 0.5), "cm_spoof": (-10.0, 0.5)})
    _, expected = generate_fixture(spec, str(tmp_path))
    for task in expected["tasks"].values():
        assert all(row["cm_eer_pct"] == 0.0 for row in task.values())


def test_fixture_written_values_match_memory(tmp_path):
    _, expected = generate_fixture(FixtureSpec(teams=2, utterances=4), str(tmp_path))
    with open(tmp_path / "expected.json") as fh:
        on_disk = json.load(fh)
    assert on_disk == json.loads(json.dumps(expected))
    lines = (tmp_path / "task1_T01_asv_tgt.txt").read_text().splitlines()
    assert all(len(line.split()[-1].split(".")[1]) == 4 for line in lines)
    assert all(math.isfinite(float(line.split()[-1])) for line in lines)


def test_fixture_without_languages_or_projection(tmp_path):
    manifest, expected = generate_fixture(
        FixtureSpec(teams=2, utterances=4, languages=False, projection_dim=None, subjective=False), str(tmp_path))
    with open(manifest) as fh:
        doc = json.load(fh)
    assert "language_of_target" not in doc and "subjective_scores" not in doc
    assert expected["language_rows"] == {}
    assert not (tmp_path / "lda.txt").exists()
    assert np.isfinite(expected["tasks"]["task1"]["T01"]["cosine"])
