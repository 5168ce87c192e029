"""DET curves, equal error rate and fixed-threshold error rates.

Decision convention everywhere: a trial is accepted iff ``score > threshold``;
a score equal to the threshold is rejected.
"""
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClass

FA_ABOVE = "fa_above"
MISS_AT_OR_BELOW = "miss_at_or_below"


@dataclass(frozen=True)
class DetCurve:
    """Miss / false-alarm staircase.

    ``thresholds[0]`` is ``-inf`` (accept everything); the remaining entries are
    the distinct pooled scores in ascending order. Point ``k`` holds for every
    threshold in ``[thresholds[k], thresholds[k + 1])``.
    """

    thresholds: np.ndarray
    p_miss: np.ndarray
    p_fa: np.ndarray


@dataclass(frozen=True)
class EerResult:
    eer: float
    threshold: float

    @property
    def eer_pct(self):
        return 100.0 * self.eer


@dataclass(frozen=True)
class AsvMetrics:
    eer_pct: float
    pfa_tar_pct: float
    pmiss_src_pct: float
    threshold_natural: float

    def as_tuple(self):
        return (self.eer_pct, self.pfa_tar_pct, self.pmiss_src_pct)


def _as_scores(values, which):
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyClass(which)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite score in {which}")
    return arr


def det_curve(positives, negatives) -> DetCurve:
    pos = np.sort(_as_scores(positives, "positives"))
    neg = np.sort(_as_scores(negatives, "negatives"))
    thr = np.unique(np.concatenate((pos, neg)))
    n_pos, n_neg = pos.size, neg.size
    miss = np.searchsorted(pos, thr, side="right")
    fa = n_neg - np.searchsorted(neg, thr, side="right")
    return DetCurve(
        thresholds=np.concatenate(([-np.inf], thr)),
        p_miss=np.concatenate(([0.0], miss / n_pos)),
        p_fa=np.concatenate(([1.0], fa / n_neg)),
    )


def eer(curve: DetCurve) -> EerResult:
    """Crossing of ``p_miss`` and ``p_fa`` by linear interpolation.

    The result is not clamped to 0.5: negatives that outscore positives give an
    EER above one half.
    """
    d = curve.p_fa - curve.p_miss
    # d is 1 at -inf and -1 at the top score, and non-increasing in between.
    i = int(np.argmax(d <= 0.0))
    thr = curve.thresholds
    if d[i] == 0.0:
        j = i
        while d[j + 1] == 0.0:
            j += 1
        return EerResult(float(curve.p_miss[i]), float(0.5 * (thr[i] + thr[j + 1])))
    t = d[i - 1] / (d[i - 1] - d[i])
    value = curve.p_miss[i - 1] + t * (curve.p_miss[i] - curve.p_miss[i - 1])
    return EerResult(float(value), float(thr[i]))


def eer_from_scores(positives, negatives) -> EerResult:
    return eer(det_curve(positives, negatives))


def fixed_threshold_rates(scores, threshold, direction) -> float:
    s = _as_scores(scores, "scores")
    if direction == FA_ABOVE:
        return np.count_nonzero(s > threshold) / s.size
    if direction == MISS_AT_OR_BELOW:
        return np.count_nonzero(s <= threshold) / s.size
    raise ValueError(f"unknown direction {direction!r}")


def natural_threshold(target_scores, nontarget_scores) -> float:
    """ASV threshold at the EER point of natural target/nontarget trials."""
    return eer(det_curve(target_scores, nontarget_scores)).threshold


def asv_assessment(
    natural_target_scores,
    natural_nontarget_scores,
    converted_vs_target_scores,
    genuine_target_test_scores,
    converted_vs_source_scores,
) -> AsvMetrics:
    """EER, target false-acceptance and source miss rate of converted speech.

    The EER contrasts genuine target test trials (positives) against converted
    trials scored on the target model (negatives). The other two rates use a
    threshold fixed beforehand on natural speech only.
    """
    result = eer(det_curve(genuine_target_test_scores, converted_vs_target_scores))
    tau = natural_threshold(natural_target_scores, natural_nontarget_scores)
    pfa = fixed_threshold_rates(converted_vs_target_scores, tau, FA_ABOVE)
    pmiss = fixed_threshold_rates(converted_vs_source_scores, tau, MISS_AT_OR_BELOW)
    return AsvMetrics(100.0 * result.eer, 100.0 * pfa, 100.0 * pmiss, tau)


def cm_eer(bona_fide_scores, spoof_scores) -> EerResult:
    """Countermeasure EER with bona fide speech as the positive class."""
    return eer(det_curve(bona_fide_scores, spoof_scores))
