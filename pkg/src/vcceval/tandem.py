"""Normalized minimum tandem detection cost (t-DCF) of a countermeasure placed
in front of a fixed-threshold ASV system.

With the ASV threshold fixed, the tandem cost as a function of the CM threshold is

    t-DCF(s) = C0 + C1 * Pmiss_cm(s) + C2 * Pfa_cm(s)

    C0 = pi_tar * C_miss * Pmiss_asv + pi_non * C_fa * Pfa_asv
    C1 = pi_tar * C_miss - C0
    C2 = pi_spoof * C_fa_spoof * Pfa_spoof_asv

and is normalized by the cost of the better of the two trivial CMs
(accept everything: C0 + C2, reject everything: C0 + C1).
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .detection import FA_ABOVE, MISS_AT_OR_BELOW, det_curve, fixed_threshold_rates, natural_threshold
from .errors import DegenerateNormalizer, InvalidCostModel, MissingClass


@dataclass(frozen=True)
class CostModel:
    c_miss: float = 1.0
    c_fa: float = 10.0
    c_fa_spoof: float = 10.0
    pi_spoof: float = 0.50
    pi_tar: float = 0.50 * 0.99
    pi_non: float = 0.50 * 0.01

    def validate(self):
        priors = (self.pi_spoof, self.pi_tar, self.pi_non)
        costs = (self.c_miss, self.c_fa, self.c_fa_spoof)
        if not all(math.isfinite(v) for v in priors + costs):
            raise InvalidCostModel("cost model entries must be finite")
        if any(p < 0 for p in priors) or abs(sum(priors) - 1.0) > 1e-12:
            raise InvalidCostModel(f"priors must be >= 0 and sum to 1, got {priors}")
        if any(c <= 0 for c in costs):
            raise InvalidCostModel(f"costs must be > 0, got {costs}")
        return self

    @classmethod
    def from_dict(cls, doc):
        """Build from a mapping; ``pi_tar``/``pi_non`` default to a 99:1 split of
        the bona fide mass when only ``pi_spoof`` is given."""
        doc = dict(doc or {})
        unknown = set(doc) - set(cls.__dataclass_fields__) - {"target_share"}
        if unknown:
            raise InvalidCostModel(f"unknown cost model keys: {sorted(unknown)}")
        share = doc.pop("target_share", 0.99)
        if "pi_spoof" in doc and "pi_tar" not in doc and "pi_non" not in doc:
            doc["pi_tar"] = (1.0 - doc["pi_spoof"]) * share
            doc["pi_non"] = (1.0 - doc["pi_spoof"]) * (1.0 - share)
        return cls(**{k: float(v) for k, v in doc.items()}).validate()

    def to_dict(self):
        return asdict(self)


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True)
class AsvOperatingPoint:
    p_miss_asv: float
    p_fa_asv: float
    p_fa_spoof_asv: float

    def validate(self):
        for name, v in asdict(self).items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        return self


@dataclass(frozen=True)
class TdcfResult:
    min_tdcf_norm: float
    cm_threshold: float
    constants: tuple


def asv_operating_point(target_scores, nontarget_scores, spoof_scores, threshold=None) -> AsvOperatingPoint:
    """ASV error rates at ``threshold`` (default: EER point of the bona fide trials)."""
    if threshold is None:
        threshold = natural_threshold(target_scores, nontarget_scores)
    return AsvOperatingPoint(
        fixed_threshold_rates(target_scores, threshold, MISS_AT_OR_BELOW),
        fixed_threshold_rates(nontarget_scores, threshold, FA_ABOVE),
        fixed_threshold_rates(spoof_scores, threshold, FA_ABOVE),
    )


def tandem_constants(op: AsvOperatingPoint, cm: CostModel = DEFAULT_COST_MODEL):
    """(C0, C1, C2) for a fixed ASV operating point."""
    cm.validate()
    op.validate()
    c0 = cm.pi_tar * cm.c_miss * op.p_miss_asv + cm.pi_non * cm.c_fa * op.p_fa_asv
    c1 = cm.pi_tar * cm.c_miss - c0
    c2 = cm.pi_spoof * cm.c_fa_spoof * op.p_fa_spoof_asv
    return c0, c1, c2


def tdcf_curve(cm_bona_scores, cm_spoof_scores, constants):
    """Unnormalized t-DCF over the CM DET staircase; returns (thresholds, costs).

    The first point (threshold ``-inf``) is the accept-everything CM and the
    last point (top score) the reject-everything CM.
    """
    c0, c1, c2 = constants
    curve = det_curve(cm_bona_scores, cm_spoof_scores)
    return curve.thresholds, c0 + c1 * curve.p_miss + c2 * curve.p_fa


def min_tdcf(cm_bona_scores, cm_spoof_scores, constants) -> TdcfResult:
    c0, c1, c2 = constants
    normalizer = c0 + min(c1, c2)
    if not normalizer > 0.0:
        raise DegenerateNormalizer(f"default cost C0 + min(C1, C2) = {normalizer} is not positive")
    thresholds, costs = tdcf_curve(cm_bona_scores, cm_spoof_scores, constants)
    # argmin returns the first minimum, i.e. the most permissive CM on ties
    k = int(np.argmin(costs))
    return TdcfResult(float(costs[k] / normalizer), float(thresholds[k]), (c0, c1, c2))


def tandem_assessment(asv_target, asv_nontarget, asv_spoof, cm_bona, cm_spoof, cm: CostModel = DEFAULT_COST_MODEL):
    """min t-DCF with the ASV threshold at the bona fide EER point."""
    op = asv_operating_point(asv_target, asv_nontarget, asv_spoof)
    return min_tdcf(cm_bona, cm_spoof, tandem_constants(op, cm))


def empirical_tandem_cost(trials, cm_threshold, asv_threshold, cm: CostModel = DEFAULT_COST_MODEL):
    """Expected cost of the cascade, estimated from labelled (cm, asv) score pairs.

    ``trials`` holds ``(label, cm_score, asv_score)`` tuples with labels
    ``target``, ``nontarget`` and ``spoof``. A trial is accepted iff both
    ``cm_score > cm_threshold`` and ``asv_score > asv_threshold``.
    """
    cm.validate()
    accepted = {"target": 0, "nontarget": 0, "spoof": 0}
    total = {"target": 0, "nontarget": 0, "spoof": 0}
    for label, cm_score, asv_score in trials:
        if label not in total:
            raise ValueError(f"unexpected label {label!r}")
        total[label] += 1
        if cm_score > cm_threshold and asv_score > asv_threshold:
            accepted[label] += 1
    for label, count in total.items():
        if count == 0:
            raise MissingClass(label)
    return (
        cm.pi_tar * cm.c_miss * (total["target"] - accepted["target"]) / total["target"]
        + cm.pi_non * cm.c_fa * accepted["nontarget"] / total["nontarget"]
        + cm.pi_spoof * cm.c_fa_spoof * accepted["spoof"] / total["spoof"]
    )
