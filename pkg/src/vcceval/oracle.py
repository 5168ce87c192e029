"""Slow, independent reference implementations.

Nothing here calls into the modules it checks; the code counts, enumerates and
integrates directly. Tests compare the fast paths against these, and the
fixture generator uses them to compute ground-truth metrics.
"""
import itertools
import json
import math
import os
import random
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import integrate

from .errors import DegenerateNormalizer, EmptyClass, InputTooLong, InvalidParams, InvalidSpec

MAX_BRUTE_LEN = 8


# --- EER -------------------------------------------------------------------

def _sweep(positives, negatives):
    pos, neg = list(positives), list(negatives)
    if not pos:
        raise EmptyClass("positives")
    if not neg:
        raise EmptyClass("negatives")
    pooled = sorted(set(pos + neg))
    # under "accept iff score > c" a score classifies like the gap above it,
    # and unlike a midpoint it cannot round onto a neighbour
    cands = [-math.inf] + pooled
    points = []
    for c in cands:
        miss = sum(1 for s in pos if s <= c) / len(pos)
        fa = sum(1 for s in neg if s > c) / len(neg)
        points.append((c, miss, fa))
    return pos + neg, points


def brute_eer_threshold(positives, negatives) -> Tuple[float, float]:
    """(EER, threshold) by sweeping every candidate threshold.

    Candidates are -inf and every distinct score. On a flat crossing the threshold is the middle of the flat region;
    on a strict crossing it is the score at which the sign flips.
    """
    pooled, pts = _sweep(positives, negatives)
    for i, (c, miss, fa) in enumerate(pts):
        if fa - miss == 0:
            j = i
            while pts[j + 1][2] - pts[j + 1][1] == 0:
                j += 1
            lo = max(s for s in pooled if s <= c)
            hi = min(s for s in pooled if s > pts[j][0])
            return miss, (lo + hi) / 2
        if fa - miss < 0:
            c0, m0, f0 = pts[i - 1]
            t = (f0 - m0) / ((f0 - m0) - (fa - miss))
            return m0 + t * (miss - m0), min(s for s in pooled if s > c0)
    raise AssertionError("sweep never crossed")  # pragma: no cover


def brute_eer(positives, negatives) -> float:
    return brute_eer_threshold(positives, negatives)[0]


def brute_rate_above(scores, threshold):
    scores = list(scores)
    return sum(1 for s in scores if s > threshold) / len(scores)


def brute_rate_at_or_below(scores, threshold):
    scores = list(scores)
    return sum(1 for s in scores if s <= threshold) / len(scores)


# --- alignment -------------------------------------------------------------

def _best(n, m, matched_counts):
    """Lexicographic (total, ins, del) minimum over (k aligned pairs, matches) outcomes."""
    best = None
    for k, matches in matched_counts:
        sub, dele, ins = k - matches, n - k, m - k
        key = (sub + dele + ins, ins, dele)
        if best is None or key < best:
            best = key
    total, ins, dele = best
    return total - ins - dele, dele, ins


def brute_align(ref, hyp):
    """(S, D, I, N) by enumerating every monotone alignment.

    An alignment is a monotone partial matching between reference and
    hypothesis positions: matched pairs are hits or substitutions, unmatched
    reference words deletions, unmatched hypothesis words insertions.
    """
    ref, hyp = list(ref), list(hyp)
    if len(ref) > MAX_BRUTE_LEN or len(hyp) > MAX_BRUTE_LEN:
        raise InputTooLong(f"brute_align is limited to {MAX_BRUTE_LEN} tokens per side")
    n, m = len(ref), len(hyp)
    outcomes = []
    for k in range(min(n, m) + 1):
        for ri in itertools.combinations(range(n), k):
            for hj in itertools.combinations(range(m), k):
                outcomes.append((k, sum(ref[a] == hyp[b] for a, b in zip(ri, hj))))
    s, d, i = _best(n, m, outcomes)
    return s, d, i, n


def all_sequences(length, alphabet):
    rows = list(itertools.product(range(alphabet), repeat=length))
    return np.array(rows, dtype=np.int64).reshape(alphabet**length, length)


def brute_align_grid(n, m, alphabet=3):
    """Exhaustive alignment counts for every (ref, hyp) pair of lengths (n, m).

    Returns ``(refs, hyps, S, D, I)`` where ``S[a, b]`` belongs to
    ``refs[a]`` vs ``hyps[b]``. Vectorized over sequence pairs; still an
    enumeration of every monotone partial matching.
    """
    refs, hyps = all_sequences(n, alphabet), all_sequences(m, alphabet)
    eq = refs[:, None, :, None] == hyps[None, :, None, :]
    best = np.full((len(refs), len(hyps)), np.iinfo(np.int64).max, dtype=np.int64)
    scale = (n + m + 1)
    for k in range(min(n, m) + 1):
        ins, dele = m - k, n - k
        for ri in itertools.combinations(range(n), k):
            for hj in itertools.combinations(range(m), k):
                matches = eq[:, :, list(ri), list(hj)].sum(axis=-1) if k else 0
                total = (k - matches) + dele + ins
                key = (total * scale + ins) * scale + dele
                np.minimum(best, key, out=best)
    dele = best % scale
    ins = (best // scale) % scale
    total = best // (scale * scale)
    return refs, hyps, total - ins - dele, dele, ins


def brute_wer(pairs):
    errors = words = 0
    for ref, hyp in pairs:
        s, d, i, n = brute_align(ref, hyp)
        errors += s + d + i
        words += n
    return 100.0 * errors / words


# --- tail probabilities ----------------------------------------------------

def _t_pdf(x, df):
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


def _f_pdf(x, d1, d2):
    if x <= 0:
        return 0.0
    logb = math.lgamma(d1 / 2) + math.lgamma(d2 / 2) - math.lgamma((d1 + d2) / 2)
    return math.exp(
        (d1 / 2) * math.log(d1 / d2) + (d1 / 2 - 1) * math.log(x) - ((d1 + d2) / 2) * math.log1p(d1 * x / d2) - logb
    )


def quadrature_tail(density, params, x):
    """P(X >= x) by adaptive quadrature of the density (absolute tol 1e-11)."""
    if density == "student_t":
        (df,) = params
        if not df > 0:
            raise InvalidParams(f"df={df}")
        pdf = lambda u: _t_pdf(u, df)  # noqa: E731
    elif density == "f_dist":
        d1, d2 = params
        if not (d1 > 0 and d2 > 0):
            raise InvalidParams(f"d1={d1}, d2={d2}")
        pdf = lambda u: _f_pdf(u, d1, d2)  # noqa: E731
        x = max(x, 0.0)
    else:
        raise InvalidParams(f"unknown density {density!r}")
    # split the half-line so quad sees the bulk on a finite interval
    edge = x + 50.0
    head, _ = integrate.quad(pdf, x, edge, epsabs=1e-13, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(pdf, edge, math.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    return head + tail


def brute_pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


# --- tandem ----------------------------------------------------------------

@dataclass(frozen=True)
class Costs:
    """Plain cost record so the oracle does not depend on tandem.CostModel."""

    c_miss: float = 1.0
    c_fa: float = 10.0
    c_fa_spoof: float = 10.0
    pi_spoof: float = 0.5
    pi_tar: float = 0.495
    pi_non: float = 0.005


def _cascade_cost(costs, cm_miss, cm_fa, asv_miss, asv_fa, asv_fa_spoof):
    accept_target = (1 - cm_miss) * (1 - asv_miss)
    return (
        costs.pi_tar * costs.c_miss * (1 - accept_target)
        + costs.pi_non * costs.c_fa * (1 - cm_miss) * asv_fa
        + costs.pi_spoof * costs.c_fa_spoof * cm_fa * asv_fa_spoof
    )


def brute_min_tdcf(cm_bona, cm_spoof, asv_target, asv_nontarget, asv_spoof, costs=Costs()):
    """(normalized min t-DCF, CM threshold) by sweeping every CM threshold.

    The ASV threshold sits at the bona fide EER point. Costs are evaluated as
    the expected cascade cost from per-stage error rates, and normalized by the
    cheaper of the accept-all and reject-all countermeasures.
    """
    _, tau = brute_eer_threshold(asv_target, asv_nontarget)
    asv_miss = brute_rate_at_or_below(asv_target, tau)
    asv_fa = brute_rate_above(asv_nontarget, tau)
    asv_fa_spoof = brute_rate_above(asv_spoof, tau)
    pooled, pts = _sweep(cm_bona, cm_spoof)
    best = None
    for c, miss, fa in pts[:-1]:
        cost = _cascade_cost(costs, miss, fa, asv_miss, asv_fa, asv_fa_spoof)
        if best is None or cost < best[0]:
            # report the largest score at or below the candidate, as the fast path does
            best = (cost, max((s for s in pooled if s <= c), default=-math.inf))
    # +inf candidate: reject everything
    reject_all = _cascade_cost(costs, 1.0, 0.0, asv_miss, asv_fa, asv_fa_spoof)
    if reject_all < best[0]:
        best = (reject_all, max(list(cm_bona) + list(cm_spoof)))
    accept_all = _cascade_cost(costs, 0.0, 1.0, asv_miss, asv_fa, asv_fa_spoof)
    default = min(accept_all, reject_all)
    if not default > 0:
        raise DegenerateNormalizer("both trivial countermeasures cost nothing")
    return best[0] / default, best[1]


def monte_carlo_tandem_cost(cm_bona, cm_spoof, asv_target, asv_nontarget, asv_spoof,
                            cm_threshold, asv_threshold, costs=Costs(), n=200_000, seed=0):
    """Simulated cascade cost: (estimate, standard error).

    Each simulated trial draws a CM score and an ASV score independently from
    the class's score lists, then applies the cascade decision.
    """
    rng = np.random.default_rng(seed)
    bona, spoof = np.asarray(cm_bona), np.asarray(cm_spoof)
    est, var = 0.0, 0.0
    for weight, cm_pool, asv_pool, count_accept in (
        (costs.pi_tar * costs.c_miss, bona, np.asarray(asv_target), False),
        (costs.pi_non * costs.c_fa, bona, np.asarray(asv_nontarget), True),
        (costs.pi_spoof * costs.c_fa_spoof, spoof, np.asarray(asv_spoof), True),
    ):
        cm_draw = rng.choice(cm_pool, n)
        asv_draw = rng.choice(asv_pool, n)
        accepted = (cm_draw > cm_threshold) & (asv_draw > asv_threshold)
        rate = accepted.mean() if count_accept else 1.0 - accepted.mean()
        est += weight * rate
        var += weight * weight * rate * (1 - rate) / n
    return est, math.sqrt(var)


# --- embeddings ------------------------------------------------------------

def brute_cosine(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def _matvec(matrix, v):
    return [sum(w * x for w, x in zip(row, v)) for row in matrix]


def brute_system_cosine(converted, reference_by_speaker, matrix=None):
    """``converted`` is a list of (speaker, vector); references are grouped by speaker."""
    refs = {}
    for spk, vecs in reference_by_speaker.items():
        if matrix is not None:
            vecs = [_matvec(matrix, v) for v in vecs]
        refs[spk] = [sum(col) / len(vecs) for col in zip(*vecs)]
    sims = []
    for spk, v in converted:
        if matrix is not None:
            v = _matvec(matrix, v)
        sims.append(brute_cosine(v, refs[spk]))
    return sum(sims) / len(sims)


# --- fixture generation ----------------------------------------------------

DEFAULT_DISTS = {
    # label -> (location, scale)
    "natural_target": (3.0, 1.0),
    "natural_nontarget": (-1.0, 1.0),
    "genuine": (3.0, 1.0),
    "converted_target": (1.0, 1.2),
    "converted_source": (-0.5, 1.0),
    "cm_bona": (2.0, 1.0),
    "cm_spoof": (-1.0, 1.0),
}

WORDS = ("the", "cat", "sat", "on", "mat", "a", "dog", "ran", "far", "away", "red", "sun")


@dataclass
class FixtureSpec:
    teams: int = 20
    utterances: int = 40
    seed: int = 0
    dists: Dict[str, Tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_DISTS))
    speakers: Dict[str, str] = field(default_factory=lambda: {"TEF1": "F", "TGM1": "G", "TMF1": "M"})
    embedding_dim: int = 12
    projection_dim: Optional[int] = 6
    tasks: Tuple[str, ...] = ("task1", "task2")
    languages: bool = True
    mos_tags: Tuple[str, ...] = ("vcc18", "asvspoof19")
    subjective: bool = True

    def __post_init__(self):
        # partial distribution maps override the defaults
        self.dists = {**DEFAULT_DISTS, **{k: tuple(v) for k, v in self.dists.items()}}

    def validate(self):
        if self.teams <= 0 or self.utterances <= 0:
            raise InvalidSpec("teams and utterances must be positive")
        if not self.speakers:
            raise InvalidSpec("need at least one target speaker")
        for key in DEFAULT_DISTS:
            loc, scale = self.dists.get(key, (None, None))
            if loc is None or not scale >= 0:
                raise InvalidSpec(f"bad distribution for {key!r}")
        if self.projection_dim is not None and not 0 < self.projection_dim <= self.embedding_dim:
            raise InvalidSpec("projection_dim must be in (0, embedding_dim]")
        return self

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown fixture keys {sorted(unknown)}")
        for key in ("tasks", "mos_tags"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return cls(**doc).validate()


def _num(x):
    """Round to 4 decimals so the written text and the in-memory value agree."""
    return float(f"{x:.4f}")


def _write(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(line + "\n" for line in lines))


def _rating(kind, metrics, rng, bias):
    """Synthetic listener score loosely driven by the objective metrics."""
    if kind == "SIM":
        base = 1.0 + 0.05 * metrics["asv_eer_pct"]
    else:
        mos = [v for k, v in sorted(metrics.items()) if k.startswith("mosnet_")]
        base = 4.0 - 0.02 * metrics["asr_wer_pct"] + 0.3 * ((mos[0] if mos else 3.0) - 3.0)
    return round(base + bias + rng.gauss(0, 0.15), 3)


def generate_fixture(spec: FixtureSpec, out_dir):
    """Write a synthetic campaign under ``out_dir``.

    Produces score / embedding / transcript / MOS files, ``manifest.json`` and
    ``expected.json`` (oracle-computed metrics per task and team, plus
    per-language rows when ``languages`` is set). Returns ``(manifest_path,
    expected)``. Same spec and seed give byte-identical files.
    """
    spec.validate()
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(spec.seed)
    nrng = np.random.default_rng(spec.seed)
    speakers = sorted(spec.speakers)
    teams = [f"T{i + 1:02d}" for i in range(spec.teams)]
    u = spec.utterances
    files = {}
    costs = Costs()
    expected = {"tasks": {}, "language_rows": {}}

    def draw(key, shift=0.0, spread=1.0):
        loc, scale = spec.dists[key]
        return _num(rng.gauss(loc + shift, scale * spread))

    def emit(name, lines):
        _write(os.path.join(out_dir, name), lines)
        files[name[:-4]] = name

    matrix = None
    if spec.projection_dim is not None:
        matrix = [[_num(nrng.normal()) for _ in range(spec.embedding_dim)] for _ in range(spec.projection_dim)]
        emit("lda.txt", [" ".join(f"{v:.4f}" for v in row) for row in matrix])
    centers = {s: [float(v) for v in nrng.normal(size=spec.embedding_dim)] for s in speakers}

    manifest_tasks = []
    subjective = {"ENG": {}, "JPN": {}}
    subjective_lang = {"ENG": {}, "JPN": {}}
    for task in spec.tasks:
        # shared material: natural calibration, genuine target tests, bona fide CM, references
        natural = []
        nat_tar, nat_non = [], []
        for s in speakers:
            for k in range(u):
                v = draw("natural_target")
                natural.append((s, f"{s}_nat{k:03d}", "target", v))
                nat_tar.append(v)
                v = draw("natural_nontarget")
                natural.append((s, f"{s}_imp{k:03d}", "nontarget", v))
                nat_non.append(v)
        emit(f"{task}_natural.txt", [f"{a} {b} {c} {d:.4f}" for a, b, c, d in natural])
        genuine = [(s, f"{s}_gen{k:03d}", draw("genuine")) for s in speakers for k in range(u)]
        emit(f"{task}_genuine.txt", [f"{s} {utt} target {v:.4f}" for s, utt, v in genuine])
        bona = [(s, f"{s}_bona{k:03d}", draw("cm_bona")) for s in speakers for k in range(u)]
        emit(f"{task}_cm_bona.txt", [f"{s} {utt} target {v:.4f}" for s, utt, v in bona])
        refs = {s: [[_num(c + nrng.normal(scale=0.3)) for c in centers[s]] for _ in range(4)] for s in speakers}
        emit(f"{task}_ref_emb.txt", [f"{s}_ref{k} " + " ".join(f"{x:.4f}" for x in vec)
                                     for s in speakers for k, vec in enumerate(refs[s])])
        shared = {"natural": f"{task}_natural", "genuine": f"{task}_genuine", "cm_bona": f"{task}_cm_bona",
                  "reference_embeddings": f"{task}_ref_emb"}
        if matrix is not None:
            shared["lda_matrix"] = "lda"

        team_inputs = {}
        task_expected = {}
        lang_expected = {}
        for t_idx, team in enumerate(teams):
            quality = rng.uniform(-2.0, 2.0)
            conv_t, conv_s, spoof, embs, trans, mos = [], [], [], [], [], {tag: [] for tag in spec.mos_tags}
            for s in speakers:
                for k in range(u):
                    utt = f"{s}_{team}_{k:03d}"
                    conv_t.append((s, utt, draw("converted_target", shift=quality)))
                    conv_s.append((f"SRC{k % 4}", utt, draw("converted_source", shift=-0.3 * quality)))
                    spoof.append((s, utt, draw("cm_spoof", shift=0.5 * quality)))
                    noise = 0.4 + 0.2 * (2.0 - quality)
                    embs.append((s, utt, [_num(c + nrng.normal(scale=noise)) for c in centers[s]]))
                    ref_words = [rng.choice(WORDS) for _ in range(rng.randint(3, 6))]
                    hyp_words = list(ref_words)
                    err_p = 0.05 + 0.05 * (2.0 - quality)
                    for pos in range(len(hyp_words)):
                        if rng.random() < err_p:
                            hyp_words[pos] = rng.choice(WORDS)
                    if rng.random() < err_p and len(hyp_words) > 1:
                        del hyp_words[rng.randrange(len(hyp_words))]
                    if rng.random() < err_p:
                        hyp_words.insert(rng.randrange(len(hyp_words) + 1), rng.choice(WORDS))
                    trans.append((s, utt, ref_words, hyp_words))
                    for tag in spec.mos_tags:
                        mos[tag].append((s, utt, _num(min(5.0, max(1.0, rng.gauss(3.2 + 0.3 * quality, 0.4))))))
            emit(f"{task}_{team}_asv_tgt.txt", [f"{a} {b} converted {c:.4f}" for a, b, c in conv_t])
            emit(f"{task}_{team}_asv_src.txt", [f"{a} {b} converted {c:.4f}" for a, b, c in conv_s])
            emit(f"{task}_{team}_cm_spoof.txt", [f"{a} {b} spoof {c:.4f}" for a, b, c in spoof])
            emit(f"{task}_{team}_emb.txt", [f"{utt} " + " ".join(f"{x:.4f}" for x in vec) for _, utt, vec in embs])
            emit(f"{task}_{team}_asr.txt", [f"{utt} | {' '.join(r)} | {' '.join(h)}" for _, utt, r, h in trans])
            roles = {"asv_converted_target": f"{task}_{team}_asv_tgt", "asv_converted_source": f"{task}_{team}_asv_src",
                     "cm_spoof": f"{task}_{team}_cm_spoof", "embeddings": f"{task}_{team}_emb",
                     "transcripts": f"{task}_{team}_asr", "mos": {}}
            for tag in spec.mos_tags:
                emit(f"{task}_{team}_mos_{tag}.txt", [f"{utt} {v:.4f}" for _, utt, v in mos[tag]])
                roles["mos"][tag] = f"{task}_{team}_mos_{tag}"
            team_inputs[team] = roles

            def oracle_metrics(keep):
                ct = [v for s, _, v in conv_t if keep(s)]
                cs = [v for _, utt, v in conv_s if keep(utt.split("_")[0])]
                gen = [v for s, _, v in genuine if keep(s)]
                sp = [v for s, _, v in spoof if keep(s)]
                _, tau = brute_eer_threshold(nat_tar, nat_non)
                row = {
                    "asv_eer_pct": 100.0 * brute_eer(gen, ct),
                    "pfa_tar_pct": 100.0 * brute_rate_above(ct, tau),
                    "pmiss_src_pct": 100.0 * brute_rate_at_or_below(cs, tau),
                    "cm_eer_pct": 100.0 * brute_eer([v for _, _, v in bona], sp),
                    "cosine": brute_system_cosine([(s, vec) for s, _, vec in embs if keep(s)], refs, matrix),
                    "asr_wer_pct": brute_wer([(r, h) for s, _, r, h in trans if keep(s)]),
                }
                try:
                    row["min_tdcf_norm"] = brute_min_tdcf([v for _, _, v in bona], sp, nat_tar, nat_non, ct, costs)[0]
                except DegenerateNormalizer:
                    # the campaign reports this cell as a diagnostic
                    row["min_tdcf_norm"] = None
                for tag in spec.mos_tags:
                    vals = [v for s, _, v in mos[tag] if keep(s)]
                    row[f"mosnet_{tag}"] = sum(vals) / len(vals)
                return row

            task_expected[team] = oracle_metrics(lambda s: True)
            if spec.languages:
                for code in sorted(set(spec.speakers.values())):
                    members = {s for s, c in spec.speakers.items() if c == code}
                    lang_expected.setdefault(team, {})[code] = oracle_metrics(lambda s, m=members: s in m)

        expected["tasks"][task] = task_expected
        if lang_expected:
            expected["language_rows"][task] = lang_expected
        manifest_tasks.append({"task_id": task, "shared": shared, "teams": team_inputs})

        if spec.subjective:
            for group, bias in (("ENG", 0.0), ("JPN", 0.1)):
                subjective[group][task] = {
                    rating: {t: _rating(rating, m, rng, bias) for t, m in task_expected.items()}
                    for rating in ("MOS", "SIM")
                }
                if lang_expected:
                    per = {"MOS": {}, "SIM": {}}
                    for team, by_code in lang_expected.items():
                        for code, m in by_code.items():
                            for rating in per:
                                per[rating].setdefault(code, {})[team] = _rating(rating, m, rng, bias)
                    subjective_lang[group][task] = per

    manifest = {
        "team_ids": teams,
        "files": {k: v for k, v in sorted(files.items())},
        "tasks": manifest_tasks,
    }
    if spec.languages:
        manifest["language_of_target"] = dict(sorted(spec.speakers.items()))
    if spec.subjective:
        manifest["subjective_scores"] = subjective
        if spec.languages:
            manifest["subjective_scores_by_language"] = subjective_lang
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "expected.json"), "w", encoding="utf-8") as fh:
        json.dump(expected, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "fixture_spec.json"), "w", encoding="utf-8") as fh:
        json.dump(asdict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path, expected
