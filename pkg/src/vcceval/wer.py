"""Word error rate from minimum edit-distance alignments (HResults-style counts)."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import EmptyCorpus, EmptyReference


@dataclass(frozen=True)
class AlignmentCounts:
    substitutions: int
    deletions: int
    insertions: int
    reference_words: int

    @property
    def errors(self):
        return self.substitutions + self.deletions + self.insertions

    def __add__(self, other):
        return AlignmentCounts(
            self.substitutions + other.substitutions,
            self.deletions + other.deletions,
            self.insertions + other.insertions,
            self.reference_words + other.reference_words,
        )


def _encode(vocab, tokens):
    return [vocab.setdefault(t, len(vocab)) for t in tokens]


def align(reference: Sequence[str], hypothesis: Sequence[str]) -> AlignmentCounts:
    """Count S/D/I of a minimum-cost alignment.

    Unit costs. Among equal-cost alignments, fewer insertions win, then fewer
    deletions.
    """
    if len(reference) == 0:
        raise EmptyReference("")
    vocab = {}
    s, d, i = _kernels.align_counts(_encode(vocab, reference), _encode(vocab, hypothesis))
    return AlignmentCounts(s, d, i, len(reference))


def align_corpus(pairs):
    """Per-pair counts for a list of TranscriptPair, aligned in one kernel call."""
    vocab = {}
    ref_flat, hyp_flat = [], []
    ref_off, hyp_off = [0], [0]
    for p in pairs:
        if not p.reference:
            raise EmptyReference(p.utt_id)
        ref_flat += _encode(vocab, p.reference)
        hyp_flat += _encode(vocab, p.hypothesis)
        ref_off.append(len(ref_flat))
        hyp_off.append(len(hyp_flat))
    counts = _kernels.align_many(
        np.asarray(ref_flat, dtype=np.int64), np.asarray(ref_off, dtype=np.int64),
        np.asarray(hyp_flat, dtype=np.int64), np.asarray(hyp_off, dtype=np.int64),
    )
    return [
        AlignmentCounts(int(s), int(d), int(i), len(p.reference))
        for (s, d, i), p in zip(counts, pairs)
    ]


def wer(pairs, per_utterance=False) -> float:
    """Corpus WER in percent: 100 * (S + D + I) / N with counts pooled.

    ``per_utterance=True`` averages the per-pair WERs instead. Values above 100
    are legitimate and not clamped.
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("no transcript pairs")
    counts = align_corpus(pairs)
    if per_utterance:
        return float(np.mean([100.0 * c.errors / c.reference_words for c in counts]))
    total = sum(counts[1:], counts[0])
    return 100.0 * total.errors / total.reference_words
