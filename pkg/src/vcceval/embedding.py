"""Speaker-embedding averaging, linear projection and cosine scoring."""
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptySet, ZeroNormVector
from .score_io import Embedding

_ROUNDING_SLACK = 1e-12


def _vec(e):
    return e.vector if isinstance(e, Embedding) else np.asarray(e, dtype=np.float64)


def average_embeddings(embeddings: Sequence, utt_id="mean") -> Embedding:
    if len(embeddings) == 0:
        raise EmptySet("cannot average an empty set of embeddings")
    vecs = [_vec(e) for e in embeddings]
    dim = vecs[0].shape[0]
    if any(v.shape != (dim,) for v in vecs):
        raise DimensionMismatch("embeddings differ in dimension")
    return Embedding(utt_id, np.mean(np.vstack(vecs), axis=0))


def lda_project(e, matrix) -> Embedding:
    """Apply a (k x d) projection matrix to a d-dim embedding."""
    m = np.asarray(matrix, dtype=np.float64)
    v = _vec(e)
    if m.ndim != 2 or m.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"matrix shape {m.shape} incompatible with dimension {v.shape[0]}")
    if m.shape[0] > m.shape[1]:
        raise DimensionMismatch("projection must not increase dimension")
    return Embedding(getattr(e, "utt_id", ""), m @ v)


def cosine_similarity(a, b) -> float:
    va, vb = _vec(a), _vec(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimensions {va.shape[0]} and {vb.shape[0]} differ")
    sa, sb = np.max(np.abs(va), initial=0.0), np.max(np.abs(vb), initial=0.0)
    if sa == 0.0 or sb == 0.0:
        raise ZeroNormVector("cosine similarity needs non-zero vectors")
    # rescale against overflow; one sqrt keeps cos(a, a) == 1 exactly
    va, vb = va / sa, vb / sb
    c = float(np.dot(va, vb) / np.sqrt(np.dot(va, va) * np.dot(vb, vb)))
    if abs(c) > 1.0:
        if abs(c) - 1.0 >= _ROUNDING_SLACK:  # pragma: no cover - would be a numpy bug
            raise ArithmeticError(f"cosine {c} outside [-1, 1]")
        c = 1.0 if c > 0 else -1.0
    return c


def system_cosine(converted: Sequence, reference: Sequence, matrix: Optional[np.ndarray] = None) -> float:
    """Mean cosine between each converted embedding and the averaged reference."""
    if len(converted) == 0:
        raise EmptySet("no converted embeddings")
    if matrix is not None:
        converted = [lda_project(e, matrix) for e in converted]
        reference = [lda_project(e, matrix) for e in reference]
    ref = average_embeddings(reference)
    return float(np.mean([cosine_similarity(c, ref) for c in converted]))
