"""Inverse-distance-weighted soft-label nearest-neighbor rule.

A query point is scored by summing the label vectors of its k nearest
prototypes, each divided by its Euclidean distance to the query. The
predicted class is the argmax of that score vector; the reported
confidence is the gap between the two largest scores, which shrinks to
zero on decision boundaries. A query that lands on a prototype takes that
prototype's own class with infinite confidence, matching the limit of the
inverse weighting as the distance goes to zero.

All operations are pure and read-only over an immutable PrototypeSet.
Batch evaluation partitions work internally but produces results that are
bit-identical to evaluating each point on its own.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import COINCIDENT_TOL, PrototypeSet

# Cap on rows*prototypes of the distance matrix built per internal block.
# Small enough that per-block temporaries stay cache-resident.
_BLOCK_ENTRIES = 1 << 17


@dataclass(frozen=True, eq=False)
class Classification:
    """Outcome of classifying one point.

    ``scores`` is the per-class sum of inverse-distance-weighted label
    weights. ``confidence`` is scores[top1] - scores[top2] for two or more
    classes and +inf for a single class or an exact prototype hit. On an
    exact hit ``scores`` holds the struck prototype's own label vector.
    """

    scores: np.ndarray
    predicted: int
    confidence: float
    exact_hit: bool


def _check_query_args(pset: PrototypeSet, k: int, pts: np.ndarray) -> None:
    m = len(pset)
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"k must be an integer, got {k!r}")
    if not 1 <= k <= m:
        raise ValueError(f"k={k} out of range for {m} prototypes")
    if pts.ndim != 2 or pts.shape[1] != pset.dim:
        raise ValueError(f"query points must have dimension {pset.dim}, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("query points must be finite")


def evaluate_points(
    pset: PrototypeSet, k: int, points
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized scoring of many points at once.

    Returns ``(scores, predicted, confidence, exact_hit)`` with shapes
    (n, num_classes), (n,), (n,), (n,). Distance ties are broken by
    prototype index (stable sort), argmax ties by lowest class index.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    n = pts.shape[0]
    if n == 0:
        return (
            np.empty((0, pset.num_classes)),
            np.empty(0, dtype=int),
            np.empty(0),
            np.empty(0, dtype=bool),
        )
    _check_query_args(pset, k, pts)

    pos = pset.positions
    labs = pset.labels
    m, ncls = labs.shape
    scores = np.empty((n, ncls))
    predicted = np.empty(n, dtype=int)
    confidence = np.empty(n)
    exact = np.empty(n, dtype=bool)

    block = max(1, _BLOCK_ENTRIES // max(m, 1))
    for start in range(0, n, block):
        chunk = pts[start : start + block]
        dist = np.zeros((len(chunk), m))
        for d in range(pts.shape[1]):
            delta = chunk[:, d, None] - pos[None, :, d]
            dist += delta * delta
        np.sqrt(dist, out=dist)
        # Exact-hit rows divide by zero below; their scores are replaced after.
        if k == m:
            # All prototypes contribute, so no distance ordering is needed;
            # labels are accumulated in prototype-index order.
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1.0 / dist
                sc = np.zeros((len(chunk), ncls))
                for i in range(m):
                    sc += labs[i] * inv[:, i, None]
            nearest = dist.argmin(axis=1)
            nearest_dist = np.take_along_axis(dist, nearest[:, None], axis=1)[:, 0]
        else:
            order = np.argsort(dist, axis=1, kind="stable")[:, :k]
            dk = np.take_along_axis(dist, order, axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1.0 / dk
                sc = np.zeros((len(chunk), ncls))
                for i in range(k):
                    sc += labs[order[:, i]] * inv[:, i, None]
            nearest = order[:, 0]
            nearest_dist = dk[:, 0]
        hit = nearest_dist < COINCIDENT_TOL
        if hit.any():
            sc[hit] = labs[nearest[hit]]
        pred = sc.argmax(axis=1)
        if ncls >= 2:
            top2 = np.partition(sc, ncls - 2, axis=1)[:, ncls - 2 :]
            conf = np.abs(top2[:, 1] - top2[:, 0])
        else:
            conf = np.full(len(chunk), np.inf)
        conf[hit] = np.inf
        sl = slice(start, start + len(chunk))
        scores[sl] = sc
        predicted[sl] = pred
        confidence[sl] = conf
        exact[sl] = hit
    return scores, predicted, confidence, exact


def classify(pset: PrototypeSet, k: int, x) -> Classification:
    """Classify a single point; see the module docstring for the rule."""
    scores, predicted, confidence, exact = evaluate_points(pset, k, np.asarray(x, dtype=float))
    out = scores[0]
    out.flags.writeable = False
    return Classification(
        scores=out,
        predicted=int(predicted[0]),
        confidence=float(confidence[0]),
        exact_hit=bool(exact[0]),
    )


def score_vector(pset: PrototypeSet, k: int, x) -> np.ndarray:
    """The raw per-class score vector for one point, without argmax.

    On an exact prototype hit this returns that prototype's label vector,
    the finite representative of the diverging inverse-distance sum.
    """
    scores, _, _, _ = evaluate_points(pset, k, np.asarray(x, dtype=float))
    out = scores[0]
    out.flags.writeable = False
    return out


def classify_batch(pset: PrototypeSet, k: int, points) -> list[Classification]:
    """Classify many points; output order matches input order."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return []
    scores, predicted, confidence, exact = evaluate_points(pset, k, pts)
    results = []
    for i in range(len(predicted)):
        row = scores[i]
        row.flags.writeable = False
        results.append(
            Classification(
                scores=row,
                predicted=int(predicted[i]),
                confidence=float(confidence[i]),
                exact_hit=bool(exact[i]),
            )
        )
    return results
