"""Multimodal baseline (exemplar) selection and nearest-baseline lookup.

The exemplar set is built in three steps: keep training points the
detector scores as nearly normal, cluster them with DBSCAN under L2,
then draw up to n points per cluster at random. The nearest exemplar
(L1 or L2) then serves as the contrastive baseline for an anomaly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from . import clustering
from .detector import Detector
from .errors import EmptyBaselineError, ShapeError

log = logging.getLogger(__name__)

METRICS = ("L1", "L2")


def dissimilarity(x, y, metric: str = "L2") -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ShapeError(f"width mismatch: {x.shape} vs {y.shape}")
    if metric == "L1":
        return float(np.sum(np.abs(x - y)))
    if metric == "L2":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")


@dataclass
class ExemplarSet:
    points: np.ndarray        # (K, D), normalized space
    clusters: np.ndarray      # (K,) cluster id per exemplar
    scores: np.ndarray        # (K,) detector score per exemplar
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.clusters = np.asarray(self.clusters, dtype=int)
        self.scores = np.asarray(self.scores, dtype=float)
        if not (len(self.points) == len(self.clusters) == len(self.scores)):
            raise ShapeError("points, clusters and scores must align")

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "exemplars": [
                {"x": p.tolist(), "cluster": int(c), "score": float(s)}
                for p, c, s in zip(self.points, self.clusters, self.scores)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExemplarSet":
        ex = d["exemplars"]
        return cls(
            np.array([e["x"] for e in ex], dtype=float),
            np.array([e["cluster"] for e in ex], dtype=int),
            np.array([e["score"] for e in ex], dtype=float),
            dict(d.get("params", {})),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "ExemplarSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def select_baseline(
    x_norm: np.ndarray,
    det: Detector,
    n: int = 5,
    epsilon: float = 0.1,
    eps: float | None = None,
    min_pts: int | None = None,
    seed: int = 0,
) -> ExemplarSet:
    """Build the exemplar set from normalized training rows.

    Candidates are rows with score > 1 - epsilon; DBSCAN noise points are
    dropped. If every candidate lands in noise the whole candidate set is
    treated as one cluster (logged as a fallback) so the pipeline can
    still produce a baseline.
    """
    x_norm = np.atleast_2d(np.asarray(x_norm, dtype=float))
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")

    scores = det.score_normalized(x_norm)
    mask = scores > 1.0 - epsilon
    candidates = x_norm[mask]
    cand_scores = scores[mask]
    if len(candidates) == 0:
        raise EmptyBaselineError(
            f"no training point scores above {1.0 - epsilon:.4g}; "
            "the detector rejects everything"
        )

    if eps is None:
        eps = clustering.default_eps(x_norm.shape[1])
    if min_pts is None:
        min_pts = clustering.default_min_pts(len(candidates))

    labels = clustering.dbscan(candidates, eps, min_pts)
    fallback = bool(np.all(labels == clustering.NOISE))
    if fallback:
        log.warning(
            "all %d baseline candidates were DBSCAN noise; "
            "treating them as a single cluster", len(candidates),
        )
        labels = np.zeros(len(candidates), dtype=int)

    rng = np.random.default_rng(seed)
    keep = []
    for cluster in np.unique(labels):
        if cluster == clustering.NOISE:
            continue
        members = np.flatnonzero(labels == cluster)
        if len(members) > n:
            members = rng.choice(members, size=n, replace=False)
        keep.extend(int(i) for i in sorted(members))

    keep = np.array(keep, dtype=int)
    return ExemplarSet(
        candidates[keep],
        labels[keep],
        cand_scores[keep],
        params={
            "n": n,
            "epsilon": epsilon,
            "dbscan_eps": float(eps),
            "dbscan_min_pts": int(min_pts),
            "seed": seed,
            "n_candidates": int(len(candidates)),
            "fallback_single_cluster": fallback,
        },
    )


def naive_baseline(x_norm: np.ndarray, det: Detector, size: int) -> ExemplarSet:
    """Comparison mode: just take the `size` highest-scoring points.

    Kept to show why clustering matters; dense modes crowd out sparse
    ones at matched sample size.
    """
    x_norm = np.atleast_2d(np.asarray(x_norm, dtype=float))
    scores = det.score_normalized(x_norm)
    top = np.argsort(-scores, kind="stable")[:size]
    return ExemplarSet(
        x_norm[top],
        np.zeros(len(top), dtype=int),
        scores[top],
        params={"mode": "naive_top_score", "size": int(size)},
    )


def nearest_exemplar(x: np.ndarray, ex: ExemplarSet, metric: str = "L2"):
    """Closest exemplar to x under the metric; ties break to lowest index."""
    if len(ex) == 0:
        raise EmptyBaselineError("exemplar set is empty")
    x = np.asarray(x, dtype=float)
    if x.shape != (ex.points.shape[1],):
        raise ShapeError(f"expected width {ex.points.shape[1]}, got {x.shape}")
    diff = ex.points - x
    if metric == "L1":
        dists = np.sum(np.abs(diff), axis=1)
    elif metric == "L2":
        dists = np.sqrt(np.sum(diff * diff, axis=1))
    else:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    best = int(np.argmin(dists))  # argmin returns the first minimum
    return ex.points[best].copy(), float(dists[best])
