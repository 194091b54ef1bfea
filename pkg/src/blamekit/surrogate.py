"""Local linear surrogate attribution (LIME-style comparator).

Fits a distance-weighted linear model to detector scores on Gaussian
perturbations around the observation; the scaled absolute coefficients
then pass through the usual blame normalization. This is the
model-agnostic stand-in the evaluation harness compares IG against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attribution import blame
from .detector import Detector
from .errors import InputError


@dataclass
class SurrogateConfig:
    samples: int = 200
    sigma: float = 0.1         # perturbation scale per dimension
    kernel_width: float = 0.5  # exponential kernel over L2 distance
    seed: int = 0


def surrogate_coefficients(det: Detector, x_norm: np.ndarray,
                           cfg: SurrogateConfig) -> np.ndarray:
    """Weighted ridge fit of score vs perturbation; returns slope per dim."""
    x_norm = np.asarray(x_norm, dtype=float)
    dims = len(x_norm)
    if cfg.samples < 10 * dims:
        raise InputError(f"need at least {10 * dims} samples for D={dims}, got {cfg.samples}")

    rng = np.random.default_rng(cfg.seed)
    z = rng.normal(0.0, cfg.sigma, size=(cfg.samples, dims))
    scores = det.score_normalized(x_norm + z)

    d2 = np.sum(z * z, axis=1)
    w = np.exp(-d2 / (cfg.kernel_width ** 2))

    # weighted ridge solve on the centered design; lambda keeps the
    # system nonsingular even under degenerate sampling
    design = np.hstack([np.ones((cfg.samples, 1)), z])
    a = design.T @ (w[:, None] * design) + 1e-6 * np.eye(dims + 1)
    b = design.T @ (w * scores)
    coef = np.linalg.solve(a, b)
    return coef[1:]


def surrogate_attribution(det: Detector, x_norm: np.ndarray,
                          cfg: SurrogateConfig | None = None) -> np.ndarray:
    """Blame vector from the local surrogate; deterministic per seed."""
    if cfg is None:
        cfg = SurrogateConfig()
    coef = surrogate_coefficients(det, x_norm, cfg)
    return blame(np.abs(coef) * cfg.sigma)
