"""Objective terms of the contourlet deraining network as plain functions.

Nothing here computes gradients; these are reference values for checking a
training implementation or for scoring decompositions directly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, ShapeError
from .imagecore import as_image

__all__ = [
    "LossConfig",
    "charbonnier",
    "contourlet_loss",
    "adversarial_loss_value",
    "overall_loss",
    "error_map",
]


@dataclass(frozen=True)
class LossConfig:
    epsilon: float = 1e-3
    lambda1: float = 1e-3  # perceptual weight
    lambda2: float = 1e-4  # adversarial weight
    charbonnier_granularity: str = "per-level"

    def __post_init__(self):
        if min(self.epsilon, self.lambda1, self.lambda2) <= 0:
            raise ConfigError("epsilon, lambda1 and lambda2 must be positive")
        if self.charbonnier_granularity not in ("per-level", "per-subband"):
            raise ConfigError(
                f"unknown charbonnier granularity {self.charbonnier_granularity!r}")


def charbonnier(diff_sq_norm, epsilon):
    """``sqrt(diff_sq_norm + epsilon**2)`` for a squared norm."""
    if diff_sq_norm < 0:
        raise DomainError(f"squared norm must be non-negative, got {diff_sq_norm}")
    # hypot keeps the zero-difference case exactly equal to epsilon
    return math.hypot(math.sqrt(diff_sq_norm), epsilon)


def _sq(a, b):
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise ShapeError(f"band shape mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sum(d * d))


def contourlet_loss(pred, gt, cfg=None):
    """L2 distance of the bottom semantic bands plus Charbonnier MS terms.

    With the default ``per-level`` granularity each level contributes one
    Charbonnier term over all of its direction subbands; ``per-subband``
    charges every direction separately.
    """
    cfg = LossConfig() if cfg is None else cfg
    if len(pred.ms) != len(gt.ms) or any(len(p) != len(g) for p, g in zip(pred.ms, gt.ms)):
        raise ShapeError("decompositions differ in levels or direction count")
    terms = [math.sqrt(_sq(pred.ss, gt.ss))]
    for p_level, g_level in zip(pred.ms, gt.ms):
        sq = [_sq(p, g) for p, g in zip(p_level, g_level)]
        if cfg.charbonnier_granularity == "per-level":
            terms.append(charbonnier(math.fsum(sq), cfg.epsilon))
        else:
            terms.extend(charbonnier(s, cfg.epsilon) for s in sq)
    return math.fsum(terms)


def adversarial_loss_value(d_real, d_fake):
    """``log D(real) + log(1 - D(fake))`` for discriminator outputs in (0, 1)."""
    if not (0 < d_real < 1 and 0 < d_fake < 1):
        raise DomainError(f"discriminator outputs must lie in (0, 1), got {d_real}, {d_fake}")
    return math.log(d_real) + math.log1p(-d_fake)


def overall_loss(l_c, l_perceptual, l_adv, cfg=None):
    cfg = LossConfig() if cfg is None else cfg
    return l_c + cfg.lambda1 * l_perceptual + cfg.lambda2 * l_adv


def error_map(input_img, gt):
    """Channel-mean absolute error and the input weighted by it.

    Returns ``(map, attentive)`` where ``map`` has one channel and
    ``attentive`` has the input's channel count.
    """
    x, y = as_image(input_img), as_image(gt)
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch: {x.shape} vs {y.shape}")
    emap = np.mean(np.abs(x - y), axis=2, keepdims=True)
    return emap, x * emap
