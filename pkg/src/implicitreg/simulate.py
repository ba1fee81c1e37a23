"""Seeded generator for the inverse-law simulation.

Draws a latent t ~ Uniform(1, 10), forms the exact inverse pair
x = 200/t, y = 20 t (so x*y = 4000 identically), and perturbs both
coordinates with independent Gaussian noise of a common standard
deviation.

Reproducibility contract: the generator is numpy's default PCG64, and
the draw order is frozen as three contiguous blocks - t first, then the
x noise, then the y noise - so a given config yields the same dataset
bit for bit on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import Dataset


@dataclass(frozen=True)
class SimulationConfig:
    n: int = 50
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError("sigma must be finite and non-negative")


def generate(config: SimulationConfig) -> Dataset:
    """Generate one sample; deterministic for a fixed config.

    Negative coordinates can occur at large sigma and are kept: the noise
    model is unbounded Gaussian with no truncation.
    """
    rng = np.random.default_rng(config.seed)
    t = rng.uniform(1.0, 10.0, config.n)
    x_noise = rng.normal(0.0, config.sigma, config.n)
    y_noise = rng.normal(0.0, config.sigma, config.n)
    return Dataset(
        x_label="x",
        y_label="y",
        x=200.0 / t + x_noise,
        y=20.0 * t + y_noise,
    )
