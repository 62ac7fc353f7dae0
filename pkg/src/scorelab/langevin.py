"""Unadjusted Langevin dynamics and the annealed variant over a decreasing
noise schedule.

The noisy targets are exact Gaussian-smoothed mixtures, so the sampler
isolates the behaviour of the annealing procedure itself from score
estimation error.  High noise first disperses particles across components
with the correct proportions; the decreasing levels then sharpen each
component locally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mixture import GaussianMixture1D, score, smooth
from .numerics import RngStream
from .svgd import ParticleEnsemble


@dataclass(frozen=True)
class NoiseSchedule:
    """Noise widths in annealing order (largest first), with per-level budget.

    `base_step` is the Langevin step at the final (smallest) level; earlier
    levels use base_step * (sigma_j / sigma_final)^2 so the step tracks the
    scale of the smoothed target.
    """

    sigmas: tuple[float, ...]
    steps_per_level: int
    base_step: float

    def __post_init__(self):
        sigmas = tuple(float(s) for s in self.sigmas)
        if not sigmas or any(s <= 0 for s in sigmas):
            raise ValueError("noise levels must be positive")
        if any(b >= a for a, b in zip(sigmas, sigmas[1:])):
            raise ValueError("noise levels must be strictly decreasing")
        if self.steps_per_level < 1:
            raise ValueError("steps_per_level must be >= 1")
        if self.base_step <= 0:
            raise ValueError("base_step must be positive")
        object.__setattr__(self, "sigmas", sigmas)

    def step_at(self, level: int) -> float:
        return self.base_step * (self.sigmas[level] / self.sigmas[-1]) ** 2


def geometric_schedule(
    sigma_max: float = 8.0,
    sigma_min: float = 0.5,
    levels: int = 8,
    steps_per_level: int = 200,
    base_step: float = 0.01,
) -> NoiseSchedule:
    """Geometrically spaced noise levels from sigma_max down to sigma_min."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels == 1:
        sigmas = (float(sigma_max),)
    else:
        sigmas = tuple(np.geomspace(sigma_max, sigma_min, levels))
    return NoiseSchedule(sigmas, steps_per_level, base_step)


def langevin_step(x, score_value, eps: float, rng: RngStream):
    """One unadjusted update x + (eps/2) * score + sqrt(eps) * noise.

    Vectorized: x and score_value may be arrays of matching shape, in which
    case one noise draw per entry is consumed from the stream.
    """
    if eps <= 0:
        raise ValueError(f"step size must be positive, got {eps}")
    x = np.asarray(x, dtype=float)
    noise = rng.standard_normal(x.shape if x.ndim else None)
    return x + 0.5 * eps * np.asarray(score_value, dtype=float) + np.sqrt(eps) * noise


def noisy_score(target: GaussianMixture1D, sigma_j: float, x):
    """Score of the target smoothed with N(0, sigma_j^2) noise, in closed form."""
    if sigma_j <= 0:
        raise ValueError(f"sigma_j must be positive, got {sigma_j}")
    return score(smooth(target, sigma_j), x)


def annealed_langevin_run(
    n_particles: int,
    target: GaussianMixture1D,
    sched: NoiseSchedule,
    rng: RngStream,
    init: np.ndarray | None = None,
    observer=None,
) -> ParticleEnsemble:
    """Langevin sampling through the noise levels, largest to smallest.

    Particles start from N(target mean, sigma_max^2) unless an explicit init
    vector is supplied.  At level j the particles follow the score of the
    sigma_j-smoothed target for `steps_per_level` steps with the schedule's
    level step.  `observer(level, sigma, step, positions)` is called after
    every step when provided.
    """
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    if init is None:
        x = target.mean() + sched.sigmas[0] * rng.standard_normal(n_particles)
    else:
        x = np.asarray(init, dtype=float).copy()
        if x.shape != (n_particles,):
            raise ValueError(f"init must have shape ({n_particles},), got {x.shape}")

    total_steps = 0
    for level, sigma_j in enumerate(sched.sigmas):
        noisy = smooth(target, sigma_j)
        eps = sched.step_at(level)
        for step in range(sched.steps_per_level):
            x = langevin_step(x, score(noisy, x), eps, rng)
            bad = np.flatnonzero(~np.isfinite(x))
            if bad.size:
                raise FloatingPointError(
                    f"non-finite particle {int(bad[0])} at level {level}, step {step}"
                )
            total_steps += 1
            if observer is not None:
                observer(level, sigma_j, step, x)
    return ParticleEnsemble(x, total_steps)
