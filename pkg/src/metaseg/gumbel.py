"""Gumbel-softmax sampling.

Randomness comes from numpy's ``Generator`` with the PCG64 bit generator,
seeded directly from the integer seed.  Reimplementations are expected to
agree statistically, not bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyLogits, NonPositiveTemperature

EPS = 1e-12


@dataclass(frozen=True)
class GumbelSample:
    relaxed: np.ndarray
    hard_index: int
    temperature: float


def _check(logits, temperature):
    logits = np.asarray(logits, dtype=np.float64)
    if logits.shape[-1] == 0 or logits.size == 0:
        raise EmptyLogits("need at least one logit")
    if not temperature > 0:
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature}")
    return logits


def gumbel_noise(rng: np.random.Generator, shape) -> np.ndarray:
    u = np.clip(rng.random(shape), EPS, 1.0 - EPS)
    return -np.log(-np.log(u))


def _relax(logits, noise, temperature):
    y = (logits + noise) / temperature
    y = y - y.max(axis=-1, keepdims=True)
    e = np.exp(y)
    return e / e.sum(axis=-1, keepdims=True)


def gumbel_softmax(logits, temperature: float, rng_seed: int) -> GumbelSample:
    logits = _check(logits, temperature)
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    g = gumbel_noise(rng, logits.shape)
    relaxed = _relax(logits, g, temperature)
    # argmax of the perturbed logits, unaffected by softmax underflow at tiny tau
    hard = int(np.argmax(logits + g))
    return GumbelSample(relaxed, hard, float(temperature))


def sample_many(logits, temperature: float, draws: int, seed: int):
    """Vectorised draws from one generator: ``(relaxed[draws, K], hard[draws])``."""
    logits = _check(logits, temperature)
    rng = np.random.Generator(np.random.PCG64(seed))
    g = gumbel_noise(rng, (draws, logits.shape[-1]))
    relaxed = _relax(logits, g, temperature)
    return relaxed, np.argmax(logits + g, axis=-1)


def straight_through(sample: GumbelSample):
    """Return ``(forward, surrogate)``: the one-hot value and the soft sample it stands in for.

    Under straight-through estimation the forward pass uses ``forward`` while
    gradients are taken through ``surrogate``.
    """
    forward = np.zeros_like(sample.relaxed)
    forward[sample.hard_index] = 1.0
    return forward, sample.relaxed
