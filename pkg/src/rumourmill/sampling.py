"""Temperature sampling over positive weight vectors.

A draw picks index i with probability w_i^(1/T) / sum_j w_j^(1/T).
Computed in log space so extreme temperatures neither overflow nor
underflow; as T tends to 0 the mass collapses onto the argmax.
"""

from __future__ import annotations

import math
import random
from typing import List, Sequence

from rumourmill.errors import EmptyWeights, NonPositiveTemperature, NonPositiveWeight


def _check(weights: Sequence[float], temperature: float) -> None:
    if len(weights) == 0:
        raise EmptyWeights("weight vector is empty")
    if temperature <= 0.0:
        raise NonPositiveTemperature(f"temperature {temperature} must be > 0")
    for w in weights:
        if w <= 0.0:
            raise NonPositiveWeight(f"weight {w} must be > 0")


def temperature_probabilities(weights: Sequence[float], temperature: float) -> List[float]:
    """The normalized sampling distribution for the given temperature."""
    _check(weights, temperature)
    inv = 1.0 / temperature
    logits = [math.log(w) * inv for w in weights]
    top = max(logits)
    raw = [math.exp(l - top) for l in logits]
    total = sum(raw)
    return [r / total for r in raw]


def temperature_sample(weights: Sequence[float], temperature: float, rng: random.Random) -> int:
    """Draw one index from the temperature-reshaped distribution."""
    _check(weights, temperature)
    n = len(weights)
    if n == 1:
        return 0
    inv = 1.0 / temperature
    logits = [math.log(w) * inv for w in weights]
    top = max(logits)
    raw = [math.exp(l - top) for l in logits]
    r = rng.random() * sum(raw)
    acc = 0.0
    for i in range(n - 1):
        acc += raw[i]
        if r < acc:
            return i
    return n - 1


def distribution_entropy(probabilities: Sequence[float]) -> float:
    """Shannon entropy in nats; zero-probability entries contribute nothing."""
    return -sum(p * math.log(p) for p in probabilities if p > 0.0)
