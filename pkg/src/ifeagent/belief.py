"""Categorical beliefs encoded as softmax brain states."""

import numpy as np

from ifeagent.world import circular_distance


def softmax(b):
    """Decode brain state(s) into belief(s) along the last axis.

    The max entry is subtracted first, so long gradient runs that push the
    brain state to large magnitudes do not overflow.
    """
    b = np.asarray(b, dtype=float)
    if not np.all(np.isfinite(b)):
        raise ValueError("brain state has non-finite entries")
    e = np.exp(b - b.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(b):
    b = np.asarray(b, dtype=float)
    shifted = b - b.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def kl_divergence(q, p):
    """KL(q || p) in nats. Infinite if q puts mass where p has none."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != p.shape:
        raise ValueError(f"shape mismatch: {q.shape} vs {p.shape}")
    support = q > 0
    if np.any(p[support] == 0):
        return np.inf
    return float(np.sum(q[support] * np.log(q[support] / p[support])))


def entropy(q):
    q = np.asarray(q, dtype=float)
    nz = q[q > 0]
    return float(-np.sum(nz * np.log(nz)))


def intention_from_target(n, target, sharpness):
    """Intention brain state ``-sharpness * d(psi, target)``.

    Zero sharpness gives the null brain, i.e. no positional preference.
    """
    if not 0 <= target < n:
        raise ValueError(f"target={target} outside [0, {n})")
    if sharpness < 0:
        raise ValueError(f"sharpness must be non-negative, got {sharpness}")
    d = circular_distance(n, np.arange(n), target)
    return -float(sharpness) * d.astype(float) + 0.0
