"""Belief updating: gradient descent on free energy, and the exact Bayes filter."""

from dataclasses import dataclass

import numpy as np

from ifeagent import ife
from ifeagent.world import likelihood, transition_matrix


@dataclass(frozen=True)
class OptimiserConfig:
    eta: float = 0.1
    iterations: int = 50
    # start each descent from the previous brain state instead of the null brain
    warm_start: bool = False

    def __post_init__(self):
        if not self.eta >= 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError(f"iterations must be a positive integer, got {self.iterations}")


def optimise(cfg, opt, b, s, a, callback=None):
    """Minimise F(b', b, s, a) over b' by fixed-step gradient descent.

    Starts from the zero vector (or from ``b`` when ``opt.warm_start``) and
    takes exactly ``opt.iterations`` steps. ``callback(i, b_next)`` is invoked
    with the start point (i=0) and after every step.
    """
    b = np.asarray(b, dtype=float)
    log_joint = ife._safe_log(ife.generative_joint(cfg, b, s, a).joint)
    b_next = b.copy() if opt.warm_start else np.zeros_like(b)
    if callback is not None:
        callback(0, b_next)
    for i in range(1, opt.iterations + 1):
        b_next = b_next - opt.eta * ife.grad_from_log_joint(b_next, log_joint)
        if callback is not None:
            callback(i, b_next)
    return b_next


def approximate_trace(cfg, opt, b_init, observations):
    """Brain states produced by repeated ``optimise`` over an (s, a) sequence."""
    b = np.asarray(b_init, dtype=float)
    out = []
    for s, a in observations:
        b = optimise(cfg, opt, b, s, a)
        out.append(b)
    return out


def exact_filter_step(cfg, prior, s, a):
    """Condition on ``s`` at the current position, then predict through action ``a``."""
    unnorm = transition_matrix(cfg, a) @ (likelihood(cfg, s) * np.asarray(prior, dtype=float))
    z = unnorm.sum()
    if not z > 0:
        raise ValueError("sensation has zero probability under the prior")
    return unnorm / z


def filter_trace(cfg, init, observations):
    belief = np.asarray(init, dtype=float)
    out = []
    for s, a in observations:
        belief = exact_filter_step(cfg, belief, s, a)
        out.append(belief)
    return out
