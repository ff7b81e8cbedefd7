"""Informational free energy of a softmax belief against the agent's generative model.

Every function accepts brain states of shape ``(n,)`` or ``(batch, n)``; the
sensation and action then broadcast against the leading axes. Row results do
not depend on what else is in the batch.
"""

from dataclasses import dataclass

import numpy as np

from ifeagent.belief import log_softmax, softmax
from ifeagent.world import high_prob

LOG_FLOOR = 1e-300


@dataclass
class GenerativeSlice:
    joint: np.ndarray
    marginal: np.ndarray

    def __post_init__(self):
        if self.marginal.ndim == 0:
            self.marginal = float(self.marginal)


def _safe_log(x):
    return np.log(np.maximum(x, LOG_FLOOR))


def _likelihood_rows(cfg, s):
    h = high_prob(cfg)
    s = np.asarray(s)[..., None]
    return np.where(s == 1, h, 1.0 - h)


def _from_predecessor(w, a):
    """Entry psi' of the result is ``w[psi' - a]``."""
    a = np.asarray(a)[..., None]
    return np.where(a == 1, np.roll(w, 1, axis=-1), np.roll(w, -1, axis=-1))


def generative_joint(cfg, b, s, a):
    """``p(psi', s | b, a)`` for every ``psi'`` plus its marginal ``p(s | b, a)``.

    Only the two predecessors of each cell (stay, or arrive from ``psi' - a``)
    contribute, so this costs O(n).
    """
    w = _likelihood_rows(cfg, s) * softmax(b)
    joint = (1.0 - cfg.rho) * w + cfg.rho * _from_predecessor(w, a)
    return GenerativeSlice(joint, joint.sum(axis=-1))


def prediction(cfg, b, a):
    """Predicted next-position prior ``sum_psi P(psi'|psi,a) q(psi|b)``."""
    p = softmax(b)
    return (1.0 - cfg.rho) * p + cfg.rho * _from_predecessor(p, a)


def exact_posterior(cfg, b, s, a):
    g = generative_joint(cfg, b, s, a)
    marginal = np.asarray(g.marginal)
    if np.any(marginal <= 0):
        raise ValueError("sensation has zero probability under the model")
    return g.joint / marginal[..., None]


def surprisal(cfg, b, s, a):
    return -np.log(generative_joint(cfg, b, s, a).marginal)


def _ordered_sum(terms):
    # sorting first makes the result depend only on the multiset of terms,
    # so mirror-image configurations produce bit-identical free energies
    return np.sort(terms, axis=-1).sum(axis=-1)


def _result(x):
    return float(x) if np.ndim(x) == 0 else x


def free_energy(cfg, b_next, b, s, a):
    """F(b', b, s, a) in nats; ``inf`` where the model gives a cell zero mass."""
    return _result(_free_energy_from_joint(b_next, generative_joint(cfg, b, s, a).joint))


def _free_energy_from_joint(b_next, joint):
    q = softmax(b_next)
    terms = q * (log_softmax(b_next) - _safe_log(joint))
    F = _ordered_sum(terms)
    impossible = np.any((joint == 0) & (q > 0), axis=-1)
    return np.where(impossible, np.inf, F)


def energy(cfg, b_next, b, s, a):
    """Expected log joint ``sum_psi' q(psi'|b') ln p(psi', s | b, a)``."""
    q = softmax(b_next)
    joint = generative_joint(cfg, b, s, a).joint
    return _result((q * _safe_log(joint)).sum(axis=-1))


def grad_free_energy(cfg, b_next, b, s, a):
    """Gradient of F with respect to the brain state ``b'``."""
    return grad_from_log_joint(b_next, _safe_log(generative_joint(cfg, b, s, a).joint))


def grad_from_log_joint(b_next, log_joint):
    """Softmax-chain-rule gradient, with the generative side precomputed.

    dF/db'_j = sum_psi' q_psi' (delta_psi'j - q_j) (1 + ln q_psi' - ln p_psi')
             = g_j - q_j * sum(g),   g = q (1 + ln q - ln p)
    """
    q = softmax(b_next)
    g = q * (1.0 + log_softmax(b_next) - log_joint)
    return g - q * g.sum(axis=-1, keepdims=True)
