"""Independent reference computations used by the tests.

Everything here is built from the scalar probability queries in ``world`` with
explicit loops, never from the vectorised kernels it is used to check.
"""

import itertools
import math

import numpy as np

from ifeagent.world import transition_prob, sensation_prob


def softmax_loop(b):
    m = max(b)
    e = [math.exp(x - m) for x in b]
    z = math.fsum(e)
    return [x / z for x in e]


def brute_joint(cfg, prior, s, a):
    """p(psi', s | prior, a) summing over every (psi, psi') pair."""
    n = cfg.n
    return np.array([
        math.fsum(
            transition_prob(cfg, nxt, psi, a) * sensation_prob(cfg, s, psi) * prior[psi]
            for psi in range(n)
        )
        for nxt in range(n)
    ])


def brute_free_energy(q, joint):
    return math.fsum(qi * math.log(qi / pi) for qi, pi in zip(q, joint) if qi > 0)


def brute_energy(q, joint):
    return math.fsum(qi * math.log(pi) for qi, pi in zip(q, joint))


def brute_entropy(q):
    return -math.fsum(qi * math.log(qi) for qi in q if qi > 0)


def path_sum_posteriors(cfg, init, observations):
    """Filtering distributions by weighting every position trajectory.

    Element t is the distribution of the position after observations 0..t,
    obtained by enumerating all n**(t+2) trajectories.
    """
    n = cfg.n
    trans = {a: np.array([[transition_prob(cfg, j, i, a) for j in range(n)] for i in range(n)])
             for a in (-1, 1)}
    lik = {s: np.array([sensation_prob(cfg, s, i) for i in range(n)]) for s in (0, 1)}
    out = []
    for t in range(len(observations)):
        paths = np.array(list(itertools.product(range(n), repeat=t + 2)))
        w = np.asarray(init)[paths[:, 0]]
        for u, (s, a) in enumerate(observations[: t + 1]):
            w = w * lik[int(s)][paths[:, u]] * trans[int(a)][paths[:, u], paths[:, u + 1]]
        post = np.bincount(paths[:, -1], weights=w, minlength=n)
        out.append(post / post.sum())
    return out


def central_difference(f, x, h=1e-5):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for j in range(x.size):
        up, down = x.copy(), x.copy()
        up[j] += h
        down[j] -= h
        g[j] = (f(up) - f(down)) / (2 * h)
    return g
