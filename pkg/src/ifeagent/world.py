"""Periodic 1-D world with stochastic motion and a binary chemical sensor."""

from dataclasses import dataclass
from enum import IntEnum
import math

import numpy as np


class Action(IntEnum):
    ANTICLOCKWISE = -1
    CLOCKWISE = 1


class Sensation(IntEnum):
    LOW = 0
    HIGH = 1


ACTIONS = (Action.ANTICLOCKWISE, Action.CLOCKWISE)


@dataclass(frozen=True)
class WorldConfig:
    n: int = 16
    rho: float = 0.75
    omega: float = math.log(4) / 16
    k_max: float = 4 ** (-1 / 16)
    psi0: int = 8

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not self.omega >= 0.0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if not 0.0 < self.k_max <= 1.0:
            raise ValueError(f"k_max must lie in (0, 1], got {self.k_max}")
        if not 0 <= self.psi0 < self.n:
            raise ValueError(f"psi0 must lie in [0, {self.n}), got {self.psi0}")


def _check_cell(cfg, psi, name="psi"):
    if not 0 <= psi < cfg.n:
        raise ValueError(f"{name}={psi} outside [0, {cfg.n})")


def circular_distance(n, x, y):
    d = np.abs(np.asarray(x) - np.asarray(y)) % n
    return np.minimum(d, n - d)


def transition_prob(cfg, psi_next, psi, a):
    _check_cell(cfg, psi_next, "psi_next")
    _check_cell(cfg, psi, "psi")
    a = Action(a)
    if psi_next == psi:
        return 1.0 - cfg.rho
    if psi_next == (psi + a) % cfg.n:
        return cfg.rho
    return 0.0


def transition_matrix(cfg, a):
    """Dense ``T[psi_next, psi]`` for action ``a``."""
    a = Action(a)
    eye = np.eye(cfg.n)
    return (1.0 - cfg.rho) * eye + cfg.rho * np.roll(eye, a, axis=0)


def high_prob(cfg):
    """P(High | psi) for every cell, as a length-n array."""
    d = circular_distance(cfg.n, np.arange(cfg.n), cfg.psi0)
    return cfg.k_max * np.exp(-cfg.omega * d)


def likelihood(cfg, s):
    """P(s | psi) for every cell."""
    h = high_prob(cfg)
    return h if Sensation(s) == Sensation.HIGH else 1.0 - h


def sensation_prob(cfg, s, psi):
    _check_cell(cfg, psi)
    return float(likelihood(cfg, s)[psi])


def step_world(cfg, psi, a, rng):
    """Sample the next position. Consumes exactly one uniform draw."""
    moved = rng.random() < cfg.rho
    return int((psi + Action(a)) % cfg.n) if moved else int(psi)


def sample_sensation(cfg, psi, rng):
    """Sample a sensor reading. Consumes exactly one uniform draw."""
    return Sensation.HIGH if rng.random() < high_prob(cfg)[psi] else Sensation.LOW


def pre_set(cfg, psi_next, a):
    """Cells from which ``psi_next`` is reachable under action ``a``."""
    _check_cell(cfg, psi_next, "psi_next")
    a = Action(a)
    cells = set()
    if cfg.rho < 1.0:
        cells.add(psi_next)
    if cfg.rho > 0.0:
        cells.add((psi_next - a) % cfg.n)
    return cells
