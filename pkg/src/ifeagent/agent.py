"""The closed sensorimotor loop of the free-energy agent."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from ifeagent import ife
from ifeagent.belief import softmax
from ifeagent.inference import OptimiserConfig, filter_trace, optimise
from ifeagent.world import Action, Sensation, WorldConfig, high_prob


class Policy(str, Enum):
    ACTIVE = "active"
    RANDOM = "random"


@dataclass(frozen=True)
class AgentConfig:
    intention: np.ndarray
    optimiser: OptimiserConfig = field(default_factory=OptimiserConfig)
    policy: Policy = Policy.ACTIVE

    def __post_init__(self):
        b_star = np.asarray(self.intention, dtype=float)
        if b_star.ndim != 1 or not np.all(np.isfinite(b_star)):
            raise ValueError("intention must be a finite 1-D brain state")
        object.__setattr__(self, "intention", b_star)
        object.__setattr__(self, "policy", Policy(self.policy))


@dataclass
class StepRecord:
    t: int
    psi_true: int
    s: Sensation
    a: Action
    free_energy_chosen: float
    # belief over the position *after* this step's move
    belief: np.ndarray
    exact: Optional[np.ndarray] = None


@dataclass
class Trace:
    world: WorldConfig
    agent: AgentConfig
    seed: int
    records: list
    b_init: Optional[np.ndarray] = None

    def observations(self):
        return [(r.s, r.a) for r in self.records]

    def initial_belief(self):
        n = self.world.n
        return softmax(np.zeros(n) if self.b_init is None else self.b_init)


def run_seed_sequence(master_seed, run_index):
    """Per-run seed material: SeedSequence(master, spawn_key=(run_index,))."""
    return np.random.SeedSequence(master_seed, spawn_key=(run_index,))


def action_free_energies(cfg, agent, b, s):
    """F(b*, b, s, a) for a = -1 and a = +1, in that order."""
    b = np.asarray(b, dtype=float)
    out = []
    for a in (Action.ANTICLOCKWISE, Action.CLOCKWISE):
        joint = ife.generative_joint(cfg, b, s, np.full(b.shape[:-1], int(a))).joint
        out.append(ife._free_energy_from_joint(agent.intention, joint))
    return out


def select_action(cfg, agent, b, s):
    """Free-energy-minimising action against the intention; ties go to -1."""
    f_minus, f_plus = action_free_energies(cfg, agent, b, s)
    return Action.ANTICLOCKWISE if f_minus <= f_plus else Action.CLOCKWISE


def run_batch(cfg, agent, psi_init, rngs, steps, b_init=None, keep_beliefs=True):
    """Advance ``len(rngs)`` independent agents in lockstep.

    Each agent draws from its own generator, in the per-step order
    sensation, [random action], motion. Returns a dict of arrays with a
    leading run axis: ``psi`` has ``steps + 1`` columns (final position
    included), ``s``/``a``/``F`` have ``steps``, ``belief`` is
    ``(runs, steps, n)`` when requested. With ``psi_init=None`` every agent
    first draws its start cell uniformly from its own generator.
    """
    runs, n = len(rngs), cfg.n
    if agent.intention.shape != (n,):
        raise ValueError(f"intention has length {agent.intention.shape[0]}, world has {n} cells")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = high_prob(cfg)
    psi = np.empty((runs, steps + 1), dtype=np.int64)
    if psi_init is None:
        psi[:, 0] = [rng.integers(n) for rng in rngs]
    else:
        psi[:, 0] = psi_init
    sens = np.empty((runs, steps), dtype=np.int64)
    acts = np.empty((runs, steps), dtype=np.int64)
    f_chosen = np.empty((runs, steps))
    beliefs = np.empty((runs, steps, n)) if keep_beliefs else None
    b = np.zeros((runs, n)) if b_init is None else np.tile(np.asarray(b_init, dtype=float), (runs, 1))

    for t in range(steps):
        cur = psi[:, t]
        s = np.array([int(rng.random() < h[p]) for rng, p in zip(rngs, cur)])
        f_minus, f_plus = action_free_energies(cfg, agent, b, s)
        if agent.policy is Policy.ACTIVE:
            a = np.where(f_minus <= f_plus, -1, 1)
        else:
            a = np.array([1 if rng.integers(2) else -1 for rng in rngs])
        b = optimise(cfg, agent.optimiser, b, s, a)
        moved = np.array([rng.random() < cfg.rho for rng in rngs])
        psi[:, t + 1] = np.where(moved, (cur + a) % n, cur)
        sens[:, t] = s
        acts[:, t] = a
        f_chosen[:, t] = np.where(a == -1, f_minus, f_plus)
        if keep_beliefs:
            beliefs[:, t] = softmax(b)
    return {"psi": psi, "s": sens, "a": acts, "F": f_chosen, "belief": beliefs}


def simulate(cfg, agent, psi_init, steps, seed, b_init=None):
    """Run one agent for ``steps`` steps with a PCG64 generator seeded by ``seed``."""
    if psi_init is not None and not 0 <= psi_init < cfg.n:
        raise ValueError(f"psi_init={psi_init} outside [0, {cfg.n})")
    rng = np.random.default_rng(seed)
    out = run_batch(cfg, agent, None if psi_init is None else [psi_init], [rng], steps, b_init=b_init)
    return trace_from_batch(cfg, agent, out, 0, seed, b_init)


def trace_from_batch(cfg, agent, out, row, seed, b_init=None):
    records = [
        StepRecord(
            t=t,
            psi_true=int(out["psi"][row, t]),
            s=Sensation(int(out["s"][row, t])),
            a=Action(int(out["a"][row, t])),
            free_energy_chosen=float(out["F"][row, t]),
            belief=out["belief"][row, t].copy(),
        )
        for t in range(out["s"].shape[1])
    ]
    b0 = None if b_init is None else np.asarray(b_init, dtype=float)
    return Trace(world=cfg, agent=agent, seed=seed, records=records, b_init=b0)


def attach_exact(trace, cfg=None):
    """Copy of ``trace`` with the exact filter posterior filled in per step."""
    cfg = trace.world if cfg is None else cfg
    exact = filter_trace(cfg, trace.initial_belief(), trace.observations())
    records = [replace(r, exact=e) for r, e in zip(trace.records, exact)]
    return replace(trace, records=records)
