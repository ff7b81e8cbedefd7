"""The four experiments: passive and active traces, comparison against exact
inference, and location profiles over many runs."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ifeagent import ife
from ifeagent.agent import (
    Policy,
    StepRecord,
    Trace,
    attach_exact,
    run_batch,
    run_seed_sequence,
    simulate,
)
from ifeagent.belief import entropy, kl_divergence, softmax
from ifeagent.inference import filter_trace, optimise

PROFILE_SWEEP = (20, 50, 100)
COMPARE_SWEEP = (25, 50, 200)


@dataclass
class LocationProfile:
    iterations: int
    mean: np.ndarray
    std: np.ndarray
    # per-run visit frequencies, shape (runs, n)
    frequencies: np.ndarray


@dataclass
class Comparison:
    trace: Trace
    beliefs: dict
    exact: np.ndarray
    kl: dict
    entropy: dict
    exact_entropy: np.ndarray
    traces: dict


def run_passive(cfg):
    """Single trace of an agent with no positional preference."""
    agent = cfg.agent_config(passive=True)
    return attach_exact(simulate(cfg.world, agent, cfg.psi_init, cfg.steps, cfg.seed))


def run_active(cfg):
    """Single trace of an agent seeking its configured target."""
    agent = cfg.agent_config()
    return attach_exact(simulate(cfg.world, agent, cfg.psi_init, cfg.steps, cfg.seed))


def replay(world, agent, trace):
    """Re-run belief updating over ``trace``'s (s, a) sequence with ``agent``.

    Positions and actions are copied from ``trace``; beliefs and the chosen
    action's free energy are recomputed.
    """
    b = np.zeros(world.n) if trace.b_init is None else trace.b_init.copy()
    records = []
    for r in trace.records:
        f = ife.free_energy(world, agent.intention, b, r.s, r.a)
        b = optimise(world, agent.optimiser, b, r.s, r.a)
        records.append(StepRecord(r.t, r.psi_true, r.s, r.a, f, softmax(b)))
    return replace(trace, agent=agent, records=records)


def run_comparison(cfg):
    """Approximate inference at each sweep value vs the exact filter, on one
    random-walk (s, a) sequence."""
    sweep = tuple(cfg.sweep or COMPARE_SWEEP)
    base_agent = cfg.agent_config(iterations=sweep[0], policy=Policy.RANDOM, passive=True)
    base = simulate(cfg.world, base_agent, cfg.psi_init, cfg.steps, cfg.seed)
    exact = np.array(filter_trace(cfg.world, base.initial_belief(), base.observations()))
    traces, beliefs, kl, ent = {}, {}, {}, {}
    for k in sweep:
        agent = cfg.agent_config(iterations=k, policy=Policy.RANDOM, passive=True)
        tr = attach_exact(replay(cfg.world, agent, base))
        traces[k] = tr
        beliefs[k] = np.array([r.belief for r in tr.records])
        kl[k] = np.array([kl_divergence(q, p) for q, p in zip(beliefs[k], exact)])
        ent[k] = np.array([entropy(q) for q in beliefs[k]])
    return Comparison(
        trace=traces[sweep[0]],
        beliefs=beliefs,
        exact=exact,
        kl=kl,
        entropy=ent,
        exact_entropy=np.array([entropy(p) for p in exact]),
        traces=traces,
    )


def _profile_chunk(world, agent, master_seed, run_indices, steps):
    rngs = [np.random.default_rng(run_seed_sequence(master_seed, i)) for i in run_indices]
    out = run_batch(world, agent, None, rngs, steps, keep_beliefs=False)
    visits = out["psi"][:, :steps]
    return np.stack([np.bincount(v, minlength=world.n) for v in visits]) / steps


def run_frequencies(cfg, agent, workers=1):
    """Per-run visit frequencies, shape ``(runs, n)``, row i from run seed i.

    Runs are split into ``workers`` contiguous chunks; each chunk advances its
    runs in lockstep, and rows are reassembled by run index.
    """
    chunks = [c for c in np.array_split(np.arange(cfg.runs), workers) if len(c)]
    args = [(cfg.world, agent, cfg.seed, [int(i) for i in c], cfg.steps) for c in chunks]
    if workers == 1:
        parts = [_profile_chunk(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_profile_chunk, *zip(*args)))
    return np.concatenate(parts)


def run_profile(cfg, workers=None):
    """Location profile per sweep value; every sweep value reuses the same run seeds."""
    workers = cfg.workers if workers is None else workers
    profiles = {}
    for k in tuple(cfg.sweep or PROFILE_SWEEP):
        freq = run_frequencies(cfg, cfg.agent_config(iterations=k), workers)
        profiles[k] = LocationProfile(k, freq.mean(axis=0), freq.std(axis=0), freq)
    return profiles


def peak_cell(profile):
    return int(np.argmax(profile.mean))


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
