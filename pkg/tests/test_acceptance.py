"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line for each in
the terminal summary.
"""

from dataclasses import replace
from pathlib import Path
import time

import numpy as np
import pytest

from ifeagent import ife
from ifeagent.belief import entropy, kl_divergence, softmax
from ifeagent.harness import experiments as ex
from ifeagent.harness.cli import main
from ifeagent.harness.config import ExperimentConfig
from ifeagent.harness.output import write_profile_csv
from ifeagent.inference import approximate_trace, filter_trace
from ifeagent.world import WorldConfig

from oracles import central_difference, path_sum_posteriors

PAPER = WorldConfig()
DEFAULT = ExperimentConfig()


def criterion(label):
    def mark(fn):
        fn.criterion = label
        return fn
    return mark


def random_inputs(rng):
    return (rng.normal(scale=2.0, size=16), rng.normal(scale=2.0, size=16),
            int(rng.integers(2)), int(rng.choice([-1, 1])))


@pytest.fixture(scope="module")
def comparison_trace():
    """The fixed 100-step random-walk trace, with 2000 iterations added to the sweep."""
    return ex.run_comparison(replace(DEFAULT, steps=100, seed=0, sweep=(25, 50, 200, 2000)))


@pytest.fixture(scope="module")
def default_profile():
    start = time.perf_counter()
    profiles = ex.run_profile(DEFAULT, workers=1)
    return profiles, time.perf_counter() - start


@criterion("C1 gradient matches central differences (rel err < 1e-5, 100 draws)")
def test_c1_gradient_correctness():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        b_next, b, s, a = random_inputs(rng)
        g = ife.grad_free_energy(PAPER, b_next, b, s, a)
        fd = central_difference(lambda x: ife.free_energy(PAPER, x, b, s, a), b_next, h=1e-5)
        worst = max(worst, float(np.max(np.abs(g - fd) / np.abs(fd))))
    assert worst < 1e-5, worst


@criterion("C2 decomposition identities within 1e-10 and F >= surprisal (1000 draws)")
def test_c2_decomposition_identities():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        b_next, b, s, a = random_inputs(rng)
        F = ife.free_energy(PAPER, b_next, b, s, a)
        q = softmax(b_next)
        surprise = ife.surprisal(PAPER, b, s, a)
        assert abs(F - (-ife.energy(PAPER, b_next, b, s, a) - entropy(q))) < 1e-10
        assert abs(F - (kl_divergence(q, ife.exact_posterior(PAPER, b, s, a)) + surprise)) < 1e-10
        assert F >= surprise


@criterion("C3 exact filter equals path enumeration on n=8, T=5 (1e-10, < 1 s)")
def test_c3_oracle_equivalence():
    cfg = WorldConfig(n=8, psi0=4)
    rng = np.random.default_rng(3)
    init = rng.dirichlet(np.ones(8))
    obs = [(int(rng.integers(2)), int(rng.choice([-1, 1]))) for _ in range(5)]
    start = time.perf_counter()
    got = filter_trace(cfg, init, obs)
    want = path_sum_posteriors(cfg, init, obs)
    elapsed = time.perf_counter() - start
    for g, w in zip(got, want):
        assert np.max(np.abs(g - w)) < 1e-10
    assert len(got) == 5
    assert elapsed < 1.0, elapsed


@criterion("C4 KL to exact decreases over 25/50/200 iterations; 2000 iterations within TV 1e-3")
def test_c4_convergence_to_exact(comparison_trace):
    cmp = comparison_trace
    means = [float(cmp.kl[k].mean()) for k in (25, 50, 200)]
    assert means[0] > means[1] > means[2], means
    worst_tv = max(ex.total_variation(q, p) for q, p in zip(cmp.beliefs[2000], cmp.exact))
    assert worst_tv < 1e-3, f"max per-step TV at 2000 iterations = {worst_tv:.4g} (KL means {means})"


@criterion("C5 mean entropy at 25 iterations >= at 200 iterations")
def test_c5_uncertainty_bias(comparison_trace):
    assert comparison_trace.entropy[25].mean() >= comparison_trace.entropy[200].mean()


@criterion("C6 default profile: < 10 min, peaks within 1 cell of target, TV(20, 100) < 0.15")
def test_c6_task_performance(default_profile):
    profiles, elapsed = default_profile
    assert elapsed < 600, elapsed
    assert set(profiles) == {20, 50, 100}
    target, n = DEFAULT.agent.target, DEFAULT.world.n
    for prof in profiles.values():
        assert prof.frequencies.shape == (DEFAULT.runs, n)
        d = abs(ex.peak_cell(prof) - target)
        assert min(d, n - d) <= 1, (prof.iterations, ex.peak_cell(prof))
    assert ex.total_variation(profiles[20].mean, profiles[100].mean) < 0.15


@criterion("C7 reruns are byte-identical; parallel and serial profiles agree")
def test_c7_determinism(tmp_path, default_profile):
    for command in ("passive", "active", "compare"):
        dirs = [tmp_path / f"{command}{i}" for i in (1, 2)]
        for d in dirs:
            assert main([command, "--out", str(d)]) == 0
        first = {p.name: p.read_bytes() for p in dirs[0].iterdir()}
        second = {p.name: p.read_bytes() for p in dirs[1].iterdir()}
        assert first and first == second, command

    serial, _ = default_profile
    parallel = ex.run_profile(DEFAULT, workers=4)
    write_profile_csv(serial, tmp_path / "serial.csv")
    write_profile_csv(parallel, tmp_path / "parallel.csv")
    assert Path(tmp_path / "serial.csv").read_bytes() == Path(tmp_path / "parallel.csv").read_bytes()


@criterion("C8 chosen action never has higher free energy than the alternative")
def test_c8_action_optimality():
    checked = 0
    for seed in range(5):
        for trace in (ex.run_active(replace(DEFAULT, seed=seed)), ex.run_passive(replace(DEFAULT, seed=seed))):
            states = [np.zeros(16)] + approximate_trace(
                PAPER, trace.agent.optimiser, np.zeros(16), trace.observations()
            )
            for r, b in zip(trace.records, states):
                chosen = ife.free_energy(PAPER, trace.agent.intention, b, r.s, r.a)
                other = ife.free_energy(PAPER, trace.agent.intention, b, r.s, -r.a)
                assert chosen <= other, (seed, r.t)
                assert chosen == r.free_energy_chosen
                checked += 1
    assert checked == 10 * DEFAULT.steps
