"""Experiment configuration as flat dotted keys.

A config file holds one ``key = value`` per line; ``#`` starts a comment.
Every key can also be given on the command line as ``--key value``.
"""

from dataclasses import dataclass, field, replace
import math
from typing import Optional

import numpy as np

from ifeagent.agent import AgentConfig, Policy
from ifeagent.belief import intention_from_target
from ifeagent.inference import OptimiserConfig
from ifeagent.world import WorldConfig


class ConfigError(ValueError):
    pass


def _bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _optional_int(text):
    return None if text.strip().lower() in ("", "none", "random") else int(text)


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise ValueError(f"seed must fit in 64 bits unsigned, got {v}")
    return v


# key -> (section, attribute, parser)
KEYS = {
    "world.n": ("world", "n", int),
    "world.rho": ("world", "rho", float),
    "world.omega": ("world", "omega", float),
    "world.k_max": ("world", "k_max", float),
    "world.psi0": ("world", "psi0", int),
    "agent.eta": ("agent", "eta", float),
    "agent.iterations": ("agent", "iterations", int),
    "agent.target": ("agent", "target", int),
    "agent.sharpness": ("agent", "sharpness", float),
    "agent.intention": ("agent", "intention", _float_list),
    "agent.warm_start": ("agent", "warm_start", _bool),
    "steps": (None, "steps", int),
    "runs": (None, "runs", int),
    "seed": (None, "seed", _u64),
    "sweep": (None, "sweep", _int_list),
    "psi_init": (None, "psi_init", _optional_int),
    "workers": (None, "workers", int),
    "out": (None, "out", str),
}


@dataclass(frozen=True)
class AgentSettings:
    eta: float = 0.1
    iterations: int = 100
    target: int = 2
    sharpness: float = 1.0
    # explicit intention vector; overrides target/sharpness when set
    intention: Optional[tuple] = None
    warm_start: bool = False

    def intention_vector(self, n):
        if self.intention is not None:
            if len(self.intention) != n:
                raise ConfigError(f"agent.intention has {len(self.intention)} entries, world has {n} cells")
            return np.array(self.intention, dtype=float)
        return intention_from_target(n, self.target, self.sharpness)


@dataclass(frozen=True)
class ExperimentConfig:
    world: WorldConfig = field(default_factory=WorldConfig)
    agent: AgentSettings = field(default_factory=AgentSettings)
    steps: int = 500
    runs: int = 300
    seed: int = 0
    sweep: Optional[tuple] = None
    psi_init: Optional[int] = None
    workers: int = 1
    out: str = "."

    def agent_config(self, *, iterations=None, policy=Policy.ACTIVE, passive=False):
        n = self.world.n
        intention = np.zeros(n) if passive else self.agent.intention_vector(n)
        opt = OptimiserConfig(
            eta=self.agent.eta,
            iterations=self.agent.iterations if iterations is None else iterations,
            warm_start=self.agent.warm_start,
        )
        return AgentConfig(intention=intention, optimiser=opt, policy=policy)

    def validate(self):
        """Raise ``ConfigError`` on any out-of-range value."""
        try:
            n = self.world.n
            if self.steps < 1 or self.runs < 1 or self.workers < 1:
                raise ValueError("steps, runs and workers must be >= 1")
            if self.sweep is not None and (not self.sweep or min(self.sweep) < 1):
                raise ValueError("sweep entries must be >= 1")
            if self.psi_init is not None and not 0 <= self.psi_init < n:
                raise ValueError(f"psi_init={self.psi_init} outside [0, {n})")
            self.agent_config()
        except ValueError as e:
            raise ConfigError(str(e)) from e
        return self


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into a raw ``{key: string}`` dict."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        raw[key] = value.strip()
    return raw


def load_config_file(path):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}") from e
    return parse_config_text(text, source=str(path))


def build_config(raw, base=None):
    """Apply raw string settings on top of ``base`` (defaults if omitted)."""
    cfg = ExperimentConfig() if base is None else base
    world, agent, top = {}, {}, {}
    for key, value in raw.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        section, attr, parse = KEYS[key]
        try:
            parsed = parse(value)
        except ValueError as e:
            raise ConfigError(f"{key}: {e}") from e
        if isinstance(parsed, float) and not math.isfinite(parsed):
            raise ConfigError(f"{key}: must be finite")
        {"world": world, "agent": agent, None: top}[section][attr] = parsed
    try:
        new_world = replace(cfg.world, **world)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    cfg = replace(cfg, world=new_world, agent=replace(cfg.agent, **agent), **top)
    return cfg.validate()


def as_flat_dict(cfg):
    """Flat key/value view, used for logging the effective configuration."""
    out = {}
    for key, (section, attr, _) in KEYS.items():
        holder = cfg if section is None else getattr(cfg, section)
        out[key] = getattr(holder, attr)
    return out

