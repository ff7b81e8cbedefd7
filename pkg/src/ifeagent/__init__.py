"""Minimal discrete-time free-energy agent on a periodic 1-D chemical gradient."""

from ifeagent.world import Action, Sensation, WorldConfig
from ifeagent.inference import OptimiserConfig
from ifeagent.agent import AgentConfig, Policy, Trace, simulate

__all__ = [
    "Action",
    "AgentConfig",
    "OptimiserConfig",
    "Policy",
    "Sensation",
    "Trace",
    "WorldConfig",
    "simulate",
]
