"""Adaptive-windowing change detection and nonstationary multi-armed bandits.

Thin python surface over the C++ core: closed-form primitives, the ADWIN
detector, synthetic environments with change diagnostics, and the seeded
experiment runner.
"""

from nsmab._core import (
    AdwinDetector,
    ChangeRatio,
    DetectionReport,
    SyntheticEnv,
    epsilon_cut,
    generate_replay_log,
    global_change_ratio,
    gradual_ratio,
    kl_bernoulli,
    kl_ucb_index,
    regret_step,
    simulate,
    top_l,
)

__all__ = [
    "AdwinDetector",
    "ChangeRatio",
    "DetectionReport",
    "SyntheticEnv",
    "epsilon_cut",
    "generate_replay_log",
    "global_change_ratio",
    "gradual_ratio",
    "kl_bernoulli",
    "kl_ucb_index",
    "regret_step",
    "simulate",
    "top_l",
]
