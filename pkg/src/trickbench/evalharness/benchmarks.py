"""Named benchmark experiment configurations.

These are the canonical multi-seed runs the acceptance checks and the
shipped scripts refer to. Each entry is a zero-argument factory so callers
always get a fresh config object.

The TD3 initialization-scheme comparison runs at a reduced scale (smaller
networks, one gradient update per environment step, shorter training) so a
three-scheme, ten-seed grid stays tractable on a single workstation core;
the TD3 balance benchmark keeps the full-size defaults.
"""

from __future__ import annotations

from ..agents.ppo import PpoConfig
from ..agents.td3 import Td3Config
from ..agents.trpo import TrpoConfig
from .config import ExperimentConfig


def _ppo(**toggles) -> ExperimentConfig:
    return ExperimentConfig(
        algorithm="ppo", env="cartpole-swingup", seeds=list(range(10)),
        episodes=300, eval_interval=10, eval_episodes=10, init="lecun",
        input_normalization=True, algo=PpoConfig(**toggles))


def ppo_plain() -> ExperimentConfig:
    """PPO with every adaptive-learning technique disabled."""
    return _ppo()


def ppo_lrs_an() -> ExperimentConfig:
    """PPO with learning-rate schedule and advantage normalization."""
    return _ppo(lrs=True, adv_norm=True)


def ppo_lrs_an_klcut() -> ExperimentConfig:
    """LRS + AN plus the quadratic KL-cutoff penalty."""
    return _ppo(lrs=True, adv_norm=True, kl_cutoff=True)


def trpo_swingup() -> ExperimentConfig:
    return ExperimentConfig(
        algorithm="trpo", env="cartpole-swingup", seeds=list(range(10)),
        episodes=100, eval_interval=20, eval_episodes=10, init="lecun",
        input_normalization=True, algo=TrpoConfig())


def td3_balance() -> ExperimentConfig:
    """Full-size TD3 on the easy balance task (smoke benchmark)."""
    return ExperimentConfig(
        algorithm="td3", env="cartpole-balance", seeds=list(range(10)),
        episodes=150, eval_interval=5, eval_episodes=10, init="lecun",
        input_normalization=False, algo=Td3Config())


def _td3_swingup(scheme: str) -> ExperimentConfig:
    algo = Td3Config(hidden=(64, 64), update_steps=1, warm_start=5000)
    return ExperimentConfig(
        algorithm="td3", env="cartpole-swingup", seeds=list(range(10)),
        episodes=100, eval_interval=10, eval_episodes=10, init=scheme,
        input_normalization=False, algo=algo)


def td3_swingup_lecun() -> ExperimentConfig:
    return _td3_swingup("lecun")


def td3_swingup_kaiming() -> ExperimentConfig:
    return _td3_swingup("kaiming")


def td3_swingup_orthogonal() -> ExperimentConfig:
    return _td3_swingup("orthogonal")


BENCHMARKS = {
    "ppo_plain": ppo_plain,
    "ppo_lrs_an": ppo_lrs_an,
    "ppo_lrs_an_klcut": ppo_lrs_an_klcut,
    "trpo_swingup": trpo_swingup,
    "td3_balance": td3_balance,
    "td3_swingup_lecun": td3_swingup_lecun,
    "td3_swingup_kaiming": td3_swingup_kaiming,
    "td3_swingup_orthogonal": td3_swingup_orthogonal,
}
