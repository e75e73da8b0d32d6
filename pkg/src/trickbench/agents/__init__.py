from .common import (
    ReplayBuffer,
    Transition,
    clip_policy_gradient,
    compute_gae,
    global_grad_norm,
    kl_estimate,
    kl_estimate_from_logps,
    kl_stopping_check,
    lr_schedule,
    normalize_advantages,
    soft_update,
    warm_start_replay,
)
from .ppo import PpoAgent, PpoConfig, ppo_loss
from .sac import SacAgent, SacConfig
from .td3 import Td3Agent, Td3Config
from .trpo import TrpoAgent, TrpoConfig, conjugate_gradient, fisher_vector_product, trpo_update

ALGORITHMS = {
    "ppo": (PpoAgent, PpoConfig),
    "trpo": (TrpoAgent, TrpoConfig),
    "td3": (Td3Agent, Td3Config),
    "sac": (SacAgent, SacConfig),
}


def make_agent(algorithm, obs_dim, act_dim, algo_config, rng, init_scheme,
               input_normalization, total_env_steps):
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    agent_cls, _ = ALGORITHMS[algorithm]
    return agent_cls(obs_dim, act_dim, algo_config, rng,
                     init_scheme=init_scheme,
                     input_normalization=input_normalization,
                     total_env_steps=total_env_steps)
