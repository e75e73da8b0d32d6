"""TD3: twin critics, target policy smoothing, delayed actor updates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..initschemes import InitScheme, init_mlp
from ..numcore import (
    SeededRng,
    Tensor,
    adam_init,
    adam_step,
    concat,
    mlp_forward,
    mlp_forward_np,
    tmean,
)
from ..policies import build_deterministic_policy
from ..runnorm import RunningStats, normalize_state, welford_update
from .common import ReplayBuffer, soft_update, warm_start_replay


@dataclass
class Td3Config:
    learning_rate: float = 1e-3
    tau: float = 5e-3
    batch_size: int = 100
    update_steps: int = 5
    gamma: float = 0.99
    exploration_noise: float = 0.1
    target_noise: float = 0.2
    noise_clip: float = 0.5
    policy_freq: int = 2
    warm_start: int = 10000
    memory_size: int = 1_000_000
    hidden: tuple = (400, 300)


def td3_targets(rewards, next_q_min, dones, gamma):
    """Bootstrapped target y = r + gamma * (1 - done) * min(Q1', Q2')."""
    return rewards + gamma * (1.0 - dones) * next_q_min


class Td3Agent:
    def __init__(self, obs_dim, act_dim, config: Td3Config, rng: SeededRng,
                 init_scheme: InitScheme, input_normalization: bool,
                 total_env_steps: int = 0):
        self.config = config
        self.obs_dim, self.act_dim = obs_dim, act_dim
        cr = rng.derive("critic")
        self.actor = build_deterministic_policy(
            obs_dim, act_dim, init_scheme, rng.derive("actor"),
            hidden=config.hidden, exploration_std=config.exploration_noise)
        self.critic1 = init_mlp((obs_dim + act_dim, *config.hidden, 1), "relu",
                                init_scheme, cr.derive("q1"))
        self.critic2 = init_mlp((obs_dim + act_dim, *config.hidden, 1), "relu",
                                init_scheme, cr.derive("q2"))
        self.actor_target = self.actor.net.copy()
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.actor_opt = adam_init(self.actor.net, config.learning_rate)
        self.critic1_opt = adam_init(self.critic1, config.learning_rate)
        self.critic2_opt = adam_init(self.critic2, config.learning_rate)
        self.buffer = ReplayBuffer(config.memory_size, obs_dim, act_dim)
        self.explore_rng = rng.derive("explore")
        self.sample_rng = rng.derive("sample")
        self.target_noise_rng = rng.derive("target_noise")
        self.normalize = input_normalization
        self.stats = RunningStats(obs_dim) if input_normalization else None
        self.critic_updates = 0
        self.diagnostics = []

    # -- normalization helpers (raw states stay in the buffer) --------------

    def _norm(self, obs):
        if self.stats is None:
            return np.asarray(obs, dtype=np.float64)
        return normalize_state(self.stats, obs)

    def _track(self, obs):
        if self.stats is not None:
            welford_update(self.stats, obs)

    def warm_start(self, env, rng: SeededRng):
        """Fill the buffer with uniform-action transitions before learning."""
        warm_start_replay(env, self.buffer, self.config.warm_start, rng,
                          on_transition=self._track)

    # -- acting -------------------------------------------------------------

    def act(self, obs):
        self._track(obs)
        return self.actor.act_np(self._norm(obs), rng=self.explore_rng,
                                 explore=True)

    def eval_act(self, obs):
        return self.actor.act_np(self._norm(obs), explore=False)

    # -- learning -----------------------------------------------------------

    def observe(self, obs, action, reward, next_obs, done):
        self.buffer.add(obs, action, reward, next_obs, done)
        for _ in range(self.config.update_steps):
            self.update()

    def update(self):
        cfg = self.config
        if len(self.buffer) < cfg.batch_size:
            return
        s_raw, a, r, s2_raw, d = self.buffer.sample(cfg.batch_size, self.sample_rng)
        s, s2 = self._norm(s_raw), self._norm(s2_raw)

        noise = np.clip(
            self.target_noise_rng.normal(0.0, cfg.target_noise, size=a.shape),
            -cfg.noise_clip, cfg.noise_clip)
        a2 = np.clip(mlp_forward_np(self.actor_target, s2) + noise, -1.0, 1.0)
        s2a2 = np.concatenate([s2, a2], axis=1)
        q_next = np.minimum(mlp_forward_np(self.critic1_target, s2a2),
                            mlp_forward_np(self.critic2_target, s2a2))[:, 0]
        y = Tensor(td3_targets(r, q_next, d, cfg.gamma)[:, None])

        sa = np.concatenate([s, a], axis=1)
        for critic, opt in ((self.critic1, self.critic1_opt),
                            (self.critic2, self.critic2_opt)):
            critic.zero_grad()
            err = mlp_forward(critic, sa) - y
            tmean(err * err).backward()
            adam_step(opt, critic)
        self.critic_updates += 1

        if self.critic_updates % cfg.policy_freq == 0:
            self.actor.net.zero_grad()
            self.critic1.zero_grad()
            action = self.actor.forward(s)
            q = mlp_forward(self.critic1, concat([Tensor(s), action], axis=1))
            (-1.0 * tmean(q)).backward()
            adam_step(self.actor_opt, self.actor.net)
            soft_update(self.actor_target, self.actor.net, cfg.tau)
            soft_update(self.critic1_target, self.critic1, cfg.tau)
            soft_update(self.critic2_target, self.critic2, cfg.tau)
