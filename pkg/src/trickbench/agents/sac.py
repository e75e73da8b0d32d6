"""SAC with a fixed entropy temperature.

Hyperparameter defaults follow the TD3 table (network sizes, lr, tau,
batch); the temperature and update cadence are repo defaults, marked as such
in the shipped config.
"""

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
    minimum,
    mlp_forward,
    mlp_forward_np,
    tmean,
)
from ..policies import build_tanh_gaussian_policy
from ..runnorm import RunningStats, normalize_state, welford_update
from .common import ReplayBuffer, soft_update, warm_start_replay


@dataclass
class SacConfig:
    learning_rate: float = 1e-3
    tau: float = 5e-3
    batch_size: int = 100
    update_steps: int = 1
    gamma: float = 0.99
    temperature: float = 0.2
    warm_start: int = 1000
    memory_size: int = 1_000_000
    hidden: tuple = (400, 300)


def sac_targets(rewards, next_q_min, next_logp, dones, gamma, temperature):
    """Soft target y = r + gamma * (1-done) * (min Q' - alpha * log pi(a'|s'))."""
    return rewards + gamma * (1.0 - dones) * (next_q_min - temperature * next_logp)


class SacAgent:
    def __init__(self, obs_dim, act_dim, config: SacConfig, rng: SeededRng,
                 init_scheme: InitScheme, input_normalization: bool,
                 total_env_steps: int = 0):
        self.config = config
        self.obs_dim, self.act_dim = obs_dim, act_dim
        cr = rng.derive("critic")
        self.policy = build_tanh_gaussian_policy(
            obs_dim, act_dim, init_scheme, rng.derive("actor"), hidden=config.hidden)
        self.critic1 = init_mlp((obs_dim + act_dim, *config.hidden, 1), "relu",
                                init_scheme, cr.derive("q1"))
        self.critic2 = init_mlp((obs_dim + act_dim, *config.hidden, 1), "relu",
                                init_scheme, cr.derive("q2"))
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.actor_opt = adam_init(self.policy.parameters(), config.learning_rate)
        self.critic1_opt = adam_init(self.critic1, config.learning_rate)
        self.critic2_opt = adam_init(self.critic2, config.learning_rate)
        self.buffer = ReplayBuffer(config.memory_size, obs_dim, act_dim)
        self.explore_rng = rng.derive("explore")
        self.sample_rng = rng.derive("sample")
        self.next_action_rng = rng.derive("next_action")
        self.reparam_rng = rng.derive("reparam")
        self.normalize = input_normalization
        self.stats = RunningStats(obs_dim) if input_normalization else None
        self.diagnostics = []

    def _norm(self, obs):
        if self.stats is None:
            return np.asarray(obs, dtype=np.float64)
        return normalize_state(self.stats, obs)

    def _track(self, obs):
        if self.stats is not None:
            welford_update(self.stats, obs)

    def warm_start(self, env, rng: SeededRng):
        warm_start_replay(env, self.buffer, self.config.warm_start, rng,
                          on_transition=self._track)

    def act(self, obs):
        self._track(obs)
        action, _ = self.policy.sample_np(self._norm(obs), self.explore_rng)
        return action

    def eval_act(self, obs):
        return self.policy.mean_action_np(self._norm(obs))

    def observe(self, obs, action, reward, next_obs, done):
        self.buffer.add(obs, action, reward, next_obs, done)
        for _ in range(self.config.update_steps):
            self.update()

    def actor_loss(self, norm_states, eps) -> Tensor:
        """Reparameterized actor objective: mean(alpha * log pi - min Q)."""
        action, logp = self.policy.sample_tensor(norm_states, eps)
        sa = concat([Tensor(norm_states), action], axis=1)
        q = minimum(mlp_forward(self.critic1, sa), mlp_forward(self.critic2, sa))
        return tmean(self.config.temperature * logp - q.sum(axis=1))

    def update(self):
        cfg = self.config
        if len(self.buffer) < cfg.batch_size:
            return
        s_raw, a, r, s2_raw, d = self.buffer.sample(cfg.batch_size, self.sample_rng)
        s, s2 = self._norm(s_raw), self._norm(s2_raw)

        a2, logp2 = self.policy.sample_np(s2, self.next_action_rng)
        s2a2 = np.concatenate([s2, a2], axis=1)
        q_next = np.minimum(mlp_forward_np(self.critic1_target, s2a2),
                            mlp_forward_np(self.critic2_target, s2a2))[:, 0]
        y = Tensor(sac_targets(r, q_next, logp2, d, cfg.gamma, cfg.temperature)[:, None])

        sa = np.concatenate([s, a], axis=1)
        for critic, opt in ((self.critic1, self.critic1_opt),
                            (self.critic2, self.critic2_opt)):
            critic.zero_grad()
            err = mlp_forward(critic, sa) - y
            tmean(err * err).backward()
            adam_step(opt, critic)

        actor_params = self.policy.parameters()
        for p in actor_params + self.critic1.parameters() + self.critic2.parameters():
            p.grad = None
        eps = self.reparam_rng.standard_normal((cfg.batch_size, self.act_dim))
        self.actor_loss(s, eps).backward()
        adam_step(self.actor_opt, actor_params)

        soft_update(self.critic1_target, self.critic1, cfg.tau)
        soft_update(self.critic2_target, self.critic2, cfg.tau)
