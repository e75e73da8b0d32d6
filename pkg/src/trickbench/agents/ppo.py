"""PPO with the five adaptive-learning techniques as independent toggles.

The loss is minimized, so the clipped surrogate, entropy bonus and KL-cutoff
penalty appear sign-flipped relative to a maximized objective; this is the
single place the sign convention flips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..initschemes import InitScheme, init_mlp
from ..numcore import (
    SeededRng,
    Tensor,
    adam_init,
    adam_step,
    clip,
    exp,
    minimum,
    mlp_forward,
    mlp_forward_np,
    tmean,
)
from ..policies import build_gaussian_policy
from ..runnorm import RunningStats, normalize_state, welford_update
from .common import (
    clip_policy_gradient,
    compute_gae,
    kl_estimate_from_logps,
    kl_stopping_check,
    lr_schedule,
    normalize_advantages,
)


@dataclass
class PpoConfig:
    learning_rate: float = 3e-4
    batch_size: int = 2048
    minibatch_size: int = 64
    epochs: int = 10
    clip_range: float = 0.2
    max_kl: float = 0.01
    entropy_coeff: float = 0.1
    cutoff_coeff: float = 100.0
    max_grad_norm: float = 0.5
    gamma: float = 0.99
    gae_lambda: float = 0.95
    weight_decay: float = 0.0
    kl_stop_margin: float = 1.5
    hidden: tuple = (64, 64)
    # technique toggles
    lrs: bool = False
    adv_norm: bool = False
    grad_clip: bool = False
    kl_stop: bool = False
    kl_cutoff: bool = False


def ppo_loss(policy, value_net, states, actions, logp_old, advantages, returns,
             config: PpoConfig, cutoff_active: bool):
    """Minibatch loss: negated clipped surrogate, entropy bonus, value MSE,
    and (when armed by a trust-region violation) the quadratic KL penalty.

    Returns (loss tensor, info dict)."""
    logp_new = policy.log_prob_tensor(states, actions)
    ratio = exp(logp_new - Tensor(logp_old))
    adv = Tensor(advantages)
    surrogate = minimum(ratio * adv,
                        clip(ratio, 1.0 - config.clip_range, 1.0 + config.clip_range) * adv)
    pg_loss = -1.0 * tmean(surrogate)
    v = mlp_forward(value_net, states)
    v_err = v - Tensor(np.asarray(returns)[:, None])
    value_loss = tmean(v_err * v_err)
    loss = pg_loss - config.entropy_coeff * policy.entropy() + 0.5 * value_loss
    info = {"surrogate": float(pg_loss.data)}
    if cutoff_active:
        kl = tmean(Tensor(logp_old) - logp_new)
        loss = loss + config.cutoff_coeff * (kl - config.max_kl) ** 2
        info["penalty"] = float((config.cutoff_coeff
                                 * (kl.data - config.max_kl) ** 2))
    return loss, info


class PpoAgent:
    """On-policy agent collecting fixed-size batches across episode bounds."""

    def __init__(self, obs_dim, act_dim, config: PpoConfig, rng: SeededRng,
                 init_scheme: InitScheme, input_normalization: bool,
                 total_env_steps: int):
        self.config = config
        self.obs_dim = obs_dim
        self.policy = build_gaussian_policy(obs_dim, act_dim, init_scheme,
                                            rng.derive("policy"),
                                            hidden=config.hidden)
        self.value_net = init_mlp((obs_dim, *config.hidden, 1), "tanh",
                                  init_scheme, rng.derive("value"))
        self.params = self.policy.parameters() + self.value_net.parameters()
        self.opt = adam_init(self.params, config.learning_rate,
                             weight_decay=config.weight_decay)
        self.explore_rng = rng.derive("explore")
        self.shuffle_rng = rng.derive("shuffle")
        self.normalize = input_normalization
        self.stats = RunningStats(obs_dim) if input_normalization else None
        self.total_env_steps = total_env_steps
        self.env_steps = 0
        self.cutoff_active = False
        self.diagnostics = []
        self._rollout = {k: [] for k in
                         ("states", "actions", "logps", "rewards", "dones")}
        self._pending = None

    # -- acting -------------------------------------------------------------

    def _norm(self, obs, update):
        if self.stats is None:
            return np.asarray(obs, dtype=np.float64)
        if update:
            welford_update(self.stats, obs)
        return normalize_state(self.stats, obs)

    def act(self, obs):
        s = self._norm(obs, update=True)
        action, logp = self.policy.sample_np(s, self.explore_rng)
        self._pending = (s, action, logp)
        return action

    def eval_act(self, obs):
        s = self._norm(obs, update=False)
        return self.policy.mean_np(s)

    # -- learning -----------------------------------------------------------

    def observe(self, obs, action, reward, next_obs, done):
        s, a, logp = self._pending
        r = self._rollout
        r["states"].append(s)
        r["actions"].append(a)
        r["logps"].append(logp)
        r["rewards"].append(reward)
        r["dones"].append(float(done))
        self.env_steps += 1
        if len(r["rewards"]) >= self.config.batch_size:
            self._update(np.asarray(self._norm(next_obs, update=False)))
            self._rollout = {k: [] for k in r}

    def _update(self, last_next_state):
        cfg = self.config
        r = self._rollout
        states = np.asarray(r["states"])
        actions = np.asarray(r["actions"])
        logp_old = np.asarray(r["logps"])
        values = mlp_forward_np(self.value_net, states)[:, 0]
        v_last = mlp_forward_np(self.value_net, last_next_state)[0]
        next_values = np.append(values[1:], v_last)
        advantages, returns = compute_gae(r["rewards"], values, next_values,
                                          r["dones"], cfg.gamma, cfg.gae_lambda)
        if cfg.adv_norm:
            advantages = normalize_advantages(advantages)
        if cfg.lrs:
            self.opt.learning_rate = lr_schedule(
                cfg.learning_rate, min(self.env_steps, self.total_env_steps),
                self.total_env_steps)
        n_policy = len(self.policy.parameters())
        n = len(states)
        for epoch in range(cfg.epochs):
            order = self.shuffle_rng.permutation(n)
            surrogates, grad_norms = [], []
            for start in range(0, n, cfg.minibatch_size):
                idx = order[start:start + cfg.minibatch_size]
                loss, info = ppo_loss(self.policy, self.value_net, states[idx],
                                      actions[idx], logp_old[idx],
                                      advantages[idx], returns[idx],
                                      cfg, self.cutoff_active)
                for p in self.params:
                    p.grad = None
                loss.backward()
                grads = [p.grad if p.grad is not None else np.zeros_like(p.data)
                         for p in self.params]
                pol_grads, pre_norm = clip_policy_gradient(
                    grads[:n_policy],
                    cfg.max_grad_norm if cfg.grad_clip else np.inf)
                adam_step(self.opt, self.params, pol_grads + grads[n_policy:])
                surrogates.append(info["surrogate"])
                grad_norms.append(pre_norm)
            epoch_kl = kl_estimate_from_logps(
                logp_old, self.policy.log_prob_np(states, actions))
            self.cutoff_active = cfg.kl_cutoff and epoch_kl > cfg.max_kl
            self.diagnostics.append({
                "step": self.env_steps, "epoch": epoch, "kl": epoch_kl,
                "grad_norm_pre_clip": float(np.mean(grad_norms)),
                "learning_rate": self.opt.learning_rate,
                "surrogate": float(np.mean(surrogates)), "accepted": "",
            })
            if cfg.kl_stop and not kl_stopping_check(epoch_kl, cfg.max_kl,
                                                     cfg.kl_stop_margin):
                break
