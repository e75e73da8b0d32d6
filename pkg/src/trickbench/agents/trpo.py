"""TRPO: natural-gradient step via conjugate gradient on Fisher-vector
products, scaled to the trust region and backtracked until the analytic KL
constraint holds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..initschemes import InitScheme, init_mlp
from ..numcore import (
    SeededRng,
    Tensor,
    adam_init,
    adam_step,
    exp,
    mlp_forward,
    mlp_forward_np,
    mlp_jvp,
    tmean,
    tsum,
)
from ..policies import GaussianPolicy, build_gaussian_policy
from ..runnorm import RunningStats, normalize_state, welford_update
from .common import (
    compute_gae,
    flatten_arrays,
    get_flat_params,
    kl_estimate_from_logps,
    set_flat_params,
    unflatten_vector,
)


@dataclass
class TrpoConfig:
    trust_region: float = 0.01
    cg_iters: int = 10
    cg_damping: float = 0.1
    backtrack_rate: float = 0.8
    backtracks: int = 10
    gamma: float = 0.99
    gae_lambda: float = 0.95
    value_epochs: int = 80
    value_learning_rate: float = 1e-3
    batch_size: int = 5000
    hidden: tuple = (64, 64)


def fisher_vector_product(policy: GaussianPolicy, states, v, damping: float):
    """F v + damping * v for the diagonal-Gaussian policy Fisher.

    The Fisher factors as J^T F_dist J averaged over states, with J the
    Jacobian of (mean, log_std) wrt parameters: one forward-mode pass gives
    J v, the distribution Fisher weights it (1/sigma^2 per mean coordinate,
    2 per log_std coordinate), and one backward pass applies J^T.
    """
    states = np.asarray(states)
    n = len(states)
    net_params = policy.mean_net.parameters()
    shapes = [p.data.shape for p in net_params] + [policy.log_std.data.shape]
    pieces = unflatten_vector(v, shapes)
    direction = [(pieces[2 * i], pieces[2 * i + 1])
                 for i in range(len(policy.mean_net.layers))]
    v_log_std = pieces[-1]

    jv_mean = mlp_jvp(policy.mean_net, states, direction).data  # (n, act)
    inv_var = np.exp(-2.0 * policy.log_std.data)
    weighted = jv_mean * inv_var / n

    policy.mean_net.zero_grad()
    mean = mlp_forward(policy.mean_net, states)
    tsum(mean * Tensor(weighted)).backward()
    net_part = flatten_arrays([p.grad if p.grad is not None
                               else np.zeros_like(p.data) for p in net_params])
    log_std_part = 2.0 * v_log_std  # per-state Fisher block is 2*I
    return np.concatenate([net_part, log_std_part]) + damping * np.asarray(v)


def conjugate_gradient(fvp, b, iters: int = 10, residual_tol: float = 1e-10):
    """Standard CG from a zero start for the SPD system F x = b."""
    b = np.asarray(b, dtype=np.float64)
    x = np.zeros_like(b)
    r = b.copy()
    p = b.copy()
    rr = float(r @ r)
    if rr < residual_tol:
        return x
    for _ in range(iters):
        fp = np.asarray(fvp(p))
        if not np.all(np.isfinite(fp)):
            raise FloatingPointError("non-finite value in conjugate gradient")
        alpha = rr / float(p @ fp)
        x += alpha * p
        r -= alpha * fp
        rr_new = float(r @ r)
        if rr_new < residual_tol:
            break
        p = r + (rr_new / rr) * p
        rr = rr_new
    return x


def surrogate_loss_tensor(policy: GaussianPolicy, states, actions, logp_old,
                          advantages) -> Tensor:
    """Importance-weighted policy objective (to be maximized)."""
    logp_new = policy.log_prob_tensor(states, actions)
    ratio = exp(logp_new - Tensor(logp_old))
    return tmean(ratio * Tensor(advantages))


def trpo_update(policy: GaussianPolicy, states, actions, logp_old, advantages,
                config: TrpoConfig):
    """One trust-region policy step; rejection leaves parameters unchanged.

    Returns a stats dict: accepted flag, backtracks used, analytic KL and
    surrogate improvement of the accepted candidate.
    """
    params = policy.parameters()
    for p in params:
        p.grad = None
    surrogate = surrogate_loss_tensor(policy, states, actions, logp_old, advantages)
    surrogate.backward()
    g = flatten_arrays([p.grad if p.grad is not None else np.zeros_like(p.data)
                        for p in params])
    stats = {"accepted": False, "backtracks": 0, "kl": 0.0,
             "improvement": 0.0, "surrogate": float(surrogate.data)}
    if not np.any(g):
        return stats
    fvp = lambda v: fisher_vector_product(policy, states, v, config.cg_damping)
    d = conjugate_gradient(fvp, g, config.cg_iters)
    dfd = float(d @ fvp(d))
    if dfd <= 0.0:
        return stats
    full_step = np.sqrt(2.0 * config.trust_region / dfd) * d
    old_params = get_flat_params(params)
    old_snapshot = policy.snapshot()
    old_surrogate = float(surrogate.data)
    scale = 1.0
    for k in range(config.backtracks):
        set_flat_params(params, old_params + scale * full_step)
        new_surrogate = float(np.mean(
            np.exp(policy.log_prob_np(states, actions) - logp_old) * advantages))
        kl = policy.analytic_kl_np(old_snapshot, states)
        if new_surrogate > old_surrogate and kl <= config.trust_region:
            stats.update(accepted=True, backtracks=k, kl=kl,
                         improvement=new_surrogate - old_surrogate)
            return stats
        scale *= config.backtrack_rate
    set_flat_params(params, old_params)
    return stats


class TrpoAgent:
    """On-policy agent: one trust-region policy step per 5000-step batch."""

    def __init__(self, obs_dim, act_dim, config: TrpoConfig, rng: SeededRng,
                 init_scheme: InitScheme, input_normalization: bool,
                 total_env_steps: int):
        self.config = config
        self.policy = build_gaussian_policy(obs_dim, act_dim, init_scheme,
                                            rng.derive("policy"),
                                            hidden=config.hidden)
        self.value_net = init_mlp((obs_dim, *config.hidden, 1), "tanh",
                                  init_scheme, rng.derive("value"))
        self.value_opt = adam_init(self.value_net, config.value_learning_rate)
        self.explore_rng = rng.derive("explore")
        self.normalize = input_normalization
        self.stats = RunningStats(obs_dim) if input_normalization else None
        self.env_steps = 0
        self.diagnostics = []
        self._rollout = {k: [] for k in
                         ("states", "actions", "logps", "rewards", "dones")}
        self._pending = None

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
        return self.policy.mean_np(self._norm(obs, update=False))

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
        stats = trpo_update(self.policy, states, actions, logp_old, advantages, cfg)
        sample_kl = kl_estimate_from_logps(
            logp_old, self.policy.log_prob_np(states, actions))
        targets = Tensor(returns[:, None])
        for _ in range(cfg.value_epochs):
            self.value_net.zero_grad()
            err = mlp_forward(self.value_net, states) - targets
            tmean(err * err).backward()
            adam_step(self.value_opt, self.value_net)
        self.diagnostics.append({
            "step": self.env_steps, "epoch": 0, "kl": sample_kl,
            "grad_norm_pre_clip": 0.0, "learning_rate": cfg.value_learning_rate,
            "surrogate": stats["surrogate"],
            "accepted": "accepted" if stats["accepted"] else "rejected",
            "analytic_kl": stats["kl"],
        })
        self.last_update_stats = stats
