"""Policy parameterizations.

Three families, mirroring how the algorithms here parameterize actions:
  * GaussianPolicy       unbounded diagonal Gaussian (TRPO/PPO); the
                         environment clips the sampled action
  * TanhGaussianPolicy   squashed Gaussian with change-of-variables
                         log-density correction (SAC)
  * DeterministicPolicy  tanh-bounded deterministic actor with additive
                         exploration noise (TD3)

Plus the initial-action-distribution probe: sample actions from freshly
initialized policies at standard-normal states and histogram them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .initschemes import InitScheme, init_mlp
from .numcore import (
    MlpParams,
    SeededRng,
    Tensor,
    clip,
    exp,
    log,
    mlp_forward,
    mlp_forward_np,
    tanh,
    tsum,
)

LOG_2PI = math.log(2.0 * math.pi)
LOG_STD_MIN, LOG_STD_MAX = -20.0, 2.0
TANH_EPS = 1e-6


# -- unbounded Gaussian (TRPO / PPO) ----------------------------------------

@dataclass
class GaussianPolicy:
    """State-dependent mean, state-independent log standard deviation."""

    mean_net: MlpParams
    log_std: Tensor  # (act_dim,)

    @property
    def act_dim(self):
        return self.log_std.data.shape[0]

    def parameters(self):
        return self.mean_net.parameters() + [self.log_std]

    def mean_np(self, states):
        return mlp_forward_np(self.mean_net, states)

    def sample_np(self, state, rng: SeededRng):
        mean = self.mean_np(state)
        std = np.exp(self.log_std.data)
        action = mean + std * rng.standard_normal(self.act_dim)
        return action, self._log_prob(mean, action)

    def _log_prob(self, mean, actions):
        std = np.exp(self.log_std.data)
        z = (actions - mean) / std
        return (-0.5 * np.sum(z * z, axis=-1)
                - np.sum(self.log_std.data) - 0.5 * self.act_dim * LOG_2PI)

    def log_prob_np(self, states, actions):
        return self._log_prob(self.mean_np(states), np.asarray(actions))

    def log_prob_tensor(self, states, actions) -> Tensor:
        """Taped per-sample log density of given actions."""
        mean = mlp_forward(self.mean_net, states)
        inv_std = exp(-1.0 * self.log_std)
        z = (Tensor(np.asarray(actions, dtype=np.float64)) - mean) * inv_std
        return (-0.5 * tsum(z * z, axis=-1) - tsum(self.log_std)
                - 0.5 * self.act_dim * LOG_2PI)

    def entropy(self) -> Tensor:
        """Differential entropy; depends on log_std only."""
        return tsum(self.log_std) + 0.5 * self.act_dim * (1.0 + LOG_2PI)

    def snapshot(self):
        """Frozen (mean, log_std) parameter copy."""
        return (self.mean_net.copy(requires_grad=False),
                self.log_std.data.copy())

    def analytic_kl_np(self, old_snapshot, states) -> float:
        """Batch-mean diagonal-Gaussian KL(old || current)."""
        old_net, old_log_std = old_snapshot
        mu_old = mlp_forward_np(old_net, states)
        mu_new = self.mean_np(states)
        ls_old, ls_new = old_log_std, self.log_std.data
        var_old, var_new = np.exp(2 * ls_old), np.exp(2 * ls_new)
        per_dim = (ls_new - ls_old
                   + (var_old + (mu_old - mu_new) ** 2) / (2.0 * var_new) - 0.5)
        return float(np.mean(np.sum(per_dim, axis=-1)))


def build_gaussian_policy(obs_dim, act_dim, scheme: InitScheme, rng: SeededRng,
                          hidden=(64, 64), action_limit=1.0) -> GaussianPolicy:
    """Tanh-hidden mean net; log_std starts at log(action_limit)."""
    net = init_mlp((obs_dim, *hidden, act_dim), "tanh", scheme, rng.derive("mean_net"))
    log_std = Tensor(np.full(act_dim, math.log(action_limit)), requires_grad=True)
    return GaussianPolicy(net, log_std)


# -- tanh-squashed Gaussian (SAC) -------------------------------------------

@dataclass
class TanhGaussianPolicy:
    """Shared trunk with mean and log_std heads; samples are tanh-squashed."""

    trunk: MlpParams       # obs -> features (relu throughout)
    mean_head: MlpParams   # features -> act_dim
    log_std_head: MlpParams

    @property
    def act_dim(self):
        return self.mean_head.fan_out

    def parameters(self):
        return (self.trunk.parameters() + self.mean_head.parameters()
                + self.log_std_head.parameters())

    def _heads_np(self, states):
        h = mlp_forward_np(self.trunk, states)
        mean = mlp_forward_np(self.mean_head, h)
        log_std = np.clip(mlp_forward_np(self.log_std_head, h),
                          LOG_STD_MIN, LOG_STD_MAX)
        return mean, log_std

    def sample_np(self, state, rng: SeededRng):
        mean, log_std = self._heads_np(state)
        u = mean + np.exp(log_std) * rng.standard_normal(mean.shape)
        return np.tanh(u), self._log_prob_of_pre(mean, log_std, u)

    def mean_action_np(self, state):
        mean, _ = self._heads_np(state)
        return np.tanh(mean)

    @staticmethod
    def _log_prob_of_pre(mean, log_std, u):
        z = (u - mean) / np.exp(log_std)
        gauss = -0.5 * np.sum(z * z, axis=-1) - np.sum(log_std, axis=-1) \
            - 0.5 * mean.shape[-1] * LOG_2PI
        corr = np.sum(np.log(1.0 - np.tanh(u) ** 2 + TANH_EPS), axis=-1)
        return gauss - corr

    def log_prob_np(self, states, actions):
        """Log density of squashed actions (must lie strictly in (-1, 1))."""
        mean, log_std = self._heads_np(states)
        u = np.arctanh(np.asarray(actions, dtype=np.float64))
        return self._log_prob_of_pre(mean, log_std, u)

    def sample_tensor(self, states, eps) -> tuple[Tensor, Tensor]:
        """Reparameterized taped sample; eps is a fixed standard-normal draw.

        Returns (action, per-sample log_prob), both differentiable wrt the
        policy parameters.
        """
        h = mlp_forward(self.trunk, states)
        mean = mlp_forward(self.mean_head, h)
        log_std = clip(mlp_forward(self.log_std_head, h), LOG_STD_MIN, LOG_STD_MAX)
        std = exp(log_std)
        u = mean + std * Tensor(eps)
        action = tanh(u)
        z = (u - mean) * exp(-1.0 * log_std)
        gauss = (-0.5 * tsum(z * z, axis=-1) - tsum(log_std, axis=-1)
                 - 0.5 * self.act_dim * LOG_2PI)
        corr = tsum(log(1.0 - action * action + TANH_EPS), axis=-1)
        return action, gauss - corr


def build_tanh_gaussian_policy(obs_dim, act_dim, scheme: InitScheme,
                               rng: SeededRng, hidden=(400, 300)) -> TanhGaussianPolicy:
    trunk = init_mlp((obs_dim, *hidden), "relu", scheme, rng.derive("trunk"),
                     output_activation="relu")
    mean_head = init_mlp((hidden[-1], act_dim), "relu", scheme, rng.derive("mean_head"))
    log_std_head = init_mlp((hidden[-1], act_dim), "relu", scheme,
                            rng.derive("log_std_head"))
    return TanhGaussianPolicy(trunk, mean_head, log_std_head)


# -- bounded deterministic actor (TD3) --------------------------------------

@dataclass
class DeterministicPolicy:
    net: MlpParams  # relu hidden, tanh output
    exploration_std: float = 0.1
    action_limit: float = 1.0

    def parameters(self):
        return self.net.parameters()

    def act_np(self, state, rng: SeededRng = None, explore: bool = False):
        out = self.action_limit * mlp_forward_np(self.net, state)
        if explore:
            out = out + rng.normal(0.0, self.exploration_std, size=out.shape)
        return np.clip(out, -self.action_limit, self.action_limit)

    def forward(self, states) -> Tensor:
        """Taped deterministic action (for the actor loss)."""
        return self.action_limit * mlp_forward(self.net, states)


def build_deterministic_policy(obs_dim, act_dim, scheme: InitScheme,
                               rng: SeededRng, hidden=(400, 300),
                               exploration_std=0.1) -> DeterministicPolicy:
    net = init_mlp((obs_dim, *hidden, act_dim), "relu", scheme, rng.derive("net"),
                   output_activation="tanh")
    return DeterministicPolicy(net, exploration_std=exploration_std)


# -- initial action distribution probe --------------------------------------

PROBE_KINDS = ("gaussian", "tanh_gaussian", "deterministic")


def probe_initial_action_density(policy_kind: str, init_scheme: InitScheme,
                                 obs_dim: int, act_dim: int, rng: SeededRng,
                                 n_states: int = 5000, n_inits: int = 100,
                                 bins: int = 200, support=(-3.0, 3.0)):
    """Pooled action histogram of freshly initialized policies.

    For each of `n_inits` initializations, one action is sampled at each of
    `n_states` standard-normal states. Mass outside the support is pooled
    into the edge bins. Returns (bin_centers, density) with the density
    normalized so that sum(density) * bin_width == 1.
    """
    if policy_kind not in PROBE_KINDS:
        raise ValueError(f"unknown policy kind {policy_kind!r}")
    lo, hi = support
    states = rng.derive("states").standard_normal((n_states, obs_dim))
    pooled = np.zeros(bins)
    edges = np.linspace(lo, hi, bins + 1)
    for i in range(n_inits):
        init_rng = rng.derive(f"init{i}")
        noise_rng = rng.derive(f"noise{i}")
        if policy_kind == "gaussian":
            policy = build_gaussian_policy(obs_dim, act_dim, init_scheme, init_rng)
            mean = policy.mean_np(states)
            std = np.exp(policy.log_std.data)
            actions = mean + std * noise_rng.standard_normal(mean.shape)
        elif policy_kind == "tanh_gaussian":
            policy = build_tanh_gaussian_policy(obs_dim, act_dim, init_scheme, init_rng)
            m, ls = policy._heads_np(states)
            actions = np.tanh(m + np.exp(ls) * noise_rng.standard_normal(m.shape))
        else:
            policy = build_deterministic_policy(obs_dim, act_dim, init_scheme, init_rng)
            actions = policy.act_np(states, rng=noise_rng, explore=True)
        counts, _ = np.histogram(np.clip(actions[:, 0], lo, hi), bins=edges)
        pooled += counts
    width = (hi - lo) / bins
    density = pooled / (pooled.sum() * width)
    centers = (edges[:-1] + edges[1:]) / 2.0
    return centers, density


def write_probe_csv(path, centers, density):
    with open(path, "w") as f:
        f.write("bin_center,density\n")
        for c, d in zip(centers, density):
            f.write(f"{c:.17g},{d:.17g}\n")
