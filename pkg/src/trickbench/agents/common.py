"""Building blocks shared by the agents: replay storage, advantage
estimation, the adaptive-learning primitives, and parameter flattening."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numcore import MlpParams, NumericError, SeededRng


@dataclass
class Transition:
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool


class ReplayBuffer:
    """Uniform-sampling ring buffer over raw (unnormalized) transitions."""

    def __init__(self, capacity: int, obs_dim: int, act_dim: int):
        self.capacity = int(capacity)
        self.states = np.zeros((self.capacity, obs_dim))
        self.actions = np.zeros((self.capacity, act_dim))
        self.rewards = np.zeros(self.capacity)
        self.next_states = np.zeros((self.capacity, obs_dim))
        self.dones = np.zeros(self.capacity)
        self.size = 0
        self.cursor = 0

    def __len__(self):
        return self.size

    def add(self, state, action, reward, next_state, done):
        i = self.cursor
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_states[i] = next_state
        self.dones[i] = float(done)
        self.cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: SeededRng):
        idx = rng.integers(0, self.size, size=batch_size)
        return (self.states[idx], self.actions[idx], self.rewards[idx],
                self.next_states[idx], self.dones[idx])

    def state_dict(self):
        return {k: getattr(self, k).copy() for k in
                ("states", "actions", "rewards", "next_states", "dones")} | {
                    "size": self.size, "cursor": self.cursor}


def compute_gae(rewards, values, next_values, dones, gamma, lam):
    """Generalized advantage estimation over a (possibly multi-episode) batch.

    `values` are V(s_t), `next_values` are V(s_{t+1}) including the bootstrap
    value for the final transition; `dones` cut both the bootstrap and the
    accumulation at episode boundaries.
    Returns (advantages, returns) with returns = advantages + values.
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    next_values = np.asarray(next_values, dtype=np.float64)
    dones = np.asarray(dones, dtype=np.float64)
    n = len(rewards)
    if not (len(values) == len(next_values) == len(dones) == n):
        raise ValueError("rewards/values/next_values/dones lengths differ")
    advantages = np.zeros(n)
    gae = 0.0
    for t in range(n - 1, -1, -1):
        not_done = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_values[t] * not_done - values[t]
        gae = delta + gamma * lam * not_done * gae
        advantages[t] = gae
    return advantages, advantages + values


def normalize_advantages(advantages, eps: float = 1e-8):
    """Standardize to zero mean, unit variance (population std)."""
    a = np.asarray(advantages, dtype=np.float64)
    if a.size < 2:
        raise ValueError("need at least 2 advantages to normalize")
    return (a - a.mean()) / (a.std() + eps)


def lr_schedule(alpha0: float, t: float, t_total: float) -> float:
    """Linear decay from alpha0 at t=0 to zero at t=t_total."""
    if not 0 <= t <= t_total:
        raise ValueError(f"t={t} outside [0, {t_total}]")
    return alpha0 * (1.0 - t / t_total)


def global_grad_norm(grads) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))


def clip_policy_gradient(grads, max_norm: float):
    """Rescale the gradient list to the given global L2 norm if it exceeds it.

    Returns (grads, pre_clip_norm); direction is preserved.
    """
    norm = global_grad_norm(grads)
    if not np.isfinite(norm):
        raise NumericError("non-finite policy gradient")
    if norm > max_norm:
        scale = max_norm / norm
        grads = [g * scale for g in grads]
    return grads, norm


def kl_estimate(old_policy, new_policy, states, actions) -> float:
    """Sample KL estimator: batch mean of log_old(a|s) - log_new(a|s).

    May be negative on finite samples. The actions must have been drawn
    under the old policy.
    """
    logp_old = old_policy.log_prob_np(states, actions)
    logp_new = new_policy.log_prob_np(states, actions)
    return float(np.mean(logp_old - logp_new))


def kl_estimate_from_logps(logp_old, logp_new) -> float:
    return float(np.mean(np.asarray(logp_old) - np.asarray(logp_new)))


def kl_stopping_check(kl: float, threshold: float, margin: float = 1.5) -> bool:
    """True means continue optimizing; False means stop on this batch."""
    return kl <= margin * threshold


def soft_update(target: MlpParams, source: MlpParams, tau: float):
    """Polyak average: target <- (1 - tau) * target + tau * source."""
    tp, sp = target.parameters(), source.parameters()
    if len(tp) != len(sp):
        raise ValueError("target/source parameter counts differ")
    for t, s in zip(tp, sp):
        if t.data.shape != s.data.shape:
            raise ValueError("target/source parameter shapes differ")
        t.data *= 1.0 - tau
        t.data += tau * s.data


def warm_start_replay(env, buffer: ReplayBuffer, n: int, rng: SeededRng,
                      on_transition=None):
    """Pre-fill the buffer with uniformly random actions.

    `on_transition(state_obs)` lets the caller feed the normalizer while
    collecting.
    """
    spec = env.action_spec
    state = env.reset(rng.derive("reset"))
    action_rng = rng.derive("actions")
    for _ in range(n):
        action = action_rng.uniform(spec.low, spec.high, size=spec.dimension)
        next_state, reward, done = env.step(state, action)
        if on_transition is not None:
            on_transition(state.observation)
        buffer.add(state.observation, action, reward, next_state.observation, done)
        state = env.reset(rng.derive(f"reset{buffer.cursor}")) if done else next_state
    return buffer


def flatten_arrays(arrays) -> np.ndarray:
    return np.concatenate([np.asarray(a).ravel() for a in arrays])


def unflatten_vector(vec, shapes):
    out, i = [], 0
    for shape in shapes:
        n = int(np.prod(shape))
        out.append(np.asarray(vec[i:i + n]).reshape(shape))
        i += n
    if i != len(vec):
        raise ValueError("vector length does not match shapes")
    return out


def get_flat_params(tensors) -> np.ndarray:
    return flatten_arrays([t.data for t in tensors])


def set_flat_params(tensors, vec):
    pieces = unflatten_vector(vec, [t.data.shape for t in tensors])
    for t, p in zip(tensors, pieces):
        t.data[...] = p
