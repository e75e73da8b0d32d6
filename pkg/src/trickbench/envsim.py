"""In-repo continuous-control tasks.

Cartpole (balance / swingup) and acrobot (swingup) with the benchmark
conventions of the suite they mimic: per-step rewards in [0, 1], fixed
1000-step episodes terminated by the time limit only, actions clipped to
[-1, 1] by the environment, angles observed as (sin, cos) pairs.

Dynamics are integrated with RK4 at dt = 0.01 s, one action held per step.
Angles are measured from upright, so hanging is theta = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numcore import NumericError, SeededRng

EPISODE_LENGTH = 1000
DT = 0.01
TASKS = ("cartpole-balance", "cartpole-swingup", "acrobot-swingup")


@dataclass
class EnvState:
    observation: np.ndarray
    physics: np.ndarray
    step_index: int


@dataclass
class ActionSpec:
    dimension: int
    low: np.ndarray
    high: np.ndarray


def _rk4(deriv, y, dt):
    k1 = deriv(y)
    k2 = deriv([yi + 0.5 * dt * ki for yi, ki in zip(y, k1)])
    k3 = deriv([yi + 0.5 * dt * ki for yi, ki in zip(y, k2)])
    k4 = deriv([yi + dt * ki for yi, ki in zip(y, k3)])
    return [yi + dt / 6.0 * (a + 2 * b + 2 * c + d)
            for yi, a, b, c, d in zip(y, k1, k2, k3, k4)]


class CartpoleEnv:
    """Cart on a rail with a hinged uniform pole, force applied to the cart."""

    CART_MASS = 1.0
    POLE_MASS = 0.1
    POLE_HALF_LENGTH = 0.5
    POLE_INERTIA = POLE_MASS * POLE_HALF_LENGTH ** 2 / 3.0  # about the CoM
    FORCE_SCALE = 10.0
    GRAVITY = 9.81
    TRACK_HALF_WIDTH = 1.8

    observation_dim = 5
    action_spec = ActionSpec(1, np.array([-1.0]), np.array([1.0]))

    def __init__(self, task: str):
        if task not in ("balance", "swingup"):
            raise ValueError(f"unknown cartpole task {task!r}")
        self.task = task

    def reset(self, rng: SeededRng) -> EnvState:
        offset = rng.uniform(-0.05, 0.05)
        theta = offset if self.task == "balance" else math.pi + offset
        physics = np.array([0.0, theta, 0.0, 0.0])
        return EnvState(self._observe(physics), physics, 0)

    def _observe(self, physics) -> np.ndarray:
        x, theta, xdot, thdot = physics
        return np.array([x, math.cos(theta), math.sin(theta), xdot, thdot])

    def _deriv(self, force):
        mc, mp = self.CART_MASS, self.POLE_MASS
        l, inertia, g = self.POLE_HALF_LENGTH, self.POLE_INERTIA, self.GRAVITY

        def deriv(y):
            _, theta, xdot, thdot = y
            sin, cos = math.sin(theta), math.cos(theta)
            # (mc+mp) xdd + mp l cos thdd = F + mp l thdot^2 sin
            # mp l cos xdd + (mp l^2 + I) thdd = mp g l sin
            a11 = mc + mp
            a12 = mp * l * cos
            a22 = mp * l * l + inertia
            b1 = force + mp * l * thdot * thdot * sin
            b2 = mp * g * l * sin
            det = a11 * a22 - a12 * a12
            xdd = (a22 * b1 - a12 * b2) / det
            thdd = (a11 * b2 - a12 * b1) / det
            return [xdot, thdot, xdd, thdd]

        return deriv

    def _reward(self, physics) -> float:
        x, theta = physics[0], physics[1]
        upright = (1.0 + math.cos(theta)) / 2.0
        centered = max(0.0, 1.0 - (x / self.TRACK_HALF_WIDTH) ** 2)
        return upright * centered

    def step(self, state: EnvState, action) -> tuple[EnvState, float, bool]:
        a = _clip_action(action, self.action_spec)
        force = self.FORCE_SCALE * a[0]
        physics = np.array(_rk4(self._deriv(force), list(state.physics), DT))
        step_index = state.step_index + 1
        new_state = EnvState(self._observe(physics), physics, step_index)
        return new_state, self._reward(physics), step_index >= EPISODE_LENGTH


class AcrobotEnv:
    """Two-link pendulum actuated at the elbow, swingup task.

    Uniform rods of mass 1 and length 1; the reward maps the tip height
    affinely from [-2, 2] to [0, 1].
    """

    LINK_MASS = 1.0
    LINK_LENGTH = 1.0
    LINK_COM = 0.5
    LINK_INERTIA = LINK_MASS * LINK_LENGTH ** 2 / 12.0
    TORQUE_SCALE = 2.0
    GRAVITY = 9.81

    observation_dim = 6
    action_spec = ActionSpec(1, np.array([-1.0]), np.array([1.0]))

    def reset(self, rng: SeededRng) -> EnvState:
        t1 = math.pi + rng.uniform(-0.05, 0.05)
        t2 = rng.uniform(-0.05, 0.05)
        physics = np.array([t1, t2, 0.0, 0.0])
        return EnvState(self._observe(physics), physics, 0)

    def _observe(self, physics) -> np.ndarray:
        t1, t2, d1, d2 = physics
        return np.array([math.cos(t1), math.sin(t1),
                         math.cos(t2), math.sin(t2), d1, d2])

    def _deriv(self, torque):
        m, l, lc = self.LINK_MASS, self.LINK_LENGTH, self.LINK_COM
        inertia, g = self.LINK_INERTIA, self.GRAVITY

        def deriv(y):
            t1, t2, d1, d2 = y
            s2, c2 = math.sin(t2), math.cos(t2)
            d11 = m * lc * lc + inertia + m * (l * l + lc * lc + 2 * l * lc * c2) + inertia
            d12 = m * (lc * lc + l * lc * c2) + inertia
            d22 = m * lc * lc + inertia
            h = -m * l * lc * s2
            cor1 = h * (2.0 * d1 * d2 + d2 * d2)
            cor2 = -h * d1 * d1
            g1 = -(m * lc + m * l) * g * math.sin(t1) - m * lc * g * math.sin(t1 + t2)
            g2 = -m * lc * g * math.sin(t1 + t2)
            b1 = -cor1 - g1
            b2 = torque - cor2 - g2
            det = d11 * d22 - d12 * d12
            dd1 = (d22 * b1 - d12 * b2) / det
            dd2 = (d11 * b2 - d12 * b1) / det
            return [d1, d2, dd1, dd2]

        return deriv

    def _reward(self, physics) -> float:
        t1, t2 = physics[0], physics[1]
        tip_height = math.cos(t1) + math.cos(t1 + t2)
        return (tip_height + 2.0) / 4.0

    def step(self, state: EnvState, action) -> tuple[EnvState, float, bool]:
        a = _clip_action(action, self.action_spec)
        torque = self.TORQUE_SCALE * a[0]
        physics = np.array(_rk4(self._deriv(torque), list(state.physics), DT))
        step_index = state.step_index + 1
        new_state = EnvState(self._observe(physics), physics, step_index)
        return new_state, self._reward(physics), step_index >= EPISODE_LENGTH


def _clip_action(action, spec: ActionSpec) -> np.ndarray:
    a = np.asarray(action, dtype=np.float64).reshape(-1)
    if a.shape[0] != spec.dimension:
        raise ValueError(f"action dim {a.shape[0]} != {spec.dimension}")
    if np.any(np.isnan(a)):
        raise NumericError("NaN action")
    return np.clip(a, spec.low, spec.high)


def make_env(name: str):
    if name == "cartpole-balance":
        return CartpoleEnv("balance")
    if name == "cartpole-swingup":
        return CartpoleEnv("swingup")
    if name == "acrobot-swingup":
        return AcrobotEnv()
    raise ValueError(f"unknown environment {name!r}; expected one of {TASKS}")
