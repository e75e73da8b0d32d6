"""Multi-seed experiment runner with frozen offline evaluation.

Every `eval_interval` training episodes, learning and the input normalizer
are frozen and the mean return over `eval_episodes` offline episodes (mean /
deterministic actions) is recorded. Seeds are fully independent: all random
streams derive from (seed, component-name) pairs.
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from ..agents import make_agent
from ..envsim import EPISODE_LENGTH, make_env
from ..numcore import NumericError, SeededRng
from .config import ExperimentConfig
from .csvio import CurveRecord, read_curves_csv, write_curves_csv, write_diag_csv

SEED_OFFSET_ENV = "TRICKBENCH_SEED_OFFSET"


@dataclass
class RunResult:
    seed: int
    records: list
    diagnostics: list
    failed: bool = False
    fail_step: int = -1


def _seed_offset() -> int:
    return int(os.environ.get(SEED_OFFSET_ENV, "0"))


def _agent_params(agent):
    params = []
    for attr in ("policy", "actor"):
        obj = getattr(agent, attr, None)
        if obj is not None:
            params += obj.parameters()
    for attr in ("value_net", "critic1", "critic2"):
        obj = getattr(agent, attr, None)
        if obj is not None:
            params += obj.parameters()
    return params


def _current_lr(agent) -> float:
    for attr in ("opt", "actor_opt", "value_opt"):
        opt = getattr(agent, attr, None)
        if opt is not None:
            return opt.learning_rate
    return 0.0


def evaluate(agent, env_name: str, rng: SeededRng, n_episodes: int) -> float:
    """Offline evaluation: fresh environment, exploration off, no learning."""
    env = make_env(env_name)
    total = 0.0
    for i in range(n_episodes):
        state = env.reset(rng.derive(f"reset{i}"))
        done = False
        while not done:
            state, reward, done = env.step(state, agent.eval_act(state.observation))
            total += reward
    return total / n_episodes


def run_seed(config: ExperimentConfig, seed: int,
             stop_at_return: float = None) -> RunResult:
    """Train one seed to completion, recording evaluation points.

    A NaN in any parameter marks the run failed at its step index without
    touching other seeds. `stop_at_return` optionally ends training early
    once an evaluation point reaches that mean return.
    """
    rng = SeededRng(seed)
    env = make_env(config.env)
    obs_dim = env.observation_dim
    act_dim = env.action_spec.dimension
    total_env_steps = config.episodes * EPISODE_LENGTH
    agent = make_agent(config.algorithm, obs_dim, act_dim, config.algo,
                       rng.derive("agent"), config.init_scheme,
                       config.input_normalization, total_env_steps)
    if hasattr(agent, "warm_start") and getattr(config.algo, "warm_start", 0) > 0:
        agent.warm_start(env, rng.derive("warm_start"))
    result = RunResult(seed=seed, records=[], diagnostics=[])
    env_steps = 0
    drained = 0
    try:
        for episode in range(1, config.episodes + 1):
            state = env.reset(rng.derive(f"reset{episode}"))
            done = False
            while not done:
                action = agent.act(state.observation)
                next_state, reward, done = env.step(state, action)
                agent.observe(state.observation, action, reward,
                              next_state.observation, done)
                state = next_state
                env_steps += 1
            for p in _agent_params(agent):
                if not np.all(np.isfinite(p.data)):
                    raise NumericError("NaN parameter")
            if episode % config.eval_interval == 0:
                mean_return = evaluate(agent, config.env,
                                       rng.derive(f"eval{episode}"),
                                       config.eval_episodes)
                new_diag = agent.diagnostics[drained:]
                drained = len(agent.diagnostics)
                mean_kl = (float(np.mean([d["kl"] for d in new_diag]))
                           if new_diag else 0.0)
                result.records.append(CurveRecord(
                    seed, episode, env_steps, mean_return, mean_kl,
                    _current_lr(agent)))
                if stop_at_return is not None and mean_return >= stop_at_return:
                    break
    except NumericError:
        result.failed = True
        result.fail_step = env_steps
    result.diagnostics = list(agent.diagnostics)
    return result


def _run_seed_star(args):
    return run_seed(*args)


def run_experiment(config: ExperimentConfig, out_dir=None, jobs: int = 1,
                   stop_at_return: float = None) -> list:
    """Run all seeds (optionally in parallel worker processes) and write CSVs.

    Produces in out_dir: config.ini, confighash.txt, curves.csv,
    diag_seed<k>.csv and failures.csv.
    """
    seeds = [s + _seed_offset() for s in config.seeds]
    tasks = [(config, s, stop_at_return) for s in seeds]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_run_seed_star, tasks)
    else:
        results = [_run_seed_star(t) for t in tasks]
    if out_dir is not None:
        write_results(config, results, out_dir)
    return results


def write_results(config: ExperimentConfig, results, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    config.to_file(os.path.join(out_dir, "config.ini"))
    with open(os.path.join(out_dir, "confighash.txt"), "w") as f:
        f.write(config.config_hash() + "\n")
    records = [r for res in results for r in res.records]
    if records:
        write_curves_csv(records, os.path.join(out_dir, "curves.csv"))
    for res in results:
        write_diag_csv(res.diagnostics,
                       os.path.join(out_dir, f"diag_seed{res.seed}.csv"))
    with open(os.path.join(out_dir, "failures.csv"), "w") as f:
        f.write("seed,fail_step\n")
        for res in results:
            if res.failed:
                f.write(f"{res.seed},{res.fail_step}\n")


def load_results(out_dir):
    """Curve records grouped by seed, plus the failed-seed set."""
    records = read_curves_csv(os.path.join(out_dir, "curves.csv"))
    failed = set()
    fail_path = os.path.join(out_dir, "failures.csv")
    if os.path.exists(fail_path):
        with open(fail_path) as f:
            next(f)
            for line in f:
                failed.add(int(line.split(",")[0]))
    by_seed = {}
    for r in records:
        by_seed.setdefault(r.seed, []).append(r)
    return by_seed, failed


def run_or_load(config: ExperimentConfig, out_dir, jobs: int = 1,
                stop_at_return: float = None):
    """Reuse cached results when the stored config hash matches."""
    hash_path = os.path.join(out_dir, "confighash.txt")
    curves_path = os.path.join(out_dir, "curves.csv")
    if os.path.exists(hash_path) and os.path.exists(curves_path):
        with open(hash_path) as f:
            if f.read().strip() == config.config_hash():
                return load_results(out_dir)
    run_experiment(config, out_dir=out_dir, jobs=jobs,
                   stop_at_return=stop_at_return)
    return load_results(out_dir)


def final_returns(by_seed, failed=()):
    """Last evaluation return per non-failed seed."""
    return [runs[-1].mean_return for seed, runs in sorted(by_seed.items())
            if seed not in failed and runs]
