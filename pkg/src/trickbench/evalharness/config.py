"""Experiment configuration: a flat INI file with one section of general
experiment settings and one section of algorithm hyperparameters.

Example:

    [experiment]
    algorithm = ppo
    env = cartpole-swingup
    seeds = 0,1,2,3,4,5,6,7,8,9
    episodes = 300
    eval_interval = 10
    eval_episodes = 10
    init = lecun
    input_normalization = false

    [ppo]
    learning_rate = 3e-4
    lrs = true
    adv_norm = true

All hyperparameter defaults are the shipped per-algorithm tables; any key in
the algorithm section overrides its dataclass field.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

from ..agents import ALGORITHMS
from ..initschemes import SCHEMES, InitScheme
from ..envsim import TASKS


@dataclass
class ExperimentConfig:
    algorithm: str
    env: str
    seeds: list = field(default_factory=lambda: list(range(10)))
    episodes: int = 300
    eval_interval: int = 10
    eval_episodes: int = 10
    init: str = "lecun"
    init_gain: float = 1.0
    input_normalization: bool = False
    algo: object = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.env not in TASKS:
            raise ValueError(f"unknown environment {self.env!r}")
        if self.init not in SCHEMES:
            raise ValueError(f"unknown init scheme {self.init!r}")
        if not self.seeds:
            raise ValueError("seed list must be non-empty")
        if self.algo is None:
            self.algo = ALGORITHMS[self.algorithm][1]()

    @property
    def init_scheme(self) -> InitScheme:
        return InitScheme(self.init, gain=self.init_gain)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        algo = d.pop("algo")
        algo = {k: list(v) if isinstance(v, tuple) else v for k, v in algo.items()}
        d["algo"] = algo
        return d

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def replace(self, **overrides) -> "ExperimentConfig":
        """Copy with experiment-level and/or algorithm-level overrides."""
        exp_fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
        exp_kw = {k: v for k, v in overrides.items() if k in exp_fields}
        algo_kw = {k: v for k, v in overrides.items() if k not in exp_fields}
        algo = dataclasses.replace(self.algo, **algo_kw)
        return dataclasses.replace(self, algo=algo, **exp_kw)

    # -- file round-trip ----------------------------------------------------

    def to_file(self, path):
        cp = configparser.ConfigParser()
        cp["experiment"] = {
            "algorithm": self.algorithm,
            "env": self.env,
            "seeds": ",".join(str(s) for s in self.seeds),
            "episodes": str(self.episodes),
            "eval_interval": str(self.eval_interval),
            "eval_episodes": str(self.eval_episodes),
            "init": self.init,
            "init_gain": repr(self.init_gain),
            "input_normalization": str(self.input_normalization).lower(),
        }
        cp[self.algorithm] = {k: _serialize(v)
                              for k, v in dataclasses.asdict(self.algo).items()}
        with open(path, "w") as f:
            cp.write(f)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        with open(path) as f:
            cp.read_file(f)
        exp = cp["experiment"]
        algorithm = exp.get("algorithm")
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r} in {path}")
        algo_cls = ALGORITHMS[algorithm][1]
        algo_kwargs = {}
        if cp.has_section(algorithm):
            fields = {f.name: f for f in dataclasses.fields(algo_cls)}
            for key, raw in cp[algorithm].items():
                if key not in fields:
                    raise ValueError(f"unknown {algorithm} option {key!r}")
                algo_kwargs[key] = _parse(raw, fields[key].type,
                                          getattr(algo_cls, key))
        return cls(
            algorithm=algorithm,
            env=exp.get("env"),
            seeds=[int(s) for s in exp.get("seeds", "0,1,2,3,4,5,6,7,8,9").split(",")],
            episodes=exp.getint("episodes", 300),
            eval_interval=exp.getint("eval_interval", 10),
            eval_episodes=exp.getint("eval_episodes", 10),
            init=exp.get("init", "lecun"),
            init_gain=exp.getfloat("init_gain", 1.0),
            input_normalization=exp.getboolean("input_normalization", False),
            algo=algo_cls(**algo_kwargs),
        )


def _serialize(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def _parse(raw, field_type, default):
    if isinstance(default, bool) or field_type == "bool":
        if raw.lower() not in ("true", "false"):
            raise ValueError(f"expected true/false, got {raw!r}")
        return raw.lower() == "true"
    if isinstance(default, tuple) or field_type == "tuple":
        return tuple(int(x) for x in raw.split(","))
    if isinstance(default, int) and not isinstance(default, bool):
        return int(raw)
    return float(raw)
