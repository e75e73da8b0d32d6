"""trickbench: RL algorithms with every implementation trick as a toggle.

PPO, TRPO, TD3 and SAC on in-repo continuous-control tasks, with weight
initialization schemes, running input normalization and adaptive-learning
techniques switchable independently, plus a multi-seed bootstrap evaluation
harness.
"""

__version__ = "0.1.0"
