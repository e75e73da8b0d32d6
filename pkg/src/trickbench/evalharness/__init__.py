from .config import ExperimentConfig
from .csvio import CurveRecord, read_curves_csv, read_diag_csv, write_curves_csv, write_diag_csv
from .harness import (
    evaluate,
    final_returns,
    load_results,
    run_experiment,
    run_or_load,
    run_seed,
)
from .stats import CiResult, bootstrap_ci, effect_size
