"""Batch figure rendering from experiment CSVs.

Three figure kinds, all consuming plain CSV files (the schemas are the only
contract with whatever produced them):

* ``curves``          learning curves: across-seed mean return per
                      evaluation episode with a shaded bootstrap 95% CI band
* ``kl_trace``        across-seed mean KL per evaluation episode, with an
                      optional dashed horizontal threshold line
* ``action_density``  overlaid initial-action density histograms
"""

from .spec import KINDS, PlotSpec
from .render import render

__all__ = ["KINDS", "PlotSpec", "render"]
__version__ = "0.1.0"
