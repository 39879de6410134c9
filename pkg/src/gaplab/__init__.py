"""gaplab: spectral-gap scaling experiments on directed scale-free graphs.

The pipeline: grow a graph ensemble (netgen), build the damped random-surfer
matrix (pagerank), minimize the gap of the interpolation Hamiltonian over
the schedule parameter (spectral), then bin, fit and plot the results
(analysis, harness, plots).
"""

from .errors import ConvergenceError
from .netgen import (MultiDigraph, SimpleDigraph, PaParams, CopyParams,
                     AlphaPaParams, ExponentPair, seed_graph, grow_pa,
                     grow_copy, grow_alpha_pa, compose_and_simplify,
                     simplify, generate_graph, predicted_exponents,
                     composite_offset_prediction)
from .pagerank import (TransitionMatrix, GoogleMatrix, transition_matrix,
                       google_matrix, apply_G, dense_google, pagerank_power)
from .spectral import (HamiltonianOperator, GapResult, complete_reference,
                       h_of, H_of, two_lowest, gap, min_gap)
from .analysis import (DegreeCounts, BinnedDistribution, FitResult,
                       degree_counts, adaptive_bin, fit_semilog,
                       fit_powerlaw, fit_polylog, tail_exponent,
                       value_histogram)
from .harness import (ExperimentConfig, RunRecord, SizeSummary,
                      params_for_targets, derive_seed, run_experiment,
                      summarize, fit_summaries, emit_outputs, load_config)

__version__ = "0.1.0"
