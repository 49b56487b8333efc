"""Zeroth-order optimization with oblivious randomized sketching.

The package bundles the search-direction sketches (Gaussian, Rademacher,
SRHT, sparse embedding), the sketched gradient/trace estimators built on a
query-counting oracle, plain and Hessian-aware descent loops, and a
benchmark harness for quadratic and logistic-regression experiments.
"""

from .core import (RngStream, fwht, power_iteration_sym, random_orthogonal,
                   spectral_norm_sym)
from .errors import (CapabilityError, ConfigError, ConstructionError,
                     DimensionError, NumericError, ParseError, StateError,
                     ZoSketchError)
from .estimator import (GradientEstimate, Preconditioner, trace_estimate,
                        zo_full_fd, zo_grad_and_trace, zo_gradient,
                        zo_gradient_precond)
from .oracles import (CountingOracle, Decay, LogisticDataset,
                      LogisticObjective, NoiseSpec, ObjectiveMeta,
                      QuadraticObjective, load_libsvm, make_quadratic,
                      reference_optimum)
from .optimizer import (AdaptiveTraceStep, FixedStep, InverseLmaxStep,
                        IterRecord, KnownTraceStep, RunConfig, RunResult,
                        run_zo_gd, run_zo_hessian_aware, run_zo_sketch,
                        theorem1_step, theorem2_step)
from .sketch import (KINDS, SketchMatrix, SketchSpec, product_approx_error,
                     sample_sketch)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveTraceStep", "CapabilityError", "ConfigError", "ConstructionError",
    "CountingOracle", "Decay", "DimensionError", "FixedStep",
    "GradientEstimate", "InverseLmaxStep", "IterRecord", "KINDS",
    "KnownTraceStep", "LogisticDataset", "LogisticObjective", "NoiseSpec",
    "NumericError", "ObjectiveMeta", "ParseError", "Preconditioner",
    "QuadraticObjective", "RngStream", "RunConfig", "RunResult",
    "SketchMatrix", "SketchSpec", "StateError", "ZoSketchError", "fwht",
    "load_libsvm", "make_quadratic", "power_iteration_sym",
    "product_approx_error", "random_orthogonal", "reference_optimum",
    "run_zo_gd", "run_zo_hessian_aware", "run_zo_sketch", "sample_sketch",
    "spectral_norm_sym", "theorem1_step", "theorem2_step", "trace_estimate",
    "zo_full_fd", "zo_grad_and_trace", "zo_gradient", "zo_gradient_precond",
]
