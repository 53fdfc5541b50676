"""groupwalk: exact and Monte Carlo computations for random walks on
finitely generated groups: word metrics, convolution powers, drift and
entropy, quasi-harmonic tables, the free-group boundary with its cocycle,
and finite stationary G-spaces."""

__version__ = "0.1.0"

from .errors import (DomainError, GroupwalkError, NonConvergenceError,
                     OutOfRangeError, PreconditionError, ResourceLimitError)
from .groups import (FreeAbelian, FreeGroup, Group, Heisenberg, Lamplighter,
                     group_from_id)
from .measures import (FiniteMeasure, adjoint, convolve, dirac,
                       finite_measure, measure_from_text, measure_to_text,
                       power, power_sequence, srw, total_variation)
from .wordmetric import (BallTable, build_ball, check_seminorm,
                         lamplighter_norm, norm_evaluator, word_norm)

__all__ = [
    "DomainError", "GroupwalkError", "NonConvergenceError", "OutOfRangeError",
    "PreconditionError", "ResourceLimitError",
    "FreeAbelian", "FreeGroup", "Group", "Heisenberg", "Lamplighter",
    "group_from_id",
    "FiniteMeasure", "adjoint", "convolve", "dirac", "finite_measure",
    "measure_from_text", "measure_to_text", "power", "power_sequence", "srw",
    "total_variation",
    "BallTable", "build_ball", "check_seminorm", "lamplighter_norm",
    "norm_evaluator", "word_norm",
    "__version__",
]
