"""Harmonic functions and Dirichlet eigenfunctions on the Hata tree set."""

__version__ = "0.1.0"

from .geometry import (
    DEFAULT_ALPHA,
    Address,
    AdmissibilityError,
    IfsParams,
    VertexGraph,
    build_graph,
    canonicalize,
    coordinate,
)
from .harmonic import (
    VertexFunction,
    check_harmonicity,
    extend_data,
    extend_once,
    harmonic_from_boundary,
)
from .measure import MeasureWeights, measure_weights, mu_vertex, mu_zero
from .spectral import (
    SpectralError,
    SpectralResult,
    classify_support,
    derive_eigenfunction,
    dirichlet_spectrum,
    pair_spectrum,
    solve_dirichlet,
)
from .structure import (
    HarmonicStructure,
    assemble_laplacian,
    euclidean_dimension,
    resistance_dimension,
)
from .trace import (
    TraceSeries,
    ThetaReport,
    functional_equation_check,
    monotonicity_check,
    restrict_to_interval,
    theta_analysis,
)
