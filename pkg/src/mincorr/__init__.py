"""Measurement-induced nonlocality and geometric quantum discord for bipartite states."""

__version__ = "0.1.0"

from .algebra import partial_trace, partial_transpose, eig_hermitian, schmidt_decompose
from .errors import (
    MinCorrError,
    DimensionError,
    ValidationError,
    HermiticityError,
    TraceError,
    NegativityError,
    NormalizationError,
    CapacityError,
    NumericalError,
    UnsupportedDimensionError,
    DegenerateMarginalError,
)
from .states import (
    DensityMatrix,
    PureState,
    ClassicalSpectrum,
    bell_state,
    bell_diagonal,
    werner,
    isotropic,
    max_entangled_mixed,
    classical_state,
    cq_state,
    qc_state,
    product_state,
    random_density,
    random_pure,
    load_state,
    save_state,
)
from .measurements import ProjectiveMeasurement, feasible_family, apply_measurement
from .decompositions import correlation_matrix, gmqd_lower_bound, block_decomposition
from .optimize import OptimizerOptions
from .measures import (
    MeasureResult,
    min_one_sided,
    min_two_sided,
    min_pure_closed_form,
    gmqd_one_sided,
    gmqd_two_sided,
    entropic_discord_two_sided,
    mutual_information,
)
from .nullity import NullityReport, is_zero_min_one_sided, is_zero_min_two_sided, check_theorem4, depolarize
from .oracle import GridSpec, grid_oracle, sampling_oracle, gmqd_direct_oracle, discontinuity_probe
