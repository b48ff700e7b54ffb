"""Transient fluorescence spectra and entanglement of two atoms in a squeezed vacuum."""

__version__ = "0.1.0"

from .correlation import CorrelationKernel, correlation
from .dynamics import (
    SingularSystem,
    channel_matrix,
    evolve_channel,
    evolve_populations,
    population_system,
    population_trajectory,
    steady_coherence_closed_form,
    steady_state,
)
from .entanglement import (
    NotXState,
    concurrence_general,
    concurrence_terms,
    concurrence_trajectory,
    concurrence_xstate,
    esd_times,
)
from .figures import FIGURES, UnknownFigure, get_figure
from .geometry import AtomPairGeometry, DomainError, collective_damping
from .liouville import (
    build_liouvillian,
    correlation_oracle,
    evolve_oracle,
    steady_state_oracle,
    two_time_correlation_oracle,
)
from .params import (
    Channel,
    CollectiveState,
    InvalidDensityMatrix,
    PhysicalityViolation,
    RangeViolation,
    SystemParams,
    bell_collective_state,
    bell_initial_state,
    check_density_matrix,
    validate_params,
)
from .spectrum import (
    QuadratureNotConverged,
    SpectrumGrid,
    WellSeparationViolated,
    analytic_dicke_spectrum,
    broadband_spectrum,
    detect_hole,
    physical_spectrum,
    physical_spectrum_grid,
)

__all__ = [
    "analytic_dicke_spectrum",
    "AtomPairGeometry",
    "bell_collective_state",
    "bell_initial_state",
    "broadband_spectrum",
    "build_liouvillian",
    "Channel",
    "channel_matrix",
    "check_density_matrix",
    "collective_damping",
    "CollectiveState",
    "concurrence_general",
    "concurrence_terms",
    "concurrence_trajectory",
    "concurrence_xstate",
    "correlation",
    "correlation_oracle",
    "CorrelationKernel",
    "detect_hole",
    "DomainError",
    "esd_times",
    "evolve_channel",
    "evolve_oracle",
    "evolve_populations",
    "FIGURES",
    "get_figure",
    "InvalidDensityMatrix",
    "NotXState",
    "physical_spectrum",
    "physical_spectrum_grid",
    "PhysicalityViolation",
    "population_system",
    "population_trajectory",
    "QuadratureNotConverged",
    "RangeViolation",
    "SingularSystem",
    "SpectrumGrid",
    "steady_coherence_closed_form",
    "steady_state",
    "steady_state_oracle",
    "SystemParams",
    "two_time_correlation_oracle",
    "UnknownFigure",
    "validate_params",
    "WellSeparationViolated",
]
