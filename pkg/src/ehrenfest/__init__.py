"""Classical, semiclassical, and exact quantum phase-space paths.

A particle prepared in a minimum-uncertainty Gaussian (coherent) state
is propagated three ways on a shared time grid: the bare classical
trajectory with its linear-stability (tangent) matrix; the
semiclassical path obtained by integrating the Gaussian-smeared force;
and an exact split-step Fourier reference on a spatial grid.  Potentials
are arbitrary polynomials or a single upward step.
"""

from .classical import (
    ClassicalState,
    PhasePoint,
    SystemParams,
    TangentMatrix,
    integrate,
    rk4_step,
    step_path,
    step_trajectory,
)
from .errors import (
    ComparisonError,
    ConfigError,
    DomainExhaustedError,
    EhrenfestError,
    NonNormalizableError,
    NumericalError,
    QuadratureError,
    TrajectoryDivergedError,
)
from .potentials import PolynomialPotential, StepPotential, hermite_real
from .quantum import (
    ExpectationSeries,
    Grid,
    WavefunctionGrid,
    expectations,
    gaussian_moment,
    init_coherent,
    propagate_record,
    short_time_accel,
    strang_step,
)
from .scenarios import (
    ComparisonSummary,
    PathRecord,
    PRESET_NAMES,
    QuantumSpec,
    Scenario,
    compare,
    dump_scenario,
    dumps_scenario,
    emit,
    load_scenario,
    loads_scenario,
    preset,
    read_record_csv,
    run_scenario,
)
from .semiclassical import (
    HellerState,
    SemiclassicalPath,
    WidthState,
    accel_hermite,
    accel_quadrature,
    accel_series,
    accel_step,
    heller_state,
    heller_states,
    heller_wavefunction,
    integrate_path,
    sigma,
    width_state,
)

__version__ = "0.1.0"
