"""stochpop: population SDEs under Brownian and alpha-stable noise.

Simulation (Euler-Maruyama with exact stable increments), local and
nonlocal Fokker-Planck stationary densities, deterministic bifurcation
analysis, and stationary-density shape scans for P-bifurcations.
"""

from .analysis import (
    BifurcationBranch,
    BifurcationDiagram,
    Equilibrium,
    Linearization,
    PotentialCurve,
    beta_critical,
    growth_equilibria,
    growth_potential,
    linearization,
    linearized_solution,
    logistic_equilibria,
    logistic_potential,
    normal_form_lambda,
    transcritical_diagram,
)
from .errors import (
    ConfigError,
    EmptySupportError,
    InsufficientDataError,
    NumericalError,
    ParameterDomainError,
    SingularityError,
    StochpopError,
)
from .fpe import (
    DensityField,
    EvolveResult,
    Grid,
    SolverConfig,
    apply_nonlocal_generator_adjoint,
    assemble_generator_adjoint,
    evolve_fpe,
    l1_distance,
    stationary_gaussian_closed_form,
)
from .models import (
    GrowthParams,
    LogisticParams,
    ModelCoefficients,
    carrying_capacity,
    growth_drift,
    logistic_drift,
    make_coefficients,
)
from .pbif import (
    Mode,
    ShapeClassification,
    SweepRecord,
    TransitionReport,
    find_modes,
    locate_transition,
    sweep_parameter,
)
from .sde import (
    Ensemble,
    PathConfig,
    SamplePath,
    empirical_density,
    histogram_density,
    simulate_ensemble,
    simulate_path,
    simulate_qsd_ensemble,
)
from .stable import (
    RngStream,
    StableParams,
    c_alpha,
    characteristic_exponent,
    levy_measure_density,
    sample_standard_stable,
    stable_increment,
)

__version__ = "0.1.0"
