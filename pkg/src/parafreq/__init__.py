"""Numerical verification lab for parabolic frequency on shrinker backgrounds.

Exact spectral evolutions of heat-type flows on analytic self-shrinkers
(planes, spheres, round cylinders), with machine checks that report signed
margins for every monotonicity, two-time, and eigenvalue bound the frequency
satisfies.  See the README for the scenario CLI.
"""

from ._version import __version__
from .backgrounds import (
    Background,
    Cylinder,
    GeometryData,
    Plane,
    QuadratureRule,
    Sphere,
    UnsupportedBackgroundError,
    geometry_at,
    kappa,
    quadrature,
    total_mass,
    unit_sphere_area,
)
from .evolution import (
    CoefficientField,
    ConstantRate,
    Forcing,
    ModeMatrix,
    SampledRate,
    ScalarOnU,
    TimeGrid,
    ToleranceNotMetError,
    Trajectory,
    evolve_exact,
    evolve_exact_trajectory,
    evolve_forced,
    forcing_bound_margin,
)
from .frequency import (
    FrequencyTrace,
    TraceRow,
    ZeroFieldError,
    cauchy_schwarz_defect,
    compute_D,
    compute_D_quadrature,
    compute_I,
    compute_I_quadrature,
    compute_N_raw,
    compute_U,
    lambda1,
    trace_from_trajectory,
)
from .modes import (
    Mode,
    combination_gradients,
    combination_hessians,
    combination_values,
    enumerate_modes,
    evaluate_mode,
    first_nonzero_eigenvalue,
    mode_from_index,
    mode_function,
    mode_sort_key,
)
from .polynomials import AmbientPolynomial
from .scenario import (
    ConfigError,
    RunOutput,
    ScenarioConfig,
    emit_plot_script,
    emit_report_json,
    emit_trace_csv,
    load_config,
    load_report_json,
    parse_config,
    run_scenario,
)
from .verifiers import (
    NodeCheck,
    VerificationReport,
    report_from_dict,
    standard_test_functions,
    verify_drift_bochner,
    verify_drift_bochner_verbatim,
    verify_eigenvalue_monotonicity,
    verify_equality_case,
    verify_frequency_monotonicity,
    verify_general_bounds,
    verify_general_harnack,
    verify_harnack,
    verify_harnack_printed,
    verify_quadrature_mass,
    verify_selfsimilar_scaling,
    verify_weighted_monotonicity,
)

__all__ = [
    "__version__",
    "AmbientPolynomial",
    "Background",
    "CoefficientField",
    "ConfigError",
    "ConstantRate",
    "Cylinder",
    "Forcing",
    "FrequencyTrace",
    "GeometryData",
    "Mode",
    "ModeMatrix",
    "NodeCheck",
    "Plane",
    "QuadratureRule",
    "RunOutput",
    "SampledRate",
    "ScalarOnU",
    "ScenarioConfig",
    "Sphere",
    "TimeGrid",
    "ToleranceNotMetError",
    "TraceRow",
    "Trajectory",
    "UnsupportedBackgroundError",
    "VerificationReport",
    "ZeroFieldError",
    "cauchy_schwarz_defect",
    "combination_gradients",
    "combination_hessians",
    "combination_values",
    "compute_D",
    "compute_D_quadrature",
    "compute_I",
    "compute_I_quadrature",
    "compute_N_raw",
    "compute_U",
    "emit_plot_script",
    "emit_report_json",
    "emit_trace_csv",
    "enumerate_modes",
    "evaluate_mode",
    "evolve_exact",
    "evolve_exact_trajectory",
    "evolve_forced",
    "first_nonzero_eigenvalue",
    "forcing_bound_margin",
    "geometry_at",
    "kappa",
    "lambda1",
    "load_config",
    "load_report_json",
    "mode_from_index",
    "mode_function",
    "mode_sort_key",
    "parse_config",
    "quadrature",
    "report_from_dict",
    "run_scenario",
    "standard_test_functions",
    "total_mass",
    "trace_from_trajectory",
    "unit_sphere_area",
    "verify_drift_bochner",
    "verify_drift_bochner_verbatim",
    "verify_eigenvalue_monotonicity",
    "verify_equality_case",
    "verify_frequency_monotonicity",
    "verify_general_bounds",
    "verify_general_harnack",
    "verify_harnack",
    "verify_harnack_printed",
    "verify_quadrature_mass",
    "verify_selfsimilar_scaling",
    "verify_weighted_monotonicity",
]
