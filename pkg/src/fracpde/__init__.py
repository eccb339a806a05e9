"""Fractional-order calculus and fractional elliptic PDE toolkit."""

from .errors import (
    BranchCollision,
    CutoffExceedsNyquist,
    DCUndefined,
    DimensionMismatch,
    DomainOrder,
    EdgeLeakage,
    EdgeLeakageWarning,
    FracpdeError,
    NoRFound,
    NonConvergent,
    NotAnalytic,
    NotElliptic,
    NotSmoothEnough,
    PoleHitWarning,
    TooFewBands,
    UnknownCatalogEntry,
    UnknownCheckId,
    UnreliableFitWarning,
    WrongSign,
)
from .fracops import (
    DifferintOrder,
    QuadratureConfig,
    caputo_derivative,
    closed_form_oracle,
    differint,
    fourier_differint,
    fourier_multiplier,
    frac_binomial,
    hankel_differintegral,
    rl_derivative,
    rl_integral,
)
from .functions import (
    CATALOG_NAMES,
    CallableFn,
    FunctionSpec,
    SampledCurve,
    bump,
    catalog_lookup,
    exponential,
    gaussian,
    polynomial,
    power,
    step,
)
from .sobolev import (
    RegularityEstimate,
    ShellSpectrum,
    band_floor,
    estimate_regularity,
    export_shell_csv,
    shell_spectrum,
    sobolev_norm,
    windowed_shells,
)
from .spectral import (
    BoxGrid,
    Field,
    Parametrix,
    SolveResult,
    SpectralField,
    apply_operator,
    build_cutoff,
    build_parametrix,
    convolve,
    export_slice,
    inverse,
    load_field,
    sample_field,
    save_field,
    solve_elliptic,
    transform,
)
from .symbols import (
    BoundsEstimate,
    EllipticityReport,
    FracSymbol,
    OrderInfo,
    SymbolTerm,
    branch_power,
    check_ellipticity,
    estimate_bounds,
    multiply_symbols,
    order_and_gap,
    principal_symbol,
    require_elliptic,
    symbol_eval,
)
from .verify import (
    CANONICAL_CHECK_IDS,
    CheckResult,
    ExperimentRow,
    VerifyConfig,
    run_commutator_check,
    run_identity_suite,
    run_regularity_experiment,
    write_experiment_csv,
    write_identity_report,
)

__version__ = "0.1.0"
