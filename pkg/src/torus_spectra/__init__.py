"""Lattice shells, autocorrelation spectra of squared eigenfunctions on flat
tori, translate-budget verification, and sphere-constrained extremization."""

from .errors import (
    AliasingError,
    AntipodalError,
    CoefficientFileError,
    ContractError,
    DegenerateSimplexError,
    MembershipError,
    RangeError,
    ResourceLimitError,
    TorusSpectraError,
)
from .extremizer import (
    AscentRun,
    ExtremalReport,
    ExtremizerConfig,
    SpectrumEngine,
    finite_difference_gradient,
    gradient,
    maximize,
    objective,
)
from .lattice import Point, SphereShell, contains, enumerate_shell, shell_to_json, sign_canonical
from .lemma import (
    LemmaSweepReport,
    Simplex,
    TranslateReport,
    find_translates,
    sweep_to_json,
    validate_simplex,
    verify_lemma,
)
from .spectra import (
    AutocorrelationSpectrum,
    BoundReport,
    EigenfunctionCoeffs,
    ParsevalResult,
    applicable_bound,
    autocorrelation,
    bound_constant,
    check_theorem,
    coeffs_from_json,
    coeffs_to_json,
    grid_density,
    lp_norm,
    min_alias_free_grid,
    parseval_check,
    random_coeffs,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "AntipodalError",
    "AscentRun",
    "AutocorrelationSpectrum",
    "BoundReport",
    "CoefficientFileError",
    "ContractError",
    "DegenerateSimplexError",
    "EigenfunctionCoeffs",
    "ExtremalReport",
    "ExtremizerConfig",
    "LemmaSweepReport",
    "MembershipError",
    "ParsevalResult",
    "Point",
    "RangeError",
    "ResourceLimitError",
    "Simplex",
    "SphereShell",
    "SpectrumEngine",
    "TorusSpectraError",
    "TranslateReport",
    "applicable_bound",
    "autocorrelation",
    "bound_constant",
    "check_theorem",
    "coeffs_from_json",
    "coeffs_to_json",
    "contains",
    "enumerate_shell",
    "find_translates",
    "finite_difference_gradient",
    "grid_density",
    "gradient",
    "lp_norm",
    "maximize",
    "min_alias_free_grid",
    "objective",
    "parseval_check",
    "random_coeffs",
    "shell_to_json",
    "sign_canonical",
    "sweep_to_json",
    "validate_simplex",
    "verify_lemma",
]
