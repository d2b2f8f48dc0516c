"""Two-phase laser melting solvers and symmetry checks."""

from ._core import (
    MaterialSpec,
    SelfSimilarSolution,
    TimeLaw,
    TravellingWaveSolution,
    build_transformed_bvp,
    classify_rod_bvp,
    kirchhoff_forward,
    kirchhoff_inverse,
    profile_physical,
    solve_self_similar,
    solve_travelling_wave,
    validate_travelling_wave,
    verify_table2_generators,
    __version__,
)

__all__ = [
    "MaterialSpec",
    "SelfSimilarSolution",
    "TimeLaw",
    "TravellingWaveSolution",
    "build_transformed_bvp",
    "classify_rod_bvp",
    "kirchhoff_forward",
    "kirchhoff_inverse",
    "profile_physical",
    "solve_self_similar",
    "solve_travelling_wave",
    "validate_travelling_wave",
    "verify_table2_generators",
    "__version__",
]
