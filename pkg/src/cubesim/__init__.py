"""Simulations of single-shot interaction-free measurements in N-path
interferometers, under standard quantum mechanics and under the
density-cube model with genuine three-path coherence."""

from .cubes import (
    PhaseFunction,
    basis_cube,
    basis_cubes,
    default_phase_function,
    dephase,
    luders_update_cube,
    measure_path_prob,
    nonquantum_cube,
    quantum_to_cube,
)
from .experiments import (
    cube_tradeoff_bound,
    region_scan,
    region_scan_csv,
    run_cube_ifm,
    run_quantum_presets,
    sample_clicks,
    sorkin_term,
)
from .multiport import (
    MATRIX_TOL,
    MultiportMatrix,
    MultiportReport,
    PhaseMatrix,
    SubBasis,
    apply_transform,
    assemble_multiport,
    build_phase_matrix,
    from_coords,
    hermitian_sqrt,
    optimal_cubes,
    sub_basis,
    t3_matrix,
    to_coords,
    verify_multiport,
)
from .quantum import (
    SUPPORT_TOL,
    DensityMatrix,
    UnitaryMatrix,
    fourier_unitary,
    inject_first_path,
    luders_remove_path,
    quantum_ifm,
    quantum_tradeoff_bounds,
    support_projector,
)
from .results import IFMResult, results_to_csv
from .tensor import (
    DEFAULT_TOL,
    HermitianCube,
    Tolerance,
    cube_from_json_dict,
    cube_inner,
    cube_to_json_dict,
    extract_canonical,
    hermitian_complete,
    is_hermitian,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "MATRIX_TOL",
    "SUPPORT_TOL",
    "DensityMatrix",
    "HermitianCube",
    "IFMResult",
    "MultiportMatrix",
    "MultiportReport",
    "PhaseFunction",
    "PhaseMatrix",
    "SubBasis",
    "Tolerance",
    "UnitaryMatrix",
    "apply_transform",
    "assemble_multiport",
    "basis_cube",
    "basis_cubes",
    "build_phase_matrix",
    "cube_from_json_dict",
    "cube_inner",
    "cube_to_json_dict",
    "cube_tradeoff_bound",
    "default_phase_function",
    "dephase",
    "extract_canonical",
    "fourier_unitary",
    "from_coords",
    "hermitian_complete",
    "hermitian_sqrt",
    "inject_first_path",
    "is_hermitian",
    "luders_remove_path",
    "luders_update_cube",
    "measure_path_prob",
    "nonquantum_cube",
    "optimal_cubes",
    "quantum_ifm",
    "quantum_to_cube",
    "quantum_tradeoff_bounds",
    "region_scan",
    "region_scan_csv",
    "results_to_csv",
    "run_cube_ifm",
    "run_quantum_presets",
    "sample_clicks",
    "sorkin_term",
    "sub_basis",
    "support_projector",
    "t3_matrix",
    "to_coords",
    "verify_multiport",
]
