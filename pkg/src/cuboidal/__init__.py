"""Lattice sums and packing invariants of the cuboidal lattice family.

The family interpolates through the axial centred-cuboidal, body-centred
cubic, mean centred-cuboidal and face-centred cubic lattices as the
anisotropy parameter A sweeps (0, infinity).  The library computes the exact
geometry (Gram matrices, minimum norms, packing densities, kissing numbers),
evaluates the associated zeta function and its A-derivatives by rigorously
truncated direct summation, and verifies numerically that the zeta function
has an interior local minimum at the body-centred cubic point A = 1/2.
"""

from .analysis import (
    BccMinimumReport,
    MinimumLocation,
    ScanRow,
    ScanTable,
    argmin_scan,
    bracket_minimum,
    density_table,
    scan_zeta,
    verify_bcc_minimum,
)
from .lattice import (
    AnisotropyParam,
    CuboidalLattice,
    Regime,
    build_lattice,
    classify,
    density_derivative,
    enumerated_minimum,
    gram_min_eigenvalue,
    kissing_number,
    minimum_norm,
    normalization_scale,
    packing_density,
    quadratic_form,
    second_minimum_norm,
)
from .limits import (
    LimitReport,
    collapsed_axis_vectors,
    finite_sublattice_vectors,
    square_lattice_zeta,
    verify_A_to_inf,
    verify_A_to_zero,
    verify_s_to_inf,
)
from .zeta import (
    COMPENSATED,
    PLAIN,
    DivergenceError,
    SumSpec,
    UnattainableToleranceError,
    ZetaValue,
    epstein_zeta,
    epstein_zeta_transformed,
    first_derivative,
    first_derivative_at_bcc_symmetrized,
    second_derivative,
    second_derivative_at_bcc,
    tail_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AnisotropyParam",
    "BccMinimumReport",
    "COMPENSATED",
    "CuboidalLattice",
    "DivergenceError",
    "LimitReport",
    "MinimumLocation",
    "PLAIN",
    "Regime",
    "ScanRow",
    "ScanTable",
    "SumSpec",
    "UnattainableToleranceError",
    "ZetaValue",
    "argmin_scan",
    "bracket_minimum",
    "build_lattice",
    "classify",
    "collapsed_axis_vectors",
    "density_derivative",
    "density_table",
    "enumerated_minimum",
    "epstein_zeta",
    "epstein_zeta_transformed",
    "finite_sublattice_vectors",
    "first_derivative",
    "first_derivative_at_bcc_symmetrized",
    "gram_min_eigenvalue",
    "kissing_number",
    "minimum_norm",
    "normalization_scale",
    "packing_density",
    "quadratic_form",
    "scan_zeta",
    "second_derivative",
    "second_derivative_at_bcc",
    "second_minimum_norm",
    "square_lattice_zeta",
    "tail_bound",
    "verify_A_to_inf",
    "verify_A_to_zero",
    "verify_bcc_minimum",
    "verify_s_to_inf",
]
