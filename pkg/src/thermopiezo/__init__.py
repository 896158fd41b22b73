"""Linear thermopiezoelectricity of second-gradient materials with
Green-Laws heat conduction: constitutive map, admissibility checks and a
1D coupled simulator."""

from __future__ import annotations

__version__ = "0.1.0"

from .admissibility import (
    AdmissibilityReport,
    QuadFormMatrix,
    a3_eigenvalues,
    a5_eigen_check,
    assemble_quadform,
    assemble_W2_matrix,
    check_isotropic,
    check_numeric,
    cross_validate,
)
from .constitutive import (
    LocalState,
    Response,
    evaluate,
    form_F,
    form_G,
    form_P,
    form_W,
    lyapunov_density,
)
from .material import (
    AnisoMaterial,
    IsoMaterial,
    SymmetryReport,
    default_material,
    expand_isotropic,
    load_material,
    validate_symmetries,
)
from .simulator1d import (
    Coeffs1D,
    Grid1D,
    SimConfig,
    SimResult,
    SimState1D,
    init_theta_dot,
    reduce_to_1d,
    run,
    solve_potential,
    step,
    uniqueness_experiment,
)
from .tensor_core import (
    Kappa,
    Sym2,
    field_from_potential,
    kappa_from_second_gradient,
    pack18,
    strain_from_gradient,
    unpack18,
)
