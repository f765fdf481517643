"""ssk3: exact arithmetic for supersingular K3 lattices, characteristic
subspaces, the P^1-bundle structure on their moduli, and formal group heights,
with brute-force oracles for everything."""

__version__ = "0.1.0"

from .errors import GuardExceeded, InvariantViolation
from .fields import (
    FieldCtx,
    FieldElement,
    embed,
    frobenius,
    make_field,
    solve_p_plus_1_root,
)
from .lattices import (
    GramLattice,
    artin_invariant_from_disc,
    direct_sum,
    disc_kernel_space,
    discriminant,
    find_hyperbolic_pair,
    make_U,
    make_U_prime,
    smith_normal_form,
    twist,
)
from .quadratic_spaces import (
    BilinearSpace,
    Subspace,
    enumerate_totally_isotropic,
    extend_field,
    intersect_subspaces,
    is_neutral,
    is_totally_isotropic,
    orthogonal_complement,
    standard_N0,
    sum_subspaces,
    witt_index,
)
from .crystals import (
    CharacteristicSubspace,
    enumerate_characteristic,
    is_characteristic,
    is_strictly_characteristic,
    phi,
)
from .moduli import (
    FiberDescription,
    FiberPoint,
    PlusSpace,
    build_plus_space,
    corollary_step,
    count_points,
    fiber_enumerate,
    fiber_formula,
    gamma_plus,
    isogeny_height,
    kummer_height,
    sigma_section,
    tower_prediction,
)
from .formal_groups import (
    INFINITE_HEIGHT,
    FormalGroupLaw,
    TorsionReport,
    fgl_additive,
    fgl_lubin_tate,
    fgl_multiplicative,
    height,
    n_series,
    torsion_analysis,
    verify_axioms,
)
