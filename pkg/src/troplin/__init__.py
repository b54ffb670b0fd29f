"""Exact max-plus linear geometry.

Stable meets and joins through tropical Cramer's rule, Puiseux lifts with
step-by-step commutation checks, construction programs with tree
admissibility, and set-level plane geometry up to the tropical Pappus
theorem.  All arithmetic is exact rational.
"""

from .maxplus import (
    DEFAULT_ENUMERATION_BOUND,
    Scalar,
    TropPoint,
    as_scalar,
    cross_product,
    permutation_parity,
    row_maxima_attained_twice,
    stable_conic,
    trop_cramer,
    trop_det,
    trop_det_assignment,
    tropical_add,
    tropical_mul,
)
from .puiseux import (
    DegenerateSystemError,
    PuiseuxPoly,
    TropicalizationError,
    classical_cramer,
    classical_det,
    is_exact_solution,
    tropicalize,
    tropicalize_point,
)
from .multipoly import (
    MultiPoly,
    VariableRegistry,
    cram_o,
    is_multihomogeneous,
    monomials_disjoint,
    pseudo_det,
)
from .construction import (
    CommutationReport,
    ConstructionGraph,
    ConstructionProgram,
    Element,
    ElementCheck,
    GenericLift,
    LiftDegenerateError,
    NonAdmissibleError,
    ProgramBuilder,
    ProgramError,
    ancestor_graph,
    execute_classical,
    execute_tropical,
    generic_lift,
    is_tropically_admissible,
    random_inputs,
    random_plane_program,
    symbolic_lift,
    verify_commutation,
)
from .plane import (
    Cell,
    RAY_DIRECTIONS,
    TropLine,
    WitnessNotFound,
    common_point_witness,
    lifted_common_point_check,
    line_intersection_cells,
    pappus_construct,
    pappus_program,
    pappus_verify,
    point_on_line,
)

__version__ = "0.1.0"
