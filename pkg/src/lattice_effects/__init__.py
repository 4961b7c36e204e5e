"""Finite order theory for generative effects.

Posets and lattices, closure operators, veils (right adjoints) and their
effect witnesses, contagion systems, timed systems, and filter-lattice lifts.
"""

from .contagion import (
    CascadeTrace,
    Description,
    cascade_trace,
    chain_description,
    interpret,
    merge,
    normalize,
    phenome_of,
    phenome_veil,
    threshold_description,
    zoom_in_veil,
)
from .dynamical import (
    TimedDescription,
    Trajectory,
    agg,
    colim,
    commuting_square_check,
    filtration,
    project_at,
    timed_interpret,
)
from .errors import LatticeEffectsError, PropositionViolation, ValidationError
from .galois import (
    EffectWitness,
    Veil,
    check_veil,
    compose,
    derived_closure,
    derived_kernel,
    detect_effects,
    dual_veil,
    factorize,
    left_adjoint,
    veil_by_meets,
)
from .lifts import (
    congruence_of,
    factor,
    filter_lattice,
    image_semilattice,
    injective_criterion,
    lift_map,
    lift_preserves_effects,
    principal_filter,
    quotient,
    surjective_criterion,
)
from .operators import (
    ClosureOperator,
    KernelOperator,
    MooreFamily,
    check_closure,
    check_kernel,
    closure_join,
    fixed_points,
    from_moore_family,
    join_via_moore_oracle,
    to_moore_family,
)
from .order import (
    FinitePoset,
    FinitePreorder,
    MonotoneMap,
    PowersetLattice,
    hasse_cover,
    join,
    map_space,
    meet,
    poset_from_generators,
    validate_poset,
    validate_preorder,
)

__version__ = "0.1.0"
