"""Recognition of graded action data and the one-dimensional constraint solver."""

from .recognize import Recognition, choose_direction, recognize
from .solver import (
    Family,
    Identity,
    SolveReport,
    SolverError,
    SolverState,
    cubic_identity,
    eliminate,
    family_to_table,
    gen_constraints,
    identity_holds,
    pair_identities,
    classical_identities,
    sigma_image_check,
    solve_p1,
)
from .table import (
    ActionTable,
    WindowError,
    generator_keys,
    rebase_table,
    table_from_spec,
    unbase_table,
)

__all__ = [
    "ActionTable",
    "Family",
    "Identity",
    "Recognition",
    "SolveReport",
    "SolverError",
    "SolverState",
    "WindowError",
    "choose_direction",
    "cubic_identity",
    "eliminate",
    "family_to_table",
    "gen_constraints",
    "generator_keys",
    "identity_holds",
    "pair_identities",
    "classical_identities",
    "rebase_table",
    "recognize",
    "sigma_image_check",
    "solve_p1",
    "table_from_spec",
    "unbase_table",
]
