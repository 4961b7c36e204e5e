"""Enumeration caps shared by every module."""

import os

ENV_BUDGET = "LATTICE_EFFECTS_BUDGET"

# bit-mask width of powerset carriers
MAX_POWERSET_GROUND = 20
# explicit (tabulated) posets
MAX_EXPLICIT_ELEMENTS = 4096
# full lattice of closure operators is materialized only up to this ground size
MAX_SYSTEM_LATTICE_GROUND = 3
# any 14-element poset has at most 2**14 antichains
MAX_ANTICHAINS = 1 << 14

DEFAULT_BUDGET = 4_000_000


def enumeration_budget():
    """Pair/candidate budget for exhaustive enumerations.

    The environment variable ``LATTICE_EFFECTS_BUDGET`` overrides the default.
    """
    raw = os.environ.get(ENV_BUDGET)
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_BUDGET} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{ENV_BUDGET} must be positive, got {value}")
    return value
