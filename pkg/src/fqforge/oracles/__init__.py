"""Word-problem oracles and subgroup membership procedures."""

from .amalgam import AmalgamOracle
from .base import (
    DEFAULT_BUDGET,
    Answer,
    Budget,
    GroupOracle,
    Inconclusive,
    UnsupportedQuery,
    Verdict,
    as_budget,
    default_budget,
    equal,
)
from .basic import DirectProductOracle, FiniteOracle, FreeAbelianOracle, FreeOracle, RelabeledOracle
from .free_product import FreeProductOracle, power_membership_free_product
from .hnn import HnnOracle, StableLetter, britton_reduce, conjugate_by
from .membership import (
    CyclicPower,
    CyclicStableMembership,
    FreeFactor,
    Member,
    MembershipOracle,
    MembershipResult,
    Relabeled,
    Retract,
    StallingsGraph,
    TrivialSubgroup,
    member,
)

__all__ = [
    "DEFAULT_BUDGET", "Answer", "Budget", "GroupOracle", "Inconclusive", "UnsupportedQuery",
    "Verdict", "as_budget", "default_budget", "equal",
    "FreeOracle", "FreeAbelianOracle", "FiniteOracle", "DirectProductOracle", "RelabeledOracle",
    "FreeProductOracle", "power_membership_free_product",
    "HnnOracle", "StableLetter", "britton_reduce", "conjugate_by",
    "AmalgamOracle",
    "Member", "MembershipOracle", "MembershipResult", "TrivialSubgroup", "CyclicPower",
    "Relabeled", "Retract", "FreeFactor", "StallingsGraph", "CyclicStableMembership", "member",
]
