"""Adiabatic accessibility, entropy construction and non-equilibrium entropy bounds."""

from .axioms import AxiomReport, check_axioms, witness_violates
from .construction import (
    EntropyEvaluator,
    ReferencePair,
    affine_uniqueness_check,
    availability,
    canonical_entropy,
)
from .errors import (
    AdiabaticError,
    ModelDefectError,
    NonMonotoneError,
    SimulationError,
    SingularIntegrandError,
    StateError,
    UnsupportedQuery,
)
from .nonequilibrium import (
    EmbeddedModel,
    EntropyBand,
    entropy_band,
    gb_checks,
    gb_entropy,
    max_work_bounds,
    s_minus,
    s_plus,
    verify_prop1,
    verify_theorem4,
)
from .relations import (
    EntropyRelation,
    FiniteRelation,
    GridRelation,
    PredicateRelation,
    adiabatically_equivalent,
    comparable,
    precedes,
    reachable_set,
    strictly_precedes,
    transitive_reflexive_closure,
)
from .reports import Check, Report
from .states import CompoundState, ScaledState, StatePoint, compose, scale

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
