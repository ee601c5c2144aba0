"""Extended probability measures on finite state spaces.

Signed, absolutely normalized set functions, latent/actual discovery
dynamics with sign-flip updating, credal envelopes and cores, and
Dutch-book coherence checks.
"""
from .coherence import (
    DutchBookCandidate,
    bettable_family,
    bettable_family_bruteforce,
    dutch_book_for_prices,
    find_dutch_book,
    lower_dutch_book,
)
from .credal import (
    CoreReport,
    CredalSet,
    Envelope,
    conjugate_upper,
    core,
    event_bounds,
    geometric_conditional,
    hausdorff,
    in_core,
    lower,
    singleton_envelope,
    update_envelope,
    upper,
    validate_capacity,
)
from .dynamics import (
    DiscoveryProcess,
    Split,
    Trajectory,
    critical_events,
    d_etv,
    d_etv_bruteforce,
    eval_by_partition,
    induced_regular,
    init_extended,
    limit_measure,
    observe,
    run_discovery,
    sign_conditions,
)
from .errors import (
    ConditioningOnNullError,
    InvalidEventError,
    LPFailure,
    RestartRequired,
    SpaceMismatchError,
    SpaceTooLargeError,
    ValidationError,
    XProbError,
)
from .kernels import BACKEND
from .measure import (
    ExtendedMeasure,
    ValidationReport,
    complement,
    conditional,
    evaluate,
    is_independent,
    validate,
)
from .space import Event, StateSpace

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConditioningOnNullError",
    "CoreReport",
    "CredalSet",
    "DiscoveryProcess",
    "DutchBookCandidate",
    "Envelope",
    "Event",
    "ExtendedMeasure",
    "InvalidEventError",
    "LPFailure",
    "RestartRequired",
    "SpaceMismatchError",
    "SpaceTooLargeError",
    "Split",
    "StateSpace",
    "Trajectory",
    "ValidationError",
    "ValidationReport",
    "XProbError",
    "bettable_family",
    "bettable_family_bruteforce",
    "complement",
    "conditional",
    "conjugate_upper",
    "core",
    "critical_events",
    "d_etv",
    "d_etv_bruteforce",
    "dutch_book_for_prices",
    "eval_by_partition",
    "evaluate",
    "event_bounds",
    "find_dutch_book",
    "geometric_conditional",
    "hausdorff",
    "in_core",
    "induced_regular",
    "init_extended",
    "is_independent",
    "limit_measure",
    "lower",
    "lower_dutch_book",
    "observe",
    "run_discovery",
    "sign_conditions",
    "singleton_envelope",
    "update_envelope",
    "upper",
    "validate",
    "validate_capacity",
]
