"""Exact contextuality toolkit: scenarios, empirical models, LP verdicts and sample bundles."""

from .bundle import (
    Gauge,
    SampleBundle,
    apply_gauge,
    enumerate_sections,
    hollow_triangle_bundle,
    is_trivializable,
    moebius_bundle,
    nondisturbing_base_polytope,
    product_bundle,
    pushforward,
    twist_report,
)
from .decide import (
    check_extends,
    enumerate_assignments,
    is_noncontextual,
    verify_certificate,
    verify_extension,
)
from .errors import CtxkitError, InputError, TooLargeError, UnsupportedError
from .model import (
    DeterministicAssignment,
    Distribution,
    EmpiricalModel,
    check_no_disturbance,
    deterministic_model,
    marginalize,
    mix,
)
from .scenario import (
    Measurement,
    Scenario,
    betti_numbers,
    is_acyclic,
    make_classical,
    make_n_cycle,
    validate_scenario,
)
from .subscenario import check_sequence, induced_subscenario, is_subscenario, restrict_contexts

__version__ = "0.1.0"
