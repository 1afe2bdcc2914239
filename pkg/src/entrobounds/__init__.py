"""Differential entropy, total-variation continuity bounds, and
moment/sup-bounded density classes, computed by adaptive quadrature.

The package is organized around five layers:

* :mod:`entrobounds.quadrature`: the adaptive Gauss-Kronrod engine;
* :mod:`entrobounds.densities`: density descriptors, catalog, transforms;
* :mod:`entrobounds.functionals`: entropy, moments, distances, and the
  truncated functionals of the bound derivation;
* :mod:`entrobounds.bounds`: closed-form constants, membership, and
  inequality checks;
* :mod:`entrobounds.verify`: batch verification scenarios with JSON/CSV
  reports (also reachable through the ``entrobounds`` command).
"""

from .densities import (
    ClassSpec,
    ClosedForms,
    Density,
    Known,
    convolve,
    counterexample_p,
    counterexample_q,
    gaussian,
    generalized_normal,
    iid_product,
    normalized_difference,
    scale,
    uniform,
)
from .functionals import (
    FunctionalValue,
    alpha_moment,
    mass,
    differential_entropy,
    ess_sup,
    relative_entropy,
    total_variation,
    truncated_alpha_moment,
    truncated_entropy,
    truncated_mass,
    truncated_relative_entropy_to_gn,
    xlogx_gap,
)
from .bounds import (
    BoundCheck,
    BoundConstants,
    HypothesisViolationError,
    MembershipReport,
    OutOfClassError,
    check_continuity_bound,
    check_entropy_bound,
    check_membership,
    continuity_bound,
    scaled_class_params,
    sum_class_params,
    theorem_constants,
    truncated_entropy_cap,
    z_class_params,
)
from .quadrature import IntegrationRegion, QuadratureResult, integrate, integrate_nd
from .verify import (
    VerificationReport,
    divergence_sweep_p,
    divergence_sweep_q,
    lemma2_sweep,
    proof_replication,
    run_scenario,
    run_theorem_suite,
)

__version__ = "0.1.0"

__all__ = [
    "ClassSpec",
    "ClosedForms",
    "Density",
    "Known",
    "convolve",
    "counterexample_p",
    "counterexample_q",
    "gaussian",
    "generalized_normal",
    "iid_product",
    "normalized_difference",
    "scale",
    "uniform",
    "FunctionalValue",
    "alpha_moment",
    "mass",
    "differential_entropy",
    "ess_sup",
    "relative_entropy",
    "total_variation",
    "truncated_alpha_moment",
    "truncated_entropy",
    "truncated_mass",
    "truncated_relative_entropy_to_gn",
    "xlogx_gap",
    "BoundCheck",
    "BoundConstants",
    "HypothesisViolationError",
    "MembershipReport",
    "OutOfClassError",
    "check_continuity_bound",
    "check_entropy_bound",
    "check_membership",
    "continuity_bound",
    "scaled_class_params",
    "sum_class_params",
    "theorem_constants",
    "truncated_entropy_cap",
    "z_class_params",
    "QuadratureResult",
    "IntegrationRegion",
    "integrate",
    "integrate_nd",
    "VerificationReport",
    "divergence_sweep_p",
    "divergence_sweep_q",
    "lemma2_sweep",
    "proof_replication",
    "run_scenario",
    "run_theorem_suite",
    "__version__",
]
