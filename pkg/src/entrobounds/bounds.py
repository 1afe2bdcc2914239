"""Closed-form constants and inequality checks for the entropy and
continuity bounds over moment-and-supremum bounded density classes.

For a class with shape ``alpha``, moment bound ``v``, supremum bound
``m`` and dimension ``n``:

* every member's entropy exists and satisfies
  ``|h| <= (n/a)|log(av/n)| + log(max(1,m)) + n*log(2*Gamma(1/a+1)) + n/a + 1``;
* two members at total variation ``delta <= m`` satisfy
  ``|h(p) - h(q)| <= c1*delta + c2*delta*log(1/delta)`` with
  ``c1 = (n/a)|log(2av/n)| + |log(m*e)| + log(e/2) + n*log(2*Gamma(1+1/a)) + n/a + 1``
  and ``c2 = n/a + 2``.

The module also carries the class-parameter propagation rules used in
the derivation: rescaling by ``(m*e)^(1/n)`` lands members in a class
with supremum bound ``1/e``; the normalized difference of two members
lands in an explicit class depending on their distance; sums of
independent one-dimensional members land in the c_r-inequality class.

Membership is decided by quadrature with strict inequalities: ties
inside the quadrature error are reported as inconclusive, never forced
either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .densities import ClassSpec, Density
from .functionals import (
    FunctionalValue,
    alpha_moment,
    differential_entropy,
    ess_sup,
    total_variation,
)
from .gammafn import gamma
from .quadrature import DEFAULT_TOL_1D, DEFAULT_TOL_ND

__all__ = [
    "OutOfClassError",
    "HypothesisViolationError",
    "BoundConstants",
    "MembershipReport",
    "BoundCheck",
    "theorem_constants",
    "continuity_bound",
    "truncated_entropy_cap",
    "check_membership",
    "scaled_class_params",
    "z_class_params",
    "sum_class_params",
    "check_entropy_bound",
    "check_continuity_bound",
]


class OutOfClassError(ValueError):
    """A bound was requested for a density outside the class (or whose
    membership could not be settled at the working tolerance)."""


class HypothesisViolationError(ValueError):
    """The continuity bound's hypothesis (distance at most m) fails, so
    the bound is not claimed at all."""


@dataclass(frozen=True)
class BoundConstants:
    """The closed-form constants attached to one class spec.

    ``entropy_bound`` caps ``|h|`` for every member; ``c1`` and ``c2``
    are the continuity-bound coefficients; ``b1`` is the constant
    ``(alpha*v/n) * (2*Gamma(1/alpha+1))^alpha`` entering the truncated
    entropy cap.
    """

    entropy_bound: float
    c1: float
    c2: float
    b1: float
    spec: ClassSpec


@dataclass(frozen=True)
class MembershipReport:
    """Verdict of one density against one class spec, with margins.

    ``belongs`` is True only when both strict inequalities hold with
    room beyond the quadrature error; ``inconclusive`` flags a moment
    margin inside the numerical tie zone.
    """

    alpha_moment: FunctionalValue
    ess_sup: float
    ess_sup_method: str
    belongs: bool
    inconclusive: bool
    margin_v: float
    margin_m: float
    diagnostic: str = ""


@dataclass(frozen=True)
class BoundCheck:
    """One inequality instance: lhs vs rhs with margin and verdict.

    ``converged`` reports whether every underlying integral settled;
    an unsettled check must not be read as a pass.
    """

    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    context: str
    converged: bool = True


def theorem_constants(spec: ClassSpec) -> BoundConstants:
    """Closed-form bound constants for one class spec."""
    a, v, m, n = spec.alpha, spec.v, spec.m, spec.dimension
    na = n / a
    two_gamma = 2.0 * gamma(1.0 / a + 1.0)
    entropy_bound = (
        na * abs(math.log(a * v / n))
        + math.log(max(1.0, m))
        + n * math.log(two_gamma)
        + na
        + 1.0
    )
    c1 = (
        na * abs(math.log(2.0 * a * v / n))
        + abs(math.log(m * math.e))
        + math.log(math.e / 2.0)
        + n * math.log(two_gamma)
        + na
        + 1.0
    )
    c2 = na + 2.0
    b1 = (a * v / n) * two_gamma**a
    return BoundConstants(entropy_bound, c1, c2, b1, spec)


def continuity_bound(spec: ClassSpec, delta: float) -> float:
    """Right side ``c1*delta + c2*delta*log(1/delta)`` of the
    continuity bound, defined only on 0 < delta <= m."""
    delta = float(delta)
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    if delta > spec.m:
        raise HypothesisViolationError(
            f"delta={delta:g} exceeds the class supremum bound m={spec.m:g}; "
            "the continuity bound is not claimed there"
        )
    consts = theorem_constants(spec)
    return consts.c1 * delta + consts.c2 * delta * math.log(1.0 / delta)


def truncated_entropy_cap(spec: ClassSpec) -> float:
    """Window-independent cap on the truncated entropy of a member
    rescaled by ``max(m,1)^(1/n)``:
    ``(n/a)|log b1| + log(max(m,1)) + n/a + 1``."""
    consts = theorem_constants(spec)
    na = spec.dimension / spec.alpha
    return na * abs(math.log(consts.b1)) + math.log(max(spec.m, 1.0)) + na + 1.0


def _membership_tol(spec: ClassSpec) -> float:
    return DEFAULT_TOL_1D if spec.dimension == 1 else DEFAULT_TOL_ND


def check_membership(
    d: Density, spec: ClassSpec, tol: float | None = None
) -> MembershipReport:
    """Decide class membership by quadrature, with strict margins."""
    if d.dimension != spec.dimension:
        raise ValueError("density and class spec must share a dimension")
    tol = tol or _membership_tol(spec)
    moment = alpha_moment(d, spec.alpha, tol)
    sup, method = ess_sup(d)
    margin_v = spec.v - moment.value
    margin_m = spec.m - sup
    if not moment.converged:
        return MembershipReport(
            moment, sup, method, belongs=False, inconclusive=False,
            margin_v=margin_v, margin_m=margin_m,
            diagnostic="alpha-moment quadrature did not converge (heavy tail)",
        )
    tie = max(10.0 * moment.error_estimate, tol)
    if abs(margin_v) <= tie:
        return MembershipReport(
            moment, sup, method, belongs=False, inconclusive=True,
            margin_v=margin_v, margin_m=margin_m,
            diagnostic="moment margin inside the quadrature tie zone",
        )
    belongs = margin_v > 0.0 and margin_m > 0.0
    note = ""
    if belongs and method == "grid_estimate":
        note = "supremum from a non-certified grid estimate"
    return MembershipReport(
        moment, sup, method, belongs=belongs, inconclusive=False,
        margin_v=margin_v, margin_m=margin_m, diagnostic=note,
    )


def scaled_class_params(spec: ClassSpec) -> ClassSpec:
    """Class reached by scaling members with ``(m*e)^(1/n)``: the
    moment bound becomes ``(m*e)^(alpha/n) * v`` and the supremum bound
    drops to ``1/e``."""
    factor = (spec.m * math.e) ** (spec.alpha / spec.dimension)
    return ClassSpec(spec.alpha, factor * spec.v, 1.0 / math.e, spec.dimension)


def z_class_params(spec: ClassSpec, delta: float) -> ClassSpec:
    """Class containing the normalized difference of two rescaled
    members at total variation ``delta``."""
    delta = float(delta)
    if not 0.0 < delta <= 2.0:
        raise ValueError("delta must lie in (0, 2]")
    factor = (spec.m * math.e) ** (spec.alpha / spec.dimension)
    return ClassSpec(
        spec.alpha,
        2.0 * factor * spec.v / delta,
        2.0 / (math.e * delta),
        spec.dimension,
    )


def sum_class_params(spec1: ClassSpec, spec2: ClassSpec) -> ClassSpec:
    """Class containing the sum of independent one-dimensional members:
    moment bounds combine through the c_r inequality, supremum bounds
    through the convolution bound min(m1, m2)."""
    if spec1.alpha != spec2.alpha:
        raise ValueError("summands must share the moment order alpha")
    if spec1.dimension != 1 or spec2.dimension != 1:
        raise ValueError("sum propagation is defined for dimension 1")
    a = spec1.alpha
    c_r = 1.0 if a <= 1.0 else 2.0 ** (a - 1.0)
    return ClassSpec(a, c_r * (spec1.v + spec2.v), min(spec1.m, spec2.m), 1)


def check_entropy_bound(
    d: Density, spec: ClassSpec, tol: float | None = None
) -> BoundCheck:
    """Check ``|h(d)| <= entropy_bound(spec)`` for a class member."""
    report = check_membership(d, spec, tol)
    if report.inconclusive:
        raise OutOfClassError(
            f"membership of {d.label or 'density'} is inconclusive: "
            f"{report.diagnostic}"
        )
    if not report.belongs:
        raise OutOfClassError(
            f"{d.label or 'density'} is not a member "
            f"(margin_v={report.margin_v:g}, margin_m={report.margin_m:g}); "
            "the entropy bound is not claimed outside the class"
        )
    h = differential_entropy(d, tol)
    rhs = theorem_constants(spec).entropy_bound
    lhs = abs(h.value)
    margin = rhs - lhs
    tolerance = h.error_estimate + 1e-12
    return BoundCheck(
        lhs=lhs,
        rhs=rhs,
        satisfied=margin >= -tolerance,
        margin=margin,
        context=f"entropy bound for {d.label or 'density'} in {spec}",
        converged=h.converged,
    )


def check_continuity_bound(
    p_x: Density, p_y: Density, spec: ClassSpec, tol: float | None = None
) -> BoundCheck:
    """Check the continuity bound for a pair of class members.

    The distance is computed by quadrature; values beyond m by more
    than the numerical tie zone raise HypothesisViolationError, values
    inside it are clamped to m so the boundary case stays usable.
    """
    for d in (p_x, p_y):
        report = check_membership(d, spec, tol)
        if report.inconclusive or not report.belongs:
            raise OutOfClassError(
                f"{d.label or 'density'} is not settled inside the class; "
                "the continuity bound is not claimed"
            )
    tv = total_variation(p_x, p_y, tol)
    tie = max(10.0 * tv.error_estimate, tol or _membership_tol(spec))
    delta = tv.value
    if delta > spec.m + tie:
        raise HypothesisViolationError(
            f"computed distance {delta:g} exceeds m={spec.m:g}; "
            "the continuity bound is not claimed there"
        )
    delta = min(delta, spec.m)
    h_x = differential_entropy(p_x, tol)
    h_y = differential_entropy(p_y, tol)
    lhs = abs(h_x.value - h_y.value)
    err = h_x.error_estimate + h_y.error_estimate
    converged = tv.converged and h_x.converged and h_y.converged
    label = f"continuity bound for ({p_x.label}, {p_y.label}) in {spec}"
    if delta <= tie:
        # identical pair up to quadrature noise: both sides collapse to 0
        satisfied = lhs <= err + 1e-12
        return BoundCheck(
            lhs=lhs, rhs=0.0, satisfied=satisfied, margin=-lhs,
            context=label + " [zero-distance case]", converged=converged,
        )
    rhs = continuity_bound(spec, delta)
    margin = rhs - lhs
    return BoundCheck(
        lhs=lhs, rhs=rhs, satisfied=margin >= -(err + 1e-12), margin=margin,
        context=label + f" [delta={delta:.6g}]", converged=converged,
    )
