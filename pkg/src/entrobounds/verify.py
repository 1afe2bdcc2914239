"""Orchestrated verification scenarios.

Four scenario families, each producing a :class:`VerificationReport`:

* ``theorem``: the entropy bound over a density-by-spec matrix and the
  continuity bound over pairs with closed-form distance oracles;
* ``proof``: step-by-step replication of the truncation argument behind
  the entropy bound (window identity, lower bound on the reference
  relative entropy, window-independent cap);
* ``lemma2``: seeded sweep of the ``x*log(x)`` modulus-of-continuity
  inequality on the square [0, 1/e]^2;
* ``counterexamples``: divergence sweeps for the two catalog densities
  whose entropy integrals do not converge.

Reports are deterministic given the same seed and tolerances.  An item
backed by any non-converged integral is reported ``inconclusive``,
never ``pass``.  Out-of-class or hypothesis-violating items are
``skip`` with a reason.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    HypothesisViolationError,
    check_membership,
    continuity_bound,
    theorem_constants,
    truncated_entropy_cap,
)
from .densities import (
    ClassSpec,
    Density,
    P_TAIL_LOG_CUTOFF,
    Q_LOGLOG_CUTOFF,
    convolve,
    counterexample_p,
    counterexample_q,
    gaussian,
    generalized_normal,
    iid_product,
    scale,
    uniform,
)
from .functionals import (
    differential_entropy,
    total_variation,
    truncated_alpha_moment,
    truncated_entropy,
    truncated_mass,
    truncated_relative_entropy_to_gn,
    xlogx,
    xlogx_gap,
)
from .quadrature import integrate

__all__ = [
    "ReportItem",
    "VerificationReport",
    "default_matrix",
    "default_pairs",
    "run_theorem_suite",
    "divergence_sweep_p",
    "divergence_sweep_q",
    "proof_replication",
    "lemma2_sweep",
    "run_scenario",
    "SCENARIOS",
]

IDENTITY_TOL = 1e-6
LOWER_BOUND_SLACK = 1e-8


@dataclass
class ReportItem:
    """One checked (or skipped) verification item."""

    scenario: str
    item_id: str
    verdict: str  # pass | fail | skip | inconclusive
    lhs: float | None = None
    rhs: float | None = None
    margin: float | None = None
    note: str = ""
    extras: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    """Ordered item outcomes for one scenario."""

    scenario: str
    items: list[ReportItem]
    runtime_seconds: float
    settings: dict = field(default_factory=dict)

    def count(self, verdict: str) -> int:
        return sum(1 for it in self.items if it.verdict == verdict)

    @property
    def passed(self) -> int:
        return self.count("pass")

    @property
    def failed(self) -> int:
        return self.count("fail")

    @property
    def skipped(self) -> int:
        return self.count("skip")

    @property
    def inconclusive(self) -> int:
        return self.count("inconclusive")

    def summary(self) -> str:
        return (
            f"{self.scenario}: {self.passed} pass, {self.failed} fail, "
            f"{self.skipped} skip, {self.inconclusive} inconclusive "
            f"({len(self.items)} items, {self.runtime_seconds:.1f}s)"
        )

    def to_csv(self) -> str:
        """One row per item; numbers at 12 significant digits."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario", "item_id", "lhs", "rhs", "margin", "verdict"])
        for it in self.items:
            writer.writerow(
                [
                    it.scenario,
                    it.item_id,
                    _num(it.lhs),
                    _num(it.rhs),
                    _num(it.margin),
                    it.verdict,
                ]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "settings": self.settings,
            "counts": {
                "pass": self.passed,
                "fail": self.failed,
                "skip": self.skipped,
                "inconclusive": self.inconclusive,
                "total": len(self.items),
            },
            "runtime_seconds": self.runtime_seconds,
            "items": [
                {
                    "scenario": it.scenario,
                    "item_id": it.item_id,
                    "verdict": it.verdict,
                    "lhs": it.lhs,
                    "rhs": it.rhs,
                    "margin": it.margin,
                    "note": it.note,
                    "extras": it.extras,
                }
                for it in self.items
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _num(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.12g}"


def _spec_id(spec: ClassSpec) -> str:
    return f"spec({spec.alpha:g},{spec.v:g},{spec.m:g},{spec.dimension})"


# ---------------------------------------------------------------------------
# default verification matrix

SPEC_A = ClassSpec(2.0, 1.0, 1.0, 1)
SPEC_B = ClassSpec(1.0, 2.0, 1.0, 1)
SPEC_C = ClassSpec(2.0, 4.0, 2.0, 2)

GAUSS_PAIR_SPEC = ClassSpec(2.0, 1.2, 0.5, 1)
DILATION_PAIR_SPEC = ClassSpec(2.0, 2.0, 1.5, 1)
SHIFT_PAIR_SPEC = ClassSpec(2.0, 3.0, 1.5, 1)


def default_matrix() -> list[tuple[Density, ClassSpec]]:
    """Density-by-spec items: uniforms and scaled uniforms, Gaussians,
    exponential-power members across shapes 0.5 to 4, a convolution
    triangle, the divergent-moment counterexample, and two-dimensional
    products, against three class specs."""
    u01 = uniform(0.0, 1.0)
    one_dim = [
        u01,
        uniform(-1.0, 1.0),
        uniform(-0.5, 1.5),
        scale(uniform(0.0, 1.0), 1.2),
        scale(uniform(0.0, 1.0), 2.0),
        gaussian(0.0, 0.9),
        gaussian(0.0, 0.7),
        gaussian(0.2, 0.8),
        gaussian(-0.3, 0.6),
        generalized_normal(1, 2.0, 0.99),
        generalized_normal(1, 1.0, 1.0),
        generalized_normal(1, 1.0, 0.7),
        generalized_normal(1, 4.0, 1.0),
        generalized_normal(1, 4.0, 0.8),
        generalized_normal(1, 0.5, 2.0),
        scale(convolve(u01, u01), 1.5),
        counterexample_p(),
    ]
    two_dim = [
        iid_product(uniform(-1.0, 1.0), 2),
        iid_product(uniform(-0.5, 1.5), 2),
        iid_product(gaussian(0.0, 0.9), 2),
        generalized_normal(2, 2.0, 1.0),
        generalized_normal(2, 1.0, 1.8),
        iid_product(generalized_normal(1, 1.0, 0.7), 2),
    ]
    items = [(d, s) for d in one_dim for s in (SPEC_A, SPEC_B)]
    items += [(d, SPEC_C) for d in two_dim]
    return items


def default_pairs() -> list[tuple[Density, Density, ClassSpec, dict]]:
    """Continuity-bound pairs with closed-form distance oracles.

    Gaussian mean shifts (equal entropies), uniform dilations (entropy
    gap exactly log of the ratio), uniform support shifts, one identical
    pair, one pair sitting exactly on the distance-equals-m boundary,
    and one pair designed to violate the hypothesis.
    """

    def phi_cdf(x):
        return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))

    pairs = []
    for mu1, mu2 in [(0.0, 0.1), (0.0, 0.2), (0.0, 0.3), (0.1, 0.25)]:
        tv = 2.0 * (2.0 * phi_cdf(abs(mu2 - mu1) / 2.0) - 1.0)
        pairs.append(
            (
                gaussian(mu1, 1.0),
                gaussian(mu2, 1.0),
                GAUSS_PAIR_SPEC,
                {"tv_oracle": tv, "lhs_oracle": 0.0},
            )
        )
    for a, b in [(1.0, 1.1), (1.0, 1.25), (1.0, 1.5), (0.8, 1.0)]:
        lo_, hi_ = min(a, b), max(a, b)
        pairs.append(
            (
                uniform(0.0, a),
                uniform(0.0, b),
                DILATION_PAIR_SPEC,
                {
                    "tv_oracle": 2.0 * (hi_ - lo_) / hi_,
                    "lhs_oracle": math.log(hi_ / lo_),
                },
            )
        )
    for s in [0.2, 0.5, 0.75]:
        pairs.append(
            (
                uniform(0.0, 1.0),
                uniform(s, 1.0 + s),
                SHIFT_PAIR_SPEC,
                {"tv_oracle": 2.0 * s, "lhs_oracle": 0.0},
            )
        )
    pairs.append(
        (
            gaussian(0.0, 0.9),
            gaussian(0.0, 0.9),
            SPEC_A,
            {"tv_oracle": 0.0, "lhs_oracle": 0.0},
        )
    )
    # distance 1.8 > m = 1.5: the hypothesis gate must reject this one
    pairs.append(
        (
            uniform(0.0, 1.0),
            uniform(0.9, 1.9),
            SHIFT_PAIR_SPEC,
            {"tv_oracle": 1.8, "lhs_oracle": 0.0, "expect_reject": True},
        )
    )
    return pairs


def run_theorem_suite(
    matrix=None, pairs=None, tol: float | None = None
) -> VerificationReport:
    """Entropy-bound checks over the matrix and continuity-bound checks
    over the pairs; out-of-class items are skipped with a reason."""
    started = time.perf_counter()
    if matrix is None:
        matrix = default_matrix()
    if pairs is None:
        pairs = default_pairs()
    items: list[ReportItem] = []

    for d, spec in matrix:
        item_id = f"{d.label}|{_spec_id(spec)}"
        mem = check_membership(d, spec, tol)
        extras = {
            "alpha_moment": mem.alpha_moment.value,
            "ess_sup": mem.ess_sup,
            "margin_v": mem.margin_v,
            "margin_m": mem.margin_m,
        }
        if mem.inconclusive:
            items.append(
                ReportItem(
                    "theorem", item_id, "skip",
                    note=f"membership inconclusive: {mem.diagnostic}",
                    extras=extras,
                )
            )
            continue
        if not mem.belongs:
            reason = mem.diagnostic or "not a class member"
            if not mem.alpha_moment.converged:
                reason = "moment divergent: " + reason
            items.append(
                ReportItem("theorem", item_id, "skip", note=reason, extras=extras)
            )
            continue
        h = differential_entropy(d, tol)
        rhs = theorem_constants(spec).entropy_bound
        lhs = abs(h.value)
        margin = rhs - lhs
        extras["entropy"] = h.value
        extras["entropy_error"] = h.error_estimate
        if not h.converged:
            verdict = "inconclusive"
        elif margin > h.error_estimate + 1e-12:
            verdict = "pass"
        elif margin < -(h.error_estimate + 1e-12):
            verdict = "fail"
        else:
            verdict = "inconclusive"
        items.append(
            ReportItem("theorem", item_id, verdict, lhs, rhs, margin, extras=extras)
        )

    for p_x, p_y, spec, oracle in pairs:
        item_id = f"({p_x.label},{p_y.label})|{_spec_id(spec)}"
        extras = {k: v for k, v in oracle.items() if not k.startswith("expect")}
        mems = [check_membership(d, spec, tol) for d in (p_x, p_y)]
        if any(m.inconclusive or not m.belongs for m in mems):
            items.append(
                ReportItem(
                    "theorem", item_id, "skip",
                    note="pair member outside the class", extras=extras,
                )
            )
            continue
        tv = total_variation(p_x, p_y, tol)
        delta = tv.value
        extras["delta"] = delta
        tie = max(10.0 * tv.error_estimate, tol or 1e-9)
        if delta > spec.m + tie:
            items.append(
                ReportItem(
                    "theorem", item_id, "skip",
                    note=f"hypothesis violated: delta={delta:.6g} > m={spec.m:g}",
                    extras=extras,
                )
            )
            continue
        h_x = differential_entropy(p_x, tol)
        h_y = differential_entropy(p_y, tol)
        lhs = abs(h_x.value - h_y.value)
        err = h_x.error_estimate + h_y.error_estimate
        converged = tv.converged and h_x.converged and h_y.converged
        if delta <= tie:
            rhs = 0.0
            ok = lhs <= err + 1e-12
        else:
            rhs = continuity_bound(spec, min(delta, spec.m))
            ok = rhs - lhs >= -(err + 1e-12)
        margin = rhs - lhs
        if not converged:
            verdict = "inconclusive"
        else:
            verdict = "pass" if ok else "fail"
        items.append(
            ReportItem("theorem", item_id, verdict, lhs, rhs, margin, extras=extras)
        )

    return VerificationReport(
        "theorem", items, time.perf_counter() - started, {"tol": tol}
    )


# ---------------------------------------------------------------------------
# counterexample sweeps


def _delta_w_closed_form(w: float) -> float:
    y = math.log(w)
    if y <= 1.0:
        return 0.0
    return math.log(y) + 2.0 * (1.0 - (1.0 + math.log(y)) / y)


def divergence_sweep_p(w_grid=None, tol: float | None = None) -> VerificationReport:
    """Truncated entropy of the divergent-moment counterexample against
    its closed form, across an increasing window grid."""
    started = time.perf_counter()
    if w_grid is None:
        w_grid = tuple(math.exp(k) for k in (math.e, 5.0, 10.0, 50.0, 100.0))
    w_grid = tuple(float(w) for w in w_grid)
    if any(not w > 0 or math.log(w) > P_TAIL_LOG_CUTOFF for w in w_grid):
        raise ValueError(
            f"window grid must stay inside the cutoff exp({P_TAIL_LOG_CUTOFF:g})"
        )
    if list(w_grid) != sorted(w_grid):
        raise ValueError("window grid must be increasing")
    d = counterexample_p()
    items = []
    values = []
    for w in w_grid:
        res = truncated_entropy(d, w, tol)
        cf = _delta_w_closed_form(w)
        diff = abs(res.value - cf)
        verdict = "pass" if (res.converged and diff <= IDENTITY_TOL) else (
            "inconclusive" if not res.converged else "fail"
        )
        values.append(res.value)
        items.append(
            ReportItem(
                "counterexample_p", f"window_entropy[w=exp({math.log(w):g})]",
                verdict, res.value, cf, diff,
                extras={"w": w, "error_estimate": res.error_estimate},
            )
        )
    increasing = all(b > a for a, b in zip(values[:-1], values[1:]))
    items.append(
        ReportItem(
            "counterexample_p", "strictly_increasing",
            "pass" if increasing else "fail",
            note="windowed entropy grows without bound along the grid",
            extras={"values": values},
        )
    )
    return VerificationReport(
        "counterexample_p", items, time.perf_counter() - started,
        {"w_grid": list(w_grid), "tol": tol},
    )


def divergence_sweep_q(eps_grid=None, tol: float | None = None) -> VerificationReport:
    """Entropy of the unbounded counterexample over (eps, e^-e): finite
    for every eps, strictly decreasing, unbounded below along the grid."""
    started = time.perf_counter()
    if eps_grid is None:
        eps_grid = tuple(math.exp(-math.exp(k)) for k in (2.0, 3.0, 4.0, 5.0))
    eps_grid = tuple(float(e) for e in eps_grid)
    floor = math.exp(-math.exp(Q_LOGLOG_CUTOFF))
    hi = math.exp(-math.e)
    if any(not floor <= e < hi for e in eps_grid):
        raise ValueError(
            "epsilon grid must stay inside the floating-point cutoff "
            f"[exp(-exp({Q_LOGLOG_CUTOFF:g})), e^-e)"
        )
    if list(eps_grid) != sorted(eps_grid, reverse=True):
        raise ValueError("epsilon grid must be decreasing")
    d = counterexample_q()
    items = []
    values = []
    for eps in eps_grid:
        res = integrate(
            lambda xs: xlogx(d.pdf(xs[:, None])), (eps, hi), tol or 1e-9
        )
        value = -res.value
        verdict = "pass" if (res.converged and math.isfinite(value)) else "inconclusive"
        values.append(value)
        items.append(
            ReportItem(
                "counterexample_q",
                f"window_entropy[eps=exp(-exp({math.log(-math.log(eps)):g}))]",
                verdict, value, None, None,
                extras={"eps": eps, "error_estimate": res.error_estimate},
            )
        )
    drops = [a - b for a, b in zip(values[:-1], values[1:])]
    decreasing = all(drop > 0.0 for drop in drops)
    items.append(
        ReportItem(
            "counterexample_q", "strictly_decreasing",
            "pass" if decreasing else "fail",
            note="windowed entropy falls without bound along the grid",
            extras={"values": values, "drops": drops},
        )
    )
    return VerificationReport(
        "counterexample_q", items, time.perf_counter() - started,
        {"eps_grid": list(eps_grid), "tol": tol},
    )


# ---------------------------------------------------------------------------
# proof replication


def proof_replication(
    d: Density, spec: ClassSpec, w_grid, tol: float | None = None
) -> VerificationReport:
    """Replicate the truncation argument for one class member.

    The member is rescaled by ``max(m,1)^(1/n)`` so its density is
    bounded by one.  For every window radius w, three facts are checked
    by independent quadrature:

    1. the windowed entropy equals
       ``[(n/a) log b1 + log c_m] * mass_w + rate * moment_w - rel_w``
       (an algebraic identity of the reference density's logarithm);
    2. the windowed relative entropy ``rel_w`` is at least -1;
    3. the windowed entropy never exceeds its window-independent cap.
    """
    started = time.perf_counter()
    mem = check_membership(d, spec, tol)
    if mem.inconclusive or not mem.belongs:
        from .bounds import OutOfClassError

        raise OutOfClassError(
            f"{d.label or 'density'} must be a settled class member "
            "for the replication run"
        )
    n, a = spec.dimension, spec.alpha
    c_m = max(spec.m, 1.0)
    q = scale(d, c_m ** (1.0 / n))
    consts = theorem_constants(spec)
    coeff = (n / a) * math.log(consts.b1) + math.log(c_m)
    rate = n / (c_m ** (a / n) * spec.v * a)
    cap = truncated_entropy_cap(spec)
    items = []
    for w in w_grid:
        w = float(w)
        delta_w = truncated_entropy(q, w, tol)
        theta_w = truncated_relative_entropy_to_gn(q, w, spec, tol)
        mass_w = truncated_mass(q, w, tol)
        moment_w = truncated_alpha_moment(q, a, w, tol)
        all_conv = all(
            r.converged for r in (delta_w, theta_w, mass_w, moment_w)
        )
        rhs = coeff * mass_w.value + rate * moment_w.value - theta_w.value
        gap = abs(delta_w.value - rhs)
        verdict = (
            "pass" if (all_conv and gap <= IDENTITY_TOL)
            else ("inconclusive" if not all_conv else "fail")
        )
        extras = {
            "w": w,
            "windowed_entropy": delta_w.value,
            "windowed_rel_entropy": theta_w.value,
            "windowed_mass": mass_w.value,
            "windowed_moment": moment_w.value,
        }
        items.append(
            ReportItem(
                "proof", f"{d.label}|identity[w={w:g}]", verdict,
                delta_w.value, rhs, gap, extras=extras,
            )
        )
        lb_margin = theta_w.value + 1.0
        verdict = (
            "pass" if (theta_w.converged and lb_margin >= -LOWER_BOUND_SLACK)
            else ("inconclusive" if not theta_w.converged else "fail")
        )
        items.append(
            ReportItem(
                "proof", f"{d.label}|rel_entropy_floor[w={w:g}]", verdict,
                theta_w.value, -1.0, lb_margin, extras={"w": w},
            )
        )
        cap_margin = cap - delta_w.value
        verdict = (
            "pass" if (delta_w.converged and cap_margin >= -LOWER_BOUND_SLACK)
            else ("inconclusive" if not delta_w.converged else "fail")
        )
        items.append(
            ReportItem(
                "proof", f"{d.label}|entropy_cap[w={w:g}]", verdict,
                delta_w.value, cap, cap_margin, extras={"w": w},
            )
        )
    return VerificationReport(
        "proof", items, time.perf_counter() - started,
        {"density": d.label, "spec": _spec_id(spec), "w_grid": list(map(float, w_grid))},
    )


DEFAULT_PROOF_CASES = None  # built lazily; see default_proof_cases()


def default_proof_cases() -> list[tuple[Density, ClassSpec]]:
    return [
        (generalized_normal(1, 2.0, 0.9), SPEC_A),
        (uniform(-1.0, 1.0), SPEC_A),
        (generalized_normal(1, 1.0, 0.7), SPEC_B),
        (iid_product(uniform(-1.0, 1.0), 2), SPEC_C),
    ]


DEFAULT_PROOF_WINDOWS = (0.5, 1.0, 2.0, 5.0, 10.0)


# ---------------------------------------------------------------------------
# modulus-of-continuity sweep


def lemma2_sweep(sample_count: int = 10_000, seed: int = 0) -> VerificationReport:
    """Seeded random sweep of the x*log(x) inequality on [0, 1/e]^2,
    plus its boundary cases."""
    started = time.perf_counter()
    top = 1.0 / math.e
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, top, size=int(sample_count))
    ys = rng.uniform(0.0, top, size=int(sample_count))
    worst_gap = -math.inf
    violations = 0
    for x, y in zip(xs, ys):
        lhs, rhs = xlogx_gap(float(x), float(y))
        gap = lhs - rhs
        worst_gap = max(worst_gap, gap)
        if gap > 1e-12:
            violations += 1
    items = [
        ReportItem(
            "lemma2", f"random_sweep[n={int(sample_count)},seed={seed}]",
            "pass" if violations == 0 else "fail",
            note=f"{violations} violations",
            extras={"worst_gap": worst_gap if sample_count else None},
        )
    ]
    for x, y in [(0.0, 0.0), (top, 0.0), (top, top)]:
        lhs, rhs = xlogx_gap(x, y)
        items.append(
            ReportItem(
                "lemma2", f"boundary[x={x:.6g},y={y:.6g}]",
                "pass" if lhs <= rhs + 1e-12 else "fail",
                lhs, rhs, rhs - lhs,
            )
        )
    return VerificationReport(
        "lemma2", items, time.perf_counter() - started,
        {"sample_count": int(sample_count), "seed": int(seed)},
    )


# ---------------------------------------------------------------------------
# scenario dispatch

SCENARIOS = ("theorem", "proof", "lemma2", "counterexamples")


def run_scenario(name: str, seed: int = 0, tol: float | None = None) -> VerificationReport:
    """Run one named scenario with its default configuration."""
    if name == "theorem":
        return run_theorem_suite(tol=tol)
    if name == "proof":
        started = time.perf_counter()
        items = []
        for d, spec in default_proof_cases():
            rep = proof_replication(d, spec, DEFAULT_PROOF_WINDOWS, tol)
            items.extend(rep.items)
        return VerificationReport(
            "proof", items, time.perf_counter() - started,
            {"windows": list(DEFAULT_PROOF_WINDOWS), "tol": tol},
        )
    if name == "lemma2":
        return lemma2_sweep(seed=seed)
    if name == "counterexamples":
        started = time.perf_counter()
        rep_p = divergence_sweep_p(tol=tol)
        rep_q = divergence_sweep_q(tol=tol)
        return VerificationReport(
            "counterexamples", rep_p.items + rep_q.items,
            time.perf_counter() - started, {"tol": tol},
        )
    raise ValueError(f"unknown scenario {name!r}; choose from {SCENARIOS}")
