"""Probability densities as first-class values.

A :class:`Density` bundles a vectorized pdf with the metadata the
quadrature engine needs to integrate it reliably: the support box, the
interior points where the pdf or its logarithm is non-smooth (quadrature
split points), and whatever closed-form values are known about it
(entropy, specific absolute moments, essential supremum), each tagged
with the rule that produced it.

The catalog covers the densities the verification suites exercise:
uniforms, Gaussians, the exponential-power family ``generalized_normal``
(Gaussian at shape 2, Laplace at shape 1), and the two heavy cases
``counterexample_p`` (bounded density, every absolute moment infinite,
entropy diverging to +inf) and ``counterexample_q`` (bounded support,
unbounded density, entropy diverging to -inf).

Transforms compose descriptors without losing metadata: ``scale``,
``iid_product``, ``normalized_difference`` and ``convolve`` propagate
supports, split points, and closed forms by the appropriate rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .quadrature import IntegrationRegion, integrate

__all__ = [
    "Known",
    "ClosedForms",
    "Density",
    "ClassSpec",
    "uniform",
    "gaussian",
    "generalized_normal",
    "counterexample_p",
    "counterexample_q",
    "scale",
    "iid_product",
    "normalized_difference",
    "convolve",
    "P_TAIL_LOG_CUTOFF",
    "Q_LOGLOG_CUTOFF",
]

from .gammafn import gamma

# Reporting cutoffs for the two divergent catalog members.  p's tail is
# only examined up to x = e^700 and q's left end down to x = e^(-e^6.5);
# beyond these, float64 cannot represent the abscissae (or the pdf), so
# divergence is demonstrated by sweeps inside the cutoffs, never by a
# single evaluation.
P_TAIL_LOG_CUTOFF = 700.0
Q_LOGLOG_CUTOFF = 6.5


@dataclass(frozen=True)
class Known:
    """A stored numeric fact about a density and the rule behind it.

    ``source`` is ``"closed_form"`` for catalog-level derivations and
    ``"propagated"`` when a transform carried the value over.
    """

    value: float
    source: str = "closed_form"
    note: str = ""


@dataclass(frozen=True)
class ClosedForms:
    """Optional known values attached to a density."""

    entropy: Known | None = None
    ess_sup: Known | None = None
    alpha_moments: Mapping[float, Known] = field(default_factory=dict)

    def moment(self, alpha: float) -> Known | None:
        return self.alpha_moments.get(float(alpha))


@dataclass(frozen=True, repr=False)
class Density:
    """An evaluable n-dimensional probability density descriptor.

    ``pdf`` maps an ``(m, dimension)`` array of points to ``m``
    nonnegative values and must return exactly zero outside ``support``.
    ``singularities`` lists, per axis, interior points where the pdf or
    its logarithm is unbounded or non-smooth; the integral engines split
    there before adapting.  ``unit_crossings`` (one-dimensional
    densities only) lists points where the pdf crosses 1, where the
    entropy integrand has a kink.

    Instances are immutable; share them freely across threads.
    """

    dimension: int
    pdf: Callable[[np.ndarray], np.ndarray]
    support: tuple[tuple[float, float], ...]
    singularities: tuple[tuple[float, ...], ...] = ()
    unit_crossings: tuple[float, ...] = ()
    closed: ClosedForms = field(default_factory=ClosedForms)
    label: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if len(self.support) != self.dimension:
            raise ValueError("support must list one interval per axis")
        for lo, hi in self.support:
            if not lo < hi:
                raise ValueError(f"degenerate support interval ({lo}, {hi})")
        if not self.singularities:
            object.__setattr__(
                self, "singularities", tuple(() for _ in range(self.dimension))
            )
        if len(self.singularities) != self.dimension:
            raise ValueError("singularities must list one tuple per axis")
        for (lo, hi), pts in zip(self.support, self.singularities):
            for p in pts:
                if not lo < p < hi:
                    raise ValueError(f"split point {p} outside open support ({lo}, {hi})")

    def __call__(self, x) -> float:
        """Evaluate the pdf at a single point; zero outside support."""
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if arr.shape != (self.dimension,):
            raise ValueError(
                f"point of length {arr.shape} does not match dimension {self.dimension}"
            )
        return float(self.pdf(arr[None, :])[0])

    def __repr__(self):
        return f"Density({self.label or '<anonymous>'}, dim={self.dimension})"


@dataclass(frozen=True)
class ClassSpec:
    """Parameters of a moment-and-supremum bounded density class.

    A density of the given dimension belongs to the class when its
    moment of order ``alpha`` (of the alpha-norm) is strictly below
    ``v`` and its essential supremum is strictly below ``m``.
    """

    alpha: float
    v: float
    m: float
    dimension: int = 1

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.v > 0:
            raise ValueError("v must be positive")
        if not self.m > 0:
            raise ValueError("m must be positive")
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")


def _box_mask(pts: np.ndarray, support) -> np.ndarray:
    """Closed-box membership mask for an (m, n) array of points."""
    mask = np.ones(pts.shape[0], dtype=bool)
    for ax, (lo, hi) in enumerate(support):
        mask &= (pts[:, ax] >= lo) & (pts[:, ax] <= hi)
    return mask


# ---------------------------------------------------------------------------
# catalog constructors


def uniform(lo: float, hi: float) -> Density:
    """Uniform density on [lo, hi]."""
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError("uniform needs lo < hi")
    height = 1.0 / (hi - lo)

    def pdf(pts):
        inside = (pts[:, 0] >= lo) & (pts[:, 0] <= hi)
        return np.where(inside, height, 0.0)

    closed = ClosedForms(
        entropy=Known(math.log(hi - lo), note="log of the support length"),
        ess_sup=Known(height, note="constant height"),
    )
    return Density(1, pdf, ((lo, hi),), closed=closed, label=f"uniform({lo:g},{hi:g})")


def _phi_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def gaussian(mean: float = 0.0, std: float = 1.0) -> Density:
    """Normal density with the given mean and standard deviation."""
    mean, std = float(mean), float(std)
    if not std > 0:
        raise ValueError("std must be positive")
    peak = 1.0 / (std * math.sqrt(2.0 * math.pi))

    def pdf(pts):
        z = (pts[:, 0] - mean) / std
        return peak * np.exp(-0.5 * z * z)

    crossings: tuple[float, ...] = ()
    if peak > 1.0:
        r = std * math.sqrt(2.0 * math.log(peak))
        crossings = (mean - r, mean + r)

    # E|X| is the folded-normal mean; E|X|^2 = mean^2 + std^2
    folded = std * math.sqrt(2.0 / math.pi) * math.exp(
        -(mean**2) / (2.0 * std**2)
    ) + mean * (1.0 - 2.0 * _phi_cdf(-mean / std))
    closed = ClosedForms(
        entropy=Known(0.5 * math.log(2.0 * math.pi * math.e * std * std)),
        ess_sup=Known(peak, note="value at the mean"),
        alpha_moments={
            1.0: Known(folded, note="folded-normal mean"),
            2.0: Known(mean * mean + std * std, note="second moment about zero"),
        },
    )
    return Density(
        1,
        pdf,
        ((-math.inf, math.inf),),
        unit_crossings=crossings,
        closed=closed,
        label=f"gaussian({mean:g},{std:g})",
    )


def generalized_normal(n: int, alpha: float, v: float) -> Density:
    """Exponential-power density with unit-factorizing alpha-norm shape.

    The density is ``K^n * exp(-(n/(alpha*v)) * sum_i |x_i|^alpha)`` with
    ``K = (n/(alpha*v))^(1/alpha) / (2*Gamma(1/alpha + 1))`` per axis, so
    its moment of order ``alpha`` (of the alpha-norm) equals ``v``
    exactly.  Shape 2 is Gaussian, shape 1 is Laplace.
    """
    n = int(n)
    alpha, v = float(alpha), float(v)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not v > 0:
        raise ValueError("v must be positive")
    rate = n / (alpha * v)
    k_axis = rate ** (1.0 / alpha) / (2.0 * gamma(1.0 / alpha + 1.0))
    peak = k_axis**n

    def pdf(pts):
        s = np.sum(np.abs(pts) ** alpha, axis=1)
        return peak * np.exp(-rate * s)

    # |x|^alpha is non-smooth at 0 unless alpha is an even integer
    smooth = alpha == 2.0 * round(alpha / 2.0)
    sing = tuple(() if smooth else (0.0,) for _ in range(n))

    crossings: tuple[float, ...] = ()
    if n == 1 and peak > 1.0:
        crossings_r = (math.log(peak) / rate) ** (1.0 / alpha)
        crossings = (-crossings_r, crossings_r)

    entropy = n / alpha + n * math.log(
        2.0 * gamma(1.0 + 1.0 / alpha) * (alpha * v / n) ** (1.0 / alpha)
    )
    closed = ClosedForms(
        entropy=Known(entropy),
        ess_sup=Known(peak, note="value at the origin"),
        alpha_moments={alpha: Known(v, note="family parameter")},
    )
    return Density(
        n,
        pdf,
        tuple((-math.inf, math.inf) for _ in range(n)),
        singularities=sing,
        unit_crossings=crossings,
        closed=closed,
        label=f"gen_normal({n},{alpha:g},{v:g})",
    )


def counterexample_p() -> Density:
    """Bounded density on (e, inf) with every absolute moment infinite.

    ``p(x) = 1/(x * log(x)^2)`` for ``x > e``; its entropy integral
    diverges to +inf.  Report tail behaviour only inside
    ``x <= exp(P_TAIL_LOG_CUTOFF)``.
    """

    def pdf(pts):
        x = pts[:, 0]
        out = np.zeros_like(x)
        m = x >= math.e
        xm = np.where(m, x, math.e)
        with np.errstate(over="ignore"):
            den = xm * np.log(xm) ** 2
            vals = np.where(np.isfinite(den), 1.0 / den, 0.0)
        out[m] = vals[m]
        return out

    closed = ClosedForms(
        entropy=Known(math.inf, note="entropy integral diverges"),
        ess_sup=Known(1.0 / math.e, note="boundary limit at the left endpoint"),
    )
    return Density(
        1, pdf, ((math.e, math.inf),), closed=closed, label="counterexample_p"
    )


def counterexample_q() -> Density:
    """Unbounded density on (0, e^-e) with all absolute moments finite.

    ``q(x) = -1/(x * log(x) * log(-log(x))^2)``; its entropy integral
    diverges to -inf.  Report left-end behaviour only above
    ``x >= exp(-exp(Q_LOGLOG_CUTOFF))``.
    """
    hi = math.exp(-math.e)

    def pdf(pts):
        x = pts[:, 0]
        out = np.zeros_like(x)
        m = (x > 0.0) & (x <= hi)
        xm = np.where(m, x, hi / 2.0)
        with np.errstate(over="ignore", divide="ignore"):
            lx = np.log(xm)
            den = xm * lx * np.log(-lx) ** 2
            vals = np.where(den != 0.0, -1.0 / den, math.inf)
        out[m] = vals[m]
        return out

    closed = ClosedForms(
        entropy=Known(-math.inf, note="entropy integral diverges"),
        ess_sup=Known(math.inf, note="unbounded near the left endpoint"),
    )
    return Density(1, pdf, ((0.0, hi),), closed=closed, label="counterexample_q")


# ---------------------------------------------------------------------------
# transforms


def scale(d: Density, c: float) -> Density:
    """Density of c*X for X distributed as d: ``d((x/c))/c^n``.

    Entropy gains ``n*log(c)``, the supremum divides by ``c^n``, and any
    stored moment of order a is multiplied by ``c^a``.
    """
    c = float(c)
    if not c > 0:
        raise ValueError("scale factor must be positive")
    n = d.dimension
    cn = c**n
    base = d.pdf

    def pdf(pts):
        return base(pts / c) / cn

    support = tuple((lo * c, hi * c) for lo, hi in d.support)
    sing = tuple(tuple(p * c for p in pts) for pts in d.singularities)
    entropy = None
    if d.closed.entropy is not None:
        entropy = Known(
            d.closed.entropy.value + n * math.log(c),
            source="propagated",
            note="shifted by n*log(c)",
        )
    sup = None
    if d.closed.ess_sup is not None:
        sup = Known(
            d.closed.ess_sup.value / cn, source="propagated", note="divided by c^n"
        )
    moments = {
        a: Known(kn.value * c**a, source="propagated", note="multiplied by c^alpha")
        for a, kn in d.closed.alpha_moments.items()
    }
    closed = ClosedForms(entropy=entropy, ess_sup=sup, alpha_moments=moments)
    return Density(
        n, pdf, support, singularities=sing, closed=closed,
        label=f"scale({d.label},{c:g})",
    )


def iid_product(component: Density, n: int) -> Density:
    """n-dimensional density of independent identical one-dim factors."""
    if component.dimension != 1:
        raise ValueError("iid_product needs a one-dimensional component")
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    base = component.pdf

    def pdf(pts):
        vals = np.ones(pts.shape[0])
        for j in range(n):
            vals = vals * base(pts[:, j : j + 1])
        return vals

    support = tuple(component.support[0] for _ in range(n))
    sing = tuple(component.singularities[0] for _ in range(n))
    entropy = None
    if component.closed.entropy is not None:
        entropy = Known(
            n * component.closed.entropy.value,
            source="propagated",
            note="additive over independent factors",
        )
    sup = None
    if component.closed.ess_sup is not None:
        sup = Known(
            component.closed.ess_sup.value**n,
            source="propagated",
            note="product of factor suprema",
        )
    moments = {
        a: Known(n * kn.value, source="propagated", note="additive over axes")
        for a, kn in component.closed.alpha_moments.items()
    }
    closed = ClosedForms(entropy=entropy, ess_sup=sup, alpha_moments=moments)
    return Density(
        n, pdf, support, singularities=sing, closed=closed,
        label=f"iid_product({component.label},{n})",
    )


def normalized_difference(
    p: Density, q: Density, delta: float, crossings=()
) -> Density:
    """Density proportional to |p - q|, normalized by their L1 distance.

    ``delta`` must be the caller-computed total variation of the pair
    (see the functionals module); zero distance means the construction
    is undefined.  Declared crossing points of p - q sharpen the split
    list.
    """
    if p.dimension != q.dimension:
        raise ValueError("densities must share a dimension")
    delta = float(delta)
    if not delta > 0:
        raise ValueError("normalized_difference needs a positive distance")
    n = p.dimension
    fp, fq = p.pdf, q.pdf

    def pdf(pts):
        return np.abs(fp(pts) - fq(pts)) / delta

    support = tuple(
        (min(alo, blo), max(ahi, bhi))
        for (alo, ahi), (blo, bhi) in zip(p.support, q.support)
    )
    sing = []
    for ax in range(n):
        lo, hi = support[ax]
        pts = set(p.singularities[ax]) | set(q.singularities[ax])
        # support edges of either factor become kinks of |p - q|
        for v in (*p.support[ax], *q.support[ax]):
            if math.isfinite(v):
                pts.add(v)
        if ax == 0:
            pts |= set(map(float, crossings))
        sing.append(tuple(sorted(x for x in pts if lo < x < hi)))
    return Density(
        n, pdf, support, singularities=tuple(sing),
        label=f"zdiff({p.label},{q.label})",
    )


def convolve(d1: Density, d2: Density, eval_tol: float = 1e-11) -> Density:
    """Density of the sum of two independent one-dimensional variables.

    Every evaluation runs one adaptive integral of
    ``d1(t) * d2(x - t)``; non-convergence there raises rather than
    returning a spurious value.  The stored supremum is the bound
    ``min(sup d1, sup d2)``, which is what convolution guarantees.
    """
    if d1.dimension != 1 or d2.dimension != 1:
        raise ValueError("convolve needs one-dimensional densities")
    (a1, b1), = d1.support
    (a2, b2), = d2.support
    support = (a1 + a2, b1 + b2)
    f1, f2 = d1.pdf, d2.pdf

    break1 = {a1, b1, *d1.singularities[0]}
    break2 = {a2, b2, *d2.singularities[0]}

    def pdf_one(x: float) -> float:
        lo = max(a1, x - b2)
        hi = min(b1, x - a2)
        if not lo < hi:
            return 0.0
        splits = {s for s in break1 if lo < s < hi}
        splits |= {x - s for s in break2 if lo < x - s < hi}
        res = integrate(
            lambda ts: f1(ts.reshape(-1, 1)) * f2((x - ts).reshape(-1, 1)),
            IntegrationRegion.line(lo, hi, sorted(splits)),
            tol=eval_tol,
        )
        if not res.converged:
            raise ArithmeticError(
                f"convolution evaluation did not converge at x={x!r}"
            )
        return max(res.value, 0.0)

    def pdf(pts):
        return np.array([pdf_one(float(x)) for x in pts[:, 0]])

    # kinks of the convolution sit at sums of the factors' breakpoints
    sing: tuple[float, ...] = ()
    if all(math.isfinite(v) for v in (*break1, *break2)):
        pts = {u + w for u in break1 for w in break2}
        sing = tuple(sorted(p for p in pts if support[0] < p < support[1]))
    sup = None
    if d1.closed.ess_sup is not None and d2.closed.ess_sup is not None:
        sup = Known(
            min(d1.closed.ess_sup.value, d2.closed.ess_sup.value),
            source="propagated",
            note="upper bound: min of the factor suprema",
        )
    closed = ClosedForms(ess_sup=sup)
    return Density(
        1, pdf, (support,), singularities=(sing,), closed=closed,
        label=f"convolve({d1.label},{d2.label})",
    )
