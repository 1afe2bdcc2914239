"""Information functionals of densities, all in nats.

Every quantity here is an integral driven by the adaptive engine:
differential entropy, absolute moments of the alpha-norm, total
variation distance, relative entropy, and the two truncated functionals
used by the bound-derivation walkthrough (entropy and relative entropy
restricted to a sup-norm ball).  ``x*log(x)`` is taken as zero at and
below a floor of 1e-300, so densities that vanish on part of the region
never poison an integrand.

Results carry the engine's convergence contract: ``converged=False``
means the value is a best estimate only, and callers (membership
checks, verification suites) must not treat it as settled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .densities import ClassSpec, Density, generalized_normal
from .quadrature import (
    DEFAULT_TOL_1D,
    DEFAULT_TOL_ND,
    IntegrationRegion,
    QuadratureResult,
    integrate_nd,
)

__all__ = [
    "FunctionalValue",
    "XLOGX_FLOOR",
    "xlogx",
    "xlogx_gap",
    "mass",
    "differential_entropy",
    "alpha_moment",
    "ess_sup",
    "total_variation",
    "relative_entropy",
    "truncated_entropy",
    "truncated_mass",
    "truncated_alpha_moment",
    "truncated_relative_entropy_to_gn",
]

XLOGX_FLOOR = 1e-300


@dataclass(frozen=True)
class FunctionalValue:
    """One functional's value with its quadrature quality report."""

    value: float
    error_estimate: float
    converged: bool


def _from_quad(res: QuadratureResult, negate: bool = False) -> FunctionalValue:
    v = -res.value if negate else res.value
    return FunctionalValue(v, res.error_estimate, res.converged)


def _default_tol(dim: int) -> float:
    return DEFAULT_TOL_1D if dim == 1 else DEFAULT_TOL_ND


def xlogx(p: np.ndarray) -> np.ndarray:
    """x*log(x) with the 0*log(0) = 0 convention below the floor."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(p > XLOGX_FLOOR, p * np.log(np.maximum(p, XLOGX_FLOOR)), 0.0)
    return out


def xlogx_gap(x: float, y: float) -> tuple[float, float]:
    """Two sides of the x*log(x) modulus-of-continuity inequality.

    For arguments in [0, 1/e], returns ``(|x log x - y log y|,
    |x - y| * log(1/|x - y|))``; the left side never exceeds the right.
    Arguments outside [0, 1/e] are rejected: the inequality is not
    claimed there.
    """
    x, y = float(x), float(y)
    top = 1.0 / math.e
    for name, val in (("x", x), ("y", y)):
        if not 0.0 <= val <= top:
            raise ValueError(f"{name}={val} outside [0, 1/e]")
    lhs = abs(float(xlogx(x)) - float(xlogx(y)))
    d = abs(x - y)
    rhs = 0.0 if d == 0.0 else d * math.log(1.0 / d)
    return lhs, rhs


def _region(
    d: Density,
    window: float | None = None,
    merge_axis0: tuple[float, ...] = (),
    other: Density | None = None,
) -> IntegrationRegion | None:
    """Integration region over d's support (optionally hulled with
    another density's and clipped to the sup-norm ball of radius
    ``window``), with all declared split points inside.  ``None`` means
    the region is empty."""
    intervals = []
    splits = []
    for ax in range(d.dimension):
        lo, hi = d.support[ax]
        pts = set(d.singularities[ax])
        if other is not None:
            olo, ohi = other.support[ax]
            for v in (lo, hi, olo, ohi):
                if math.isfinite(v):
                    pts.add(v)
            lo, hi = min(lo, olo), max(hi, ohi)
            pts |= set(other.singularities[ax])
        if window is not None:
            lo, hi = max(lo, -window), min(hi, window)
            if not lo < hi:
                return None
        if ax == 0:
            pts |= set(merge_axis0)
        intervals.append((lo, hi))
        splits.append(tuple(sorted(p for p in pts if lo < p < hi)))
    return IntegrationRegion(tuple(intervals), tuple(splits))


def _check_dim(d: Density):
    if d.dimension > 3:
        raise ValueError("integral-based functionals support dimension <= 3 only")


def mass(d: Density, tol: float | None = None) -> FunctionalValue:
    """Total probability mass over the support (a normalization check)."""
    _check_dim(d)
    tol = tol or _default_tol(d.dimension)
    res = integrate_nd(lambda pts: d.pdf(pts), _region(d), tol)
    return _from_quad(res)


def differential_entropy(d: Density, tol: float | None = None) -> FunctionalValue:
    """Differential entropy ``-integral of p*log(p)`` over the support."""
    _check_dim(d)
    tol = tol or _default_tol(d.dimension)
    region = _region(d, merge_axis0=d.unit_crossings if d.dimension == 1 else ())
    res = integrate_nd(lambda pts: xlogx(d.pdf(pts)), region, tol)
    return _from_quad(res, negate=True)


def _alpha_norm_pow(pts: np.ndarray, alpha: float) -> np.ndarray:
    return np.sum(np.abs(pts) ** alpha, axis=1)


def alpha_moment(d: Density, alpha: float, tol: float | None = None) -> FunctionalValue:
    """Moment of order alpha of the alpha-norm under d."""
    _check_dim(d)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    tol = tol or _default_tol(d.dimension)
    # |x|^alpha kinks at zero for non-even alpha
    extra = (0.0,) if d.support[0][0] < 0.0 < d.support[0][1] else ()
    region = _region(d, merge_axis0=extra)
    res = integrate_nd(
        lambda pts: _alpha_norm_pow(pts, alpha) * d.pdf(pts), region, tol
    )
    return _from_quad(res)


def total_variation(p: Density, q: Density, tol: float | None = None) -> FunctionalValue:
    """L1 distance ``integral of |p - q|``; ranges over [0, 2]."""
    if p.dimension != q.dimension:
        raise ValueError("densities must share a dimension")
    _check_dim(p)
    tol = tol or _default_tol(p.dimension)
    region = _region(p, other=q)
    res = integrate_nd(lambda pts: np.abs(p.pdf(pts) - q.pdf(pts)), region, tol)
    return _from_quad(res)


def relative_entropy(
    p: Density, q: Density, tol: float | None = None, support_samples: int = 1000
) -> FunctionalValue:
    """Relative entropy ``integral of p*log(p/q)``, nonnegative.

    The support of p must lie inside the support of q; this is
    spot-checked at ``support_samples`` points per axis-line (point
    evaluations cannot certify an almost-everywhere statement, so the
    check is a guard, not a proof).
    """
    if p.dimension != q.dimension:
        raise ValueError("densities must share a dimension")
    _check_dim(p)
    tol = tol or _default_tol(p.dimension)
    _spot_check_support(p, q, support_samples)
    fp, fq = p.pdf, q.pdf

    def integrand(pts):
        pv = fp(pts)
        qv = fq(pts)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.log(np.maximum(pv, XLOGX_FLOOR)) - np.log(
                np.maximum(qv, XLOGX_FLOOR)
            )
            return np.where(pv > XLOGX_FLOOR, pv * ratio, 0.0)

    region = _region(p, other=q)
    res = integrate_nd(integrand, region, tol)
    return _from_quad(res)


def _spot_check_support(p: Density, q: Density, samples: int):
    """Sample p's support on a deterministic grid; q must be positive
    wherever p is."""
    ts = (np.arange(samples) + 0.5) / samples
    axes = []
    for lo, hi in p.support:
        if math.isinf(lo) and math.isinf(hi):
            u = 2.0 * ts - 1.0
            axes.append(u / (1.0 - u * u))
        elif math.isinf(hi):
            axes.append(lo + ts / (1.0 - ts))
        elif math.isinf(lo):
            axes.append(hi - ts / (1.0 - ts))
        else:
            axes.append(lo + (hi - lo) * ts)
    pts = np.stack(axes, axis=1)
    pv = p.pdf(pts)
    qv = q.pdf(pts)
    bad = (pv > XLOGX_FLOOR) & (qv <= 0.0)
    if np.any(bad):
        where = pts[bad][0]
        raise ValueError(
            f"support violation: first density is positive where the second "
            f"vanishes (e.g. near {where.tolist()})"
        )


def truncated_entropy(d: Density, w: float, tol: float | None = None) -> FunctionalValue:
    """Entropy integral restricted to the sup-norm ball of radius w.

    For densities bounded by one, the integrand ``p*log(1/p)`` is
    nonnegative, so this restriction is nondecreasing in w.
    """
    _check_dim(d)
    if not w > 0:
        raise ValueError("window radius must be positive")
    tol = tol or _default_tol(d.dimension)
    region = _region(
        d, window=w, merge_axis0=d.unit_crossings if d.dimension == 1 else ()
    )
    if region is None:
        return FunctionalValue(0.0, 0.0, True)
    res = integrate_nd(lambda pts: xlogx(d.pdf(pts)), region, tol)
    return _from_quad(res, negate=True)


def truncated_mass(d: Density, w: float, tol: float | None = None) -> FunctionalValue:
    """Probability mass inside the sup-norm ball of radius w."""
    _check_dim(d)
    if not w > 0:
        raise ValueError("window radius must be positive")
    tol = tol or _default_tol(d.dimension)
    region = _region(d, window=w)
    if region is None:
        return FunctionalValue(0.0, 0.0, True)
    res = integrate_nd(lambda pts: d.pdf(pts), region, tol)
    return _from_quad(res)


def truncated_alpha_moment(
    d: Density, alpha: float, w: float, tol: float | None = None
) -> FunctionalValue:
    """Alpha-norm moment restricted to the sup-norm ball of radius w."""
    _check_dim(d)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not w > 0:
        raise ValueError("window radius must be positive")
    tol = tol or _default_tol(d.dimension)
    extra = (0.0,) if d.support[0][0] < 0.0 < d.support[0][1] else ()
    region = _region(d, window=w, merge_axis0=extra)
    if region is None:
        return FunctionalValue(0.0, 0.0, True)
    res = integrate_nd(
        lambda pts: _alpha_norm_pow(pts, alpha) * d.pdf(pts), region, tol
    )
    return _from_quad(res)


def truncated_relative_entropy_to_gn(
    d: Density, w: float, spec: ClassSpec, tol: float | None = None
) -> FunctionalValue:
    """Relative entropy against the matched exponential-power reference,
    restricted to the sup-norm ball of radius w.

    The reference is the generalized normal with the spec's shape and
    moment parameter ``max(m,1)^(alpha/n) * v``, exactly the comparison
    density the truncation argument uses.  Values are bounded below by
    -1 whatever the window.
    """
    _check_dim(d)
    if d.dimension != spec.dimension:
        raise ValueError("density and class spec must share a dimension")
    if not w > 0:
        raise ValueError("window radius must be positive")
    tol = tol or _default_tol(d.dimension)
    c_m = max(spec.m, 1.0)
    ref = generalized_normal(
        spec.dimension, spec.alpha, c_m ** (spec.alpha / spec.dimension) * spec.v
    )
    region = _region(d, window=w, other=ref)
    if region is None:
        return FunctionalValue(0.0, 0.0, True)
    fd, fr = d.pdf, ref.pdf

    def integrand(pts):
        dv = fd(pts)
        rv = fr(pts)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.log(np.maximum(dv, XLOGX_FLOOR)) - np.log(
                np.maximum(rv, XLOGX_FLOOR)
            )
            return np.where(dv > XLOGX_FLOOR, dv * ratio, 0.0)

    res = integrate_nd(integrand, region, tol)
    return _from_quad(res)


# ---------------------------------------------------------------------------
# essential supremum


def ess_sup(d: Density) -> tuple[float, str]:
    """Essential supremum with a method tag.

    Returns ``(value, tag)`` with tag ``closed_form`` for catalog
    declarations, ``propagated`` for transform-carried values, and
    ``grid_estimate`` for the multi-start grid refinement fallback (a
    non-certified lower bound of the true supremum).
    """
    if d.closed.ess_sup is not None:
        kn = d.closed.ess_sup
        tag = "closed_form" if kn.source == "closed_form" else "propagated"
        return kn.value, tag
    return _grid_sup(d), "grid_estimate"


def _axis_window(d: Density, ax: int) -> tuple[float, float]:
    lo, hi = d.support[ax]
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    # expand a probe window until the density stops registering on it
    w = 8.0
    best = -1.0
    for _ in range(40):
        plo = lo if math.isfinite(lo) else -w
        phi_ = hi if math.isfinite(hi) else w
        probe = _probe_max(d, ax, plo, phi_)
        if best >= 0.0 and probe <= best * (1.0 + 1e-12):
            return plo, phi_
        best = max(best, probe)
        w *= 2.0
    return (lo if math.isfinite(lo) else -w, hi if math.isfinite(hi) else w)


def _probe_max(d: Density, ax: int, lo: float, hi: float) -> float:
    ts = np.linspace(lo, hi, 257)
    pts = np.zeros((ts.size, d.dimension))
    for j in range(d.dimension):
        jlo, jhi = d.support[j]
        mid = 0.0
        if math.isfinite(jlo) and math.isfinite(jhi):
            mid = 0.5 * (jlo + jhi)
        elif math.isfinite(jlo):
            mid = jlo + 1.0
        elif math.isfinite(jhi):
            mid = jhi - 1.0
        pts[:, j] = mid
    pts[:, ax] = ts
    return float(np.max(d.pdf(pts)))


_GRID_SIZES = {1: 1025, 2: 65, 3: 17}


def _grid_sup(d: Density, rounds: int = 6, starts: int = 4) -> float:
    """Multi-start grid refinement; deterministic, returns a lower bound."""
    windows = [_axis_window(d, ax) for ax in range(d.dimension)]
    g = _GRID_SIZES[d.dimension]

    def grid_eval(wins):
        axes = [np.linspace(lo, hi, g) for lo, hi in wins]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = d.pdf(pts)
        return pts, vals

    pts, vals = grid_eval(windows)
    order = np.argsort(vals)[::-1][:starts]
    best = float(vals[order[0]])
    steps = [(hi - lo) / (g - 1) for lo, hi in windows]
    for idx in order:
        center = pts[int(idx)]
        local_steps = list(steps)
        for _ in range(rounds):
            wins = [
                (
                    max(windows[ax][0], center[ax] - 2 * local_steps[ax]),
                    min(windows[ax][1], center[ax] + 2 * local_steps[ax]),
                )
                for ax in range(d.dimension)
            ]
            p2, v2 = grid_eval(wins)
            j = int(np.argmax(v2))
            if v2[j] > best:
                best = float(v2[j])
            center = p2[j]
            local_steps = [(hi - lo) / (g - 1) for lo, hi in wins]
    return best
