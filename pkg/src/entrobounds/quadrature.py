"""Adaptive Gauss-Kronrod quadrature over finite, semi-infinite, and
infinite intervals.

The one-dimensional engine drives everything: a 7-point Gauss rule
embedded in a 15-point Kronrod rule gives a value and an error estimate
per panel, and the panel with the worst estimate is bisected until the
summed estimate meets the requested absolute tolerance or the
subdivision budget runs out.  Infinite endpoints are mapped to finite
ones before any panel is formed:

* ``(-inf, inf)``  via  ``x = t / (1 - t^2)``  on ``(-1, 1)``
* ``[a, inf)``     via  ``x = a + t / (1 - t)``  on ``[0, 1)``
* ``(-inf, b]``    via  ``x = b - t / (1 - t)``  on ``[0, 1)``

Declared interior split points partition the region before adaptation
starts, so integrable singularities and kinks sit on panel boundaries
where the open Kronrod rule never samples them.

Integrands must accept a 1-d ``numpy`` array of abscissae and return an
array of the same shape (scalar returns are broadcast).  Non-finite
integrand values never poison the result: the offending panel is carried
with an infinite error estimate and the result reports
``converged=False`` instead of a silently wrong value.

Multi-dimensional integrals (up to dimension three) are iterated
applications of the one-dimensional engine with conservatively combined
error estimates.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureResult",
    "IntegrationRegion",
    "integrate",
    "integrate_nd",
    "DEFAULT_TOL_1D",
    "DEFAULT_TOL_ND",
    "DEFAULT_MAX_SUBDIVISIONS",
]

DEFAULT_TOL_1D = 1e-9
DEFAULT_TOL_ND = 1e-7
DEFAULT_MAX_SUBDIVISIONS = 10_000

# 15-point Kronrod abscissae on [-1, 1]; the odd indices are the
# embedded 7-point Gauss nodes.
_NODES = np.array([
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
])

_KRONROD_W = np.array([
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
])

_GAUSS_W = np.array([
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
    0.381830050505119,
    0.279705391489277,
    0.129484966168870,
])


@dataclass(frozen=True)
class QuadratureResult:
    """Value of one integral together with its quality report.

    ``converged=True`` guarantees ``error_estimate <= tol`` for the
    tolerance the integral was requested at.
    """

    value: float
    error_estimate: float
    subdivisions: int
    converged: bool


@dataclass(frozen=True)
class IntegrationRegion:
    """Axis-aligned integration region with declared interior splits.

    ``intervals`` holds one ``(lo, hi)`` pair per axis; endpoints may be
    infinite.  ``splits`` holds, per axis, the points where the region
    is partitioned before adaptation; each must lie strictly inside its
    interval.
    """

    intervals: tuple[tuple[float, float], ...]
    splits: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("region needs at least one axis")
        if not self.splits:
            object.__setattr__(self, "splits", tuple(() for _ in self.intervals))
        if len(self.splits) != len(self.intervals):
            raise ValueError("splits must match intervals axis for axis")
        for (lo, hi), pts in zip(self.intervals, self.splits):
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints must not be NaN")
            if lo > hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
            for p in pts:
                if not lo < p < hi:
                    raise ValueError(
                        f"split point {p} not strictly inside ({lo}, {hi})"
                    )

    @property
    def dimension(self) -> int:
        return len(self.intervals)

    @classmethod
    def line(cls, lo: float, hi: float, splits: Sequence[float] = ()) -> "IntegrationRegion":
        return cls(((float(lo), float(hi)),), (tuple(sorted(set(map(float, splits)))),))

    @classmethod
    def box(
        cls,
        intervals: Sequence[tuple[float, float]],
        splits: Sequence[Sequence[float]] | None = None,
    ) -> "IntegrationRegion":
        ivs = tuple((float(a), float(b)) for a, b in intervals)
        if splits is None:
            sp = tuple(() for _ in ivs)
        else:
            sp = tuple(tuple(sorted(set(map(float, s)))) for s in splits)
        return cls(ivs, sp)

    def drop_axis(self, axis: int) -> "IntegrationRegion":
        ivs = self.intervals[:axis] + self.intervals[axis + 1:]
        sp = self.splits[:axis] + self.splits[axis + 1:]
        return IntegrationRegion(ivs, sp)


def _wrap_finite(f):
    return f


def _wrap_upper_infinite(f, a: float):
    # x = a + t/(1-t) on (0, 1)
    def g(ts):
        u = 1.0 - ts
        good = u > 0.0
        x = np.zeros_like(ts)
        np.divide(ts, u, out=x, where=good)
        jac = np.zeros_like(ts)
        np.divide(1.0, u * u, out=jac, where=good)
        out = np.zeros_like(ts)
        if np.any(good):
            out[good] = np.asarray(f(a + x[good]), dtype=float) * jac[good]
        return out

    return g


def _wrap_lower_infinite(f, b: float):
    # x = b - t/(1-t) on (0, 1)
    def g(ts):
        u = 1.0 - ts
        good = u > 0.0
        x = np.zeros_like(ts)
        np.divide(ts, u, out=x, where=good)
        jac = np.zeros_like(ts)
        np.divide(1.0, u * u, out=jac, where=good)
        out = np.zeros_like(ts)
        if np.any(good):
            out[good] = np.asarray(f(b - x[good]), dtype=float) * jac[good]
        return out

    return g


def _wrap_doubly_infinite(f):
    # x = t/(1-t^2) on (-1, 1)
    def g(ts):
        u = (1.0 - ts) * (1.0 + ts)
        good = u > 0.0
        x = np.zeros_like(ts)
        np.divide(ts, u, out=x, where=good)
        jac = np.zeros_like(ts)
        np.divide(1.0 + ts * ts, u * u, out=jac, where=good)
        out = np.zeros_like(ts)
        if np.any(good):
            out[good] = np.asarray(f(x[good]), dtype=float) * jac[good]
        return out

    return g


def _pieces(f, lo: float, hi: float, splits: Sequence[float]):
    """Map one possibly infinite interval to a list of finite pieces.

    Each piece is ``(g, a, b, edge_left, edge_right)`` with ``g`` the
    integrand in the piece's own (finite) variable and the edge flags
    marking which of the piece's endpoints is a mapped infinity.
    """
    pts = [lo] + [p for p in sorted(set(splits)) if lo < p < hi] + [hi]
    pieces = []
    for a, b in zip(pts[:-1], pts[1:]):
        if a == b:
            continue
        a_inf = math.isinf(a)
        b_inf = math.isinf(b)
        if not a_inf and not b_inf:
            pieces.append((f, a, b, False, False))
        elif a_inf and b_inf:
            pieces.append((_wrap_doubly_infinite(f), -1.0, 1.0, True, True))
        elif b_inf:
            pieces.append((_wrap_upper_infinite(f, a), 0.0, 1.0, False, True))
        else:
            pieces.append((_wrap_lower_infinite(f, b), 0.0, 1.0, False, True))
    return pieces


def _panel(g, a: float, b: float) -> tuple[float, float]:
    """Kronrod value and |Kronrod - Gauss| error estimate on [a, b]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = c + h * _NODES
    with np.errstate(all="ignore"):
        fx = np.asarray(g(xs), dtype=float)
        if fx.ndim == 0:
            fx = np.full_like(xs, float(fx))
        if not np.all(np.isfinite(fx)):
            return 0.0, math.inf
        vk = h * float(_KRONROD_W @ fx)
        vg = h * float(_GAUSS_W @ fx[1::2])
    err = abs(vk - vg)
    if not math.isfinite(vk) or not math.isfinite(err):
        return 0.0, math.inf
    return vk, err


class _ErrorSum:
    """Running error total that tolerates infinities."""

    __slots__ = ("finite", "n_inf")

    def __init__(self):
        self.finite = 0.0
        self.n_inf = 0

    def add(self, e: float):
        if math.isinf(e):
            self.n_inf += 1
        else:
            self.finite += e

    def remove(self, e: float):
        if math.isinf(e):
            self.n_inf -= 1
        else:
            self.finite -= e

    @property
    def total(self) -> float:
        return math.inf if self.n_inf > 0 else self.finite


def _as_line_region(region) -> IntegrationRegion:
    if isinstance(region, IntegrationRegion):
        if region.dimension != 1:
            raise ValueError("integrate() handles one axis; use integrate_nd")
        return region
    lo, hi = region
    return IntegrationRegion.line(lo, hi)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    region,
    tol: float = DEFAULT_TOL_1D,
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS,
) -> QuadratureResult:
    """Integrate a one-dimensional function adaptively.

    Parameters
    ----------
    f : callable
        Vectorized integrand mapping an array of points to values.
    region : IntegrationRegion or (lo, hi) pair
        Interval, possibly with infinite endpoints and interior splits.
    tol : float
        Absolute tolerance on the summed error estimate.
    max_subdivisions : int
        Budget of adaptive bisections; exhaustion returns the best
        estimate with ``converged=False``, never a silent answer.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    reg = _as_line_region(region)
    (lo, hi), = reg.intervals
    pieces = _pieces(f, lo, hi, reg.splits[0])
    if not pieces:
        return QuadratureResult(0.0, 0.0, 0, True)

    # Heap entries: (-error, tiebreak, a, b, value, g, edge_l, edge_r).
    # A panel touching a mapped infinity cannot certify more than its
    # own magnitude (the rule extrapolates over the whole unreachable
    # tail), so its error is floored at |value|.  Frozen panels are the
    # ones bisection can no longer improve (midpoint saturates in fp).
    heap: list = []
    frozen: list = []
    counter = 0
    errs = _ErrorSum()

    def _panel_err(v: float, e: float, edge_l: bool, edge_r: bool) -> float:
        return max(e, abs(v)) if (edge_l or edge_r) else e

    for g, a, b, edge_l, edge_r in pieces:
        v, e = _panel(g, a, b)
        e = _panel_err(v, e, edge_l, edge_r)
        heapq.heappush(heap, (-e, counter, a, b, v, g, edge_l, edge_r))
        counter += 1
        errs.add(e)

    splits_done = 0
    frozen_errs = _ErrorSum()
    while errs.total > tol and splits_done < max_subdivisions and heap:
        if frozen_errs.total > tol:
            break  # irreducible error alone exceeds tol; stop burning budget
        neg_e, _, a, b, v, g, edge_l, edge_r = heapq.heappop(heap)
        e = -neg_e
        if e == 0.0:
            # the heap's worst panel is exact; only frozen error remains
            heapq.heappush(heap, (neg_e, counter, a, b, v, g, edge_l, edge_r))
            counter += 1
            break
        mid = 0.5 * (a + b)
        resolvable = (
            a < mid < b
            and a < 0.5 * (a + mid) < mid
            and mid < 0.5 * (mid + b) < b
        )
        if not resolvable:
            # Bisection saturated in floating point: a child could no
            # longer hold distinct interior nodes.  The rule cannot
            # certify anything here, so the panel's own magnitude joins
            # its error estimate and the panel is set aside.
            e_frozen = max(e, abs(v))
            errs.remove(e)
            errs.add(e_frozen)
            frozen.append((e_frozen, v))
            frozen_errs.add(e_frozen)
            continue
        errs.remove(e)
        vl, el = _panel(g, a, mid)
        el = _panel_err(vl, el, edge_l, False)
        vr, er = _panel(g, mid, b)
        er = _panel_err(vr, er, False, edge_r)
        heapq.heappush(heap, (-el, counter, a, mid, vl, g, edge_l, False))
        counter += 1
        heapq.heappush(heap, (-er, counter, mid, b, vr, g, False, edge_r))
        counter += 1
        errs.add(el)
        errs.add(er)
        splits_done += 1

    values = [item[4] for item in heap] + [v for _, v in frozen]
    total_errs = [-item[0] for item in heap] + [e for e, _ in frozen]
    value = math.fsum(values)
    err = math.inf if any(math.isinf(e) for e in total_errs) else math.fsum(total_errs)
    return QuadratureResult(value, err, splits_done, err <= tol)


def integrate_nd(
    f: Callable[[np.ndarray], np.ndarray],
    region: IntegrationRegion,
    tol: float = DEFAULT_TOL_ND,
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS,
) -> QuadratureResult:
    """Integrate over an axis-aligned region of dimension at most three.

    The integrand receives an ``(m, n)`` array of points and returns
    ``m`` values.  Axes are nested outermost-first; inner integrals run
    at a tighter tolerance and their worst error estimate is added to
    the outer one, so ``converged=True`` still implies the combined
    estimate meets ``tol``.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    n = region.dimension
    if n > 3:
        raise ValueError("regions beyond dimension 3 are not supported")
    if n == 1:
        res = integrate(
            lambda ts: f(ts[:, None]),
            IntegrationRegion.line(*region.intervals[0], region.splits[0]),
            tol,
            max_subdivisions,
        )
        return res

    inner_region = region.drop_axis(0)
    inner_tol = tol / 4.0
    stats = {"max_err": 0.0, "converged": True, "subdivisions": 0}

    def outer_integrand(ts: np.ndarray) -> np.ndarray:
        out = np.empty_like(ts)
        for i, t in enumerate(ts):
            def slab(pts: np.ndarray, _t=float(t)) -> np.ndarray:
                full = np.empty((pts.shape[0], n))
                full[:, 0] = _t
                full[:, 1:] = pts
                return f(full)

            r = integrate_nd(slab, inner_region, inner_tol, max_subdivisions)
            stats["max_err"] = max(stats["max_err"], r.error_estimate)
            stats["converged"] = stats["converged"] and r.converged
            stats["subdivisions"] += r.subdivisions
            out[i] = r.value
        return out

    outer = integrate(
        outer_integrand,
        IntegrationRegion.line(*region.intervals[0], region.splits[0]),
        tol / 2.0,
        max_subdivisions,
    )
    err = outer.error_estimate + stats["max_err"]
    converged = outer.converged and stats["converged"]
    return QuadratureResult(
        outer.value, err, outer.subdivisions + stats["subdivisions"], converged
    )
