"""Numerical evaluation of toric periods by nested adaptive Gauss-Kronrod.

The reduced integrand decays like exp(-e^{max_j u_j}), so the integration
domain is truncated to the polytope {s : u_j(s) <= L for all j}. Outer
axes run over the bounding box of that polytope; the innermost axis uses
the exact slice interval at the current outer point.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .errors import BadShape, DimensionTooLarge, NotConverged, NotIntegrable
from .reduction import ReducedIntegrand, SpectralParams, log_reduce
from .toric_data import ToricData

MAX_QUAD_DIM = 3

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    truncation_margin: float = 1.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.truncation_margin <= 0:
            raise ValueError("truncation_margin must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @property
    def cutoff(self) -> float:
        """L such that exp(-e^L) is far below abs_tol."""
        return math.log(math.log(100.0 / self.abs_tol)) + self.truncation_margin


@dataclass(frozen=True)
class PeriodValue:
    value: complex
    error_estimate: float
    evaluations: int


# fn(nodes) -> (values, per-node error bounds, evaluation count)
AxisFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, int]]


def _gk_interval(fn: AxisFn, a: float, b: float):
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * NODES
    vals, inner_err, nev = fn(nodes)
    k = half * np.dot(KRONROD_W, vals)
    g = half * np.dot(GAUSS_W, vals)
    absw = abs(half) * KRONROD_W
    err = abs(k - g) + float(np.dot(absw, inner_err)) + 50 * _EPS * float(np.dot(absw, np.abs(vals)))
    return complex(k), err, nev


def adaptive_gk(fn: AxisFn, a: float, b: float, abs_tol: float, rel_tol: float,
                max_subdivisions: int) -> Tuple[complex, float, int]:
    """Globally adaptive G7/K15 integration of a vectorised complex function.

    Repeatedly bisects the interval with the largest error estimate until
    the summed estimate is below max(abs_tol, rel_tol * |value|).
    """
    if b <= a:
        return 0j, 0.0, 0
    val, err, nev = _gk_interval(fn, a, b)
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    splits = 0
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if splits >= max_subdivisions:
            raise NotConverged(
                f"error estimate {total_err:.3e} above tolerance after {splits} subdivisions")
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1, n1 = _gk_interval(fn, lo, mid)
        v2, e2, n2 = _gk_interval(fn, mid, hi)
        nev += n1 + n2
        total += v1 + v2 - v
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        splits += 1
        # re-summing avoids drift from incremental updates
        total_err = sum(-item[0] for item in heap)
    total = sum(item[3] for item in heap)
    return complex(total), total_err, nev


def _bounding_box(integrand: ReducedIntegrand, L: float) -> np.ndarray:
    """Per-axis [lo, hi] of the polytope {s : u0 + V^T s <= L}."""
    vt = integrand.vt
    rhs = L - integrand.u0
    r = integrand.dim
    box = np.empty((r, 2))
    for k in range(r):
        for side, sign in ((0, 1.0), (1, -1.0)):
            cost = np.zeros(r)
            cost[k] = sign
            res = linprog(cost, A_ub=vt, b_ub=rhs, bounds=[(None, None)] * r, method="highs")
            if res.status == 2:  # infeasible: the polytope is empty
                return np.zeros((r, 2))
            if res.status != 0:
                raise NotIntegrable(f"truncation region is unbounded along axis {k}")
            box[k, side] = res.x[k]
    return box


def _slice_interval(coef: np.ndarray, offset: np.ndarray, L: float) -> Tuple[float, float]:
    """Interval of t with offset_j + coef_j t <= L for all j."""
    lo, hi = -math.inf, math.inf
    for c, o in zip(coef, offset):
        if c > 0:
            hi = min(hi, (L - o) / c)
        elif c < 0:
            lo = max(lo, (L - o) / c)
        elif o > L:
            return 0.0, 0.0
    return lo, hi


def _leaf_batch(shifts: np.ndarray, coef: np.ndarray, lam: np.ndarray, L: float,
                abs_tol: float, rel_tol: float, max_subdivisions: int):
    """Innermost-axis integrals for a batch of outer points at once.

    Each member uses composite G7/K15 on its exact slice interval; the
    panel count doubles for unconverged members only.
    """
    B = shifts.shape[0]
    lims = np.array([_slice_interval(coef, sh, L) for sh in shifts]).reshape(B, 2)
    vals = np.zeros(B, dtype=complex)
    errs = np.zeros(B)
    nev = 0
    todo = np.flatnonzero(lims[:, 1] > lims[:, 0])
    panels = 4
    while todo.size:
        if panels > 2 * max_subdivisions:
            raise NotConverged(f"inner integral not converged with {panels // 2} panels")
        lo = lims[todo, 0][:, None]
        width = (lims[todo, 1] - lims[todo, 0])[:, None] / panels
        centers = lo + width * (np.arange(panels)[None, :] + 0.5)  # (b, P)
        half = 0.5 * width
        t = centers[:, :, None] + half[:, :, None] * NODES[None, None, :]  # (b, P, 15)
        u = shifts[todo][:, None, None, :] + t[..., None] * coef
        f = np.exp(1j * (u @ lam) - np.exp(u).sum(axis=-1))
        nev += f.size
        kp = half * (f @ KRONROD_W)  # per-panel Kronrod estimates, (b, P)
        gp = half * (f @ GAUSS_W)
        k = kp.sum(axis=1)
        absk = (half * (np.abs(f) @ KRONROD_W)).sum(axis=1)
        e = np.abs(kp - gp).sum(axis=1) + 50 * _EPS * absk
        done = e <= np.maximum(abs_tol, rel_tol * np.abs(k))
        vals[todo[done]] = k[done]
        errs[todo[done]] = e[done]
        todo = todo[~done]
        panels *= 2
    return vals, errs, nev


def integrate_reduced(integrand: ReducedIntegrand, settings: QuadratureSettings) -> PeriodValue:
    """jacobian * integral of the reduced integrand over R^{N-n}."""
    r = integrand.dim
    if r == 0:
        return PeriodValue(complex(integrand.jacobian * integrand(np.zeros(0))), 0.0, 1)
    if r > MAX_QUAD_DIM:
        raise DimensionTooLarge(f"quadrature supports N-n <= {MAX_QUAD_DIM}, got {r}")
    L = settings.cutoff
    box = _bounding_box(integrand, L)
    vt = integrand.vt
    u0 = integrand.u0
    lam = integrand.params.as_floats()
    widths = np.maximum(box[:, 1] - box[:, 0], 1.0)
    tol = settings.abs_tol / integrand.jacobian
    leaf_coef = vt[:, r - 1]

    def axis_fn(prefix: Tuple[float, ...]) -> AxisFn:
        depth = len(prefix)
        base = u0 + (vt[:, :depth] @ np.array(prefix) if depth else 0.0)
        col = vt[:, depth]
        if depth == r - 1:
            def leaf(t):
                u = base[None, :] + t[:, None] * col[None, :]
                return np.exp(1j * (u @ lam) - np.exp(u).sum(axis=1)), np.zeros(t.shape), t.size
            return leaf
        child_tol = tol / float(np.prod(widths[:depth + 1]))
        if depth == r - 2:
            def branch(t):
                shifts = base[None, :] + t[:, None] * col[None, :]
                return _leaf_batch(shifts, leaf_coef, lam, L, child_tol, settings.rel_tol,
                                   settings.max_subdivisions)
            return branch

        def branch(t):
            out = [integrate_axis(prefix + (float(ti),)) for ti in t]
            return (np.array([o[0] for o in out]), np.array([o[1] for o in out]),
                    sum(o[2] for o in out))
        return branch

    def integrate_axis(prefix: Tuple[float, ...]) -> Tuple[complex, float, int]:
        depth = len(prefix)
        fn = axis_fn(prefix)
        if depth == r - 1:
            lo, hi = _slice_interval(leaf_coef, u0 + vt[:, :depth] @ np.array(prefix), L)
        else:
            lo, hi = box[depth]
        abs_tol = tol / float(np.prod(widths[:depth])) if depth else tol
        return adaptive_gk(fn, lo, hi, abs_tol, settings.rel_tol, settings.max_subdivisions)

    value, err, nev = integrate_axis(())
    J = integrand.jacobian
    return PeriodValue(J * value, J * err, nev)


def evaluate_period(data: ToricData, params: SpectralParams, x: Sequence[float],
                    settings: QuadratureSettings = QuadratureSettings()) -> PeriodValue:
    """Period at reduced coordinates x, using the min-norm base point."""
    if data.kernel.dim > MAX_QUAD_DIM:
        raise DimensionTooLarge(f"quadrature supports N-n <= {MAX_QUAD_DIM}, got {data.kernel.dim}")
    return integrate_reduced(log_reduce(data, params, x), settings)


def evaluate_matrix_element(data: ToricData, params: SpectralParams, y: Sequence[float],
                            settings: QuadratureSettings = QuadratureSettings()) -> PeriodValue:
    """Matrix element <psi_L| exp(sum_j y^j H_j) |psi_R> at a y-space point.

    exp(y.H) rescales t_j -> e^{y_j} t_j in the right vector, so the
    constraint set is parametrised around u0 = y instead of the min-norm
    point. The result depends on y only through x = m.y.
    """
    if len(y) != data.N:
        raise BadShape(f"expected {data.N} y-coordinates, got {len(y)}")
    if data.kernel.dim > MAX_QUAD_DIM:
        raise DimensionTooLarge(f"quadrature supports N-n <= {MAX_QUAD_DIM}, got {data.kernel.dim}")
    x = data.charge.apply(y)
    return integrate_reduced(log_reduce(data, params, x, u0=y), settings)
