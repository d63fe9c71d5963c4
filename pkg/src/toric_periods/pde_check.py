"""Finite-difference residuals of the hypergeometric system on sampled periods."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, List, Sequence, Tuple

import numpy as np

from . import _exact
from .errors import BadShape, StencilOutOfRange
from .operator_algebra import XSpaceOperator, gkz_operator
from .quadrature import QuadratureSettings, evaluate_period
from .reduction import SpectralParams
from .toric_data import ToricData


@lru_cache(maxsize=None)
def central_weights(order: int) -> Tuple[Fraction, ...]:
    """Second-order accurate central stencil for the ``order``-th derivative.

    Offsets run over -p..p with p = (order + 1) // 2; weights are exact and
    must be divided by h**order.
    """
    p = (order + 1) // 2
    offsets = range(-p, p + 1)
    rows = [[Fraction(o) ** q for o in offsets] for q in range(2 * p + 1)]
    rhs = [Fraction(math.factorial(order)) if q == order else Fraction(0) for q in range(2 * p + 1)]
    return tuple(_exact.solve(rows, rhs))


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned uniform grid: points lo_k + i h up to hi_k on every axis."""

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]
    h: float

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or not self.lo:
            raise BadShape("grid bounds must have matching nonzero length")
        if not self.h > 0:
            raise BadShape("grid step must be positive")
        if any(b < a for a, b in zip(self.lo, self.hi)):
            raise BadShape("grid upper bound below lower bound")

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(int(round((b - a) / self.h)) + 1 for a, b in zip(self.lo, self.hi))

    def points(self) -> List[Tuple[float, ...]]:
        axes = [[a + i * self.h for i in range(c)] for a, c in zip(self.lo, self.counts)]
        return list(product(*axes))

    def padded(self, pad: int) -> "GridSpec":
        return GridSpec(tuple(a - pad * self.h for a in self.lo),
                        tuple(a + (c - 1 + pad) * self.h for a, c in zip(self.lo, self.counts)),
                        self.h)


@dataclass(frozen=True)
class SampledGrid:
    origin: Tuple[float, ...]
    h: float
    values: np.ndarray  # complex, one axis per x-coordinate

    def index_of(self, x0: Sequence[float]) -> Tuple[int, ...]:
        idx = []
        for x, o in zip(x0, self.origin):
            k = (x - o) / self.h
            ik = int(round(k))
            if abs(k - ik) > 1e-6:
                raise BadShape(f"point {tuple(x0)} is not on the grid")
            idx.append(ik)
        return tuple(idx)


def sample_function(fn: Callable[[Tuple[float, ...]], complex], spec: GridSpec) -> SampledGrid:
    vals = np.array([fn(p) for p in spec.points()], dtype=complex).reshape(spec.counts)
    return SampledGrid(tuple(spec.lo), spec.h, vals)


def fd_terms(op: XSpaceOperator, grid: SampledGrid, x0: Sequence[float]) -> List[complex]:
    """Every term of the operator at x0: c_beta * D^beta f, then -exp(x0_alpha) f."""
    if len(x0) != op.n or grid.values.ndim != op.n:
        raise BadShape("operator, grid and point dimensions disagree")
    idx = grid.index_of(x0)
    shape = grid.values.shape
    out = []
    for beta, coeff in sorted(op.poly_part.items()):
        stencils = [central_weights(b) for b in beta]
        est = 0j
        for offs in product(*(range(len(s)) for s in stencils)):
            pos = []
            w = Fraction(1)
            for k, (s, o) in enumerate(zip(stencils, offs)):
                p = (len(s) - 1) // 2
                ik = idx[k] + o - p
                if not 0 <= ik < shape[k]:
                    raise StencilOutOfRange(f"stencil for derivative {beta} leaves the grid at {tuple(x0)}")
                pos.append(ik)
                w *= s[o]
            if w:
                est += float(w) * grid.values[tuple(pos)]
        out.append(complex(coeff) * est / grid.h ** sum(beta))
    if not all(0 <= i < s for i, s in zip(idx, shape)):
        raise StencilOutOfRange(f"point {tuple(x0)} outside the grid")
    out.append(-math.exp(x0[op.alpha]) * grid.values[idx])
    return out


def fd_apply(op: XSpaceOperator, grid: SampledGrid, x0: Sequence[float]) -> complex:
    """Finite-difference value of op applied to the sampled function at x0."""
    return complex(sum(fd_terms(op, grid, x0)))


@dataclass(frozen=True)
class ResidualReport:
    alpha: int
    x0: Tuple[float, ...]
    h: float
    residual: complex
    normalizer: float
    normalized_residual: float


def residual_report(op: XSpaceOperator, grid: SampledGrid, x0: Sequence[float]) -> ResidualReport:
    terms = fd_terms(op, grid, x0)
    res = complex(sum(terms))
    norm = float(sum(abs(t) for t in terms))
    return ResidualReport(op.alpha, tuple(x0), grid.h, res, norm, abs(res) / norm if norm else 0.0)


def stencil_pad(ops: Sequence[XSpaceOperator]) -> int:
    return max(((max(b) + 1) // 2 for op in ops for b in op.poly_part), default=0)


def sample_periods(data: ToricData, params: SpectralParams, spec: GridSpec,
                   settings: QuadratureSettings, threads: int = 1) -> SampledGrid:
    """Period values on every grid point (each point evaluated once)."""
    def one(p):
        return evaluate_period(data, params, p, settings).value

    pts = spec.points()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(one, pts))
    else:
        vals = [one(p) for p in pts]
    return SampledGrid(tuple(spec.lo), spec.h, np.array(vals, dtype=complex).reshape(spec.counts))


def verify_system(data: ToricData, params: SpectralParams, spec: GridSpec,
                  settings: QuadratureSettings = QuadratureSettings(),
                  threads: int = 1) -> List[ResidualReport]:
    """Residual of every operator at every point of ``spec``.

    Periods are sampled on ``spec`` widened by the stencil half-width, so
    every requested point admits its stencil.
    """
    if len(spec.lo) != data.n:
        raise BadShape(f"grid must have {data.n} axes")
    ops = [gkz_operator(data, params, a) for a in range(data.n)]
    grid = sample_periods(data, params, spec.padded(stencil_pad(ops)), settings, threads)
    return [residual_report(op, grid, p) for p in spec.points() for op in ops]


def observed_order(h_values: Sequence[float], residuals: Sequence[float]) -> List[float]:
    """log(r_k / r_{k+1}) / log(h_k / h_{k+1}) for consecutive refinements."""
    return [math.log(r0 / r1) / math.log(h0 / h1)
            for h0, h1, r0, r1 in zip(h_values, h_values[1:], residuals, residuals[1:])]
