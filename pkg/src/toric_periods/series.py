"""Formal solutions sum_d a_d exp(d.x) of the hypergeometric system.

Applied to exp(d.x), d_{x^b} acts as multiplication by d_b, so the
alpha-th operator turns the series into sum_d (P_alpha(d) a_d - a_{d-e_alpha}) exp(d.x).
Matching coefficients gives the recursion P_alpha(d) a_d = a_{d - e_alpha}.

The series is a witness for the recursion and the operators only; it is
not matched to the integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import BadShape, ResonantParameters
from .reduction import SpectralParams
from .toric_data import ChargeMatrix, ToricData

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class SeriesCoefficients:
    dmax: MultiIndex
    coeffs: Dict[MultiIndex, complex]

    @property
    def n(self) -> int:
        return len(self.dmax)


def step_factor(m: ChargeMatrix, params: SpectralParams, alpha: int, d: Sequence[int]) -> complex:
    """P_alpha(d) = prod_j prod_{k < m_j^alpha} (i lambda_j + k - mu_j(d)), mu = m^T d."""
    lam = params.as_floats()
    out = 1.0 + 0j
    for j in range(m.N):
        mu = sum(m.entries[b][j] * d[b] for b in range(m.n))
        for k in range(m.entries[alpha][j]):
            out *= complex(k - mu, lam[j])
    return out


def build_series(data, params: SpectralParams, dmax: Sequence[int],
                 order: Optional[Sequence[int]] = None) -> SeriesCoefficients:
    """Coefficients a_d for 0 <= d <= dmax, with a_0 = 1.

    Each a_d is reached from a_{d - e_alpha} where alpha is the first entry
    of ``order`` (default 0, 1, ..., n-1) with d_alpha >= 1.
    """
    m = data.charge if isinstance(data, ToricData) else data
    dmax = tuple(int(v) for v in dmax)
    if len(dmax) != m.n or any(v < 0 for v in dmax):
        raise BadShape(f"dmax must be {m.n} nonnegative integers")
    order = tuple(range(m.n)) if order is None else tuple(order)
    if sorted(order) != list(range(m.n)):
        raise BadShape("order must be a permutation of the row indices")
    coeffs: Dict[MultiIndex, complex] = {}
    # lexicographic order visits every d - e_alpha before d
    for d in product(*(range(v + 1) for v in dmax)):
        if not any(d):
            coeffs[d] = 1.0 + 0j
            continue
        alpha = next(a for a in order if d[a] >= 1)
        p = step_factor(m, params, alpha, d)
        if abs(p) < 1e-14:
            raise ResonantParameters(f"P_{alpha + 1}({d}) vanishes")
        prev = d[:alpha] + (d[alpha] - 1,) + d[alpha + 1:]
        coeffs[d] = coeffs[prev] / p
    return SeriesCoefficients(dmax, coeffs)


def series_eval(coeffs: SeriesCoefficients, x: Sequence[float]) -> Tuple[complex, float]:
    """Truncated sum and a tail indicator.

    The tail indicator is sum |a_d exp(d.x)| over the outer faces of the
    truncation box (d_alpha = dmax_alpha for some alpha).
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (coeffs.n,):
        raise BadShape(f"expected {coeffs.n} x-coordinates")
    total = 0j
    tail = 0.0
    for d, a in coeffs.coeffs.items():
        term = a * math.exp(float(np.dot(d, x)))
        total += term
        if any(di == dm for di, dm in zip(d, coeffs.dmax)):
            tail += abs(term)
    return total, tail


def series_residual(coeffs: SeriesCoefficients, op, x: Sequence[float]) -> Tuple[complex, complex, complex]:
    """Apply an x-space operator termwise to the truncated series.

    Returns (total, lower, upper): ``lower`` collects the terms with
    d_alpha = 0, which vanish when P_alpha(d) does; ``upper`` collects the
    shifted terms exp((d + e_alpha).x) pushed outside the box.
    Interior terms cancel by the recursion and are included in ``total``.
    """
    x = np.asarray(x, dtype=float)
    alpha = op.alpha
    total = lower = upper = 0j
    for d, a in coeffs.coeffs.items():
        e = math.exp(float(np.dot(d, x)))
        applied = complex(op.symbol(d)) * a * e
        shifted = a * e * math.exp(x[alpha])
        total += applied - shifted
        if d[alpha] == 0:
            lower += applied
        if d[alpha] == coeffs.dmax[alpha]:
            upper -= shifted
    return total, lower, upper
