"""Resolve the delta constraints of the period integral in log coordinates.

With u_j = log t_j the measure dt_j/t_j becomes du_j and each constraint
e^{-x^a} prod_j t_j^{m_j^a} = 1 becomes the affine condition m.u = x.
The constraint set is parametrised as u(s) = u0 + V^T s, s in R^{N-n},
and the delta functions leave the constant factor
sqrt(det(V V^T) / det(m m^T)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _exact
from .errors import BadShape, NotIntegrable, SingularGram, ToricError
from .toric_data import ChargeMatrix, KernelBasis, ToricData


@dataclass(frozen=True)
class SpectralParams:
    """Real spectral vector lambda and central value c.

    Entries may be ints, Fractions or floats; exact entries keep the
    symbolic operator checks exact.
    """

    lam: Tuple = ()
    c: object = 1

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(self.lam))
        for v in self.lam:
            if isinstance(v, complex) or not math.isfinite(float(v)):
                raise ToricError(f"lambda entries must be finite reals, got {v!r}")
        if isinstance(self.c, complex) or not float(self.c) > 0:
            raise ToricError(f"central value c must be positive, got {self.c!r}")

    @property
    def N(self) -> int:
        return len(self.lam)

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.lam])

    def negated(self) -> "SpectralParams":
        return SpectralParams(tuple(-v for v in self.lam), self.c)


def particular_solution(m: ChargeMatrix, x: Sequence[float]) -> np.ndarray:
    """Minimum-norm solution u0 = m^T (m m^T)^{-1} x of m.u = x.

    The Gram system is solved in exact rationals (floats convert to
    Fractions without loss), so the result is reproducible bit for bit.
    """
    if len(x) != m.n:
        raise BadShape(f"expected {m.n} x-coordinates, got {len(x)}")
    try:
        w = _exact.solve(_exact.gram(m.entries), [Fraction(float(v)) for v in x])
    except ZeroDivisionError:
        raise SingularGram("m m^T is singular") from None
    return np.array([float(sum(m.entries[a][j] * w[a] for a in range(m.n))) for j in range(m.N)])


def jacobian_factor(m: ChargeMatrix, V: KernelBasis) -> float:
    num = _exact.det(_exact.gram(V.rows))
    den = _exact.det(_exact.gram(m.entries))
    return math.sqrt(num / den)


@dataclass(frozen=True)
class ReducedIntegrand:
    """s -> prod_j exp(i lambda_j u_j(s) - exp(u_j(s))) with u(s) = u0 + V^T s."""

    u0: np.ndarray
    V: KernelBasis
    jacobian: float
    params: SpectralParams
    _vt: np.ndarray = field(init=False, repr=False, compare=False)
    _lam: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vt = np.array(self.V.rows, dtype=float).reshape(self.V.dim, self.V.N).T
        object.__setattr__(self, "_vt", vt)
        object.__setattr__(self, "_lam", self.params.as_floats())
        self.u0.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.V.dim

    @property
    def vt(self) -> np.ndarray:
        """N x (N-n) matrix mapping s to the u-displacement."""
        return self._vt

    def u(self, s) -> np.ndarray:
        """u(s) for s of shape (..., N-n); returns shape (..., N)."""
        s = np.asarray(s, dtype=float)
        return self.u0 + s @ self._vt.T

    def log_modulus(self, s) -> np.ndarray:
        return -np.exp(self.u(s)).sum(axis=-1)

    def __call__(self, s) -> np.ndarray:
        u = self.u(s)
        return np.exp(1j * (u @ self._lam) - np.exp(u).sum(axis=-1))


def log_reduce(
    data: ToricData,
    params: SpectralParams,
    x: Sequence[float],
    u0: Optional[Sequence[float]] = None,
) -> ReducedIntegrand:
    """Assemble the reduced integrand at the point x.

    ``u0`` overrides the min-norm particular solution; it must satisfy
    m.u0 = x (checked). The period does not depend on the choice.
    """
    if not data.integrable:
        raise NotIntegrable("kernel contains a nonzero vector with all coordinates <= 0")
    if params.N != data.N:
        raise BadShape(f"lambda has length {params.N}, expected {data.N}")
    if u0 is None:
        base = particular_solution(data.charge, x)
    else:
        base = np.array([float(v) for v in u0])
        if base.shape != (data.N,):
            raise BadShape(f"u0 must have {data.N} entries")
        resid = np.array(data.charge.apply(base)) - np.asarray(x, dtype=float)
        if np.max(np.abs(resid), initial=0.0) > 1e-12 * (1 + np.max(np.abs(x), initial=0.0)):
            raise ToricError("u0 does not satisfy m.u0 = x")
    return ReducedIntegrand(base, data.kernel, data.jacobian, params)
