"""Charge matrices, their integer kernels and the convergence guard."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Tuple

from . import _exact
from .errors import BadShape, DimensionTooLarge, NegativeEntry, RankDeficient

MAX_KERNEL_DIM = 4


@dataclass(frozen=True)
class ChargeMatrix:
    """Integer n x N matrix; row alpha holds the charges m_j^alpha of one circle."""

    entries: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def N(self) -> int:
        return len(self.entries[0])

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def apply(self, y: Sequence[float]) -> Tuple[float, ...]:
        """x = m . y, the reduced coordinates of a y-space point."""
        if len(y) != self.N:
            raise BadShape(f"expected {self.N} coordinates, got {len(y)}")
        return tuple(sum(mj * yj for mj, yj in zip(row, y)) for row in self.entries)


@dataclass(frozen=True)
class KernelBasis:
    rows: Tuple[Tuple[int, ...], ...]
    N: int

    @property
    def dim(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ToricData:
    charge: ChargeMatrix
    kernel: KernelBasis
    jacobian: float
    integrable: bool

    @property
    def n(self) -> int:
        return self.charge.n

    @property
    def N(self) -> int:
        return self.charge.N


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise BadShape(f"non-integer entry {x!r}")
    try:
        ix = int(x)
    except (TypeError, ValueError):
        raise BadShape(f"non-integer entry {x!r}") from None
    if ix != x:
        raise BadShape(f"non-integer entry {x!r}")
    return ix


def validate_charge_matrix(raw: Sequence[Sequence[int]]) -> ChargeMatrix:
    """Check shape, sign and rank of a raw charge matrix.

    ``N == n`` is accepted: it describes a point-like reduction with an
    empty kernel, where the period collapses to a closed-form value.
    """
    rows = [list(r) for r in raw]
    if not rows or not rows[0]:
        raise BadShape("charge matrix must have at least one row and one column")
    N = len(rows[0])
    if any(len(r) != N for r in rows):
        raise BadShape("ragged charge matrix")
    entries = tuple(tuple(_as_int(x) for x in r) for r in rows)
    n = len(entries)
    if N < n:
        raise BadShape(f"need N >= n, got n={n}, N={N}")
    if any(x < 0 for r in entries for x in r):
        raise NegativeEntry("charge matrices with negative entries are not supported")
    if _exact.rank(entries) != n:
        raise RankDeficient(f"charge matrix rows are linearly dependent (n={n})")
    return ChargeMatrix(entries)


def kernel_basis(m: ChargeMatrix) -> KernelBasis:
    """Primitive integer basis of ker(m), saturated and in row Hermite form."""
    if m.N == m.n:
        return KernelBasis((), m.N)
    rows = _exact.integer_kernel(m.entries)
    assert len(rows) == m.N - m.n
    return KernelBasis(tuple(tuple(r) for r in rows), m.N)


def integrability_check(V: KernelBasis) -> bool:
    """True iff no nonzero kernel vector has all coordinates <= 0.

    The cone {s : V^T s <= 0} is pointed, so it is nonzero exactly when
    it has an extreme ray. Every extreme ray is cut out by r - 1
    independent columns of V; all candidates are enumerated exactly.
    """
    r = V.dim
    if r == 0:
        return True
    if r > MAX_KERNEL_DIM:
        raise DimensionTooLarge(f"kernel dimension {r} exceeds {MAX_KERNEL_DIM}")
    cols = [tuple(row[j] for row in V.rows) for j in range(V.N)]
    for subset in combinations(cols, r - 1):
        if _exact.rank(subset) != r - 1:
            continue
        d = _exact.null_vector(subset, r)
        vals = [sum(c * x for c, x in zip(col, d)) for col in cols]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            return False
    return True


def build_toric_data(raw) -> ToricData:
    """Validate ``raw`` and bundle kernel, Jacobian factor and integrability flag."""
    from .reduction import jacobian_factor

    m = raw if isinstance(raw, ChargeMatrix) else validate_charge_matrix(raw)
    V = kernel_basis(m)
    return ToricData(m, V, jacobian_factor(m, V), integrability_check(V))
