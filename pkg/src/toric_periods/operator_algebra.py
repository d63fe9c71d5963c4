"""Symbolic model of the algebra L_N and its differential representation.

Generators per index i: F_i (raising the t-degree), H_i (Cartan), E_i
(lowering), plus one central element C. The defining brackets are

    [E_i, H_j] = delta_ij E_i,  [F_i, H_j] = -delta_ij F_i,  [E_i, F_j] = delta_ij C,

with all other pairs commuting. The representation sends F_i -> t_i,
E_i -> c d/dt_i, H_i -> t_i d/dt_i + i lambda_i and C -> c.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .gaussian import GaussRat, imag_unit_times, is_zero
from .reduction import SpectralParams
from .toric_data import ChargeMatrix, ToricData

KINDS = ("F", "H", "E", "C")
_ORDER = {k: i for i, k in enumerate(KINDS)}


class Letter(NamedTuple):
    kind: str
    index: int  # 0-based; ignored for C

    def __str__(self):
        return "C" if self.kind == "C" else f"{self.kind}{self.index + 1}"


C = Letter("C", 0)
Word = Tuple[Letter, ...]
Signature = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], int]


def _key(x: Letter):
    return (_ORDER[x.kind], x.index if x.kind != "C" else 0)


def parse_word(text: str) -> Word:
    """'E1 F2 H1 C' (1-based indices, whitespace optional) -> Word."""
    out = []
    for kind, idx in re.findall(r"([FHEC])(\d*)", text.replace(" ", "")):
        if kind == "C":
            out.append(C)
        else:
            if not idx or int(idx) < 1:
                raise ValueError(f"generator {kind} needs a 1-based index")
            out.append(Letter(kind, int(idx) - 1))
    return tuple(out)


def _bracket(x: Letter, y: Letter):
    """xy - yx for letters with x sorting after y, as (letter, coefficient) or None."""
    if x.kind == "C" or y.kind == "C" or x.kind == y.kind or x.index != y.index:
        return None
    pair = (x.kind, y.kind)
    if pair == ("E", "F"):
        return C, 1
    if pair == ("E", "H"):
        return x, 1
    if pair == ("H", "F"):
        return y, 1
    raise AssertionError(pair)


def _add(terms: Dict, key, coeff):
    v = terms.get(key, 0) + coeff
    if v == 0:
        terms.pop(key, None)
    else:
        terms[key] = v


@dataclass
class NormalForm:
    """Linear combination of ordered monomials F^a H^b E^e C^p."""

    N: int
    terms: Dict[Signature, object] = field(default_factory=dict)

    @classmethod
    def scalar(cls, N: int, value=1) -> "NormalForm":
        z = ((0,) * N,) * 3
        return cls(N, {(z[0], z[1], z[2], 0): value} if value != 0 else {})

    @classmethod
    def generator(cls, kind: str, index: int, N: int) -> "NormalForm":
        return normal_order((Letter(kind, index),), N)

    def word(self, sig: Signature) -> Word:
        a, b, e, p = sig
        out: List[Letter] = []
        for kind, exps in (("F", a), ("H", b), ("E", e)):
            for i, k in enumerate(exps):
                out.extend([Letter(kind, i)] * k)
        return tuple(out) + (C,) * p

    def __add__(self, other: "NormalForm") -> "NormalForm":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _add(terms, k, v)
        return NormalForm(self.N, terms)

    def __neg__(self):
        return NormalForm(self.N, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "NormalForm":
        terms: Dict = {}
        for k, v in self.terms.items():
            _add(terms, k, v * s)
        return NormalForm(self.N, terms)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        out: Dict = {}
        for k1, v1 in self.terms.items():
            w1 = self.word(k1)
            for k2, v2 in other.terms.items():
                for k, v in normal_order(w1 + other.word(k2), self.N).terms.items():
                    _add(out, k, v * v1 * v2)
        return NormalForm(self.N, out)

    def __pow__(self, k: int) -> "NormalForm":
        out = NormalForm.scalar(self.N)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.N == other.N and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for sig in sorted(self.terms):
            w = " ".join(map(str, self.word(sig))) or "1"
            parts.append(f"({self.terms[sig]})*{w}")
        return " + ".join(parts)


def normal_order(word: Sequence[Letter], N: int = None, coeff=1) -> NormalForm:
    """Rewrite a word into ordered monomials.

    Adjacent out-of-order pairs xy are replaced by yx + [x, y]; every swap
    lowers the inversion count and bracket terms are shorter, so the
    rewriting terminates.
    """
    word = tuple(word)
    if N is None:
        N = 1 + max((x.index for x in word if x.kind != "C"), default=0)
    done: Dict[Word, object] = defaultdict(int)
    stack = [(word, coeff)]
    while stack:
        w, c = stack.pop()
        for i in range(len(w) - 1):
            if _key(w[i]) > _key(w[i + 1]):
                x, y = w[i], w[i + 1]
                stack.append((w[:i] + (y, x) + w[i + 2:], c))
                br = _bracket(x, y)
                if br is not None:
                    stack.append((w[:i] + (br[0],) + w[i + 2:], c * br[1]))
                break
        else:
            done[w] += c
    terms: Dict = {}
    for w, c in done.items():
        a, b, e = [0] * N, [0] * N, [0] * N
        p = 0
        for x in w:
            if x.kind == "C":
                p += 1
            else:
                if x.index >= N:
                    raise ValueError(f"generator index {x.index + 1} exceeds N={N}")
                {"F": a, "H": b, "E": e}[x.kind][x.index] += 1
        _add(terms, (tuple(a), tuple(b), tuple(e), p), c)
    return NormalForm(N, terms)


# ---------------------------------------------------------------------------
# differential operators  sum c_{a,b} t^a d^b  (t-powers to the left)


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass
class DiffOperator:
    N: int
    terms: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], object] = field(default_factory=dict)

    @classmethod
    def identity(cls, N: int, value=1) -> "DiffOperator":
        z = (0,) * N
        return cls(N, {(z, z): value} if value != 0 else {})

    @classmethod
    def monomial(cls, a: Sequence[int], b: Sequence[int], value=1) -> "DiffOperator":
        return cls(len(a), {(tuple(a), tuple(b)): value})

    def __add__(self, other):
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _add(terms, k, v)
        return DiffOperator(self.N, terms)

    def __neg__(self):
        return DiffOperator(self.N, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "DiffOperator") -> "DiffOperator":
        out: Dict = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                # d^b1 t^a2 = prod_i sum_k C(b1_i,k) (a2_i)_k t^{a2_i-k} d^{b1_i-k}
                per_index = []
                for i in range(self.N):
                    opts = []
                    for k in range(min(b1[i], a2[i]) + 1):
                        opts.append((k, comb(b1[i], k) * _falling(a2[i], k)))
                    per_index.append(opts)
                for choice in product(*per_index):
                    w = 1
                    for _, f in choice:
                        w *= f
                    a = tuple(a1[i] + a2[i] - choice[i][0] for i in range(self.N))
                    b = tuple(b1[i] - choice[i][0] + b2[i] for i in range(self.N))
                    _add(out, (a, b), v1 * v2 * w)
        return DiffOperator(self.N, out)

    def is_zero(self, tol: float = 1e-12) -> bool:
        return all(is_zero(v, tol) for v in self.terms.values())


def _unit(N: int, i: int) -> Tuple[int, ...]:
    return tuple(int(j == i) for j in range(N))


def rep_map(nf: NormalForm, params: SpectralParams) -> DiffOperator:
    """Image of a normal form under the differential representation."""
    N = nf.N
    if params.N != N:
        raise ValueError(f"lambda has length {params.N}, expected {N}")
    c = params.c
    zero = (0,) * N
    h_images = [DiffOperator.monomial(_unit(N, i), _unit(N, i))
                + DiffOperator.identity(N, imag_unit_times(params.lam[i])) for i in range(N)]
    out = DiffOperator(N)
    for (a, b, e, p), coeff in nf.terms.items():
        op = DiffOperator.monomial(a, zero, coeff * c ** (sum(e) + p))
        for i, k in enumerate(b):
            for _ in range(k):
                op = op * h_images[i]
        op = op * DiffOperator.monomial(zero, e)
        out = out + op
    return out


def apply_diffop(op: DiffOperator, a: Sequence[int]) -> Dict[Tuple[int, ...], object]:
    """op(t^a) as an exponent -> coefficient map."""
    out: Dict = {}
    for (ta, b), v in op.terms.items():
        if any(bi > ai for bi, ai in zip(b, a)):
            continue
        w = 1
        for bi, ai in zip(b, a):
            w *= _falling(ai, bi)
        _add(out, tuple(t + ai - bi for t, ai, bi in zip(ta, a, b)), v * w)
    return out


# ---------------------------------------------------------------------------
# annihilators and the hypergeometric operators


def _charge(data) -> ChargeMatrix:
    return data.charge if isinstance(data, ToricData) else data


def annihilator(data, params: SpectralParams, alpha: int, corrupt: bool = False) -> NormalForm:
    """prod_j (F_j E_j)^{m_j} - prod_j C^{m_j} (H_j - i lambda_j)^{m_j} for row alpha.

    ``corrupt`` flips the relative sign; it exists only as a negative control.
    """
    m = _charge(data)
    N = m.N
    row = m.entries[alpha]
    left: List[Letter] = []
    for j, k in enumerate(row):
        left.extend([Letter("F", j), Letter("E", j)] * k)
    first = normal_order(left, N)
    second = NormalForm.scalar(N)
    for j, k in enumerate(row):
        if k == 0:
            continue
        shifted = NormalForm.generator("H", j, N) - NormalForm.scalar(N, imag_unit_times(params.lam[j]))
        second = second * normal_order((C,) * k, N) * shifted ** k
    return first + second if corrupt else first - second


def verify_annihilator(data, params: SpectralParams, alpha: int, corrupt: bool = False,
                       max_exponent: int = 3) -> bool:
    """The annihilator must map to the zero operator.

    Checked twice: every coefficient of the image vanishes, and the image
    kills each monomial t^a with entries <= ``max_exponent``.
    """
    op = rep_map(annihilator(data, params, alpha, corrupt), params)
    if not op.is_zero():
        return False
    N = _charge(data).N
    for a in product(range(max_exponent + 1), repeat=N):
        if any(not is_zero(v) for v in apply_diffop(op, a).values()):
            return False
    return True


Poly = Dict[Tuple[int, ...], object]


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            _add(out, tuple(x + y for x, y in zip(k1, k2)), v1 * v2)
    return out


@dataclass
class XSpaceOperator:
    """sum_beta coeff_beta d_x^beta  -  exp(x^alpha), alpha 0-based."""

    n: int
    alpha: int
    poly_part: Poly

    @property
    def order(self) -> int:
        return max((sum(b) for b in self.poly_part), default=0)

    def symbol(self, d: Sequence) -> object:
        """Polynomial part evaluated at d_x -> d (its action on exp(d.x))."""
        total = 0
        for beta, v in self.poly_part.items():
            w = 1
            for db, b in zip(d, beta):
                w *= db ** b
            total = total + v * w
        return total

    def to_json(self) -> dict:
        terms = []
        for beta in sorted(self.poly_part):
            v = self.poly_part[beta]
            terms.append({"derivative": list(beta), **_encode_number(v)})
        return {"n": self.n, "alpha": self.alpha + 1, "shift": f"exp(x{self.alpha + 1})", "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "XSpaceOperator":
        poly = {tuple(t["derivative"]): _decode_number(t) for t in obj["terms"]}
        return cls(int(obj["n"]), int(obj["alpha"]) - 1, poly)


def _encode_number(v) -> dict:
    if isinstance(v, GaussRat):
        return {"re": str(v.re), "im": str(v.im)}
    if isinstance(v, (int, Fraction)):
        return {"re": str(Fraction(v)), "im": "0"}
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _decode_number(t: dict):
    re_, im_ = t["re"], t["im"]
    if isinstance(re_, str) and isinstance(im_, str):
        return GaussRat(Fraction(re_), Fraction(im_))
    return complex(float(re_), float(im_))


def _linear_factor(const, slopes: Sequence[int]) -> Poly:
    n = len(slopes)
    out: Poly = {}
    _add(out, (0,) * n, const)
    for b, s in enumerate(slopes):
        if s:
            _add(out, _unit(n, b), -s)
    return out


def gkz_operator(data, params: SpectralParams, alpha: int) -> XSpaceOperator:
    """prod_j prod_{k<m_j^alpha} (i lambda_j + k - sum_b m_j^b d_{x^b}) - exp(x^alpha)."""
    m = _charge(data)
    poly: Poly = {(0,) * m.n: GaussRat(1)}
    for j in range(m.N):
        col = m.column(j)
        for k in range(m.entries[alpha][j]):
            poly = poly_mul(poly, _linear_factor(imag_unit_times(params.lam[j]) + k, col))
    return XSpaceOperator(m.n, alpha, poly)


def y_space_poly(data, params: SpectralParams, alpha: int) -> Poly:
    """Polynomial part of the y-space operator, in d_{y^j} multi-indices."""
    m = _charge(data)
    poly: Poly = {(0,) * m.N: GaussRat(1)}
    for j in range(m.N):
        for k in range(m.entries[alpha][j]):
            poly = poly_mul(poly, _linear_factor(imag_unit_times(params.lam[j]) + k, _unit(m.N, j)))
    return poly


def push_to_x(poly_y: Poly, m: ChargeMatrix) -> Poly:
    """Substitute d_{y^j} -> sum_b m_j^b d_{x^b} (chain rule through x = m.y)."""
    images = [{_unit(m.n, b): m.entries[b][j] for b in range(m.n) if m.entries[b][j]}
              for j in range(m.N)]
    out: Poly = {}
    for beta, v in poly_y.items():
        term: Poly = {(0,) * m.n: v}
        for j, k in enumerate(beta):
            for _ in range(k):
                term = poly_mul(term, images[j])
        for key, val in term.items():
            _add(out, key, val)
    return out
