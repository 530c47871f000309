"""Polynomials in T with coefficients in F_q(t), and their resultants.

Dense representation: coefficient list ascending in T.  Degrees here are
tiny (defining polynomials of desk-scale extensions), so the Sylvester
determinant is computed by exact Gaussian elimination over F_q(t).
"""

from __future__ import annotations

from typing import Sequence

from .errors import InseparableInput
from .fields import FieldCtx
from .ratfun import RatFun


class TPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[RatFun]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def from_ratfuns(cls, ctx: FieldCtx, coeffs: Sequence[RatFun]) -> "TPoly":
        return cls(ctx, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == RatFun.one(self.ctx)

    def coeff(self, i: int) -> RatFun:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFun.zero(self.ctx)

    def derivative(self) -> "TPoly":
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            k = i % self.ctx.p
            scaled = RatFun.zero(self.ctx)
            for _ in range(k):
                scaled = scaled + c
            out.append(scaled)
        return TPoly(self.ctx, out)

    def evaluate(self, x: RatFun) -> RatFun:
        acc = RatFun.zero(self.ctx)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"TPoly({[str(c) for c in self.coeffs]})"


def _det(matrix: list[list[RatFun]], ctx: FieldCtx) -> RatFun:
    """Exact determinant by Gaussian elimination over F_q(t)."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = RatFun.one(ctx)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if not m[row][col].is_zero():
                pivot = row
                break
        if pivot is None:
            return RatFun.zero(ctx)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for row in range(col + 1, n):
            if m[row][col].is_zero():
                continue
            scale = m[row][col] * inv
            for k in range(col, n):
                m[row][k] = m[row][k] - scale * m[col][k]
    return det


def resultant(f: TPoly, g: TPoly) -> RatFun:
    """Sylvester resultant Res_T(f, g) for nonzero f, g."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant requires nonzero polynomials")
    ctx = f.ctx
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return RatFun.one(ctx)
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    zero = RatFun.zero(ctx)
    rows = []
    frow = [f.coeff(m - i) for i in range(m + 1)]  # descending
    grow = [g.coeff(n - i) for i in range(n + 1)]
    for i in range(n):
        rows.append([zero] * i + frow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + grow + [zero] * (size - n - 1 - i))
    return _det(rows, ctx)


def discriminant(h: TPoly) -> RatFun:
    """Res_T(h, h') for monic h; the convention used throughout (only the
    degree of the result matters downstream)."""
    if not h.is_monic():
        raise ValueError("discriminant convention requires monic input")
    hp = h.derivative()
    if hp.is_zero():
        raise InseparableInput("h' = 0: inseparable defining polynomial")
    return resultant(h, hp)
