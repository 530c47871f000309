"""The rational function field F_q(t): elements, places, valuations,
and partial fractions.

A RatFun is a reduced fraction num/den with den monic, so equality of
values is equality of the stored pair.  A Place is a prime of F_q(t):
a monic irreducible polynomial, or the place at infinity (where the
valuation of f is deg den - deg num).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .fields import FieldCtx, FqElem
from .poly import Poly, factor, is_irreducible


class RatFun:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if num.is_zero():
                den = Poly.one(num.ctx)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                if not den.is_monic():
                    lead_inv = den.leading_coeff().inverse()
                    num, den = num.scale(lead_inv), den.scale(lead_inv)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------

    @classmethod
    def from_poly(cls, f: Poly) -> "RatFun":
        return cls(f, Poly.one(f.ctx), reduce=False)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "RatFun":
        return cls.from_poly(Poly.zero(ctx))

    @classmethod
    def one(cls, ctx: FieldCtx) -> "RatFun":
        return cls.from_poly(Poly.one(ctx))

    @classmethod
    def gen(cls, ctx: FieldCtx) -> "RatFun":
        """The distinguished generator t."""
        return cls.from_poly(Poly.x(ctx))

    @classmethod
    def constant(cls, c: FqElem) -> "RatFun":
        return cls.from_poly(Poly.constant(c))

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree <= 0

    def constant_value(self) -> FqElem:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "RatFun") -> "RatFun":
        g = self.den.gcd(other.den)
        if g.degree == 0:
            num = self.num * other.den + other.num * self.den
            return RatFun(num, self.den * other.den)
        da = self.den.exact_div(g)
        db = other.den.exact_div(g)
        num = self.num * db + other.num * da
        return RatFun(num, da * other.den)

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other: "RatFun") -> "RatFun":
        return self + (-other)

    def __mul__(self, other: "RatFun") -> "RatFun":
        # cross-reduce first to keep intermediate degrees small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1 = self.num.exact_div(g1) if g1.degree > 0 else self.num
        d2 = other.den.exact_div(g1) if g1.degree > 0 else other.den
        n2 = other.num.exact_div(g2) if g2.degree > 0 else other.num
        d1 = self.den.exact_div(g2) if g2.degree > 0 else self.den
        num = n1 * n2
        den = d1 * d2
        if num.is_zero():
            return RatFun.zero(self.ctx)
        if not den.is_monic():
            lead_inv = den.leading_coeff().inverse()
            num, den = num.scale(lead_inv), den.scale(lead_inv)
        return RatFun(num, den, reduce=False)

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFun(self.den, self.num)

    def __truediv__(self, other: "RatFun") -> "RatFun":
        return self * other.inverse()

    def __pow__(self, e: int) -> "RatFun":
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return RatFun.one(self.ctx)
        # coprimality and monicity are preserved by powering
        return RatFun(self.num ** e, self.den ** e, reduce=False)

    def frobenius_power(self, e: int) -> "RatFun":
        """self^(p^e) via term-wise Frobenius on num and den.

        Coprimality and monicity survive (Frobenius is a ring map fixing
        monic leading 1), so no re-reduction is needed.
        """
        if e < 0:
            raise ValueError("e must be >= 0")
        return RatFun(
            self.num.frobenius_power(e), self.den.frobenius_power(e), reduce=False
        )

    # -- comparisons / printing ------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, RatFun)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFun({self})"

    # -- serialization -----------------------------------------------------

    def to_coeff_lists(self) -> dict:
        """Canonical text form: dense coefficient lists, base-p digits per
        coefficient."""
        def dense(f: Poly):
            return [list(FqElem(f.ctx, c).digits) for c in f.coeff_codes()]

        return {"num": dense(self.num), "den": dense(self.den)}

    @classmethod
    def from_coeff_lists(cls, ctx: FieldCtx, data: dict) -> "RatFun":
        num = Poly.from_coeffs(ctx, [ctx.from_digits(d) for d in data["num"]])
        den = Poly.from_coeffs(ctx, [ctx.from_digits(d) for d in data["den"]])
        return cls(num, den)


@dataclass(frozen=True)
class Place:
    """A prime of F_q(t): Finite(monic irreducible) or Infinity."""

    poly: Optional[Poly]  # None encodes the place at infinity

    @classmethod
    def finite(cls, f: Poly, check: bool = True) -> "Place":
        if check and not (f.is_monic() and is_irreducible(f)):
            raise ValueError(f"{f} is not monic irreducible")
        return cls(f)

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def __str__(self):
        return "oo" if self.poly is None else f"({self.poly})"


def multiplicity(f: Poly, pi: Poly) -> int:
    """Largest k with pi^k dividing f (f nonzero, pi monic irreducible).

    Goes through factor(), whose squarefree step peels p-th-power
    structure by p-th roots; repeated exact division would densify
    sparse inputs like t^(p^k) - 1."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree < pi.degree:
        return 0
    _, factors = factor(f)
    for g, m in factors:
        if g == pi:
            return m
    return 0


def ord_at(f: RatFun, place: Place) -> int:
    """Valuation of nonzero f at the place."""
    if f.is_zero():
        raise ValueError("ord of the zero function is undefined")
    if place.is_infinite:
        return f.den.degree - f.num.degree
    pi = place.poly
    v = multiplicity(f.num, pi)
    if v > 0:
        return v  # num and den coprime: pi cannot also divide den
    return -multiplicity(f.den, pi)


def places_of(f: RatFun) -> list[tuple[Place, int]]:
    """All places where nonzero f has nonzero valuation, finite ones first
    in canonical order, then infinity if relevant."""
    if f.is_zero():
        raise ValueError("zero function")
    out = []
    _, num_factors = factor(f.num) if f.num.degree > 0 else (None, [])
    _, den_factors = factor(f.den) if f.den.degree > 0 else (None, [])
    dens = {pi: m for pi, m in den_factors}
    for pi, m in num_factors:
        out.append((Place.finite(pi, check=False), m - dens.pop(pi, 0)))
    for pi, m in dens.items():
        out.append((Place.finite(pi, check=False), -m))
    out.sort(key=lambda pm: pm[0].poly.sort_key())
    inf = f.den.degree - f.num.degree
    if inf:
        out.append((Place.infinity(), inf))
    return [(pl, v) for pl, v in out if v]


def degree_formula_sum(f: RatFun) -> int:
    """sum deg(P) * ord_P(f) over all places including infinity (always 0)."""
    return sum(pl.degree * v for pl, v in places_of(f))


def partial_fractions(f: RatFun):
    """Decompose f = polynomial part + sum of local parts.

    Returns (poly_part, parts) where parts is a list of
    (Place, [c_1, ..., c_e]) with deg c_k < deg P and the local part at P
    equal to sum_k c_k / P^k (c_e may be preceded by zero entries but the
    list ends at the pole order; trailing zeros are trimmed).
    """
    ctx = f.ctx
    poly_part, rem = divmod(f.num, f.den)
    parts = []
    if not rem.is_zero() and f.den.degree > 0:
        _, den_factors = factor(f.den)
        for pi, e in den_factors:
            pe = pi ** e
            cofactor = f.den.exact_div(pe)
            # r_i = rem * cofactor^{-1} mod pi^e
            _, inv, _ = cofactor.xgcd(pe)
            local = (rem * inv) % pe
            digits = []
            while not local.is_zero():
                local, d = divmod(local, pi)
                digits.append(d)
            digits += [Poly.zero(ctx)] * (e - len(digits))
            coeffs = list(reversed(digits))  # coeffs[k-1] multiplies pi^-k
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
            if coeffs:
                parts.append((Place.finite(pi, check=False), coeffs))
    return poly_part, parts


def recompose_partial_fractions(ctx: FieldCtx, poly_part: Poly, parts) -> RatFun:
    total = RatFun.from_poly(poly_part)
    for place, coeffs in parts:
        pk = RatFun.one(ctx)
        base = RatFun.from_poly(place.poly)
        for c in coeffs:
            pk = pk * base
            total = total + RatFun(c, Poly.one(ctx), reduce=False) / pk
    return total
