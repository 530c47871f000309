"""The model of positive integers with addition and divisibility in F_q(t).

A positive integer s is coded as t^(B^s), where the base B = p^r follows
the exponent rule (r=1 for odd p, r=2 for p=2).  Addition of exponents
is witnessed by the three-condition system built from x = (t+1)^(B^a),
divisibility by the single equation x^(B^s1 - 1) = t^(B^s2 - 1), and
the cross-Frobenius graphs are decided semantically by degree-bounded
power tests.

Multiplication is reduced to addition and divisibility by the classical
square trick: with L(x) = lcm(x, x+1) = x^2 + x, the equation
k = m*n is equivalent to L(m+n) = L(m) + L(n) + k + k, and lcm is
first-order in divisibility alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .artin_schreier import paper_r
from .fields import FieldCtx
from .formulas import (
    Add,
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Term,
    Var,
)
from .ratfun import RatFun


@dataclass(frozen=True)
class ModelParams:
    """Field context plus the exponent base B = p^r of the coding."""

    ctx: FieldCtx
    r: int
    base: int

    @classmethod
    def for_ctx(cls, ctx: FieldCtx) -> "ModelParams":
        r = paper_r(ctx.p)
        return cls(ctx=ctx, r=r, base=ctx.p ** r)

    @property
    def t(self) -> RatFun:
        return RatFun.gen(self.ctx)


@dataclass(frozen=True)
class CodedInt:
    s: int
    value: RatFun


def encode(params: ModelParams, s: int) -> CodedInt:
    if s < 1:
        raise ValueError("the coded domain is s >= 1")
    return CodedInt(s=s, value=params.t.frobenius_power(params.r * s))


def decode(params: ModelParams, x: RatFun) -> Optional[int]:
    """s >= 1 with x = t^(B^s), or None off the coded domain."""
    if not x.den.is_one() or len(x.num.terms) != 1:
        return None
    exp, code = x.num.terms[0]
    if code != 1:
        return None
    s = 0
    while exp > 1 and exp % params.base == 0:
        exp //= params.base
        s += 1
    return s if exp == 1 and s >= 1 else None


def add_witness(params: ModelParams, a: int, b: int) -> tuple[RatFun, RatFun]:
    """Witnesses (x, z) for the addition system at exponents (a, b):
    x = (t+1)^(B^a), z = ((t+1) t^(B^b))^(B^a).  All three displayed
    conditions are verified before returning."""
    if a < 1 or b < 1:
        raise ValueError("exponents must be >= 1")
    t = params.t
    one = RatFun.one(params.ctx)
    ra = params.r * a
    x = (t + one).frobenius_power(ra)
    z = ((t + one) * t.frobenius_power(params.r * b)).frobenius_power(ra)
    assert x - one == t.frobenius_power(ra)
    assert z / x == t.frobenius_power(params.r * (a + b))
    return x, z


def check_add_triple(params: ModelParams, xa: RatFun, xb: RatFun, xc: RatFun) -> bool:
    """Membership in the exponent-addition graph {(t^(B^a), t^(B^b), t^(B^(a+b)))}."""
    a = decode(params, xa)
    b = decode(params, xb)
    c = decode(params, xc)
    return a is not None and b is not None and c is not None and a + b == c


def divides_witness(params: ModelParams, s1: int, s2: int) -> Optional[RatFun]:
    """x = t^l with x^(B^s1 - 1) = t^(B^s2 - 1) when s1 | s2, else None."""
    if s1 < 1 or s2 < 1:
        raise ValueError("arguments must be >= 1")
    if s2 % s1:
        return None
    e1 = params.base ** s1 - 1
    e2 = params.base ** s2 - 1
    assert e2 % e1 == 0
    ell = e2 // e1
    x = params.t ** ell
    assert x ** e1 == params.t ** e2
    return x


def check_B_triple(params: ModelParams, tp: RatFun, y: RatFun, x: RatFun) -> bool:
    """Membership in {(t^(B^s), x^(B^s), x): s >= 1, x in K}."""
    s = decode(params, tp)
    if s is None:
        return False
    return y == x.frobenius_power(params.r * s)


def check_X_pair(params: ModelParams, x: RatFun, y: RatFun) -> Optional[int]:
    """Smallest s >= 1 with y = x^(B^s), or None.

    For nonconstant x the candidate s is pinned by degrees; for constant
    x the Frobenius orbit is periodic, so a sweep of one period decides.
    """
    if x.is_zero():
        return 1 if y.is_zero() else None
    if x.is_constant():
        if not y.is_constant():
            return None
        period = max(1, params.ctx.n // math.gcd(params.r, params.ctx.n))
        for s in range(1, period + 1):
            if x.frobenius_power(params.r * s) == y:
                return s
        return None
    dx = max(x.num.degree, x.den.degree)
    dy = max(y.num.degree, y.den.degree)
    if dy < dx * params.base:
        return None
    s = 0
    ratio = dy // dx
    scale = 1
    while scale < ratio:
        scale *= params.base
        s += 1
    if scale * dx != dy or s < 1:
        return None
    return s if x.frobenius_power(params.r * s) == y else None


# -- Robinson's definition of multiplication from + and | ----------------


def _sq(a: int) -> int:
    return math.lcm(a, a + 1) - a


def robinson_mul(k: int, m: int, n: int) -> bool:
    """k = m*n decided through the lcm/square reduction (exact integers)."""
    if min(k, m, n) < 1:
        raise ValueError("arguments must be positive")
    return _sq(m + n) == _sq(m) + _sq(n) + 2 * k


def _lcm_succ(x: Term, u: str, l: Term, tag: str) -> Formula:
    """l = lcm(x, x+u) characterized in divisibility: a common multiple
    dividing every common multiple.  u is pinned to 1 by the caller."""
    y = Var(f"y{tag}")
    z = f"z{tag}"
    return Exists(
        y.name,
        And(
            Eq(y, Add(x, Var(u))),
            And(
                And(Divides(x, l), Divides(y, l)),
                Forall(
                    z,
                    Implies(And(Divides(x, Var(z)), Divides(y, Var(z))), Divides(l, Var(z))),
                ),
            ),
        ),
    )


def robinson_formula() -> Formula:
    """The multiplication formula F(k, m, n) over (Z+, +, |), free in
    k, m, n: with L(x) = lcm(x, x+1),
    k = m*n  iff  L(m+n) = L(m) + L(n) + k + k.
    The constant 1 enters as the unique universal divisor."""
    k, m, n = Var("k"), Var("m"), Var("n")
    u = "u"
    one_u = Forall("zu", Divides(Var(u), Var("zu")))
    body = Exists(
        "a",
        And(
            _lcm_succ(m, u, Var("a"), "a"),
            Exists(
                "b",
                And(
                    _lcm_succ(n, u, Var("b"), "b"),
                    Exists(
                        "w",
                        And(
                            Eq(Var("w"), Add(m, n)),
                            Exists(
                                "c",
                                And(
                                    Eq(Var("c"), Add(Add(Var("a"), Var("b")), Add(k, k))),
                                    _lcm_succ(Var("w"), u, Var("c"), "c"),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )
    return Exists(u, And(one_u, body))
