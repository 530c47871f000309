"""Artin-Schreier equations u^(p^r) - u = a over F_q(t).

The solver works place by place: a pole of a solution u of order m at a
place P becomes a pole of order m*p^r of u^(p^r) - u, so every pole
order of a must be divisible by p^r.  Leading local terms are stripped
by subtracting images of c^(1/p^r) * P^(-m/p^r) (p^r-th roots exist and
are unique in the perfect residue fields), the place at infinity is
handled the same way with 1/t as the local parameter, and the residual
constant is decided by enumerating F_q.  A returned solution is always
re-verified; None is definitive at desk scale.

On top of the solver sit the defining systems for p-power powers of t:
the two-equation system in (1/t - 1/w, t - w), its constant-translated
variant over pairs of Frobenius orbits, and the single-equation
pole-shifting witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InternalContradiction
from .fields import FieldCtx, FqElem
from .poly import Poly, factor
from .ratfun import RatFun


def paper_r(p: int) -> int:
    """The exponent rule used by the defining systems: r=1 for odd p, r=2 for p=2."""
    return 2 if p == 2 else 1


def as_image(u: RatFun, r: int) -> RatFun:
    """u^(p^r) - u."""
    return u.frobenius_power(r) - u


def as_kernel(ctx: FieldCtx, r: int) -> list[FqElem]:
    """Constants c in F_q with c^(p^r) = c."""
    return [c for c in ctx.elements() if c.frob(r) == c]


def _solve_constant(ctx: FieldCtx, r: int, c0: FqElem) -> Optional[FqElem]:
    for u0 in ctx.elements():
        if u0.frob(r) - u0 == c0:
            return u0
    return None


def _residue_root(c: Poly, pi: Poly, r: int) -> Poly:
    """The p^r-th root of c mod pi in the residue field F_q[t]/(pi)."""
    steps = pi.ctx.n * pi.degree
    k = (steps - r % steps) % steps
    root = c % pi
    for _ in range(k):
        root = root.pow_mod(pi.ctx.p, pi)
    return root


def _local_split(a: RatFun):
    """a = poly part + sum of pi-local proper fractions, without expanding
    pi-adic digits (pole orders here can be huge powers of p)."""
    from .poly import factor

    poly_part, rem = divmod(a.num, a.den)
    parts = []
    if not rem.is_zero() and a.den.degree > 0:
        _, den_factors = factor(a.den)
        for pi, e in den_factors:
            pe = pi ** e
            cofactor = a.den.exact_div(pe)
            _, inv, _ = cofactor.xgcd(pe)
            local_num = (rem * inv) % pe
            if not local_num.is_zero():
                parts.append((pi, RatFun(local_num, pe)))
    return poly_part, parts


def solve_as(a: RatFun, r: int) -> Optional[RatFun]:
    """Some u with u^(p^r) - u = a, or None when no solution exists in F_q(t)."""
    ctx = a.ctx
    q_as = ctx.p ** r
    u = RatFun.zero(ctx)

    # finite poles, one place at a time; stripping the leading local term
    # keeps the remainder a proper pi-power fraction
    poly_part, parts = _local_split(a)
    for pi, local in parts:
        base = RatFun.from_poly(pi)
        while not local.is_zero():
            m = local.den.degree // pi.degree  # den is a power of pi
            if m % q_as:
                return None
            lead = (local * base ** m).num % pi  # local leading coefficient
            root = _residue_root(lead, pi, r)
            term = RatFun.from_poly(root) / base ** (m // q_as)
            u = u + term
            local = local - as_image(term, r)

    # pole at infinity: local parameter 1/t, leading term = leading monomial
    g = poly_part
    while g.degree >= 1:
        m = g.degree
        if m % q_as:
            return None
        root = g.leading_coeff().pth_root(r)
        term = RatFun.from_poly(Poly.monomial(ctx, m // q_as, root))
        u = u + term
        g = g - (term.frobenius_power(r) - term).num
    c0 = g.coeff(0)
    u0 = _solve_constant(ctx, r, c0)
    if u0 is None:
        return None
    u = u + RatFun.constant(u0)
    if as_image(u, r) != a:
        raise InternalContradiction("solver produced a non-solution")
    return u


@dataclass(frozen=True)
class Version1Witness:
    """Solution data for the two-equation system at w = t^(p^(r*s))."""

    w: RatFun
    s: int
    u: RatFun
    v: RatFun


def version1_witness(ctx: FieldCtx, s: int, r: int) -> Version1Witness:
    """Telescoping witnesses: u = -sum (1/t)^(p^(r*i)), v = -sum t^(p^(r*i)),
    i < s.  Both identities are machine-verified before returning."""
    if s < 0:
        raise ValueError("s must be >= 0")
    t = RatFun.gen(ctx)
    w = t.frobenius_power(r * s)
    u = RatFun.zero(ctx)
    v = RatFun.zero(ctx)
    inv_t = t.inverse()
    for i in range(s):
        u = u - inv_t.frobenius_power(r * i)
        v = v - t.frobenius_power(r * i)
    if as_image(u, r) != inv_t - w.inverse():
        raise InternalContradiction("u-identity failed")
    if as_image(v, r) != t - w:
        raise InternalContradiction("v-identity failed")
    return Version1Witness(w=w, s=s, u=u, v=v)


def _power_exponent(w: RatFun, base: int) -> Optional[int]:
    """s >= 0 with w = t^(base^s), or None."""
    if not w.den.is_one():
        return None
    if len(w.num.terms) != 1:
        return None
    exp, code = w.num.terms[0]
    if code != 1:
        return None
    s = 0
    while exp > 1:
        if exp % base:
            return None
        exp //= base
        s += 1
    return s if exp == 1 else None


def classify_version1(w: RatFun, r: int) -> Optional[int]:
    """Decide the two-equation system for w; Some(s) iff both equations
    are solvable, in which case w = t^(p^(r*s)) is re-verified."""
    ctx = w.ctx
    t = RatFun.gen(ctx)
    if w.is_zero():
        return None
    if solve_as(t.inverse() - w.inverse(), r) is None:
        return None
    if solve_as(t - w, r) is None:
        return None
    s = _power_exponent(w, ctx.p ** r)
    if s is None:
        raise InternalContradiction(
            f"both equations solvable but w = {w} is not t^(p^(r*s))"
        )
    if w != t.frobenius_power(r * s):
        raise InternalContradiction("power re-verification failed")
    return s


def below_system_check(
    w: RatFun, orbits: Sequence[Sequence[FqElem]], r: int
) -> Optional[int]:
    """The constant-translated system over all pairs of distinct orbits.

    `orbits[i]` lists the Frobenius orbit V_i of its first element c_i,
    with c_0 = 0.  For each pair i != j the search looks for a in V_i,
    b in V_j making both translated equations solvable; if every pair
    succeeds, w must be t^(p^(r*s)) and s is returned (re-verified).
    """
    ctx = w.ctx
    t = RatFun.gen(ctx)
    for i in range(len(orbits)):
        for j in range(len(orbits)):
            if i == j:
                continue
            ci = RatFun.constant(orbits[i][0])
            cj = RatFun.constant(orbits[j][0])
            lhs = (t - ci) / (t - cj)
            found = False
            for a_el in orbits[i]:
                for b_el in orbits[j]:
                    a = RatFun.constant(a_el)
                    b = RatFun.constant(b_el)
                    if w == b or w == a:
                        continue
                    rhs = (w - a) / (w - b)
                    if solve_as(lhs - rhs, r) is None:
                        continue
                    if solve_as(lhs.inverse() - rhs.inverse(), r) is None:
                        continue
                    found = True
                    break
                if found:
                    break
            if not found:
                return None
    s = _power_exponent(w, ctx.p ** r)
    if s is None:
        raise InternalContradiction(
            f"all orbit pairs solvable but w = {w} is not t^(p^(r*s))"
        )
    if w != t.frobenius_power(r * s):
        raise InternalContradiction("power re-verification failed")
    return s


def getdown_witness(ctx: FieldCtx, s: int, a: FqElem) -> tuple[FqElem, RatFun]:
    """For w = t^(p^s): b = a^(p^s) and u with
    1/(t-a) - 1/(w-b) = u^p - u, via (t-a)^(p^s) = t^(p^s) - a^(p^s)."""
    if s < 1:
        raise ValueError("s must be >= 1")
    t = RatFun.gen(ctx)
    b = a.frob(s)
    base = (t - RatFun.constant(a)).inverse()
    u = RatFun.zero(ctx)
    for i in range(s):
        u = u - base.frobenius_power(i)
    w = t.frobenius_power(s)
    lhs = base - (w - RatFun.constant(b)).inverse()
    if as_image(u, 1) != lhs:
        raise InternalContradiction("getdown identity failed")
    return b, u
