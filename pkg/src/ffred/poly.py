"""Sparse univariate polynomials over F_q.

A Poly stores its nonzero terms as a tuple of (exponent, code) pairs in
ascending exponent order, where `code` is the FieldCtx integer code of
the coefficient.  The sparse representation is what keeps the rest of
the package fast: the model of arithmetic works with monomials like
t^(3^12), which are a single term here.

Factorization is squarefree decomposition + distinct-degree splitting +
Cantor-Zassenhaus equal-degree splitting (with the trace-map variant in
characteristic 2), derandomized by a fixed per-input seed so results
are deterministic.  Factors are returned sorted by (degree, coefficient
codes ascending by exponent).
"""

from __future__ import annotations

import random
from typing import Iterator, Optional, Sequence

from .fields import FieldCtx, FqElem


class Poly:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms):
        """`terms` is any iterable of (exp, code); zeros are dropped."""
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        cleaned = sorted((e, c) for e, c in items if c)
        self.ctx = ctx
        self.terms = tuple(cleaned)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ((0, 1),))

    @classmethod
    def x(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ((1, 1),))

    @classmethod
    def constant(cls, c: FqElem) -> "Poly":
        return cls(c.ctx, ((0, c.code),))

    @classmethod
    def monomial(cls, ctx: FieldCtx, exp: int, coeff: int | FqElem = 1) -> "Poly":
        code = coeff.code if isinstance(coeff, FqElem) else coeff % ctx.q
        return cls(ctx, ((exp, code),))

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Sequence) -> "Poly":
        """Dense constructor; coeffs[i] (int code, digit list, or FqElem) is the t^i coefficient."""
        return cls(ctx, ((i, ctx.elem(c).code) for i, c in enumerate(coeffs)))

    # -- basic structure ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    @property
    def degree(self) -> int:
        """Degree, with the usual convention deg 0 = -1."""
        return self.terms[-1][0] if self.terms else -1

    def leading_code(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[-1][1]

    def leading_coeff(self) -> FqElem:
        return FqElem(self.ctx, self.leading_code())

    def coeff(self, exp: int) -> FqElem:
        for e, c in self.terms:
            if e == exp:
                return FqElem(self.ctx, c)
        return self.ctx.zero

    def coeff_codes(self) -> list[int]:
        """Dense ascending code list of length degree+1 (empty for 0)."""
        if not self.terms:
            return []
        out = [0] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def is_monic(self) -> bool:
        return bool(self.terms) and self.terms[-1][1] == 1

    def sort_key(self):
        return (self.degree, self.coeff_codes())

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        d = dict(self.terms)
        add = self.ctx._add
        for e, c in other.terms:
            s = add[d.get(e, 0)][c]
            if s:
                d[e] = s
            elif e in d:
                del d[e]
        return Poly(self.ctx, d)

    def __neg__(self) -> "Poly":
        neg = self.ctx._neg
        return Poly(self.ctx, ((e, neg[c]) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly.zero(self.ctx)
        mul, add = self.ctx._mul, self.ctx._add
        d: dict[int, int] = {}
        for e1, c1 in self.terms:
            row = mul[c1]
            for e2, c2 in other.terms:
                e = e1 + e2
                d[e] = add[d.get(e, 0)][row[c2]]
        return Poly(self.ctx, d)

    def scale(self, c: FqElem | int) -> "Poly":
        code = c.code if isinstance(c, FqElem) else c % self.ctx.q
        if code == 0:
            return Poly.zero(self.ctx)
        row = self.ctx._mul[code]
        return Poly(self.ctx, ((e, row[cc]) for e, cc in self.terms))

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k (k >= 0)."""
        return Poly(self.ctx, ((e + k, c) for e, c in self.terms))

    def __pow__(self, e: int) -> "Poly":
        """Powering via the base-p expansion of the exponent: f^e is the
        product of Frobenius twists f^(p^i) raised to the digits of e.
        In characteristic p this keeps every intermediate as sparse as
        the result itself (binary squaring would densify, e.g. on
        (t-1)^(p^k))."""
        if e < 0:
            raise ValueError("negative power of a polynomial")
        if e == 0:
            return Poly.one(self.ctx)
        if self.is_zero() or len(self.terms) == 1:
            if self.is_zero():
                return self
            exp, c = self.terms[0]
            return Poly(self.ctx, ((exp * e, (FqElem(self.ctx, c) ** e).code),))
        p = self.ctx.p
        result = None
        i = 0
        while e:
            d = e % p
            e //= p
            if d:
                part = self.frobenius_power(i)._small_pow(d)
                result = part if result is None else result * part
            i += 1
        return result

    def _small_pow(self, e: int) -> "Poly":
        out = self
        for _ in range(e - 1):
            out = out * self
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        inv_lead = other.leading_coeff().inverse().code
        db = other.degree
        mul, add, neg = ctx._mul, ctx._add, ctx._neg
        rem = dict(self.terms)
        quo: dict[int, int] = {}

        def rem_degree():
            return max(rem) if rem else -1

        dr = rem_degree()
        while dr >= db:
            c = mul[rem[dr]][inv_lead]
            shift = dr - db
            quo[shift] = c
            row = mul[c]
            for e, bc in other.terms:
                ee = e + shift
                s = add[rem.get(ee, 0)][neg[row[bc]]]
                if s:
                    rem[ee] = s
                elif ee in rem:
                    del rem[ee]
            dr = rem_degree()
        return Poly(ctx, quo), Poly(ctx, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        return self.scale(self.leading_coeff().inverse())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, other: "Poly"):
        """Extended gcd: returns (g, s, u) with g = s*self + u*other, g monic."""
        ctx = self.ctx
        r0, r1 = self, other
        s0, s1 = Poly.one(ctx), Poly.zero(ctx)
        t0, t1 = Poly.zero(ctx), Poly.one(ctx)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        lead_inv = r0.leading_coeff().inverse()
        return r0.scale(lead_inv), s0.scale(lead_inv), t0.scale(lead_inv)

    def pow_mod(self, e: int, m: "Poly") -> "Poly":
        result, base = Poly.one(self.ctx), self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def derivative(self) -> "Poly":
        p = self.ctx.p
        mul = self.ctx._mul
        out = []
        for e, c in self.terms:
            k = e % p
            if k:
                out.append((e - 1, mul[c][self.ctx.elem(k).code]))
        return Poly(self.ctx, out)

    def evaluate(self, x: FqElem) -> FqElem:
        acc = self.ctx.zero
        prev_e = None
        # Horner over the sparse terms, highest exponent first
        for e, c in reversed(self.terms):
            if prev_e is not None:
                acc = acc * x ** (prev_e - e)
            acc = acc + FqElem(self.ctx, c)
            prev_e = e
        if prev_e is not None and prev_e > 0:
            acc = acc * x ** prev_e
        return acc

    def frobenius_power(self, e: int) -> "Poly":
        """self^(p^e), computed term-by-term (Frobenius is additive)."""
        if e < 0:
            raise ValueError("e must be >= 0")
        pe = self.ctx.p ** e
        return Poly(
            self.ctx,
            ((exp * pe, FqElem(self.ctx, c).frob(e).code) for exp, c in self.terms),
        )

    def pth_root(self) -> "Poly":
        """Inverse of f -> f^p; requires every exponent divisible by p."""
        p = self.ctx.p
        out = []
        for e, c in self.terms:
            if e % p:
                raise ValueError("not a p-th power")
            out.append((e // p, FqElem(self.ctx, c).pth_root().code))
        return Poly(self.ctx, out)

    # -- comparisons / printing ---------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ctx is other.ctx
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.ctx), self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            el = FqElem(self.ctx, c)
            if self.ctx.n == 1:
                cs = str(c)
            else:
                cs = "(" + ",".join(str(d) for d in el.digits) + ")"
            if e == 0:
                parts.append(cs)
            else:
                te = "t" if e == 1 else f"t^{e}"
                parts.append(te if cs == "1" else f"{cs}*{te}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


# -- enumeration -------------------------------------------------------


def all_polys(ctx: FieldCtx, max_degree: int, monic: bool = False) -> Iterator[Poly]:
    """All polynomials of degree <= max_degree (including 0 unless monic),
    in graded order: by degree, then coefficient codes ascending with the
    constant term varying fastest."""
    if not monic:
        yield Poly.zero(ctx)
    for d in range(max_degree + 1):
        leads = [1] if monic else range(1, ctx.q)
        for lead in leads:
            for rest in _tuples(ctx.q, d):
                yield Poly(ctx, tuple((i, c) for i, c in enumerate(rest)) + ((d, lead),))


def _tuples(q: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for rest in _tuples(q, k - 1):
        for c in range(q):
            yield (c,) + rest


def irreducibles(ctx: FieldCtx, degree: int) -> Iterator[Poly]:
    """All monic irreducibles of exactly the given degree (enumeration
    oracle for tests; factor() itself does not use this)."""
    for lower in _tuples(ctx.q, degree):
        f = Poly(ctx, tuple((i, c) for i, c in enumerate(lower)) + ((degree, 1),))
        if is_irreducible(f):
            yield f


# -- irreducibility and factorization ----------------------------------


def is_irreducible(f: Poly) -> bool:
    """Rabin's test over F_q."""
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    q = f.ctx.q
    x = Poly.x(f.ctx)
    xq = {}
    h = x
    for k in range(1, n + 1):
        h = h.pow_mod(q, f)
        xq[k] = h
    if not ((xq[n] - x) % f).is_zero():
        return False
    for ell in _prime_divisors(n):
        g = (xq[n // ell] - x) % f
        if g.is_zero() or f.gcd(g).degree != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def squarefree_decomposition(f: Poly) -> dict[Poly, int]:
    """Map each squarefree monic part to its multiplicity; f monic, nonconstant."""
    out: dict[Poly, int] = {}
    _sff(f.monic(), 1, out)
    return out


def _sff(f: Poly, mult: int, out: dict[Poly, int]):
    p = f.ctx.p
    if f.degree <= 0:
        return
    fp = f.derivative()
    if fp.is_zero():
        _sff(f.pth_root(), mult * p, out)
        return
    c = f.gcd(fp)
    w = f.exact_div(c)
    i = 1
    while not w.is_one():
        y = w.gcd(c)
        z = w.exact_div(y)
        if not z.is_one():
            out[z] = out.get(z, 0) + mult * i
        w = y
        c = c.exact_div(y)
        i += 1
    if not c.is_one():
        _sff(c.pth_root(), mult * p, out)


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic squarefree f into (product, factor-degree) pieces."""
    q = f.ctx.q
    out = []
    x = Poly.x(f.ctx)
    h = x
    d = 0
    rest = f
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = h.pow_mod(q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest.exact_div(g)
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree(f: Poly, d: int) -> list[Poly]:
    """Cantor-Zassenhaus split of monic squarefree f, all factors of degree d."""
    if f.degree == d:
        return [f]
    ctx = f.ctx
    rng = random.Random(hash((f.terms, d)) & 0x7FFFFFFF)
    q = ctx.q
    while True:
        r = Poly(ctx, ((i, rng.randrange(q)) for i in range(f.degree)))
        if r.degree < 1:
            continue
        if ctx.p == 2:
            m = _ext_degree_log2(q) * d
            acc = r % f
            tr = acc
            for _ in range(m - 1):
                acc = acc.pow_mod(2, f)
                tr = tr + acc
            g = f.gcd(tr)
        else:
            e = (q ** d - 1) // 2
            g = f.gcd(r.pow_mod(e, f) - Poly.one(ctx))
        if 0 < g.degree < f.degree:
            return sorted(
                _equal_degree(g, d) + _equal_degree(f.exact_div(g), d),
                key=Poly.sort_key,
            )


def _ext_degree_log2(q: int) -> int:
    m = 0
    while q > 1:
        q //= 2
        m += 1
    return m


def factor(f: Poly) -> tuple[FqElem, list[tuple[Poly, int]]]:
    """Factor f as (unit, [(monic irreducible, multiplicity), ...]).

    Factors are sorted by (degree, coefficient codes); the product of
    unit and all factor powers reconstructs f exactly.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = f.leading_coeff()
    g = f.monic()
    result: dict[Poly, int] = {}
    if g.degree > 0:
        for sqfree, mult in squarefree_decomposition(g).items():
            for piece, d in _distinct_degree(sqfree):
                for irr in _equal_degree(piece, d):
                    result[irr] = result.get(irr, 0) + mult
    factors = sorted(result.items(), key=lambda kv: kv[0].sort_key())
    return unit, factors
