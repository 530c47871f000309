"""Finite field contexts and elements.

F_q with q = p^n is realized as F_p[x]/(m) for a monic irreducible
modulus m of degree n.  An element with coordinate vector
(a_0, ..., a_{n-1}) over F_p is stored as the integer code
a_0 + a_1 p + ... + a_{n-1} p^{n-1}, and a FieldCtx precomputes full
addition / multiplication / inverse / Frobenius tables so that
polynomial arithmetic over F_q downstream runs on plain ints.

Desk scale: q is small (q <= 25 in the shipped checks); table
construction is capped at q <= 256.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence

_MAX_Q = 256

_CTX_CACHE: dict[tuple, "FieldCtx"] = {}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# -- helpers on F_p[x] with plain int-list coefficients (ascending) --------


def _fp_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _fp_trim(a)
        if len(a) - 1 < dm:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        a = _fp_trim(a)
    return a


def _fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin test for a monic polynomial over F_p."""
    n = len(f) - 1
    if n <= 0:
        return False
    x = [0, 1]
    # x^(p^k) mod f, one Frobenius power at a time
    h = x[:]
    powers = {}
    for k in range(1, n + 1):
        h = _fp_powmod(h, p, f, p)
        powers[k] = h
    if _fp_trim([(a - b) % p for a, b in _zip_pad(powers[n], x)]):
        return False
    for ell in _prime_divisors(n):
        g = [(a - b) % p for a, b in _zip_pad(powers[n // ell], x)]
        if len(_fp_gcd(_fp_trim(g), list(f), p)) - 1 != 0:
            return False
    return True


def _zip_pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _fp_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = _fp_mod(base, m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, b, p), m, p)
        b = _fp_mod(_fp_mul(b, b, p), m, p)
        e >>= 1
    return result


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        a, b = b, _fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


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


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    The key is the coefficient sequence (a_0, ..., a_{n-1}); the leading
    coefficient is 1 and not part of the key.  Returns that sequence.
    """
    if n == 1:
        return (0,)
    total = p ** n
    for code in range(total):
        digits = _digits(code, p, n)
        # lexicographic on (a_0, ..., a_{n-1}) means a_{n-1} varies slowest
        seq = tuple(digits)
        f = list(seq) + [1]
        if _fp_is_irreducible(f, p):
            return seq
    raise ValueError(f"no irreducible of degree {n} over F_{p}")


def _digits(code: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(code % p)
        code //= p
    return out


def _code(digits: Sequence[int], p: int) -> int:
    c = 0
    for d in reversed(digits):
        c = c * p + d
    return c


class FieldCtx:
    """The field F_q = F_{p^n}, with lookup tables for element arithmetic.

    Use :func:`field_ctx` to construct; instances are cached so that
    identity comparison works across the package.
    """

    __slots__ = (
        "p", "n", "q", "modulus",
        "_add", "_mul", "_neg", "_inv", "_frob",
        "zero", "one", "gen",
    )

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = modulus
        self._build_tables()
        self.zero = FqElem(self, 0)
        self.one = FqElem(self, 1)
        self.gen = FqElem(self, 1 if n == 1 else p)  # x itself for n > 1

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        mod = list(self.modulus) + [1]
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        neg = [0] * q
        frob = [0] * q
        polys = [_digits(c, p, n) for c in range(q)]
        for a in range(q):
            da = polys[a]
            neg[a] = _code([(-x) % p for x in da], p)
            for b in range(a, q):
                db = polys[b]
                s = _code([(x + y) % p for x, y in zip(da, db)], p)
                add[a][b] = add[b][a] = s
                prod = _fp_mod(_fp_mul(_fp_trim(da[:]), _fp_trim(db[:]), p), mod, p)
                prod = prod + [0] * (n - len(prod))
                m = _code(prod, p)
                mul[a][b] = mul[b][a] = m
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        for a in range(q):
            acc = a
            for _ in range(p - 1):
                acc = mul[acc][a]
            frob[a] = acc  # a^p
        self._add, self._mul, self._neg, self._inv, self._frob = add, mul, neg, inv, frob

    def elem(self, value) -> "FqElem":
        """Coerce an int code, digit sequence, or FqElem into this field."""
        if isinstance(value, FqElem):
            if value.ctx is not self:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, int):
            return FqElem(self, value % self.q if self.n == 1 else value)
        return FqElem(self, _code(list(value), self.p))

    def from_digits(self, digits: Sequence[int]) -> "FqElem":
        return FqElem(self, _code([d % self.p for d in digits], self.p))

    def elements(self) -> Iterator["FqElem"]:
        for c in range(self.q):
            yield FqElem(self, c)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n})"


class FqElem:
    """An element of F_q, identified by its integer code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        if not 0 <= code < ctx.q:
            raise ValueError(f"code {code} out of range for q={ctx.q}")
        self.ctx = ctx
        self.code = code

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(_digits(self.code, self.ctx.p, self.ctx.n))

    def is_zero(self) -> bool:
        return self.code == 0

    def __add__(self, other: "FqElem") -> "FqElem":
        return FqElem(self.ctx, self.ctx._add[self.code][other.code])

    def __sub__(self, other: "FqElem") -> "FqElem":
        return FqElem(self.ctx, self.ctx._add[self.code][self.ctx._neg[other.code]])

    def __neg__(self) -> "FqElem":
        return FqElem(self.ctx, self.ctx._neg[self.code])

    def __mul__(self, other: "FqElem") -> "FqElem":
        return FqElem(self.ctx, self.ctx._mul[self.code][other.code])

    def __truediv__(self, other: "FqElem") -> "FqElem":
        if other.code == 0:
            raise ZeroDivisionError("division by zero in F_q")
        return FqElem(self.ctx, self.ctx._mul[self.code][self.ctx._inv[other.code]])

    def inverse(self) -> "FqElem":
        if self.code == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FqElem(self.ctx, self.ctx._inv[self.code])

    def __pow__(self, e: int) -> "FqElem":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = FqElem(self.ctx, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frob(self, e: int = 1) -> "FqElem":
        """Apply the Frobenius x -> x^p, e times (e may be any int >= 0)."""
        c = self.code
        for _ in range(e % self.ctx.n):
            c = self.ctx._frob[c]
        return FqElem(self.ctx, c)

    def pth_root(self, r: int = 1) -> "FqElem":
        """The unique y with y^(p^r) = self (finite fields are perfect)."""
        n = self.ctx.n
        return self.frob((n - r % n) % n)

    def __eq__(self, other):
        return (
            isinstance(other, FqElem)
            and self.ctx is other.ctx
            and self.code == other.code
        )

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        if self.ctx.n == 1:
            return f"F{self.ctx.q}({self.code})"
        return f"F{self.ctx.q}{self.digits}"


def field_ctx(p: int, n: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Cached FieldCtx factory.

    `modulus` gives the non-leading coefficients (a_0, ..., a_{n-1}) of a
    monic irreducible of degree n over F_p; by default the
    lexicographically smallest such polynomial is used.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** n > _MAX_Q:
        raise ValueError(f"q = {p ** n} exceeds the desk-scale cap {_MAX_Q}")
    if modulus is None:
        mseq = default_modulus(p, n)
    else:
        mseq = tuple(int(c) % p for c in modulus)
        if len(mseq) != n:
            raise ValueError("modulus must list the n non-leading coefficients")
        if n > 1 and not _fp_is_irreducible(list(mseq) + [1], p):
            raise ValueError("modulus is reducible over F_p")
    key = (p, n, mseq)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, n, mseq)
        _CTX_CACHE[key] = ctx
    return ctx
