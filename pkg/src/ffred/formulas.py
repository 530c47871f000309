"""First-order syntax: terms, formulas, S-expression parser and printer.

Two signatures share one AST.  Arithmetic formulas (over positive
integers) may use +, *, =, divides and arbitrary integer literals.
Ring formulas (over F_q(t)) may use +, -, *, pow, =, parameters, the
ring constants 0 and 1, and the two semantic relation atoms `xmem`
(the simultaneous-power pairing) and `bmem` (the cross-Frobenius
triple) whose graphs the evaluator decides directly.

Grammar (whitespace-insensitive, UTF-8):
  atoms: symbols or decimal literals
  forms: (forall x F) (exists x F) (and F F...) (or F F...) (not F)
         (-> F F) (= t t) (divides t t) (xmem t t) (bmem t t t)
         (+ t t...) (* t t...) (- t t) (pow t k) (param name)
n-ary and/or/+/* fold to left-nested binary nodes; the printer emits
the fully binary canonical form, so print . parse is a canonicalizer
and parse . print is the identity on ASTs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import FormulaSyntaxError, SortError

ARITH = "arith"
RING = "ring"


# -- terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exp: int


Term = Union[Var, IntLit, Param, Add, Mul, Sub, Pow]


# -- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Divides:
    left: Term
    right: Term


@dataclass(frozen=True)
class XMem:
    base: Term
    power: Term


@dataclass(frozen=True)
class BMem:
    tpow: Term
    ypow: Term
    x: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Eq, Divides, XMem, BMem, Not, And, Or, Implies, Forall, Exists]

_ATOMS = (Eq, Divides, XMem, BMem)
_BINARY = (And, Or, Implies)
_QUANT = (Forall, Exists)


def term_children(t: Term) -> Iterator[Term]:
    if isinstance(t, (Add, Mul, Sub)):
        yield t.left
        yield t.right
    elif isinstance(t, Pow):
        yield t.base


def atom_terms(f: Formula) -> Iterator[Term]:
    if isinstance(f, (Eq, Divides)):
        yield f.left
        yield f.right
    elif isinstance(f, XMem):
        yield f.base
        yield f.power
    elif isinstance(f, BMem):
        yield f.tpow
        yield f.ypow
        yield f.x


def subformulas(f: Formula) -> Iterator[Formula]:
    if isinstance(f, Not):
        yield f.body
    elif isinstance(f, _BINARY):
        yield f.left
        yield f.right
    elif isinstance(f, _QUANT):
        yield f.body


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for c in term_children(t):
        out |= term_vars(c)
    return out


def term_params(t: Term) -> frozenset[str]:
    if isinstance(t, Param):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for c in term_children(t):
        out |= term_params(c)
    return out


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, _ATOMS):
        out: frozenset[str] = frozenset()
        for t in atom_terms(f):
            out |= term_vars(t)
        return out
    if isinstance(f, _QUANT):
        return free_vars(f.body) - {f.var}
    out = frozenset()
    for sub in subformulas(f):
        out |= free_vars(sub)
    return out


def all_var_names(f: Formula) -> frozenset[str]:
    """Free and bound variable names together (for fresh-name generation)."""
    if isinstance(f, _ATOMS):
        out: frozenset[str] = frozenset()
        for t in atom_terms(f):
            out |= term_vars(t)
        return out
    if isinstance(f, _QUANT):
        return all_var_names(f.body) | {f.var}
    out = frozenset()
    for sub in subformulas(f):
        out |= all_var_names(sub)
    return out


def formula_params(f: Formula) -> frozenset[str]:
    if isinstance(f, _ATOMS):
        out: frozenset[str] = frozenset()
        for t in atom_terms(f):
            out |= term_params(t)
        return out
    out = frozenset()
    for sub in subformulas(f):
        out |= formula_params(sub)
    return out


def map_terms(f: Formula, fn) -> Formula:
    """Rebuild f with fn applied to every atom term."""
    if isinstance(f, Eq):
        return Eq(fn(f.left), fn(f.right))
    if isinstance(f, Divides):
        return Divides(fn(f.left), fn(f.right))
    if isinstance(f, XMem):
        return XMem(fn(f.base), fn(f.power))
    if isinstance(f, BMem):
        return BMem(fn(f.tpow), fn(f.ypow), fn(f.x))
    if isinstance(f, Not):
        return Not(map_terms(f.body, fn))
    if isinstance(f, And):
        return And(map_terms(f.left, fn), map_terms(f.right, fn))
    if isinstance(f, Or):
        return Or(map_terms(f.left, fn), map_terms(f.right, fn))
    if isinstance(f, Implies):
        return Implies(map_terms(f.left, fn), map_terms(f.right, fn))
    if isinstance(f, Forall):
        return Forall(f.var, map_terms(f.body, fn))
    if isinstance(f, Exists):
        return Exists(f.var, map_terms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def subst_param(f: Formula, name: str, replacement: Term) -> Formula:
    def on_term(t: Term) -> Term:
        if isinstance(t, Param) and t.name == name:
            return replacement
        if isinstance(t, (Add, Mul, Sub)):
            return type(t)(on_term(t.left), on_term(t.right))
        if isinstance(t, Pow):
            return Pow(on_term(t.base), t.exp)
        return t

    return map_terms(f, on_term)


def expand_pow(t: Term) -> Term:
    """Resolve the Pow sugar into iterated multiplication."""
    if isinstance(t, Pow):
        base = expand_pow(t.base)
        if t.exp == 0:
            return IntLit(1)
        out = base
        for _ in range(t.exp - 1):
            out = Mul(out, base)
        return out
    if isinstance(t, (Add, Mul, Sub)):
        return type(t)(expand_pow(t.left), expand_pow(t.right))
    return t


# -- sort checking -----------------------------------------------------------


def check_term(t: Term, sig: str) -> None:
    if isinstance(t, IntLit):
        if t.value < 0:
            raise SortError("negative integer literal")
        if sig == RING and t.value not in (0, 1):
            raise SortError(f"ring terms admit only the constants 0 and 1, got {t.value}")
    elif isinstance(t, Param):
        if sig == ARITH:
            raise SortError("parameters are ring-only")
    elif isinstance(t, Sub):
        if sig == ARITH:
            raise SortError("subtraction is ring-only")
        check_term(t.left, sig)
        check_term(t.right, sig)
    elif isinstance(t, (Add, Mul)):
        check_term(t.left, sig)
        check_term(t.right, sig)
    elif isinstance(t, Pow):
        if t.exp < 0:
            raise SortError("negative exponent")
        check_term(t.base, sig)


def check_signature(f: Formula, sig: str) -> None:
    """Raise SortError unless f is well-sorted under the given signature."""
    if sig not in (ARITH, RING):
        raise ValueError(f"unknown signature {sig!r}")
    if isinstance(f, Divides):
        if sig == RING:
            raise SortError("divides is arithmetic-only")
    elif isinstance(f, (XMem, BMem)):
        if sig == ARITH:
            raise SortError(f"{type(f).__name__.lower()} is ring-only")
    if isinstance(f, _ATOMS):
        for t in atom_terms(f):
            check_term(t, sig)
        return
    for sub in subformulas(f):
        check_signature(sub, sig)


def infer_signature(f: Formula) -> str:
    """Infer the signature; pure +/=/quantifier formulas default to arith."""

    def term_marks(t: Term, marks: set[str]):
        if isinstance(t, Param):
            marks.add(RING)
        elif isinstance(t, Sub):
            marks.add(RING)
        elif isinstance(t, IntLit) and t.value not in (0, 1):
            marks.add(ARITH)
        for c in term_children(t):
            term_marks(c, marks)

    def walk(g: Formula, marks: set[str]):
        if isinstance(g, Divides):
            marks.add(ARITH)
        elif isinstance(g, (XMem, BMem)):
            marks.add(RING)
        if isinstance(g, _ATOMS):
            for t in atom_terms(g):
                term_marks(t, marks)
            return
        for sub in subformulas(g):
            walk(sub, marks)

    marks: set[str] = set()
    walk(f, marks)
    if marks == {ARITH, RING}:
        raise SortError("formula mixes arithmetic and ring vocabulary")
    return RING if RING in marks else ARITH


# -- parsing ------------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.length = len(text)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, self.length)

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise FormulaSyntaxError("unexpected end of input", tok[1])
        self.pos += 1
        return tok

    def sexpr(self):
        tok, at = self.next()
        if tok == "(":
            items = []
            while True:
                nxt, nat = self.peek()
                if nxt is None:
                    raise FormulaSyntaxError("unbalanced '('", at)
                if nxt == ")":
                    self.next()
                    return (items, at)
                items.append(self.sexpr())
        if tok == ")":
            raise FormulaSyntaxError("unexpected ')'", at)
        return (tok, at)


def _is_atom(node) -> bool:
    return isinstance(node[0], str)


def _fold(cls, parts):
    out = parts[0]
    for p in parts[1:]:
        out = cls(out, p)
    return out


def _build_term(node) -> Term:
    val, at = node
    if isinstance(val, str):
        if val.isdigit():
            return IntLit(int(val))
        return Var(val)
    if not val:
        raise FormulaSyntaxError("empty term", at)
    head, hat = val[0]
    if not isinstance(head, str):
        raise FormulaSyntaxError("term head must be a symbol", hat)
    args = val[1:]
    if head == "param":
        if len(args) != 1 or not _is_atom(args[0]):
            raise FormulaSyntaxError("param takes one symbol", at)
        return Param(args[0][0])
    if head == "+":
        if len(args) < 2:
            raise FormulaSyntaxError("+ needs at least two arguments", at)
        return _fold(Add, [_build_term(a) for a in args])
    if head == "*":
        if len(args) < 2:
            raise FormulaSyntaxError("* needs at least two arguments", at)
        return _fold(Mul, [_build_term(a) for a in args])
    if head == "-":
        if len(args) != 2:
            raise FormulaSyntaxError("- takes exactly two arguments", at)
        return Sub(_build_term(args[0]), _build_term(args[1]))
    if head == "pow":
        if len(args) != 2 or not (_is_atom(args[1]) and args[1][0].isdigit()):
            raise FormulaSyntaxError("pow takes a term and a literal exponent", at)
        return Pow(_build_term(args[0]), int(args[1][0]))
    raise FormulaSyntaxError(f"unknown term form '{head}'", hat)


def _build_formula(node) -> Formula:
    val, at = node
    if isinstance(val, str):
        raise FormulaSyntaxError(f"expected a formula, got atom '{val}'", at)
    if not val:
        raise FormulaSyntaxError("empty formula", at)
    head, hat = val[0]
    if not isinstance(head, str):
        raise FormulaSyntaxError("formula head must be a symbol", hat)
    args = val[1:]
    if head in ("forall", "exists"):
        if len(args) != 2 or not _is_atom(args[0]):
            raise FormulaSyntaxError(f"{head} takes a variable and a body", at)
        cls = Forall if head == "forall" else Exists
        return cls(args[0][0], _build_formula(args[1]))
    if head in ("and", "or"):
        if len(args) < 2:
            raise FormulaSyntaxError(f"{head} needs at least two arguments", at)
        cls = And if head == "and" else Or
        return _fold(cls, [_build_formula(a) for a in args])
    if head == "not":
        if len(args) != 1:
            raise FormulaSyntaxError("not takes one argument", at)
        return Not(_build_formula(args[0]))
    if head == "->":
        if len(args) != 2:
            raise FormulaSyntaxError("-> takes two arguments", at)
        return Implies(_build_formula(args[0]), _build_formula(args[1]))
    if head == "=":
        if len(args) != 2:
            raise FormulaSyntaxError("= takes two arguments", at)
        return Eq(_build_term(args[0]), _build_term(args[1]))
    if head == "divides":
        if len(args) != 2:
            raise FormulaSyntaxError("divides takes two arguments", at)
        return Divides(_build_term(args[0]), _build_term(args[1]))
    if head == "xmem":
        if len(args) != 2:
            raise FormulaSyntaxError("xmem takes two arguments", at)
        return XMem(_build_term(args[0]), _build_term(args[1]))
    if head == "bmem":
        if len(args) != 3:
            raise FormulaSyntaxError("bmem takes three arguments", at)
        return BMem(_build_term(args[0]), _build_term(args[1]), _build_term(args[2]))
    raise FormulaSyntaxError(f"unknown formula form '{head}'", hat)


def parse(text: str, sig: str | None = None) -> Formula:
    """Parse an S-expression formula; validate against sig when given,
    otherwise infer the signature (and still validate)."""
    parser = _Parser(text)
    node = parser.sexpr()
    tok, at = parser.peek()
    if tok is not None:
        raise FormulaSyntaxError("trailing input after formula", at)
    f = _build_formula(node)
    effective = sig if sig is not None else infer_signature(f)
    check_signature(f, effective)
    return f


# -- printing -------------------------------------------------------------


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, Param):
        return f"(param {t.name})"
    if isinstance(t, Add):
        return f"(+ {print_term(t.left)} {print_term(t.right)})"
    if isinstance(t, Mul):
        return f"(* {print_term(t.left)} {print_term(t.right)})"
    if isinstance(t, Sub):
        return f"(- {print_term(t.left)} {print_term(t.right)})"
    if isinstance(t, Pow):
        return f"(pow {print_term(t.base)} {t.exp})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(= {print_term(f.left)} {print_term(f.right)})"
    if isinstance(f, Divides):
        return f"(divides {print_term(f.left)} {print_term(f.right)})"
    if isinstance(f, XMem):
        return f"(xmem {print_term(f.base)} {print_term(f.power)})"
    if isinstance(f, BMem):
        return f"(bmem {print_term(f.tpow)} {print_term(f.ypow)} {print_term(f.x)})"
    if isinstance(f, Not):
        return f"(not {print_formula(f.body)})"
    if isinstance(f, And):
        return f"(and {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Or):
        return f"(or {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Implies):
        return f"(-> {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {print_formula(f.body)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {print_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")
