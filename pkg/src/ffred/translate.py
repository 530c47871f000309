"""Translation of arithmetic sentences into ring sentences over F_q(t).

The image of the positive integer s is t^(B^s).  Quantifiers are
relativized to the coded domain through the two-equation domain
predicate (denominators cleared, since ring terms have no division,
and with the extra conjunct w != t that excludes s = 0).  Addition
atoms become the three-condition system, divisibility atoms the
cross-Frobenius divisibility formula, and multiplication atoms are
eliminated up front by substituting the lcm-based definition of
multiplication from addition and divisibility.

Every existential the translator introduces is recorded in the
TranslationEnv provenance table: variable name -> (kind, argument
terms).  The witness-mode evaluator uses these records to *construct*
candidate witnesses (which it then verifies by exact arithmetic), so
translated sentences can be decided without blind search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SortError
from .formulas import (
    ARITH,
    Add,
    And,
    BMem,
    Divides,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    IntLit,
    Mul,
    Not,
    Or,
    Param,
    Pow,
    Sub,
    Term,
    Var,
    XMem,
    all_var_names,
    check_signature,
    formula_params,
    free_vars,
    map_terms,
    term_children,
)
from .integer_model import ModelParams, robinson_formula

T_PARAM = "t"
LITERAL_CAP = 12


@dataclass(frozen=True)
class Provenance:
    kind: str
    args: tuple[Term, ...]


@dataclass
class TranslationEnv:
    """Model parameters plus the witness-provenance ledger."""

    params: ModelParams
    provenance: dict[str, Provenance] = field(default_factory=dict)
    mul_vars: set[str] = field(default_factory=set)
    _counter: int = 0
    _reserved: set[str] = field(default_factory=set)

    def reserve(self, names) -> None:
        self._reserved |= set(names)

    def fresh(self, prefix: str, kind: str | None = None, args: tuple[Term, ...] = ()) -> str:
        while True:
            self._counter += 1
            name = f"{prefix}.{self._counter}"
            if name not in self._reserved and name not in self.provenance:
                break
        if kind is not None:
            self.provenance[name] = Provenance(kind, args)
        return name

    def note(self, name: str, kind: str, args: tuple[Term, ...] = ()) -> None:
        self.provenance[name] = Provenance(kind, args)


def t_param() -> Term:
    return Param(T_PARAM)


def coded_literal(env: TranslationEnv, k: int) -> Term:
    """t^(B^k), as a Pow term."""
    if not 1 <= k <= LITERAL_CAP:
        raise SortError(f"integer literal {k} outside the supported range 1..{LITERAL_CAP}")
    return Pow(t_param(), env.params.base ** k)


def _coded_root(env: TranslationEnv, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, IntLit):
        return coded_literal(env, t.value)
    raise SortError(f"expected a flattened term, got {t!r}")


# -- building blocks -----------------------------------------------------------


def domain_pred(env: TranslationEnv, w: Term) -> Formula:
    """w is t^(B^s) for some s >= 1: both defining equations (denominators
    cleared by t*w) solvable, and w != t."""
    B = env.params.base
    t = t_param()
    u = env.fresh("u", "domain-u", (w,))
    v = env.fresh("v", "domain-v", (w,))
    eq_u = Eq(Mul(Mul(t, w), Sub(Pow(Var(u), B), Var(u))), Sub(w, t))
    eq_v = Eq(Sub(Pow(Var(v), B), Var(v)), Sub(t, w))
    return And(Exists(u, eq_u), And(Exists(v, eq_v), Not(Eq(w, t))))


def add_graph(env: TranslationEnv, xa: Term, xb: Term, xc: Term) -> Formula:
    """The addition system: x = xa + 1, z an iterated-B power of (t+1)*xb,
    z = x * xc.  Correct on the coded domain by the forcing argument, so
    no exponent bounds appear."""
    t1 = Add(t_param(), IntLit(1))
    x = env.fresh("x", "add-x", (xa,))
    z = env.fresh("z", "add-z", (xa, xc))
    body = And(
        Eq(Var(x), Add(xa, IntLit(1))),
        And(XMem(Mul(t1, xb), Var(z)), Eq(Var(z), Mul(Var(x), xc))),
    )
    return Exists(x, Exists(z, body))


def div_graph(env: TranslationEnv, xa: Term, xb: Term) -> Formula:
    """Coded s1 divides coded s2: some (xa, y, x) in the cross-Frobenius
    graph with y*t = x*xb and x != 0."""
    x = env.fresh("x", "div-x", (xa, xb))
    y = env.fresh("y", "div-y", (xa, Var(x)))
    body = And(
        BMem(xa, Var(y), Var(x)),
        And(Not(Eq(Var(x), IntLit(0))), Eq(Mul(Var(y), t_param()), Mul(Var(x), xb))),
    )
    return Exists(x, Exists(y, body))


# -- multiplication elimination --------------------------------------------


def _rename_bound(f: Formula, env: TranslationEnv, mark_mul: bool) -> Formula:
    """Alpha-rename every bound variable to a fresh name (and optionally
    mark the new names as multiplication-internal)."""

    def on_term(t: Term, ren: dict[str, str]) -> Term:
        if isinstance(t, Var) and t.name in ren:
            return Var(ren[t.name])
        if isinstance(t, (Add, Mul, Sub)):
            return type(t)(on_term(t.left, ren), on_term(t.right, ren))
        if isinstance(t, Pow):
            return Pow(on_term(t.base, ren), t.exp)
        return t

    def walk(g: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(g, (Forall, Exists)):
            fresh = env.fresh(g.var.split(".")[0])
            if mark_mul:
                env.mul_vars.add(fresh)
            ren2 = dict(ren)
            ren2[g.var] = fresh
            return type(g)(fresh, walk(g.body, ren2))
        if isinstance(g, Not):
            return Not(walk(g.body, ren))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.left, ren), walk(g.right, ren))
        return map_terms(g, lambda t: on_term(t, ren))

    return walk(f, {})


def _subst_vars(f: Formula, mapping: dict[str, Term]) -> Formula:
    def on_term(t: Term) -> Term:
        if isinstance(t, Var) and t.name in mapping:
            return mapping[t.name]
        if isinstance(t, (Add, Mul, Sub)):
            return type(t)(on_term(t.left), on_term(t.right))
        if isinstance(t, Pow):
            return Pow(on_term(t.base), t.exp)
        return t

    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, _subst_vars(f.body, inner))
    if isinstance(f, Not):
        return Not(_subst_vars(f.body, mapping))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_subst_vars(f.left, mapping), _subst_vars(f.right, mapping))
    return map_terms(f, on_term)


def _mul_formula(env: TranslationEnv, k: Term, m: Term, n: Term) -> Formula:
    inst = _rename_bound(robinson_formula(), env, mark_mul=True)
    return _subst_vars(inst, {"k": k, "m": m, "n": n})


def eliminate_mul(f: Formula, env: TranslationEnv) -> Formula:
    """Rewrite every multiplication into the lcm-based formula, leaving an
    arithmetic formula over + and | only."""

    def norm(t: Term, constraints: list) -> Term:
        if isinstance(t, (Var, IntLit)):
            return t
        if isinstance(t, Add):
            return Add(norm(t.left, constraints), norm(t.right, constraints))
        if isinstance(t, Mul):
            a = _as_root(norm(t.left, constraints), constraints)
            b = _as_root(norm(t.right, constraints), constraints)
            mv = env.fresh(
                "m"
            )
            env.mul_vars.add(mv)
            constraints.append((mv, a, b))
            return Var(mv)
        raise SortError(f"unsupported arithmetic term {t!r}")

    def _as_root(t: Term, constraints: list) -> Term:
        if isinstance(t, (Var, IntLit)):
            return t
        sv = env.fresh("s")
        env.mul_vars.add(sv)
        constraints.append((sv, t, None))  # sv = t, an addition-only fact
        return Var(sv)

    def rewrite_atom(g: Formula) -> Formula:
        constraints: list = []
        if isinstance(g, Eq):
            g2: Formula = Eq(norm(g.left, constraints), norm(g.right, constraints))
        elif isinstance(g, Divides):
            g2 = Divides(norm(g.left, constraints), norm(g.right, constraints))
        else:
            return g
        for name, a, b in reversed(constraints):
            if b is None:
                defining: Formula = Eq(Var(name), a)
            else:
                defining = _mul_formula(env, Var(name), a, b)
            g2 = Exists(name, And(defining, g2))
        return g2

    def walk(g: Formula) -> Formula:
        if isinstance(g, (Eq, Divides)):
            return rewrite_atom(g)
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, walk(g.body))
        return g

    return walk(f)


def _has_mul(f: Formula) -> bool:
    def term_has(t: Term) -> bool:
        if isinstance(t, Mul):
            return True
        return any(term_has(c) for c in term_children(t))

    if isinstance(f, (Eq, Divides)):
        return term_has(f.left) or term_has(f.right)
    if isinstance(f, Not):
        return _has_mul(f.body)
    if isinstance(f, (And, Or, Implies)):
        return _has_mul(f.left) or _has_mul(f.right)
    if isinstance(f, (Forall, Exists)):
        return _has_mul(f.body)
    return False


# -- the translation ---------------------------------------------------------


def translate(f: Formula, env: TranslationEnv) -> Formula:
    """Map an arithmetic formula to a ring formula over F_q(t) whose only
    parameter is t.  Free variables stay free (callers quantify or bind
    them); each quantifier is relativized to the coded domain."""
    check_signature(f, ARITH)
    env.reserve(all_var_names(f))
    if _has_mul(f):
        f = eliminate_mul(f, env)
        env.reserve(all_var_names(f))
    return _tr(f, env)


def _tr(f: Formula, env: TranslationEnv) -> Formula:
    if isinstance(f, Eq):
        return _tr_eq(f, env)
    if isinstance(f, Divides):
        return _tr_divides(f, env)
    if isinstance(f, Not):
        return Not(_tr(f.body, env))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_tr(f.left, env), _tr(f.right, env))
    if isinstance(f, Forall):
        kind = "mul-domain" if f.var in env.mul_vars else "domain"
        env.note(f.var, kind)
        return Forall(f.var, Implies(domain_pred(env, Var(f.var)), _tr(f.body, env)))
    if isinstance(f, Exists):
        kind = "mul-domain" if f.var in env.mul_vars else "domain"
        env.note(f.var, kind)
        return Exists(f.var, And(domain_pred(env, Var(f.var)), _tr(f.body, env)))
    raise SortError(f"unsupported arithmetic construct {f!r}")


def _flatten(env: TranslationEnv, t: Term, constraints: list, created: list) -> Term:
    """Reduce t to a Var/IntLit root; each introduced variable h comes with
    a constraint (a, b, h) meaning h = a + b on the integer side."""
    if isinstance(t, (Var, IntLit)):
        return t
    if isinstance(t, Add):
        a = _flatten(env, t.left, constraints, created)
        b = _flatten(env, t.right, constraints, created)
        h = env.fresh("h", "flat-sum", (_coded_root(env, a), _coded_root(env, b)))
        created.append(h)
        constraints.append((a, b, Var(h)))
        return Var(h)
    raise SortError(f"unsupported arithmetic term {t!r}")


def _close_constraints(env, constraints, created, core: Formula | None) -> Formula:
    """Conjoin the addition graphs and existentially close the helper roots
    (each relativized to the coded domain)."""
    conj = [
        add_graph(env, _coded_root(env, a), _coded_root(env, b), _coded_root(env, c))
        for a, b, c in constraints
    ]
    if core is not None:
        conj.append(core)
    out = conj[0]
    for g in conj[1:]:
        out = And(out, g)
    for h in reversed(created):
        out = Exists(h, And(domain_pred(env, Var(h)), out))
    return out


def _tr_eq(f: Eq, env: TranslationEnv) -> Formula:
    s, u = f.left, f.right
    constraints: list = []
    created: list = []
    if isinstance(s, Add) and not isinstance(u, Add):
        a = _flatten(env, s.left, constraints, created)
        b = _flatten(env, s.right, constraints, created)
        constraints.append((a, b, u))
        return _close_constraints(env, constraints, created, None)
    if isinstance(u, Add) and not isinstance(s, Add):
        a = _flatten(env, u.left, constraints, created)
        b = _flatten(env, u.right, constraints, created)
        constraints.append((a, b, s))
        return _close_constraints(env, constraints, created, None)
    if isinstance(s, Add) and isinstance(u, Add):
        root = _flatten(env, s, constraints, created)
        a = _flatten(env, u.left, constraints, created)
        b = _flatten(env, u.right, constraints, created)
        constraints.append((a, b, root))
        return _close_constraints(env, constraints, created, None)
    return Eq(_coded_root(env, s), _coded_root(env, u))


def _tr_divides(f: Divides, env: TranslationEnv) -> Formula:
    constraints: list = []
    created: list = []
    left = _flatten(env, f.left, constraints, created)
    right = _flatten(env, f.right, constraints, created)
    core = div_graph(env, _coded_root(env, left), _coded_root(env, right))
    if not constraints:
        return core
    return _close_constraints(env, constraints, created, core)


# -- Robinson's Q and the parameter-free wrapper ------------------------------


def _mul_rel(a: Term, b: Term, c: Term, tag: str) -> Formula:
    """Shifted multiplication relation: value(c) = value(a)*value(b) under
    the n <-> n+1 coding, i.e. a*b + 2 = c + a + b with the product
    introduced through an explicit multiplication atom."""
    m = Var(f"m{tag}")
    return Exists(
        m.name,
        And(
            Eq(m, Mul(a, b)),
            Eq(Add(m, IntLit(2)), Add(Add(c, a), b)),
        ),
    )


def q_axioms() -> list[Formula]:
    """The seven axioms of Robinson's Q, rendered over positive integers.

    The natural number n is coded by the positive integer n+1, so zero
    is the literal 1, the successor of x is x+1, natural addition reads
    x + y = z + 1, and natural multiplication is the relation
    x*y + 2 = z + x + y.
    """
    x, y, z = Var("qx"), Var("qy"), Var("qz")
    u, v, w = Var("qu"), Var("qv"), Var("qw")
    one = IntLit(1)

    a1 = Forall(
        "qx",
        Forall("qy", Implies(Eq(Add(x, one), Add(y, one)), Eq(x, y))),
    )
    a2 = Forall("qx", Not(Eq(Add(x, one), one)))
    a3 = Forall(
        "qx",
        Implies(Not(Eq(x, one)), Exists("qy", Eq(x, Add(y, one)))),
    )
    a4 = Forall(
        "qx",
        Forall("qz", Implies(Eq(Add(x, one), Add(z, one)), Eq(z, x))),
    )
    a5 = Forall(
        "qx",
        Forall(
            "qy",
            Forall(
                "qu",
                Forall(
                    "qv",
                    Forall(
                        "qw",
                        Implies(
                            And(
                                Eq(u, Add(y, one)),
                                And(
                                    Eq(Add(x, u), Add(v, one)),
                                    Eq(Add(x, y), Add(w, one)),
                                ),
                            ),
                            Eq(v, Add(w, one)),
                        ),
                    ),
                ),
            ),
        ),
    )
    a6 = Forall(
        "qx",
        Forall("qv", Implies(_mul_rel(x, one, v, "6"), Eq(v, one))),
    )
    a7 = Forall(
        "qx",
        Forall(
            "qy",
            Forall(
                "qu",
                Forall(
                    "qv",
                    Forall(
                        "qw",
                        Implies(
                            And(
                                Eq(u, Add(y, one)),
                                And(_mul_rel(x, u, v, "7a"), _mul_rel(x, y, w, "7b")),
                            ),
                            Eq(Add(w, x), Add(v, one)),
                        ),
                    ),
                ),
            ),
        ),
    )
    return [a1, a2, a3, a4, a5, a6, a7]


def q_axioms_conjunction() -> Formula:
    axioms = q_axioms()
    out = axioms[0]
    for a in axioms[1:]:
        out = And(out, a)
    return out


@dataclass(frozen=True)
class WrappedSentence:
    """Parameter-free form: forall w (Ax_K(w) -> psi_K(w))."""

    formula: Formula
    wvar: str

    def body(self) -> Formula:
        """The matrix under the universal; evaluate it with wvar bound to a
        concrete field element (the instance check at w = t)."""
        return self.formula.body


def wrap_parameter_free(psi: Formula, env: TranslationEnv) -> WrappedSentence:
    """Replace the parameter t by a universally quantified variable and
    guard with the translated axioms of Q."""
    check_signature(psi, ARITH)
    if free_vars(psi):
        raise SortError("wrap_parameter_free requires a closed sentence")
    before = set(env.provenance)
    tr_ax = translate(q_axioms_conjunction(), env)
    tr_psi = translate(psi, env)
    wvar = env.fresh("wbar")
    created = set(env.provenance) - before

    def unparam_term(t: Term) -> Term:
        if isinstance(t, Param) and t.name == T_PARAM:
            return Var(wvar)
        if isinstance(t, (Add, Mul, Sub)):
            return type(t)(unparam_term(t.left), unparam_term(t.right))
        if isinstance(t, Pow):
            return Pow(unparam_term(t.base), t.exp)
        return t

    body = Implies(
        map_terms(tr_ax, unparam_term), map_terms(tr_psi, unparam_term)
    )
    for name in created:
        prov = env.provenance[name]
        env.provenance[name] = Provenance(prov.kind, tuple(unparam_term(a) for a in prov.args))
    wrapped = Forall(wvar, body)
    assert not formula_params(wrapped)
    return WrappedSentence(formula=wrapped, wvar=wvar)
