"""Formula evaluation at desk scale.

Three modes:

* arith: exact evaluation over the positive integers with quantifiers
  bounded to [1..N].  Equality pins (a conjunct x = <closed term> under
  an existential) are solved directly, and subformula verdicts are
  memoized on their free-variable assignments, which makes the
  lcm-based multiplication formula cheap to sweep.

* ring-bounded: exhaustive search over all reduced fractions with
  numerator and denominator degree <= d, in graded order
  (deg den, deg num, coefficients).  The universe size is reported and
  the search refuses to start above the configured point limit.

* ring-witness: translated sentences are decided by constructing
  witnesses for the translator's existentials (Artin-Schreier solver,
  addition/divisibility witnesses, coded-domain sweeps) and verifying
  every atom by exact arithmetic.  True verdicts for existential claims
  are sound; every place a bound was used is recorded as a caveat, and
  a missing witness yields the verdict "unknown", never a default.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .artin_schreier import solve_as
from .errors import SearchSpaceExceeded, SortError
from .fields import FieldCtx
from .formulas import (
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
    free_vars,
    print_formula,
    term_vars,
)
from .integer_model import (
    ModelParams,
    check_B_triple,
    check_X_pair,
    decode,
    divides_witness,
    encode,
)
from .poly import Poly, all_polys
from .ratfun import RatFun
from .translate import TranslationEnv


@dataclass(frozen=True)
class EvalConfig:
    int_bound: int = 30
    degree: int = 3
    s_max: int = 6
    max_points: int = 10_000_000

    def __post_init__(self):
        if min(self.int_bound, self.degree, self.s_max) < 1:
            raise ValueError("all bounds must be >= 1")

    @property
    def helper_s_max(self) -> int:
        """Sweep bound for translator-introduced sums (up to 2*s_max)."""
        return 2 * self.s_max + 2

    @property
    def mul_s_max(self) -> int:
        """Sweep bound inside multiplication subformulas: lcm(x, x+1) of
        values up to the helper bound."""
        x = self.helper_s_max
        return x * x + x


@dataclass
class WitnessBundle:
    """Explicit witness values for named existentials, with provenance."""

    values: dict[str, RatFun]
    note: str = ""


# -- arithmetic evaluation ------------------------------------------------


def _int_term(t: Term, env: dict) -> int:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, Add):
        return _int_term(t.left, env) + _int_term(t.right, env)
    if isinstance(t, Mul):
        return _int_term(t.left, env) * _int_term(t.right, env)
    if isinstance(t, Pow):
        return _int_term(t.base, env) ** t.exp
    raise SortError(f"not an arithmetic term: {t!r}")


def _conjuncts(f: Formula) -> Iterator[Formula]:
    if isinstance(f, And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


_MISSING = object()


class ArithEvaluator:
    """Reusable bounded evaluator over the positive integers.

    Subformula verdicts are memoized on (node identity, values of the
    node's free variables), so sweeping one formula over many argument
    tuples shares all the inner quantifier work.  Keep the formula object
    alive while the evaluator is in use (caches key on object identity).
    """

    def __init__(self, bound: int):
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.bound = bound
        self.memo: dict = {}
        self._fv: dict[int, tuple[str, ...]] = {}
        self._pin_cache: dict[int, object] = {}

    def fv(self, f: Formula) -> tuple[str, ...]:
        got = self._fv.get(id(f))
        if got is None:
            got = tuple(sorted(free_vars(f)))
            self._fv[id(f)] = got
        return got

    def evaluate(self, f: Formula, env: Optional[dict] = None) -> bool:
        return self._run(f, dict(env or {}))

    def _run(self, f: Formula, env: dict) -> bool:
        if isinstance(f, Eq):
            return _int_term(f.left, env) == _int_term(f.right, env)
        if isinstance(f, Divides):
            return _int_term(f.right, env) % _int_term(f.left, env) == 0
        key = (id(f),) + tuple(env[v] for v in self.fv(f))
        got = self.memo.get(key)
        if got is None:
            got = self._eval(f, env)
            self.memo[key] = got
        return got

    def _eval(self, f: Formula, env: dict) -> bool:
        if isinstance(f, Eq):
            return _int_term(f.left, env) == _int_term(f.right, env)
        if isinstance(f, Divides):
            return _int_term(f.right, env) % _int_term(f.left, env) == 0
        if isinstance(f, Not):
            return not self._run(f.body, env)
        if isinstance(f, And):
            return self._run(f.left, env) and self._run(f.right, env)
        if isinstance(f, Or):
            return self._run(f.left, env) or self._run(f.right, env)
        if isinstance(f, Implies):
            return (not self._run(f.left, env)) or self._run(f.right, env)
        if isinstance(f, (Forall, Exists)):
            var = f.var
            saved = env.get(var, _MISSING)
            try:
                if isinstance(f, Forall):
                    for v in range(1, self.bound + 1):
                        env[var] = v
                        if not self._run(f.body, env):
                            return False
                    return True
                pin = self._pin_term(f)
                if pin is not None and term_vars(pin) <= set(env):
                    value = _int_term(pin, env)
                    if not 1 <= value <= self.bound:
                        return False
                    env[var] = value
                    return self._run(f.body, env)
                for v in range(1, self.bound + 1):
                    env[var] = v
                    if self._run(f.body, env):
                        return True
                return False
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
        raise SortError(f"unsupported arithmetic construct {f!r}")

    def _pin_term(self, f: Exists):
        """A closed defining term for the quantified variable, if some
        conjunct reads x = <term without x>."""
        got = self._pin_cache.get(id(f))
        if got is None:
            got = False
            for g in _conjuncts(f.body):
                if not isinstance(g, Eq):
                    continue
                for lhs, rhs in ((g.left, g.right), (g.right, g.left)):
                    if (
                        isinstance(lhs, Var)
                        and lhs.name == f.var
                        and f.var not in term_vars(rhs)
                    ):
                        got = rhs
                        break
                if got is not False:
                    break
            self._pin_cache[id(f)] = got
        return None if got is False else got


def eval_arith(f: Formula, bound: int, env: Optional[dict] = None) -> bool:
    """Truth of an arithmetic formula with quantifiers over [1..bound]."""
    return ArithEvaluator(bound).evaluate(f, env)


# -- ring universes ---------------------------------------------------------


def search_space_estimate(ctx: FieldCtx, degree: int) -> int:
    """The reported per-quantifier universe size, q^(2(d+1))."""
    return ctx.q ** (2 * (degree + 1))


def enumerate_ratfuns(ctx: FieldCtx, degree: int) -> Iterator[RatFun]:
    """All reduced f/g with deg f, deg g <= degree and g monic, in graded
    order (deg den, deg num, coefficients); the zero value comes first."""
    one = Poly.one(ctx)
    for den in all_polys(ctx, degree, monic=True):
        if den.is_one():
            yield RatFun.zero(ctx)
        for num in all_polys(ctx, degree):
            if num.is_zero():
                continue
            if den.degree > 0 and num.gcd(den).degree > 0:
                continue
            yield RatFun(num, den, reduce=False)


def _count_quantifiers(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return 1 + _count_quantifiers(f.body)
    if isinstance(f, Not):
        return _count_quantifiers(f.body)
    if isinstance(f, (And, Or, Implies)):
        return _count_quantifiers(f.left) + _count_quantifiers(f.right)
    return 0


def _ring_term(t: Term, env: dict, params: ModelParams, param_values: dict) -> RatFun:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise ValueError(f"unbound variable {t.name}") from None
    if isinstance(t, Param):
        if t.name == "t":
            return params.t
        try:
            return param_values[t.name]
        except KeyError:
            raise ValueError(f"unbound parameter {t.name}") from None
    if isinstance(t, IntLit):
        if t.value == 0:
            return RatFun.zero(params.ctx)
        if t.value == 1:
            return RatFun.one(params.ctx)
        raise SortError(f"ring literal {t.value} (only 0 and 1 are ring constants)")
    if isinstance(t, Add):
        return _ring_term(t.left, env, params, param_values) + _ring_term(
            t.right, env, params, param_values
        )
    if isinstance(t, Sub):
        return _ring_term(t.left, env, params, param_values) - _ring_term(
            t.right, env, params, param_values
        )
    if isinstance(t, Mul):
        return _ring_term(t.left, env, params, param_values) * _ring_term(
            t.right, env, params, param_values
        )
    if isinstance(t, Pow):
        return _ring_term(t.base, env, params, param_values) ** t.exp
    raise SortError(f"not a ring term: {t!r}")


def eval_ring_bounded(
    f: Formula,
    params: ModelParams,
    cfg: EvalConfig,
    param_values: Optional[dict] = None,
) -> bool:
    """Exhaustive truth over the finite universe of degree-bounded fractions.

    Deterministic, and monotone in the degree bound for purely existential
    sentences.  Raises SearchSpaceExceeded above cfg.max_points.
    """
    param_values = param_values or {}
    per_var = search_space_estimate(params.ctx, cfg.degree)
    nquant = _count_quantifiers(f)
    points = per_var ** nquant if nquant else 1
    if points > cfg.max_points:
        raise SearchSpaceExceeded(points, cfg.max_points)
    universe = list(enumerate_ratfuns(params.ctx, cfg.degree))

    def ev(g: Formula, env: dict) -> bool:
        if isinstance(g, Eq):
            return _ring_term(g.left, env, params, param_values) == _ring_term(
                g.right, env, params, param_values
            )
        if isinstance(g, XMem):
            x = _ring_term(g.base, env, params, param_values)
            y = _ring_term(g.power, env, params, param_values)
            return check_X_pair(params, x, y) is not None
        if isinstance(g, BMem):
            tp = _ring_term(g.tpow, env, params, param_values)
            y = _ring_term(g.ypow, env, params, param_values)
            x = _ring_term(g.x, env, params, param_values)
            return check_B_triple(params, tp, y, x)
        if isinstance(g, Divides):
            raise SortError("divides is not a ring atom")
        if isinstance(g, Not):
            return not ev(g.body, env)
        if isinstance(g, And):
            return ev(g.left, env) and ev(g.right, env)
        if isinstance(g, Or):
            return ev(g.left, env) or ev(g.right, env)
        if isinstance(g, Implies):
            return (not ev(g.left, env)) or ev(g.right, env)
        if isinstance(g, Forall):
            for val in universe:
                env2 = dict(env)
                env2[g.var] = val
                if not ev(g.body, env2):
                    return False
            return True
        if isinstance(g, Exists):
            for val in universe:
                env2 = dict(env)
                env2[g.var] = val
                if ev(g.body, env2):
                    return True
            return False
        raise SortError(f"unsupported construct {g!r}")

    return ev(f, {})


# -- witness-mode evaluation -------------------------------------------------


TRUE, FALSE, UNKNOWN = True, False, None


@dataclass
class EvalOutcome:
    verdict: str  # "true" | "false" | "unknown"
    caveats: list[str] = field(default_factory=list)
    witnesses: dict[str, str] = field(default_factory=dict)
    missing: list[str] = field(default_factory=list)

    @property
    def is_true(self) -> bool:
        return self.verdict == "true"

    @property
    def is_false(self) -> bool:
        return self.verdict == "false"


class _WitnessEval:
    def __init__(
        self,
        env: TranslationEnv,
        cfg: EvalConfig,
        bundles: Sequence[WitnessBundle],
        param_values: Optional[dict] = None,
    ):
        self.env = env
        self.cfg = cfg
        self.bundles = list(bundles)
        self.params = env.params
        self.param_values = param_values or {}
        self.caveats: set[str] = set()
        self.witnesses: dict[str, str] = {}
        self.missing: list[str] = []
        self.memo: dict = {}
        self.fv_cache: dict[int, frozenset[str]] = {}

    # generator-backed candidate streams; the bool tells whether failure of
    # every candidate refutes the existential outright
    def _candidates(self, name: str, asg: dict) -> tuple[list[RatFun], bool, bool]:
        """Returns (candidates, exhaustive, swept)."""
        out = []
        for b in self.bundles:
            if name in b.values:
                out.append(b.values[name])
        prov = self.env.provenance.get(name)
        kind = prov.kind if prov else None
        params = self.params
        t = params.t

        def val(term):
            return _ring_term(term, asg, params, self.param_values)

        if kind in ("domain-u", "domain-v"):
            w = val(prov.args[0])
            if w.is_zero():
                return out, True, False
            a = (t.inverse() - w.inverse()) if kind == "domain-u" else (t - w)
            sol = solve_as(a, params.r)
            if sol is not None:
                out.append(sol)
            return out, True, False  # the solver is a decision procedure
        if kind == "add-x":
            out.append(val(prov.args[0]) + RatFun.one(params.ctx))
            return out, True, False
        if kind == "add-z":
            xa, xc = (val(a) for a in prov.args)
            out.append((xa + RatFun.one(params.ctx)) * xc)
            return out, True, False
        if kind == "div-y":
            s1 = decode(params, val(prov.args[0]))
            if s1 is not None:
                out.append(val(prov.args[1]).frobenius_power(params.r * s1))
                return out, True, False
            return out, True, False
        if kind == "div-x":
            s1 = decode(params, val(prov.args[0]))
            s2 = decode(params, val(prov.args[1]))
            if s1 is not None and s2 is not None:
                w = divides_witness(params, s1, s2)
                if w is not None:
                    out.append(w)
                    return out, False, False
            out.extend(self._coded_sweep(self.cfg.s_max))
            return out, False, True
        if kind == "flat-sum":
            a = decode(params, val(prov.args[0]))
            b = decode(params, val(prov.args[1]))
            if a is not None and b is not None:
                out.append(encode(params, a + b).value)
            out.extend(self._coded_sweep(self.cfg.helper_s_max))
            return out, False, True
        if kind == "mul-domain":
            out.extend(self._coded_sweep(self.cfg.mul_s_max))
            return out, False, True
        if kind == "domain":
            out.extend(self._coded_sweep(self.cfg.s_max))
            return out, False, True
        return out, False, False

    def _coded_sweep(self, bound: int) -> list[RatFun]:
        return [encode(self.params, s).value for s in range(1, bound + 1)]

    def _forall_domain(self, name: str) -> tuple[list[RatFun], str]:
        prov = self.env.provenance.get(name)
        kind = prov.kind if prov else None
        if kind == "mul-domain":
            bound = self.cfg.mul_s_max
        else:
            bound = self.cfg.s_max
        label = (
            f"forall {name}: swept coded domain s<={bound}"
            if kind in ("domain", "mul-domain")
            else f"forall {name}: unrestricted variable checked on coded instances s<={bound} only"
        )
        return self._coded_sweep(bound), label

    def fv(self, f: Formula) -> frozenset[str]:
        got = self.fv_cache.get(id(f))
        if got is None:
            got = free_vars(f)
            self.fv_cache[id(f)] = got
        return got

    def run(self, f: Formula, asg: dict):
        key = (id(f), tuple(sorted((v, asg[v]) for v in self.fv(f) if v in asg)))
        if key in self.memo:
            return self.memo[key]
        got = self._eval(f, asg)
        self.memo[key] = got
        return got

    def _eval(self, f: Formula, asg: dict):
        params = self.params
        pv = self.param_values
        if isinstance(f, Eq):
            return _ring_term(f.left, asg, params, pv) == _ring_term(f.right, asg, params, pv)
        if isinstance(f, XMem):
            return (
                check_X_pair(
                    params,
                    _ring_term(f.base, asg, params, pv),
                    _ring_term(f.power, asg, params, pv),
                )
                is not None
            )
        if isinstance(f, BMem):
            return check_B_triple(
                params,
                _ring_term(f.tpow, asg, params, pv),
                _ring_term(f.ypow, asg, params, pv),
                _ring_term(f.x, asg, params, pv),
            )
        if isinstance(f, Divides):
            raise SortError("divides is not a ring atom")
        if isinstance(f, Not):
            r = self.run(f.body, asg)
            return None if r is None else (not r)
        if isinstance(f, And):
            l = self.run(f.left, asg)
            if l is FALSE:
                return FALSE
            r = self.run(f.right, asg)
            if r is FALSE:
                return FALSE
            if l is TRUE and r is TRUE:
                return TRUE
            return UNKNOWN
        if isinstance(f, Or):
            l = self.run(f.left, asg)
            if l is TRUE:
                return TRUE
            r = self.run(f.right, asg)
            if r is TRUE:
                return TRUE
            if l is FALSE and r is FALSE:
                return FALSE
            return UNKNOWN
        if isinstance(f, Implies):
            r = self.run(f.right, asg)
            if r is TRUE:
                return TRUE
            l = self.run(f.left, asg)
            if l is FALSE:
                return TRUE
            if l is TRUE and r is FALSE:
                return FALSE
            return UNKNOWN
        if isinstance(f, Forall):
            domain, label = self._forall_domain(f.var)
            saw_unknown = False
            for v in domain:
                asg2 = dict(asg)
                asg2[f.var] = v
                r = self.run(f.body, asg2)
                if r is FALSE:
                    return FALSE
                if r is None:
                    saw_unknown = True
            if saw_unknown:
                return UNKNOWN
            self.caveats.add(label)
            return TRUE
        if isinstance(f, Exists):
            cands, exhaustive, swept = self._candidates(f.var, asg)
            saw_unknown = False
            for v in cands:
                asg2 = dict(asg)
                asg2[f.var] = v
                r = self.run(f.body, asg2)
                if r is TRUE:
                    self.witnesses[f.var] = str(v)
                    return TRUE
                if r is None:
                    saw_unknown = True
            if saw_unknown:
                return UNKNOWN
            if exhaustive:
                return FALSE
            if cands or swept:
                self.caveats.add(f"exists {f.var}: refuted only up to the sweep bound")
                return FALSE
            self.missing.append(f.var)
            return UNKNOWN
        raise SortError(f"unsupported construct {f!r}")


def eval_ring_witness(
    f: Formula,
    env: TranslationEnv,
    cfg: EvalConfig,
    bundles: Sequence[WitnessBundle] = (),
    bindings: Optional[dict] = None,
    param_values: Optional[dict] = None,
) -> EvalOutcome:
    ev = _WitnessEval(env, cfg, bundles, param_values)
    res = ev.run(f, dict(bindings or {}))
    verdict = "unknown" if res is None else ("true" if res else "false")
    return EvalOutcome(
        verdict=verdict,
        caveats=sorted(ev.caveats),
        witnesses=ev.witnesses,
        missing=ev.missing,
    )


# -- reports -------------------------------------------------------------


def formula_hash(f: Formula) -> str:
    return hashlib.sha256(print_formula(f).encode()).hexdigest()[:16]


@dataclass
class EvalReport:
    formula_hash: str
    mode: str
    bounds: dict
    verdict: str
    witnesses: dict
    caveats: list
    wall_time_ms: float

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def timed_report(mode: str, f: Formula, bounds: dict, thunk) -> EvalReport:
    start = time.perf_counter()
    verdict, witnesses, caveats = thunk()
    elapsed = (time.perf_counter() - start) * 1000.0
    return EvalReport(
        formula_hash=formula_hash(f),
        mode=mode,
        bounds=bounds,
        verdict=verdict,
        witnesses=witnesses,
        caveats=caveats,
        wall_time_ms=round(elapsed, 3),
    )
