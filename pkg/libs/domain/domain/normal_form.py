"""
Normalization pipeline: bounded-quantifier desugaring, rectified negation normal
form, de Bruijn keys for Skolem symbols and clause form of open formulas.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping

from domain.formulas import (
    QUANTIFIERS,
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Le,
    Not,
    Or,
)
from domain.terms import Term, Var

Atom = Eq | Le
Literal = tuple[Atom, bool]
Clause = list[Literal]


def desugar_bounded(f: Formula) -> Formula:
    """
    Rewrite bounded quantifiers into plain ones:
    exists y <= t A becomes exists y (y <= t & A) and
    forall y <= t A becomes forall y (y <= t -> A).
    When y occurs in t the quantified variable is renamed first.
    """
    match f:
        case BoundedExists() | BoundedForall():
            v, body = _unclash(f)
            guard = Le(l=Var(name=v), r=f.bound)
            if isinstance(f, BoundedExists):
                return Exists(v=v, body=And(l=guard, r=desugar_bounded(body)))
            return Forall(v=v, body=Implies(l=guard, r=desugar_bounded(body)))
        case Eq() | Le():
            return f
    return f.rebuild([desugar_bounded(g) for g in f.subformulas()])


def _unclash(f: BoundedExists | BoundedForall) -> tuple[str, Formula]:
    if f.v not in f.bound.free_vars():
        return f.v, f.body
    used = {*f.body.free_vars(), *f.body.bound_vars(), *f.bound.free_vars()}
    i = 0
    while (name := f"{f.v}_{i}") in used:
        i += 1
    return name, f.body.substitute({f.v: Var(name=name)})


def nnf(f: Formula, negate: bool = False) -> Formula:
    """
    Negation normal form: implications removed and negations pushed onto the
    atoms by de Morgan's laws and quantifier duality.
    """
    match f:
        case Eq() | Le():
            return Not(f=f) if negate else f
        case Not(f=g):
            return nnf(g, not negate)
        case And(l=lhs, r=rhs):
            if negate:
                return Or(l=nnf(lhs, True), r=nnf(rhs, True))
            return And(l=nnf(lhs), r=nnf(rhs))
        case Or(l=lhs, r=rhs):
            if negate:
                return And(l=nnf(lhs, True), r=nnf(rhs, True))
            return Or(l=nnf(lhs), r=nnf(rhs))
        case Implies(l=lhs, r=rhs):
            if negate:
                return And(l=nnf(lhs), r=nnf(rhs, True))
            return Or(l=nnf(lhs, True), r=nnf(rhs))
        case Forall(v=v, body=body):
            if negate:
                return Exists(v=v, body=nnf(body, True))
            return Forall(v=v, body=nnf(body))
        case Exists(v=v, body=body):
            if negate:
                return Forall(v=v, body=nnf(body, True))
            return Exists(v=v, body=nnf(body))
    return nnf(desugar_bounded(f), negate)


def _rename(
    f: Formula, env: Mapping[str, Term], fresh: Callable[[], str]
) -> Formula:
    match f:
        case Eq() | Le():
            return f.substitute(env)
        case Forall(v=v, body=body) | Exists(v=v, body=body):
            name = fresh()
            inner = _rename(body, {**env, v: Var(name=name)}, fresh)
            return f.rebuild([inner]).model_copy(update={"v": name})
    return f.rebuild([_rename(g, env, fresh) for g in f.subformulas()])


def rectify(f: Formula) -> Formula:
    """
    Rename the quantified variables to v0, v1, ... in leftmost-quantifier
    order, skipping any name already used by a free variable.
    """
    taken = set(f.free_vars())
    counter = iter(range(1 << 62))

    def fresh() -> str:
        while (name := f"v{next(counter)}") in taken:
            continue
        return name

    return _rename(f, {}, fresh)


def rnnf(f: Formula) -> Formula:
    """Rectified negation normal form with canonical variable names."""
    return rectify(nnf(desugar_bounded(f)))


def canonical_key(f: Formula) -> Formula:
    """
    De Bruijn style key of a formula: a quantifier at nesting depth d binds
    `b{d}` and the free variables become a0, a1, ... in order of first
    occurrence. Alpha-equivalent formulas get identical keys.
    """
    free = {name: Var(name=f"a{i}") for i, name in enumerate(f.free_vars())}
    return _debruijn(f, free, 0)


def _debruijn(f: Formula, env: Mapping[str, Term], depth: int) -> Formula:
    match f:
        case Eq() | Le():
            return f.substitute(env)
        case BoundedForall(v=v, bound=bound, body=body) | BoundedExists(
            v=v, bound=bound, body=body
        ):
            name = f"b{depth}"
            inner = _debruijn(body, {**env, v: Var(name=name)}, depth + 1)
            return f.model_copy(
                update={"v": name, "bound": bound.substitute(env), "body": inner}
            )
        case Forall(v=v, body=body) | Exists(v=v, body=body):
            name = f"b{depth}"
            inner = _debruijn(body, {**env, v: Var(name=name)}, depth + 1)
            return f.rebuild([inner]).model_copy(update={"v": name})
    return f.rebuild([_debruijn(g, env, depth) for g in f.subformulas()])


def to_cnf(f: Formula) -> list[Clause]:
    """
    Clause form of a quantifier-free formula: a list of clauses, each a list of
    (atom, polarity) literals. Conjunctions are distributed over disjunctions,
    which is fine for the short instances of Skolemized axioms.
    """
    if any(isinstance(n, QUANTIFIERS) for n in f.nodes()):
        raise ValueError(f"Clause form needs a quantifier-free formula: {f}")
    return _cnf(nnf(f))


def _cnf(f: Formula) -> list[Clause]:
    match f:
        case Eq() | Le():
            return [[(f, True)]]
        case Not(f=Eq() | Le() as atom):
            return [[(atom, False)]]
        case And(l=lhs, r=rhs):
            return _cnf(lhs) + _cnf(rhs)
        case Or(l=lhs, r=rhs):
            return [a + b for a in _cnf(lhs) for b in _cnf(rhs)]
    raise ValueError(f"Unexpected node in negation normal form: {f}")
