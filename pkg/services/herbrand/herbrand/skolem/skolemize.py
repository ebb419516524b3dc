from collections.abc import Mapping

from domain.core import Node
from domain.formulas import Eq, Exists, Forall, Formula, Le, Not
from domain.normal_form import rnnf
from domain.terms import SkolemApp, Term, Var
from herbrand.skolem.registry import SkolemRegistry


class Skolemized(Node):
    """The stages of Skolemizing a closed formula."""

    source: Formula
    rnnf: Formula
    skolem: Formula
    open: Formula
    free_vars: tuple[str, ...]


def skolemize(f: Formula, registry: SkolemRegistry) -> Skolemized:
    """
    Skolemize a closed formula. Existentials are replaced, leftmost first, by
    Skolem terms over the free variables of the existential subformula; the
    universal quantifiers are then dropped.

    Args:
        f: A closed formula, normalized to RNNF first.
        registry: Where the Skolem symbols are registered.

    Returns:
        The RNNF, the Skolem form with universals kept and the open form with the
        formerly universal variables in quantifier order.
    """
    if free := f.free_vars():
        raise ValueError(f"Only closed formulas can be Skolemized, {f} has {free}")

    normal = rnnf(f)
    skolem = _replace_existentials(normal, {}, registry)
    open_form = _strip_universals(skolem)
    occurring = set(open_form.free_vars())
    universals = [
        n.v for n in skolem.nodes() if isinstance(n, Forall) and n.v in occurring
    ]
    return Skolemized(
        source=f,
        rnnf=normal,
        skolem=skolem,
        open=open_form,
        free_vars=tuple(universals),
    )


def _replace_existentials(
    f: Formula, env: Mapping[str, Term], registry: SkolemRegistry
) -> Formula:
    match f:
        case Eq() | Le() | Not():
            return f.substitute(env)
        case Exists(v=v, body=body):
            symbol = registry.register(f)
            args = tuple(Var(name=x).substitute(env) for x in f.free_vars())
            witness = SkolemApp(symbol_id=symbol.symbol_id, args=args)
            return _replace_existentials(body, {**env, v: witness}, registry)
    return f.rebuild([_replace_existentials(g, env, registry) for g in f.subformulas()])


def _strip_universals(f: Formula) -> Formula:
    if isinstance(f, Forall):
        return _strip_universals(f.body)
    return f.rebuild([_strip_universals(g) for g in f.subformulas()])
