from collections.abc import Iterator, Mapping

from domain.core import Node
from domain.formulas import Formula
from domain.terms import Term, Var
from herbrand.core.options import Availability
from herbrand.skolem.skolemize import Skolemized
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory

Binding = dict[str, Term]


class SubstitutionError(ValueError):
    """A substitution misses a variable or replaces one with an open term."""


class Instance(Node):
    """A ground Skolem instance of the axiom with index `axiom`."""

    axiom: int
    substitution: tuple[tuple[str, Term], ...] = ()
    formula: Formula

    def __str__(self) -> str:
        return str(self.formula)


def instance(open_form: Formula, subst: Mapping[str, Term]) -> Formula:
    """
    Simultaneously substitute ground terms for the free variables of an open
    formula.
    """
    if missing := [v for v in open_form.free_vars() if v not in subst]:
        raise SubstitutionError(f"No replacement for {', '.join(missing)}")
    for name, t in subst.items():
        if not t.is_ground():
            raise SubstitutionError(f"Replacement {name} -> {t} is not ground")
    return open_form.substitute(subst)


def match_term(pattern: Term, t: Term, binding: Binding) -> Binding | None:
    """Extend `binding` so that the pattern instantiates to `t`, if possible."""
    if isinstance(pattern, Var):
        bound = binding.get(pattern.name)
        if bound is None:
            return {**binding, pattern.name: t}
        return binding if bound == t else None

    children = pattern.children()
    if pattern.symbol != t.symbol or len(children) != len(t.children()):
        return None
    result: Binding | None = binding
    for p, s in zip(children, t.children(), strict=True):
        result = match_term(p, s, result)
        if result is None:
            return None
    return result


def is_available(
    g: Formula, terms: TermSet, availability: Availability = Availability.ATOMIC
) -> bool:
    if availability == Availability.ATOMIC:
        return all(t in terms for t in g.atom_terms())
    return all(t in terms for t in g.term_nodes())


def available_instances(
    theory: Theory,
    terms: TermSet,
    availability: Availability = Availability.ATOMIC,
) -> list[Instance]:
    """
    The Skolem instances of the theory whose substitution values and atom
    arguments (every term node in SUBTERM mode) belong to the term set. Ordered
    by axiom, then lexicographically by the ranks of the substituted terms.
    """
    found: dict[Formula, Instance] = {}
    for index, skolemized in enumerate(theory.skolemized):
        for binding in _bindings(skolemized, terms):
            g = instance(skolemized.open, binding)
            if g in found or not is_available(g, terms, availability):
                continue
            found[g] = Instance(
                axiom=index,
                substitution=tuple((v, binding[v]) for v in skolemized.free_vars),
                formula=g,
            )
    return list(found.values())


def _bindings(skolemized: Skolemized, terms: TermSet) -> list[Binding]:
    variables = skolemized.free_vars
    patterns = skolemized.open.atom_terms()

    if any(p.is_ground() and p not in terms for p in patterns):
        return []
    if not variables:
        return [{}]

    by_head: dict[str, list[Term]] = {}
    for t in terms:
        by_head.setdefault(t.symbol, []).append(t)

    # bare variables match everything, so they go last
    open_patterns = sorted(
        (p for p in patterns if not p.is_ground()),
        key=lambda p: (isinstance(p, Var), -p.size()),
    )
    results = [
        b
        for b in _extend({}, open_patterns, terms, by_head)
        if all(b.get(v) in terms for v in variables)
    ]
    results.sort(key=lambda b: tuple(terms.rank(b[v]) for v in variables))
    return results


def _extend(
    binding: Binding,
    patterns: list[Term],
    terms: TermSet,
    by_head: dict[str, list[Term]],
) -> Iterator[Binding]:
    if not patterns:
        yield binding
        return

    pattern, rest = patterns[0], patterns[1:]
    if all(v in binding for v in pattern.free_vars()):
        if pattern.substitute(binding) in terms:
            yield from _extend(binding, rest, terms, by_head)
        return

    candidates = terms if isinstance(pattern, Var) else by_head.get(pattern.symbol, [])
    for t in candidates:
        if (extended := match_term(pattern, t, binding)) is not None:
            yield from _extend(extended, rest, terms, by_head)
