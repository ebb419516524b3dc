from collections.abc import Sequence

from domain.formulas import And, Eq, Formula, Implies, Le, Not, Or
from herbrand.core.options import Availability
from herbrand.evaluation.pre_evaluation import PreEvaluation, TermNotInDomainError
from herbrand.skolem.instances import Instance, available_instances
from herbrand.skolem.theory import Theory


def satisfies(p: PreEvaluation, g: Formula) -> bool:
    """
    Truth of a ground open formula in an evaluation: t = s holds when t ~ s, and
    t <= s when t ~ s or t is strictly below s.

    Raises:
        TermNotInDomainError: An atom argument is not covered by `p`, whether or
            not its branch decides the result.
    """
    check_domain(p, g)
    return _holds(p, g)


def _holds(p: PreEvaluation, g: Formula) -> bool:
    match g:
        case Eq(l=lhs, r=rhs):
            return p.eq(lhs, rhs)
        case Le(l=lhs, r=rhs):
            return p.le(lhs, rhs)
        case Not(f=f):
            return not _holds(p, f)
        case And(l=lhs, r=rhs):
            return _holds(p, lhs) and _holds(p, rhs)
        case Or(l=lhs, r=rhs):
            return _holds(p, lhs) or _holds(p, rhs)
        case Implies(l=lhs, r=rhs):
            return not _holds(p, lhs) or _holds(p, rhs)
    raise ValueError(f"Only ground open formulas can be evaluated, got {g}")


def check_domain(p: PreEvaluation, g: Formula) -> None:
    for t in g.atom_terms():
        if t not in p:
            raise TermNotInDomainError(t)


def is_T_evaluation(
    p: PreEvaluation,
    theory: Theory,
    instances: Sequence[Instance] | None = None,
    availability: Availability = Availability.ATOMIC,
) -> bool:
    """True when `p` satisfies every instance of the theory available on it."""
    if instances is None:
        instances = available_instances(theory, p.domain, availability)
    return all(satisfies(p, i.formula) for i in instances)
