from loguru import logger

from domain.core import Schema
from domain.formulas import Formula, Not
from domain.normal_form import rnnf
from domain.syntax import parse_formula, parse_term
from domain.terms import Term
from herbrand.core.options import Availability, Strategy
from herbrand.evaluation.pre_evaluation import TermNotInDomainError
from herbrand.search.outcome import (
    Inconsistent,
    SearchBudgetError,
    SearchOutcome,
    Witness,
)
from herbrand.search.solver import SearchBudget, find_evaluation
from herbrand.skolem.presets import Preset, preset
from herbrand.skolem.registry import DeclaringSymbols, SkolemRegistry
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory


def negated_instance(psi: Formula, t: Term) -> Formula:
    """The ground constraint not psi(t), in negation normal form."""
    if not psi.is_open():
        raise ValueError(f"psi must be quantifier-free, got {psi}")
    free = psi.free_vars()
    if len(free) > 1:
        raise ValueError(f"psi must have one free variable, {psi} has {free}")
    ground = psi.substitute({free[0]: t}) if free else psi
    return rnnf(Not(f=ground))


def check_universal_outcome(
    theory: Theory,
    psi: Formula,
    t: Term,
    terms: TermSet,
    strategy: Strategy = Strategy.PROPAGATE,
    availability: Availability = Availability.ATOMIC,
    budget: SearchBudget | None = None,
) -> SearchOutcome:
    """
    Search for an evaluation on `terms` satisfying the theory together with
    not psi(t). A witness is a countermodel to psi(t).

    Raises:
        TermNotInDomainError: `t`, or an atom argument of psi(t), is not in
            `terms`.
    """
    if t not in terms:
        raise TermNotInDomainError(t)
    constraint = negated_instance(psi, t)
    for s in constraint.atom_terms():
        if s not in terms:
            raise TermNotInDomainError(s)

    extended = theory.extend(f"{theory.name} + not psi", [constraint])
    return find_evaluation(extended, terms, strategy, availability, budget)


def check_universal(
    theory: Theory,
    psi: Formula,
    t: Term,
    terms: TermSet,
    strategy: Strategy = Strategy.PROPAGATE,
    availability: Availability = Availability.ATOMIC,
    budget: SearchBudget | None = None,
) -> bool:
    """
    True when every T-evaluation on `terms` satisfies psi(t), that is when no
    evaluation satisfies the available instances together with not psi(t).

    Raises:
        TermNotInDomainError: `t` is not in `terms`.
        SearchBudgetError: The search stopped before a verdict.
    """
    outcome = check_universal_outcome(
        theory, psi, t, terms, strategy, availability, budget
    )
    match outcome:
        case Inconsistent():
            return True
        case Witness(evaluation=p):
            logger.info(f"[{theory.name}] Countermodel to {psi} at {t}: {p}")
            return False
    raise SearchBudgetError(
        f"[{theory.name}] No verdict on {psi} at {t}: {outcome.stats.reason}"
    )


class RemarkCheck(Schema):
    """A consequence of T1 with a term set on which it has a Herbrand proof."""

    description: str
    psi: str
    terms: list[str]


# `$t` is the arbitrary term psi is checked at, `$s` a second arbitrary term
REMARK_CHECKS = [
    RemarkCheck(
        description="successor is never zero",
        psi="S(x) != 0",
        terms=["0", "$t", "S($t)", "$t + 0"],
    ),
    RemarkCheck(
        description="successor is injective",
        psi="S(x) = S($s) -> x = $s",
        terms=["$t", "$s", "S($t)", "S($s)"],
    ),
    RemarkCheck(
        description="successor is strictly above",
        psi="!(S(x) <= x)",
        terms=["$t", "S($t)"],
    ),
    RemarkCheck(
        description="nonzero elements have a predecessor",
        psi="x != 0 -> x = S($d(S(0), x))",
        terms=[
            "0",
            "S(0)",
            "$t",
            "S($t)",
            "$t + 0",
            "$d(S(0), $t)",
            "$d(S(0), $t) + 0",
            "$d(S(0), $t) + S(0)",
            "S($d(S(0), $t))",
            "S($d(S(0), $t) + 0)",
        ],
    ),
]


def remark_checks(
    budget: SearchBudget | None = None,
) -> list[tuple[RemarkCheck, bool]]:
    """Run every remark check against a fresh copy of T1."""
    results: list[tuple[RemarkCheck, bool]] = []
    for check in REMARK_CHECKS:
        registry = SkolemRegistry()
        theory = preset(Preset.T1, registry)
        symbols = DeclaringSymbols(registry)
        terms = TermSet.of(parse_term(text, symbols) for text in check.terms)
        psi = parse_formula(check.psi, symbols)
        t = parse_term("$t", symbols)
        holds = check_universal(theory, psi, t, terms, budget=budget)
        logger.info(f"[T1] {check.description}: {holds}")
        results.append((check, holds))
    return results
