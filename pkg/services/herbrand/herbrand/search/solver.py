import time
from collections.abc import Callable, Iterator, Sequence

from loguru import logger
from pydantic import PositiveFloat, PositiveInt

from domain.core import Schema
from domain.terms import Term
from herbrand.core.options import Availability, Strategy
from herbrand.core.settings import herbrand_settings
from herbrand.evaluation.congruence import Evaluation, is_evaluation
from herbrand.evaluation.pre_evaluation import PreEvaluation, enumerate_pre_evaluations
from herbrand.evaluation.satisfaction import is_T_evaluation, satisfies
from herbrand.search.backtrack import (
    Backtracker,
    BudgetExceededError,
    Row,
    any_solution,
    first_solution,
    row_key,
    to_blocks,
)
from herbrand.search.closure import propagate
from herbrand.search.outcome import (
    BudgetExhausted,
    InconsistencyCertificate,
    Inconsistent,
    Method,
    SearchOutcome,
    SearchStats,
    Witness,
)
from herbrand.search.problem import SearchProblem, Source
from herbrand.skolem.instances import Instance
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory


class SearchBudget(Schema):
    max_nodes: PositiveInt = 200_000
    max_seconds: PositiveFloat = 60.0
    jobs: PositiveInt = 1
    brute_max_terms: PositiveInt = 7
    core_attempts: PositiveInt = 64

    @classmethod
    def from_settings(cls) -> "SearchBudget":
        settings = herbrand_settings()
        return cls(
            max_nodes=settings.max_nodes,
            max_seconds=settings.max_seconds,
            jobs=settings.jobs,
            brute_max_terms=settings.brute_max_terms,
            core_attempts=settings.core_attempts,
        )


def find_evaluation(
    theory: Theory,
    terms: TermSet,
    strategy: Strategy = Strategy.PROPAGATE,
    availability: Availability = Availability.ATOMIC,
    budget: SearchBudget | None = None,
) -> SearchOutcome:
    """
    Decide whether some evaluation on `terms` satisfies every instance of the
    theory available there.

    Both strategies return the first witness in the canonical order of
    `enumerate_pre_evaluations`: permutations by rank, then separator
    patterns. `brute` walks that enumeration; `propagate` first runs unit
    propagation, then fixes the row one position at a time with pruned
    depth-first searches.

    Args:
        theory: The Skolemized theory.
        terms: The term set; a singleton is allowed.
        strategy: How to search.
        availability: Which instances count as available.
        budget: Node, time and size limits, from the settings by default.

    Returns:
        A Witness, an Inconsistent with its certificate, or BudgetExhausted when
        a limit was hit first.
    """
    if not len(terms):
        raise ValueError("Cannot search for an evaluation on an empty set")
    budget = budget or SearchBudget.from_settings()

    started = time.monotonic()
    problem = SearchProblem.build(theory, terms, availability)
    stats = SearchStats(
        strategy=strategy,
        terms=len(terms),
        instances=len(problem.instances),
        congruence_pairs=len(problem.pairs),
        clauses=len(problem.clauses),
    )
    logger.debug(
        f"[{theory.name}] {strategy.value} search on {len(terms)} terms, "
        f"{stats.instances} instances, {stats.congruence_pairs} congruence pairs"
    )

    if strategy == Strategy.BRUTE:
        outcome = _brute(problem, budget, stats)
    else:
        outcome = _propagate(problem, budget, stats)

    outcome.stats.seconds = time.monotonic() - started
    if isinstance(outcome, Witness):
        _revalidate(outcome.evaluation, theory, problem)
    logger.debug(f"[{theory.name}] {outcome.status.value} after {stats.nodes} nodes")
    return outcome


def _revalidate(p: Evaluation, theory: Theory, problem: SearchProblem) -> None:
    if not is_evaluation(p, problem.pairs) or not is_T_evaluation(
        p, theory, problem.instances
    ):
        logger.error(f"[{theory.name}] Search returned an invalid witness {p}")
        raise RuntimeError(f"Witness {p} fails re-validation")


def _row_to_evaluation(row: Row, terms: TermSet) -> Evaluation:
    p = PreEvaluation.from_blocks(
        [[terms.terms[r] for r in block] for block in to_blocks(row)]
    )
    return Evaluation(terms=p.terms, separators=p.separators)


def _brute(
    problem: SearchProblem, budget: SearchBudget, stats: SearchStats
) -> SearchOutcome:
    terms = problem.terms
    if len(terms) > budget.brute_max_terms:
        stats.reason = f"brute force is capped at {budget.brute_max_terms} terms"
        logger.warning(stats.reason)
        return BudgetExhausted(terms=terms, instances=problem.instances, stats=stats)

    deadline = time.monotonic() + budget.max_seconds
    rows = (
        enumerate_pre_evaluations(terms)
        if len(terms) > 1
        else [PreEvaluation(terms=tuple(terms))]
    )
    for p in rows:
        stats.nodes += 1
        if stats.nodes % 1024 == 0 and time.monotonic() > deadline:
            stats.reason = "time budget"
            logger.warning(f"Brute force stopped after {stats.nodes} sequences")
            return BudgetExhausted(
                terms=terms, instances=problem.instances, stats=stats
            )
        if is_evaluation(p, problem.pairs) and all(
            satisfies(p, i.formula) for i in problem.instances
        ):
            return Witness(
                evaluation=Evaluation.of(p, problem.pairs),
                terms=terms,
                instances=problem.instances,
                stats=stats,
            )

    return _inconsistent(
        problem, Method.EXHAUSTIVE, problem.instances, list(terms), stats
    )


def _propagate(
    problem: SearchProblem, budget: SearchBudget, stats: SearchStats
) -> SearchOutcome:
    if problem.falsified is not None:
        core = [problem.instances[problem.falsified.index]]
        return _inconsistent(
            problem, Method.PROPAGATION, core, _core_terms(core, []), stats
        )

    prepass = propagate(problem.compiled())
    if prepass.conflict:
        return _propagation_certificate(problem, prepass.used, budget, stats)

    try:
        row, nodes = first_solution(
            problem.with_facts(prepass.facts),
            budget.max_nodes,
            budget.max_seconds,
            budget.jobs,
        )
    except BudgetExceededError as e:
        stats.nodes, stats.reason = e.nodes, e.reason
        logger.warning(f"Search gave up after {e.nodes} nodes ({e.reason})")
        return BudgetExhausted(
            terms=problem.terms, instances=problem.instances, stats=stats
        )

    stats.nodes = nodes
    if row is not None:
        return Witness(
            evaluation=_row_to_evaluation(row, problem.terms),
            terms=problem.terms,
            instances=problem.instances,
            stats=stats,
        )

    def unsatisfiable(subset: list[Instance]) -> bool:
        smaller = SearchProblem(problem.terms, subset, problem.pairs)
        try:
            found = any_solution(
                smaller.compiled(), budget.max_nodes, budget.max_seconds
            )
        except BudgetExceededError:
            return False
        return found is None

    core = problem.instances
    if len(core) <= budget.core_attempts:
        core = greedy_core(core, unsatisfiable, budget.core_attempts)
    return _inconsistent(problem, Method.EXHAUSTIVE, core, list(problem.terms), stats)


def _propagation_certificate(
    problem: SearchProblem,
    used: list[int],
    budget: SearchBudget,
    stats: SearchStats,
) -> Inconsistent:
    indices = sorted(
        {
            problem.origins[i].index
            for i in used
            if problem.origins[i].source == Source.INSTANCE
        }
    )

    def refuted(subset: list[Instance]) -> bool:
        smaller = SearchProblem(problem.terms, subset, problem.pairs)
        return propagate(smaller.compiled()).conflict

    core = greedy_core(
        [problem.instances[i] for i in indices], refuted, budget.core_attempts
    )
    smaller = SearchProblem(problem.terms, core, problem.pairs)
    pair_terms = [
        t
        for i in propagate(smaller.compiled()).used
        if smaller.origins[i].source == Source.CONGRUENCE
        for p in [smaller.pairs[smaller.origins[i].index]]
        for t in (p.t, p.s, p.lhs, p.rhs)
    ]
    core_terms = _core_terms(core, pair_terms)

    on_core = SearchProblem(TermSet.of(core_terms), core)
    if on_core.falsified is None and not propagate(on_core.compiled()).conflict:
        logger.debug("Conflict core needs the whole term set")
        core_terms = list(problem.terms)
    return _inconsistent(problem, Method.PROPAGATION, core, core_terms, stats)


def _core_terms(core: Sequence[Instance], extra: Sequence[Term]) -> list[Term]:
    found: dict[Term, None] = {}
    for inst in core:
        found.update(dict.fromkeys(inst.formula.atom_terms()))
        found.update(dict.fromkeys(t for _, t in inst.substitution))
    found.update(dict.fromkeys(extra))
    return list(TermSet.of(found))


def _inconsistent(
    problem: SearchProblem,
    method: Method,
    core: list[Instance],
    core_terms: list[Term],
    stats: SearchStats,
) -> Inconsistent:
    return Inconsistent(
        certificate=InconsistencyCertificate(
            terms=problem.terms,
            instances=problem.instances,
            method=method,
            conflict_core=core,
            core_terms=core_terms,
        ),
        stats=stats,
    )


def greedy_core(
    instances: Sequence[Instance],
    unsatisfiable: Callable[[list[Instance]], bool],
    attempts: int,
) -> list[Instance]:
    """
    Drop instances one at a time, last first, while the rest stays
    unsatisfiable. Stops after `attempts` checks, so the result is small but not
    necessarily minimal.
    """
    core = list(instances)
    for inst in reversed(list(instances)):
        if attempts <= 0:
            break
        attempts -= 1
        rest = [i for i in core if i != inst]
        if rest and unsatisfiable(rest):
            core = rest
    return core


def find_all(
    theory: Theory,
    terms: TermSet,
    distinct_structures: bool = False,
    availability: Availability = Availability.ATOMIC,
) -> Iterator[Evaluation]:
    """
    Every T-evaluation on the set in canonical order. With `distinct_structures`
    only the row listing each class in rank order is produced, one per ordered
    partition. The rows are collected before the first one is yielded.
    """
    if not len(terms):
        raise ValueError("Cannot search for evaluations on an empty set")
    problem = SearchProblem.build(theory, terms, availability)
    if problem.falsified is not None:
        return
    search = Backtracker(problem.compiled(), sorted_blocks=distinct_structures)
    rows = sorted(search.solutions(), key=row_key)
    logger.debug(f"[{theory.name}] Enumerated {len(rows)} after {search.nodes} nodes")
    for row in rows:
        yield _row_to_evaluation(row, terms)
