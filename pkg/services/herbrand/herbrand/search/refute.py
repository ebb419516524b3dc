from loguru import logger
from tqdm import tqdm

from herbrand.core.options import Availability, HullMode, Strategy
from herbrand.search.outcome import (
    BudgetExhausted,
    Inconsistent,
    SearchOutcome,
    SearchStats,
    Witness,
)
from herbrand.search.solver import SearchBudget, find_evaluation
from herbrand.skolem.hull import HullTooLargeError, hull_step, symbol_pool
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory


def herbrand_refute(
    theory: Theory,
    base: TermSet,
    max_level: int,
    strategy: Strategy = Strategy.PROPAGATE,
    availability: Availability = Availability.ATOMIC,
    budget: SearchBudget | None = None,
    hull_mode: HullMode = HullMode.THEORY,
    threshold: int | None = None,
    max_terms: int | None = None,
    progress: bool = False,
) -> SearchOutcome:
    """
    Grow hulls of `base` level by level and look for an evaluation on each. The
    first level without one refutes the theory.

    Every step applies the same code threshold (all pool symbols when None). A
    set refuted after k steps under threshold j lies inside the Skolem hull of
    level j + k, so the refutation carries over to it.

    Args:
        theory: The theory to refute.
        base: Level 0; may be empty, in which case level 0 is skipped.
        max_level: The last level searched.
        strategy: Passed to `find_evaluation`.
        availability: Passed to `find_evaluation`.
        budget: Passed to `find_evaluation`.
        hull_mode: Which Skolem symbols the hull applies.
        threshold: Uniform code threshold of the hull steps.
        max_terms: Stop when a level would grow past this many terms.
        progress: Show a progress bar over the levels.

    Returns:
        Inconsistent at the least refuting level, or BudgetExhausted carrying
        the witness of the last level searched.
    """
    pool = symbol_pool(theory.registry, hull_mode, theory)
    terms = base
    last: Witness | None = None

    levels = tqdm(
        range(max_level + 1), desc=f"[{theory.name}] hull", disable=not progress
    )
    for level in levels:
        if level:
            try:
                terms = hull_step(terms, threshold, pool, max_terms)
            except HullTooLargeError as e:
                logger.warning(f"[{theory.name}] {e}")
                return _exhausted(last, str(e), level - 1)
        if not len(terms):
            continue

        logger.info(f"[{theory.name}] level {level}: {len(terms)} terms")
        outcome = find_evaluation(theory, terms, strategy, availability, budget)
        outcome.stats.level = level
        match outcome:
            case Inconsistent():
                logger.info(f"[{theory.name}] Refuted at level {level}")
                return outcome
            case BudgetExhausted():
                if last is not None:
                    outcome.evaluation = last.evaluation
                return outcome
            case Witness():
                last = outcome

    logger.info(f"[{theory.name}] No refutation up to level {max_level}")
    return _exhausted(last, "max level", max_level)


def _exhausted(last: Witness | None, reason: str, level: int) -> BudgetExhausted:
    if last is None:
        return BudgetExhausted(stats=SearchStats(level=level, reason=reason))
    return BudgetExhausted(
        terms=last.terms,
        instances=last.instances,
        evaluation=last.evaluation,
        stats=last.stats.model_copy(update={"level": level, "reason": reason}),
    )
