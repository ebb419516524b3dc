import itertools
from collections.abc import Iterable

from loguru import logger

from domain.terms import ZERO, Add, Mul, SkolemApp, Succ, Term
from herbrand.core.options import HullMode
from herbrand.skolem.registry import SkolemRegistry, SkolemSymbol
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory


class HullTooLargeError(ArithmeticError):
    """The next hull level would hold more terms than allowed."""

    def __init__(self, level: int, max_terms: int):
        self.level, self.max_terms = level, max_terms
        super().__init__(f"Hull level {level} exceeds {max_terms} terms")


def symbol_pool(
    registry: SkolemRegistry, mode: HullMode, theory: Theory | None = None
) -> list[SkolemSymbol]:
    """The Skolem symbols a hull may apply."""
    if mode == HullMode.FULL:
        return list(registry)
    if theory is None:
        raise ValueError("A theory-restricted hull needs a theory")
    return [registry[i] for i in theory.skolem_symbols()]


def hull_step(
    terms: TermSet,
    j: int | None,
    pool: Iterable[SkolemSymbol],
    max_terms: int | None = None,
) -> TermSet:
    """
    One closure step: add 0, S(t), t + s, t*s for t, s in the set, and f(t1..tm)
    for every pool symbol f whose code is at most j (every pool symbol when j is
    None).

    Args:
        terms: The current level.
        j: The code threshold of this step.
        pool: The Skolem symbols that may be applied.
        max_terms: Raise HullTooLargeError as soon as the result grows past it.

    Returns:
        The next level, a superset of `terms`.
    """
    level = _level_of(terms) + 1
    found: dict[Term, None] = dict.fromkeys(terms)

    def add(t: Term) -> None:
        found.setdefault(t)
        if max_terms is not None and len(found) > max_terms:
            raise HullTooLargeError(level, max_terms)

    add(ZERO)
    for t in terms:
        add(Succ(arg=t))
    for t, s in itertools.product(terms, repeat=2):
        add(Add(lhs=t, rhs=s))
        add(Mul(lhs=t, rhs=s))

    for symbol in pool:
        if j is not None and symbol.code.value > j:
            continue
        for args in itertools.product(terms, repeat=symbol.arity):
            add(SkolemApp(symbol_id=symbol.symbol_id, args=args))

    result = TermSet.of(found, provenance=f"hull level {level}")
    logger.debug(f"Hull level {level}: {len(terms)} -> {len(result)} terms")
    return result


def hull(
    terms: TermSet,
    levels: int,
    pool: Iterable[SkolemSymbol],
    threshold: int | None = None,
    max_terms: int | None = None,
) -> TermSet:
    """
    Iterate `hull_step`. Step k uses the code threshold k (the Skolem hull), or
    the uniform `threshold` when one is given.
    """
    pool = list(pool)
    for k in range(levels):
        terms = hull_step(terms, k if threshold is None else threshold, pool, max_terms)
    return terms


def _level_of(terms: TermSet) -> int:
    words = terms.provenance.split()
    if len(words) == 3 and words[:2] == ["hull", "level"] and words[2].isdigit():
        return int(words[2])
    return 0
